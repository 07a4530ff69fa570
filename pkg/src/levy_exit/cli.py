"""Command-line front end.

Subcommands run single solves, Monte Carlo estimates, convergence studies,
one-axis parameter sweeps, and regenerate the data behind the parameter-study
figures (fig5 .. fig13) as wide CSV files.

Exit codes: 0 success, 1 usage or validation error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .discretization import DriftSpec, ProblemKind, ProblemSpec
from .exit_solver import SOLVE_METHODS, SolutionProfile, analytic_escape_symmetric, solve
from .linalg import ConvergenceError
from .monte_carlo import McConfig, estimate_exit
from .verification import ConvergenceReport, manufactured_study, self_convergence_study

__all__ = ["RunConfig", "emit_profile", "write_atomic", "run_cli", "main", "FIGURES"]

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2
SWEEP_AXES = ("alpha", "beta", "d", "eps", "b", "drift")
FORMATS = ("csv", "json")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    spec: ProblemSpec
    J: int = 320
    tol: float = 1e-10
    restart: int = 50
    method: str = "auto"
    mc: McConfig | None = None
    sweep_axis: str | None = None
    sweep_values: list = field(default_factory=list)
    out: str | None = None
    fmt: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        if self.J < 2:
            raise ValueError("J must be >= 2")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restart < 1:
            raise ValueError("restart must be >= 1")
        if self.method not in SOLVE_METHODS:
            raise ValueError(f"method must be one of {SOLVE_METHODS}")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ValueError(f"sweep axis must be one of {SWEEP_AXES}")
            if not self.sweep_values:
                raise ValueError("sweep values must be nonempty")

    def solve_kw(self) -> dict:
        return {"method": self.method, "tol": self.tol, "restart": self.restart}


# ---------------------------------------------------------------- output


def _fmt(v: float) -> str:
    return "%.12g" % v


def _spec_dict(spec: ProblemSpec) -> dict:
    return {
        "alpha": spec.alpha,
        "beta": spec.beta,
        "d": spec.d,
        "eps": spec.eps,
        "b": spec.b,
        "drift": str(spec.drift),
        "kind": spec.kind.value,
    }


def emit_profile(profile: SolutionProfile, fmt: str = "csv") -> bytes:
    """Serialize a solution profile; nodes ascend in x."""
    name = "p" if profile.spec.kind is ProblemKind.ESCAPE_RIGHT else "u"
    order = np.argsort(profile.x_nodes, kind="stable")
    xs, vs = profile.x_nodes[order], profile.values[order]
    if fmt == "csv":
        lines = [f"x,{name}"] + [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, vs)]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        doc = {
            "x": [float(_fmt(x)) for x in xs],
            name: [float(_fmt(v)) for v in vs],
            "J": profile.J,
            "spec": _spec_dict(profile.spec),
            "stats": asdict(profile.stats),
            "meta": profile.meta,
        }
        return (json.dumps(doc, indent=2) + "\n").encode()
    raise ValueError(f"format must be one of {FORMATS}")


def _wide_csv(columns: dict) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(columns)
    w.writerow(names)
    for row in zip(*columns.values()):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode()


def _wide_json(columns: dict, meta: dict) -> bytes:
    doc = {"columns": {k: [float(_fmt(v)) for v in col] for k, col in columns.items()}, "meta": meta}
    return (json.dumps(doc, indent=2) + "\n").encode()


def _report_bytes(report: ConvergenceReport, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode()
    lines = ["J,error,order"]
    orders = [""] + [_fmt(p) for p in report.observed_orders]
    lines += [f"{J},{_fmt(e)},{o}" for J, e, o in zip(report.J_list, report.errors, orders)]
    return ("\n".join(lines) + "\n").encode()


def write_atomic(path, data: bytes) -> None:
    """Write via a temporary file in the same directory, then os.replace."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as err:
        raise OSError(f"cannot write {path}: {err.strerror or err}") from err


def _deliver(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        write_atomic(out, data)


# ---------------------------------------------------------------- figures


def _solve_values(spec, J, solve_kw):
    prof = solve(spec, J, **solve_kw)
    return prof.x_nodes, prof.values


def _panel(curves: dict, J: int, solve_kw: dict, jobs: int, extra=None) -> dict:
    """Solve every curve on a shared grid and return wide columns keyed by label."""
    specs = list(curves.values())
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_values, specs, [J] * len(specs), [solve_kw] * len(specs)))
    else:
        results = [_solve_values(s, J, solve_kw) for s in specs]
    columns = {"x": results[0][0]}
    for label, (_, vals) in zip(curves, results):
        columns[label] = vals
    if extra:
        for label, fn in extra.items():
            columns[label] = fn(columns["x"])
    return columns


def _met(alpha, beta=0.5, **kw):
    return ProblemSpec.make(alpha, beta, **kw)


def _esc(alpha, beta=0.0, **kw):
    return ProblemSpec.make(alpha, beta, kind="escape_right", **kw)


def _analytic_escape(alpha, b):
    return lambda x: analytic_escape_symmetric(alpha, x, b)


def _fig_panels(fig: str) -> dict:
    """Panel name -> (curves, analytic columns). Curves map label -> ProblemSpec."""
    alphas3 = (0.5, 1.0, 1.5)
    betas3 = (0.0, 0.5, 1.0)
    ab = {"a": 0.5, "b": 1.5}
    if fig in ("fig5", "fig7"):
        b = 1.0 if fig == "fig5" else 4.0
        return {
            f"{fig}{p}": ({f"beta={bt:g}": _met(a, bt, b=b) for bt in betas3}, None)
            for p, a in zip("abc", alphas3)
        }
    if fig == "fig6":
        return {"fig6": ({f"alpha={a:g}": _met(a, 0.5) for a in (0.5, 1.5)}, None)}
    if fig == "fig8":
        return {f"fig8{p}": ({f"d={d:g}": _met(a, d=d) for d in (0.0, 0.1, 1.0)}, None) for p, a in ab.items()}
    if fig == "fig9":
        return {f"fig9{p}": ({f"eps={e:g}": _met(a, eps=e) for e in (0.5, 1.0)}, None) for p, a in ab.items()}
    if fig == "fig10":
        return {
            f"fig10{p}": ({"f=0": _met(a), "f=-x": _met(a, drift="linear:-1")}, None) for p, a in ab.items()
        }
    if fig == "fig11":
        panels = {}
        for p, b in (("a", 1.0), ("b", 4.0)):
            curves = {f"alpha={a:g}": _esc(a, b=b) for a in alphas3}
            extra = {f"analytic_alpha={a:g}": _analytic_escape(a, b) for a in alphas3}
            panels[f"fig11{p}"] = (curves, extra)
        for p, a in (("c", 0.5), ("d", 1.5)):
            panels[f"fig11{p}"] = ({f"beta={bt:g}": _esc(a, bt) for bt in (-0.5, 0.0, 0.5)}, None)
        return panels
    if fig == "fig12":
        return {
            f"fig12{p}": ({f"d={d:g}": _esc(a, 0.5, d=d) for d in (0.0, 0.1, 1.0)}, None) for p, a in ab.items()
        }
    if fig == "fig13":
        return {"fig13": ({"f=0": _esc(0.5, 0.5), "f=-x": _esc(0.5, 0.5, drift="linear:-1")}, None)}
    raise UsageError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}")


FIGURES = tuple(f"fig{i}" for i in range(5, 14))


def make_figure(fig: str, out_dir, J: int = 320, fmt: str = "csv", solve_kw=None, jobs: int = 1) -> list:
    """Write one data file per panel of ``fig`` into out_dir; returns the paths."""
    solve_kw = solve_kw or {}
    paths = []
    for name, (curves, extra) in _fig_panels(fig).items():
        columns = _panel(curves, J, solve_kw, jobs, extra)
        if fmt == "csv":
            data = _wide_csv(columns)
        else:
            meta = {"figure": name, "J": J, "curves": {k: _spec_dict(s) for k, s in curves.items()}}
            data = _wide_json(columns, meta)
        path = Path(out_dir) / f"{name}.{fmt}"
        write_atomic(path, data)
        paths.append(path)
    return paths


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# key -> converter for config-file values and flag types
_TYPES = {
    "alpha": float,
    "beta": float,
    "d": float,
    "eps": float,
    "b": float,
    "J": int,
    "drift": str,
    "tol": float,
    "restart": int,
    "method": str,
    "format": str,
    "out": str,
    "jobs": int,
    "x0": float,
    "paths": int,
    "dt": float,
    "seed": int,
    "tmax": float,
    "bridge": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "J_list": str,
    "J_ref": int,
    "probe": float,
    "axis": str,
    "values": str,
    "kind": str,
}

_DEFAULTS = {
    "alpha": 1.5,
    "beta": 0.0,
    "d": 0.0,
    "eps": 1.0,
    "b": 1.0,
    "J": 320,
    "drift": "zero",
    "tol": 1e-10,
    "restart": 50,
    "method": "auto",
    "x0": 0.0,
    "paths": 10_000,
    "dt": 1e-3,
    "seed": 0,
    "tmax": 1e3,
    "bridge": True,
    "J_ref": 1280,
    "probe": -0.5,
    "kind": "met",
}


def _add_common(p: argparse.ArgumentParser, problem=True):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key=value file; flags take precedence")
    p.add_argument("--jobs", type=int, default=S, help="worker processes (default $LEVY_EXIT_JOBS or 1)")
    p.add_argument("--out", default=S, help="output path (directory for sweep/figure)")
    p.add_argument("--format", choices=FORMATS, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--restart", type=int, default=S)
    p.add_argument("--method", choices=SOLVE_METHODS, default=S)
    if problem:
        p.add_argument("--alpha", type=float, default=S)
        p.add_argument("--beta", type=float, default=S)
        p.add_argument("--d", type=float, default=S)
        p.add_argument("--eps", type=float, default=S)
        p.add_argument("--b", type=float, default=S)
        p.add_argument("--J", type=int, default=S)
        p.add_argument("--drift", default=S, help="zero | linear:<k> | poly:<c0,c1,...>")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = _Parser(prog="levy-exit", description="Mean exit time and escape probability under alpha-stable noise.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    for name, text in (("met", "mean exit time profile"), ("escape", "probability of exiting to [b, inf)")):
        _add_common(sub.add_parser(name, help=text))

    mc = sub.add_parser("mc", help="Monte Carlo estimate from one starting point")
    _add_common(mc)
    mc.add_argument("--x0", type=float, default=S)
    mc.add_argument("--paths", type=int, default=S)
    mc.add_argument("--dt", type=float, default=S)
    mc.add_argument("--seed", type=int, default=S)
    mc.add_argument("--tmax", type=float, default=S)
    mc.add_argument("--no-bridge", dest="bridge", action="store_false", default=S)

    vm = sub.add_parser("verify-manufactured", help="order study against u = 1 - x^2")
    _add_common(vm)
    vm.add_argument("--J-list", dest="J_list", default=S, help="comma-separated, default 20,40,80,160")
    vm.add_argument("--probe", type=float, default=S)

    vc = sub.add_parser("verify-convergence", help="self-convergence order study")
    _add_common(vc)
    vc.add_argument("--J-list", dest="J_list", default=S, help="comma-separated, default 10,20,40,80,160")
    vc.add_argument("--J-ref", dest="J_ref", type=int, default=S)
    vc.add_argument("--probe", type=float, default=S)

    sw = sub.add_parser("sweep", help="one solve per value of a ProblemSpec field")
    _add_common(sw)
    sw.add_argument("--axis", choices=SWEEP_AXES, default=S)
    sw.add_argument("--values", default=S, help="comma-separated; drift values separated by ';'")
    sw.add_argument("--kind", choices=("met", "escape"), default=S)

    fg = sub.add_parser("figure", help="regenerate parameter-study data")
    fg.add_argument("figure_id", metavar="id", help=", ".join(FIGURES))
    _add_common(fg, problem=False)
    fg.add_argument("--J", type=int, default=S)
    return parser


def read_config(path) -> dict:
    """Parse a key=value file; blank lines and '#' comments are skipped."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read config {path}: {err.strerror or err}") from err
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _TYPES[key](value)
        except ValueError as err:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from err
    return out


def _merge(ns: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(ns).items() if k != "config"}
    opts = dict(_DEFAULTS)
    opts["jobs"] = int(os.environ.get("LEVY_EXIT_JOBS", "1") or 1)
    if getattr(ns, "config", None):
        opts.update(read_config(ns.config))
    opts.update(flags)
    return opts


def _spec_from(opts: dict, kind: str = "met") -> ProblemSpec:
    return ProblemSpec.make(
        opts["alpha"], opts["beta"], d=opts["d"], eps=opts["eps"], b=opts["b"], drift=opts["drift"], kind=kind
    )


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as err:
        raise ValueError(f"bad integer list {text!r}") from err


def _run_config(opts: dict, kind: str, default_fmt: str = "csv") -> RunConfig:
    mc = None
    if opts["command"] == "mc":
        mc = McConfig(
            n_paths=opts["paths"], dt=opts["dt"], seed=opts["seed"], t_max=opts["tmax"], bridge=opts["bridge"]
        )
    return RunConfig(
        spec=_spec_from(opts, kind),
        J=opts["J"],
        tol=opts["tol"],
        restart=opts["restart"],
        method=opts["method"],
        mc=mc,
        out=opts.get("out"),
        fmt=opts.get("format", default_fmt),
        jobs=opts["jobs"],
    )


# ---------------------------------------------------------------- commands


def _cmd_profile(opts, kind):
    cfg = _run_config(opts, kind)
    prof = solve(cfg.spec, cfg.J, **cfg.solve_kw())
    _deliver(emit_profile(prof, cfg.fmt), cfg.out)


def _estimate_dict(est) -> dict:
    return {
        "mean": est.mean,
        "stderr": est.stderr,
        "n_effective": est.n_effective,
        "censored_fraction": est.censored_fraction,
        "warning": est.warning,
    }


def _cmd_mc(opts):
    cfg = _run_config(opts, "met", default_fmt="json")
    met, esc = estimate_exit(cfg.spec, opts["x0"], cfg.mc, jobs=cfg.jobs)
    if cfg.fmt == "json":
        doc = {
            "mean": met.mean,
            "stderr": met.stderr,
            "met": _estimate_dict(met),
            "escape": _estimate_dict(esc),
            "x0": opts["x0"],
            "spec": _spec_dict(cfg.spec),
            "config": asdict(cfg.mc),
        }
        data = (json.dumps(doc, indent=2) + "\n").encode()
    else:
        lines = ["quantity,mean,stderr,n_effective,censored_fraction"]
        for q, e in (("met", met), ("escape", esc)):
            lines.append(f"{q},{_fmt(e.mean)},{_fmt(e.stderr)},{e.n_effective},{_fmt(e.censored_fraction)}")
        data = ("\n".join(lines) + "\n").encode()
    _deliver(data, cfg.out)


def _cmd_verify_manufactured(opts):
    fmt = opts.get("format", "json")
    J_list = _int_list(opts.get("J_list", "20,40,80,160"))
    rep = manufactured_study(
        opts["alpha"], opts["beta"], J_list, opts["probe"], jobs=opts["jobs"], method=opts["method"], tol=opts["tol"]
    )
    _deliver(_report_bytes(rep, fmt), opts.get("out"))


def _cmd_verify_convergence(opts):
    fmt = opts.get("format", "json")
    J_list = _int_list(opts.get("J_list", "10,20,40,80,160"))
    spec = _spec_from(opts)
    rep = self_convergence_study(
        spec, J_list, opts["J_ref"], opts["probe"], jobs=opts["jobs"], method=opts["method"], tol=opts["tol"]
    )
    _deliver(_report_bytes(rep, fmt), opts.get("out"))


def _sweep_point(spec, J, solve_kw, path, fmt):
    write_atomic(path, emit_profile(solve(spec, J, **solve_kw), fmt))
    return str(path)


def _cmd_sweep(opts):
    if "axis" not in opts or "values" not in opts:
        raise UsageError("sweep needs --axis and --values")
    if "out" not in opts:
        raise UsageError("sweep needs --out <directory>")
    axis = opts["axis"]
    sep = ";" if axis == "drift" else ","
    raw = [v.strip() for v in opts["values"].split(sep) if v.strip()]
    values = raw if axis == "drift" else [float(v) for v in raw]
    kind = "escape_right" if opts["kind"] == "escape" else "met"
    cfg = _run_config(opts, kind)
    cfg = replace(cfg, sweep_axis=axis, sweep_values=values)
    specs = []
    for v in values:
        point = dict(opts, **{axis: v})
        specs.append(_spec_from(point, kind))
    names = [str(DriftSpec.parse(v)) if axis == "drift" else f"{v:g}" for v in values]
    paths = [Path(cfg.out) / f"sweep_{axis}={n.replace(':', '_').replace(',', '_')}.{cfg.fmt}" for n in names]
    args = [(s, cfg.J, cfg.solve_kw(), p, cfg.fmt) for s, p in zip(specs, paths)]
    if cfg.jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            done = list(pool.map(_sweep_point, *zip(*args)))
    else:
        done = [_sweep_point(*a) for a in args]
    print("\n".join(done))


def _cmd_figure(opts):
    fig = opts["figure_id"]
    if fig not in FIGURES:
        raise UsageError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}")
    solve_kw = {"method": opts["method"], "tol": opts["tol"], "restart": opts["restart"]}
    if opts["J"] < 2:
        raise ValueError("J must be >= 2")
    paths = make_figure(fig, opts.get("out", "."), opts["J"], opts.get("format", "csv"), solve_kw, opts["jobs"])
    print("\n".join(str(p) for p in paths))


_COMMANDS = {
    "met": lambda o: _cmd_profile(o, "met"),
    "escape": lambda o: _cmd_profile(o, "escape_right"),
    "mc": _cmd_mc,
    "verify-manufactured": _cmd_verify_manufactured,
    "verify-convergence": _cmd_verify_convergence,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        opts = _merge(ns)
        _COMMANDS[opts["command"]](opts)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as err:
        print(str(err).rstrip(), file=sys.stderr)
        return EXIT_INVALID
    except (ConvergenceError, np.linalg.LinAlgError) as err:
        print(f"levy-exit: solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError) as err:
        print(f"levy-exit: error: {err}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())
