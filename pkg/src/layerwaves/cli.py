"""Command-line front end.

Subcommands: speeds | local | continue | evolve | ep.  Outputs are JSON
for structured state and CSV for anything plotted; every file embeds the
resolved run configuration.  Exit codes: 0 success, 1 solver failure
(with a machine-readable error file), 2 usage.
"""

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import continuation as ct
from . import dynamics as dy
from . import eulerpoisson as ep
from . import localbranch as lb
from . import pencil as pc
from . import steady as st
from .errors import ConfigError, LayerError
from .spectral import NormParams


@dataclass
class RunConfig:
    command: str
    a: tuple
    m: int = 1
    n: int = 64
    s: float = 2.0
    sigma: float = 0.1
    tol: float = 1e-11
    out: str = "out"
    speed_index: str = "+"
    arm: str = "both"
    s0: float = 1e-3
    h_min: float = 1e-7
    h_max: float = 0.1
    max_points: int = 200
    snapshot_every: int = 10
    from_wave: str = ""
    amp: float = 0.01
    dt: float = 0.0
    steps: int = 0
    periods: float = 1.0
    store_every: int = 0
    extra: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d["a"] = list(self.a)
        return d


def _read_config_file(path):
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed config line: {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def _parse_velocities(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 4:
        raise ConfigError("expected four interface velocities w,x,y,z")
    return tuple(float(p) for p in parts)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="", help="flat key=value file; "
                        "command-line flags override it")
    common.add_argument("--a", dest="a", default=None,
                        help="four interface velocities w,x,y,z")
    common.add_argument("--m", type=int, default=None, help="fold symmetry")
    common.add_argument("--n", type=int, default=None,
                        help="harmonic truncation (>= 8)")
    common.add_argument("--s", type=float, default=None,
                        help="regularity index of the coefficient norm")
    common.add_argument("--sigma", type=float, default=None,
                        help="analyticity width of the coefficient norm")
    common.add_argument("--tol", type=float, default=None,
                        help="Newton residual tolerance")
    common.add_argument("--out", default=None, help="output directory")

    parser = argparse.ArgumentParser(
        prog="layerwaves",
        description="Traveling waves and bifurcation branches of "
                    "two-species plasma interface layers")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("speeds", parents=[common],
                   help="bifurcation speeds of one mode")

    p_local = sub.add_parser("local", parents=[common],
                             help="local pitchfork data at one speed")
    p_local.add_argument("--speed-index", default=None,
                         help="admissible speed: +, -, or 0-based index "
                              "(ascending)")

    p_cont = sub.add_parser("continue", parents=[common],
                            help="continue a branch to large amplitude")
    p_cont.add_argument("--speed-index", default=None)
    p_cont.add_argument("--arm", default=None, choices=["both", "+", "-"])
    p_cont.add_argument("--s0", type=float, default=None)
    p_cont.add_argument("--h-min", type=float, default=None)
    p_cont.add_argument("--h-max", type=float, default=None)
    p_cont.add_argument("--max-points", type=int, default=None)
    p_cont.add_argument("--snapshot-every", type=int, default=None)

    p_ev = sub.add_parser("evolve", parents=[common],
                          help="Hamiltonian time evolution")
    p_ev.add_argument("--from-wave", default=None,
                      help="wave snapshot JSON to propagate")
    p_ev.add_argument("--speed-index", default=None)
    p_ev.add_argument("--amp", type=float, default=None,
                      help="kernel-mode amplitude when no snapshot is given")
    p_ev.add_argument("--dt", type=float, default=None,
                      help="time step (default: half the stability limit)")
    p_ev.add_argument("--steps", type=int, default=None)
    p_ev.add_argument("--periods", type=float, default=None,
                      help="horizon in spatial periods (used when --steps "
                           "is not given)")
    p_ev.add_argument("--store-every", type=int, default=None)

    p_ep = sub.add_parser("ep", parents=[common],
                          help="two-fluid correspondence and residuals")
    p_ep.add_argument("--from-wave", default=None)
    return parser


def _merge_value_flags(argv):
    """Join '--a -1,1,-1,1' into '--a=-1,1,-1,1' so negative velocity
    lists are not mistaken for options."""
    out, skip = [], False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--a" and i + 1 < len(argv):
            out.append(f"--a={argv[i + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def parse(argv):
    parser = build_parser()
    ns = parser.parse_args(_merge_value_flags(argv))
    values = _read_config_file(ns.config) if ns.config else {}
    for key, val in vars(ns).items():
        if key in ("config",) or val is None:
            continue
        values[key] = val

    if "a" not in values:
        raise ConfigError("missing interface velocities (--a w,x,y,z)")
    a = values["a"]
    if isinstance(a, str):
        a = _parse_velocities(a)
    cfg = RunConfig(command=ns.command, a=tuple(float(x) for x in a))
    for key, val in values.items():
        if key in ("a", "command"):
            continue
        if not hasattr(cfg, key):
            cfg.extra[key] = val
            continue
        current = getattr(cfg, key)
        setattr(cfg, key, type(current)(val))

    pc.classify_config(cfg.a)  # raises ConfigError with the width message
    if cfg.m < 1:
        raise ConfigError("fold m must be a positive integer")
    if cfg.n < 8:
        raise ConfigError("truncation n must be at least 8")
    if cfg.tol <= 0 or cfg.s0 <= 0:
        raise ConfigError("tolerances and steps must be positive")
    return cfg


def _pick_speed(run, layer):
    speeds = pc.bifurcation_speeds(run.m, layer).admissible()
    if not speeds:
        raise ConfigError(f"mode m={run.m} has no admissible speed")
    token = run.speed_index
    if token == "+":
        return speeds[-1]
    if token == "-":
        return speeds[0]
    try:
        idx = int(token)
    except ValueError:
        raise ConfigError(f"speed index must be +, - or an integer, "
                          f"got {token!r}") from None
    if not 0 <= idx < len(speeds):
        raise ConfigError(f"speed index {idx} out of range "
                          f"(have {len(speeds)} admissible)")
    return speeds[idx]


def _write_json(path, payload, run):
    payload = dict(payload)
    payload["config"] = run.to_json()
    path.write_text(json.dumps(payload, indent=1))


def _write_csv(path, header, rows, run, footer=None):
    with open(path, "w", newline="") as fh:
        fh.write(f"# config: {json.dumps(run.to_json())}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
        if footer:
            fh.write(footer + "\n")


def _cmd_speeds(run, layer, outdir):
    speed_set = pc.bifurcation_speeds(run.m, layer)
    _write_json(outdir / "speeds.json", speed_set.to_json(), run)
    return 0


def _cmd_local(run, layer, outdir):
    c_star = _pick_speed(run, layer)
    expansion = lb.local_expansion(run.m, layer, c_star)
    _write_json(outdir / "local.json", expansion.to_json(), run)
    return 0


def _make_options(run):
    return ct.ContinuationOptions(
        count=run.n, s0=run.s0, h_min=run.h_min, h_max=run.h_max,
        newton_tol=run.tol, max_points=run.max_points,
        norm_params=NormParams(run.s, run.sigma))


def _write_branch(branch, tag, run, outdir):
    rows = branch.csv_rows()
    footer = f"# termination: {branch.termination.label()}"
    _write_csv(outdir / f"branch_{tag}.csv",
               ["s", "c", "amp", "norm_s_sigma", "m1", "m2", "n_K"],
               rows, run, footer)
    for i, point in enumerate(branch.points):
        if run.snapshot_every and i % run.snapshot_every == 0:
            _write_json(outdir / f"wave_{tag}_{i:04d}.json",
                        point.solution.to_json(), run)
    return rows


def _cmd_continue(run, layer, outdir):
    c_star = _pick_speed(run, layer)
    expansion = lb.local_expansion(run.m, layer, c_star)
    opts = _make_options(run)
    arms = []
    if run.arm in ("both", "+"):
        arms.append(("plus", ct.trace_arm(expansion, +1, opts)))
    if run.arm in ("both", "-"):
        arms.append(("minus", ct.trace_arm(expansion, -1, opts)))
    diagram = []
    for tag, branch in arms:
        rows = _write_branch(branch, tag, run, outdir)
        diagram += [(tag, r[0], r[1], r[2]) for r in rows]
    _write_csv(outdir / "diagram.csv", ["arm", "s", "c", "amp"],
               diagram, run)
    return 0


def _load_wave(path):
    obj = json.loads(Path(path).read_text())
    layer = pc.classify_config(obj["a"])
    state = st.InterfaceState.from_json(
        [obj["series"][name] for name in st.COMPONENT_NAMES])
    return layer, float(obj["c"]), state


def _cmd_evolve(run, layer, outdir):
    if run.from_wave:
        layer, c, state = _load_wave(run.from_wave)
        phase = dy.PhaseState.from_interface(state)
        horizon = run.periods * 2.0 * np.pi / (state.fold * max(abs(c), 1e-12))
    else:
        c_star = _pick_speed(run, layer)
        expansion = lb.local_expansion(run.m, layer, c_star)
        _, state = lb.predictor(expansion, run.amp, count=run.n)
        phase = dy.PhaseState.from_interface(state)
        horizon = run.periods * 2.0 * np.pi / (run.m * max(abs(c_star), 1e-12))
    limit = dy.cfl_limit(layer, phase)
    dt = run.dt or 0.5 * limit
    if dt > limit:
        raise ConfigError(f"dt={dt:g} exceeds the stability limit {limit:g}")
    if run.steps:
        steps = run.steps  # explicit step count: horizon is ignored
    else:
        steps = max(int(np.ceil(horizon / dt)), 1)
        dt = horizon / steps
    store = run.store_every or max(steps // 200, 1)
    trajectory = dy.evolve(layer, phase, dt, steps, store_every=store)
    _write_csv(outdir / "trajectory.csv",
               ["t", "e_kin", "e_pot", "e_total",
                "sup_plus1", "sup_plus2", "sup_minus1", "sup_minus2"],
               trajectory.csv_rows(), run)
    return 0


def _cmd_ep(run, layer, outdir):
    if run.from_wave:
        layer, c, state = _load_wave(run.from_wave)
        sol = st.solution_at(layer, c, state)
    else:
        sol = st.solution_at(layer, 0.0, st.InterfaceState.zero(run.m, run.n))
    mapped = ep.map_to_ep(layer, sol)
    _, report = ep.ep_speeds(mapped.base_a, run.m)
    payload = mapped.to_json()
    payload["speeds_report"] = report
    payload["min_density"] = mapped.min_density()
    _write_json(outdir / "ep.json", payload, run)
    _, sups = ep.ep_residual(mapped)
    _write_csv(outdir / "ep_residual.csv", ["component", "sup"],
               sorted(sups.items()), run)
    return 0


_COMMANDS = {"speeds": _cmd_speeds, "local": _cmd_local,
             "continue": _cmd_continue, "evolve": _cmd_evolve,
             "ep": _cmd_ep}


def execute(run):
    layer = pc.classify_config(run.a)
    outdir = Path(run.out)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        return _COMMANDS[run.command](run, layer, outdir)
    except ConfigError:
        raise
    except LayerError as exc:
        _write_json(outdir / "error.json",
                    {"error": type(exc).__name__, "message": str(exc)}, run)
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    try:
        run = parse(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return execute(run)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
