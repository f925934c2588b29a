"""Pseudo-arclength predictor-corrector continuation of wave branches.

The augmented unknown is u = (c, stacked cosine coefficients).  Each
step solves the residual together with a secant arclength constraint;
the step size adapts to Newton performance.  Termination is diagnosed
against the global-curve alternatives: loop, blow-up, boundary
collision, degeneracy, plus a step budget.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import localbranch as lb
from . import spectral as sp
from . import steady as st
from .errors import CannotStartError, CorrectionFailedError
from .spectral import NormParams

RUNNING = "running"
LOOP = "loop"
BLOW_UP = "blow_up"
COLLISION = "collision"
DEGENERACY = "degeneracy"
STEP_LIMIT = "step_limit"


@dataclass
class ContinuationOptions:
    count: int = 64              # harmonic truncation N
    s0: float = 1e-3             # initial kernel amplitude
    h_min: float = 1e-7
    h_max: float = 0.1
    growth: float = 1.3
    fast_iters: int = 4          # grow the step when Newton is this fast
    newton_tol: float = 1e-11
    max_newton: int = 25
    max_points: int = 200
    norm_params: NormParams = field(default_factory=NormParams)
    loop_tol: float = 1e-8
    blow_up_cap: float = 1e6
    collision_tol: float = 1e-6
    degeneracy_tol: float = 1e-6
    tail_fraction: float = 0.25
    tail_norm_tol: float = 1e-8
    max_count: int = 256


@dataclass(frozen=True)
class ArclengthConstraint:
    """Hyperplane constraint <tangent, u - base> = ds."""

    tangent: np.ndarray
    base: np.ndarray
    ds: float

    def value(self, u):
        return float(np.dot(self.tangent, u - self.base) - self.ds)


@dataclass
class BranchPoint:
    s: float                     # accumulated arclength from onset
    solution: st.WaveSolution
    tangent: np.ndarray          # unit secant direction in (c, coeffs)
    next_step: float             # step size the loop would take next
    newton_iters: int
    compact_index: int           # smallest n with the point inside K_n


@dataclass
class Branch:
    points: list
    origin: lb.LocalExpansion
    arm: int                     # +1 or -1 kernel direction
    termination: object          # TerminationReport or RUNNING
    options: ContinuationOptions

    def csv_rows(self):
        rows = []
        for p in self.points:
            sol = p.solution
            rows.append((p.s, sol.c, sol.state.series[0].cos[0],
                         sol.state.norm(self.options.norm_params),
                         sol.monitors[0], sol.monitors[1], p.compact_index))
        return rows


@dataclass(frozen=True)
class TerminationReport:
    kind: str
    also: tuple = ()
    period: float = 0.0

    def label(self):
        extra = f"+{'+'.join(self.also)}" if self.also else ""
        if self.kind == LOOP:
            return f"{LOOP}(period={self.period:.6g}){extra}"
        return self.kind + extra


def _stack(c, state):
    return np.concatenate([[c], state.as_vector()])


def _unstack(u, fold, count):
    return float(u[0]), st.InterfaceState.from_vector(fold, count, u[1:])


def newton_correct(cfg, guess, constraint, fold, count,
                   tol=1e-11, max_iter=25):
    """Damped Newton on [residual; arclength constraint].

    Returns (WaveSolution, iterations).  Raises CorrectionFailedError on
    non-finite input or no convergence.
    """
    c0, state0 = guess
    u = _stack(c0, state0.with_count(count))
    if not np.all(np.isfinite(u)):
        raise CorrectionFailedError("correction-failed: non-finite guess")

    def full_residual(u):
        c, state = _unstack(u, fold, count)
        r = st.residual_vector(cfg, c, state)
        return np.concatenate([r, [constraint.value(u)]]), state

    res, state = full_residual(u)
    sup = np.max(np.abs(res))
    for it in range(max_iter):
        if sup <= tol:
            c, state = _unstack(u, fold, count)
            return st.solution_at(cfg, c, state), it
        c = u[0]
        n = 4 * count
        A = np.empty((n + 1, n + 1))
        A[:n, 0] = st.speed_derivative_vector(cfg, c, state)
        A[:n, 1:] = st.jacobian(cfg, c, state)
        A[n, :] = constraint.tangent
        try:
            step = np.linalg.solve(A, -res)
        except np.linalg.LinAlgError as exc:
            raise CorrectionFailedError(f"correction-failed: {exc}") from exc
        lam = 1.0
        while True:
            trial = u + lam * step
            res_t, state_t = full_residual(trial)
            sup_t = np.max(np.abs(res_t))
            if np.isfinite(sup_t) and (sup_t < sup or lam <= 0.125):
                break
            lam *= 0.5
            if lam < 1e-6:
                raise CorrectionFailedError(
                    "correction-failed: damping exhausted")
        u, res, state, sup = trial, res_t, state_t, sup_t
    if sup <= tol:
        c, state = _unstack(u, fold, count)
        return st.solution_at(cfg, c, state), max_iter
    raise CorrectionFailedError(
        f"correction-failed: residual {sup:.3e} after {max_iter} iterations")


def _compact_index(sol, norm_params):
    gap, slip = sol.monitors
    bound = max(1.0 / max(gap, 1e-300), 1.0 / max(slip, 1e-300),
                abs(sol.c), sol.state.norm(norm_params))
    return int(max(1, np.ceil(bound - 1e-12)))


def detect_termination(branch, opts=None):
    """Classify the current branch end; first trigger wins, simultaneous
    triggers are reported together."""
    opts = opts or branch.options
    if len(branch.points) < 2:
        return RUNNING
    first = branch.points[0]
    last = branch.points[-1]
    sol = last.solution
    norm_r = sol.state.norm(opts.norm_params)
    triggered = []
    traveled = last.s - first.s
    if traveled >= 10.0 * opts.s0:
        dist = (abs(sol.c - first.solution.c)
                + max(sp.norm(a - b, opts.norm_params)
                      for a, b in zip(sol.state.series,
                                      first.solution.state.series)))
        if dist <= opts.loop_tol:
            triggered.append(LOOP)
    if 1.0 + abs(sol.c) + norm_r >= opts.blow_up_cap:
        triggered.append(BLOW_UP)
    if sol.monitors[0] <= opts.collision_tol:
        triggered.append(COLLISION)
    if sol.monitors[1] <= opts.degeneracy_tol:
        triggered.append(DEGENERACY)
    if len(branch.points) >= opts.max_points:
        triggered.append(STEP_LIMIT)
    if not triggered:
        return RUNNING
    period = traveled if triggered[0] == LOOP else 0.0
    return TerminationReport(triggered[0], tuple(triggered[1:]), period)


def _tail_heavy(state, opts):
    n = state.count
    head = int(np.ceil((1.0 - opts.tail_fraction) * n))
    total = state.norm(opts.norm_params)
    if total == 0.0:
        return False
    tail = max(sp.norm(series - series.with_count(head).with_count(n),
                       opts.norm_params) for series in state.series)
    return tail > opts.tail_norm_tol * total


def _advance(branch, u_prev, tangent, ds, opts):
    """Core predictor-corrector loop; mutates branch.points in place."""
    cfg = branch.origin.cfg
    fold = branch.origin.m
    count = branch.points[-1].solution.state.count
    s_acc = branch.points[-1].s
    while True:
        status = detect_termination(branch, opts)
        if status != RUNNING:
            branch.termination = status
            return
        guess_u = u_prev + ds * tangent
        constraint = ArclengthConstraint(tangent, u_prev, ds)
        c_g, state_g = _unstack(guess_u, fold, count)
        try:
            sol, iters = newton_correct(cfg, (c_g, state_g), constraint,
                                        fold, count, opts.newton_tol,
                                        opts.max_newton)
        except CorrectionFailedError:
            ds *= 0.5
            if ds < opts.h_min:
                # cannot resolve a further step: treat as exhausted budget
                branch.termination = TerminationReport(STEP_LIMIT)
                return
            continue

        if _tail_heavy(sol.state, opts) and count * 2 <= opts.max_count:
            count *= 2
            u_prev = _stack(u_prev[0],
                            st.InterfaceState.from_vector(fold, count // 2,
                                                          u_prev[1:])
                            .with_count(count))
            tangent = _embed_tangent(tangent, count // 2, count)
            continue

        u_new = _stack(sol.c, sol.state)
        step_len = float(np.linalg.norm(u_new - u_prev))
        s_acc += step_len
        tangent = (u_new - u_prev) / step_len
        u_prev = u_new
        if iters <= opts.fast_iters:
            ds = min(ds * opts.growth, opts.h_max)
        branch.points.append(BranchPoint(
            s=s_acc, solution=sol, tangent=tangent, next_step=ds,
            newton_iters=iters,
            compact_index=_compact_index(sol, opts.norm_params)))


def _embed_tangent(tangent, old_count, new_count):
    out = np.zeros(1 + 4 * new_count)
    out[0] = tangent[0]
    for i in range(4):
        out[1 + i * new_count: 1 + i * new_count + old_count] = \
            tangent[1 + i * old_count: 1 + (i + 1) * old_count]
    return out


def trace_arm(origin, arm, opts):
    """Continue one pitchfork arm (arm = +1 or -1) from its local expansion."""
    fold, count = origin.m, opts.count
    v = np.zeros(1 + 4 * count)
    for i in range(4):
        v[1 + i * count] = origin.kernel_vec[i]
    vnorm = float(np.linalg.norm(v))
    tangent = (arm / vnorm) * v
    u0 = _stack(origin.c_star, st.InterfaceState.zero(fold, count))

    c_g, state_g = lb.predictor(origin, arm * opts.s0, count=count)
    ds = opts.s0 * vnorm
    constraint = ArclengthConstraint(tangent, u0, ds)
    try:
        sol, iters = newton_correct(origin.cfg, (c_g, state_g), constraint,
                                    fold, count, opts.newton_tol,
                                    opts.max_newton)
    except CorrectionFailedError as exc:
        raise CannotStartError(f"cannot-start: {exc}") from exc

    u1 = _stack(sol.c, sol.state)
    step_len = float(np.linalg.norm(u1 - u0))
    tangent = (u1 - u0) / step_len
    branch = Branch(points=[BranchPoint(
        s=step_len, solution=sol, tangent=tangent, next_step=ds,
        newton_iters=iters,
        compact_index=_compact_index(sol, opts.norm_params))],
        origin=origin, arm=arm, termination=RUNNING, options=opts)
    _advance(branch, u1, tangent, ds, opts)
    return branch


def continue_branch(origin, opts=None):
    """Trace both pitchfork arms; returns (plus arm, minus arm)."""
    opts = opts or ContinuationOptions()
    return trace_arm(origin, +1, opts), trace_arm(origin, -1, opts)


def restart(branch, index, opts=None):
    """Re-run continuation from the stored point `index`; deterministic
    stepping makes the result reproduce the original tail of the branch."""
    opts = opts or branch.options
    pt = branch.points[index]
    # keep the accumulated arclength so loop bookkeeping matches
    new = Branch(points=[replace(pt, tangent=pt.tangent.copy())],
                 origin=branch.origin, arm=branch.arm,
                 termination=RUNNING, options=opts)
    u_prev = _stack(pt.solution.c, pt.solution.state)
    _advance(new, u_prev, pt.tangent.copy(), pt.next_step, opts)
    return new
