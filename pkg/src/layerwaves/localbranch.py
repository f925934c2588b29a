"""Local expansion of a bifurcating branch at an admissible speed.

The kernel mode is the cokernel-weighted cosine profile on the
fundamental harmonic; the quadratic interaction is concentrated on the
doubled harmonic, which yields the second-order state correction and
the pitchfork curvature of the speed.
"""

from dataclasses import dataclass

import numpy as np

from . import pencil as pc
from . import spectral as sp
from .errors import ResonantHarmonicError
from .spectral import TrigSeries
from .steady import COMPONENT_NAMES, InterfaceState


@dataclass(frozen=True)
class LocalExpansion:
    """Everything needed to start a branch at a bifurcation point."""

    m: int
    cfg: pc.LayerConfig
    c_star: float
    kernel_vec: np.ndarray        # 4-vector of the kernel mode amplitudes
    cokernel_vec: np.ndarray      # range-orthogonal weights
    recip_sq: np.ndarray          # component-wise (a_i - c)^-2
    second_harmonic_amp: np.ndarray  # coefficient vector of cos(2 m x)
    speed_curvature: float        # second derivative of c along the branch
    pitchfork: str                # 'supercritical' or 'subcritical'
    nearest_component: int        # index of the a_i the speed approaches

    def to_json(self):
        return {"a": self.cfg.as_array().tolist(), "m": self.m,
                "c_star": self.c_star,
                "kernel_vec": self.kernel_vec.tolist(),
                "cokernel_vec": self.cokernel_vec.tolist(),
                "recip_sq": self.recip_sq.tolist(),
                "second_harmonic_amp": self.second_harmonic_amp.tolist(),
                "speed_curvature": self.speed_curvature,
                "pitchfork": self.pitchfork,
                "nearest_component": COMPONENT_NAMES[self.nearest_component]}


def hessian_action(cfg, h, h2):
    """Second derivative of the residual: component-wise dx(h_i * h2_i).

    Independent of c and of the configuration; bilinear and symmetric.
    The product is kept at full convolution length (no truncation).
    """
    out = []
    for f, g in zip(h.series, h2.series):
        out.append(sp.deriv(sp.multiply(f, g, out_count=f.count + g.count)))
    return out


def kernel_state(m, cfg, c_star, count=1):
    """The kernel mode as an interface state: v_i cos(m x)."""
    v = pc.kernel_vector(m, cfg, c_star)
    series = []
    for i in range(4):
        coeffs = np.zeros(count)
        coeffs[0] = v[i]
        series.append(TrigSeries.from_cos(m, coeffs))
    return InterfaceState(series)


def second_harmonic_amplitude(m, cfg, c_star):
    """Amplitude vector t of the correction t cos(2 m x): solves the
    doubled-mode system  M_{2m} t = 2 m^2 w,  w = (a-c)^-2 component-wise."""
    M2 = pc.mode_matrix(2 * m, cfg, c_star).entries
    scale = np.max(np.abs(M2))
    if abs(np.linalg.det(M2)) <= 1e-12 * scale ** 4:
        raise ResonantHarmonicError(
            f"doubled mode 2m={2 * m} is singular at c={c_star!r}")
    rhs = 2.0 * m * m * pc.reciprocal_sq_weights(cfg, c_star)
    return np.linalg.solve(M2, rhs)


def second_harmonic_state(m, cfg, c_star, count=2):
    t = second_harmonic_amplitude(m, cfg, c_star)
    series = []
    for i in range(4):
        coeffs = np.zeros(count)
        coeffs[1] = t[i]
        series.append(TrigSeries.from_cos(m, coeffs))
    return InterfaceState(series)


def speed_curvature(m, cfg, c_star):
    """Second derivative of the speed along the branch (pitchfork
    coefficient): cokernel pairing of the mixed quadratic interaction
    over the transversality value.  The first derivative vanishes."""
    trans = pc.transversality(m, cfg, c_star)
    w = pc.cokernel_vector(m, cfg, c_star)
    mixed = hessian_action(cfg, kernel_state(m, cfg, c_star, 2),
                           second_harmonic_state(m, cfg, c_star, 2))
    # cokernel profile lives on the fundamental harmonic only
    numer = sum(w[i] * mixed[i].sin[0] for i in range(4))
    return float(numer) / trans


def nearest_component_index(cfg, c_star):
    """Index of the interface velocity closest to the speed.  Ties go to
    the lower interface of the plus species first (smaller k, then plus)."""
    a = cfg.as_array()
    dist = np.abs(a - c_star)
    # preference order: plus1, minus1, plus2, minus2 (k before species)
    order = [0, 2, 1, 3]
    best = min(order, key=lambda i: (dist[i], order.index(i)))
    return int(best)


def local_expansion(m, cfg, c_star):
    """Assemble the full local data at an admissible speed."""
    curv = speed_curvature(m, cfg, c_star)
    return LocalExpansion(
        m=int(m), cfg=cfg, c_star=float(c_star),
        kernel_vec=pc.kernel_vector(m, cfg, c_star),
        cokernel_vec=pc.cokernel_vector(m, cfg, c_star),
        recip_sq=pc.reciprocal_sq_weights(cfg, c_star),
        second_harmonic_amp=second_harmonic_amplitude(m, cfg, c_star),
        speed_curvature=curv,
        pitchfork="supercritical" if curv > 0 else "subcritical",
        nearest_component=nearest_component_index(cfg, c_star))


def predictor(origin, s, count=None):
    """First-order branch point: (c* + curvature s^2 / 2, s * kernel mode).

    The quadratic state correction is omitted; Newton correction
    recovers it.  `count` sets the truncation of the returned state.
    """
    if count is None:
        count = 2
    c = origin.c_star + 0.5 * origin.speed_curvature * s * s
    series = []
    for i in range(4):
        coeffs = np.zeros(count)
        coeffs[0] = s * origin.kernel_vec[i]
        series.append(TrigSeries.from_cos(origin.m, coeffs))
    return c, InterfaceState(series)
