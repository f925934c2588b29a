"""Exact linear analysis at the flat state.

For each Fourier mode j the linearization acts through a 4x4 matrix
pencil in the wave speed c.  Its determinant is a quartic in c whose
admissible real roots are the bifurcation speeds; kernel and cokernel
vectors and the transversality pairing all have closed forms in terms
of the reciprocal gaps (a_i - c)^-1.

Component order everywhere: (plus lower, plus upper, minus lower,
minus upper), i.e. ion strip interfaces first.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateSpeedError, NoAdmissibleModeError

# Fixed off-diagonal coupling pattern and diagonal signs of the pencil.
OFFDIAG = np.array([
    [0.0, 1.0, 1.0, -1.0],
    [-1.0, 0.0, 1.0, -1.0],
    [1.0, -1.0, 0.0, 1.0],
    [1.0, -1.0, -1.0, 0.0],
])
DIAG_SIGN = np.array([-1.0, 1.0, -1.0, 1.0])

GENERIC = "generic"
SYMMETRIC = "symmetric"
SUCCESSIVE = "successive"

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class LayerConfig:
    """The four flat interface velocities, validated to equal strip widths."""

    a_plus_1: float
    a_plus_2: float
    a_minus_1: float
    a_minus_2: float
    regime: str = field(init=False)

    def __post_init__(self):
        a = self.as_array()
        if not np.all(np.isfinite(a)):
            raise ConfigError("invalid-config: non-finite velocities")
        width_plus = self.a_plus_2 - self.a_plus_1
        width_minus = self.a_minus_2 - self.a_minus_1
        if abs(width_plus - width_minus) > _EQ_TOL:
            raise ConfigError(
                "invalid-config: strip widths must be equal "
                f"(a_plus_2-a_plus_1={width_plus:g}, "
                f"a_minus_2-a_minus_1={width_minus:g})")
        if width_plus <= _EQ_TOL:
            raise ConfigError("invalid-config: strip width must be positive")
        object.__setattr__(self, "regime", self._classify())

    def _classify(self):
        if (abs(self.a_plus_1 - self.a_minus_1) <= _EQ_TOL
                and abs(self.a_plus_2 - self.a_minus_2) <= _EQ_TOL):
            return SYMMETRIC
        if (abs(self.a_plus_1 - self.a_minus_2) <= _EQ_TOL
                or abs(self.a_plus_2 - self.a_minus_1) <= _EQ_TOL):
            return SUCCESSIVE
        return GENERIC

    def as_array(self):
        return np.array([self.a_plus_1, self.a_plus_2,
                         self.a_minus_1, self.a_minus_2])

    @property
    def width(self):
        return self.a_plus_2 - self.a_plus_1

    def scale(self):
        return 1.0 + float(np.max(np.abs(self.as_array())))


def classify_config(a):
    """Validate four interface velocities and label the regime."""
    a = np.asarray(a, dtype=float)
    if a.shape != (4,):
        raise ConfigError("invalid-config: expected four velocities")
    return LayerConfig(*a)


@dataclass(frozen=True)
class ModeMatrix:
    """The 4x4 pencil of a single Fourier mode at speed c."""

    j: int
    config: LayerConfig
    c: float
    entries: np.ndarray


def mode_matrix(j, cfg, c):
    """Assemble the pencil for wavenumber j: diag j^2(a_i - c) + sign_i
    plus the fixed off-diagonal coupling pattern."""
    if j < 1:
        raise ValueError("mode index must be >= 1")
    entries = OFFDIAG.copy()
    entries[np.diag_indices(4)] = j * j * (cfg.as_array() - c) + DIAG_SIGN
    return ModeMatrix(int(j), cfg, float(c), entries)


def determinant_poly(m, cfg):
    """Quartic coefficients (highest first) of det of the mode-m pencil.

    Built from the closed form: m^8 prod_i (a_i - c) plus an m^6 sum of
    signed cofactor products.  The brute-force 4x4 determinant is kept
    as an independent oracle in the tests.
    """
    a = cfg.as_array()
    poly = float(m) ** 8 * np.poly(a)
    for i in range(4):
        # prod over the three other factors: (a_k - c) = -(c - a_k) each,
        # so three factors contribute a global -1 relative to np.poly.
        cubic = -np.poly(np.delete(a, i))
        poly[1:] += float(m) ** 6 * DIAG_SIGN[i] * cubic
    return poly


def _closed_form_pair(alpha, beta, width, m):
    """The two simple roots (alpha+beta)/2 -+ sqrt((beta-alpha)^2 + 8*width/m^2)/2."""
    half = 0.5 * math.sqrt((beta - alpha) ** 2 + 8.0 * width / m ** 2)
    mid = 0.5 * (alpha + beta)
    return mid - half, mid + half


@dataclass(frozen=True)
class SpeedRecord:
    value: complex
    multiplicity: int
    admissible: bool
    provenance: str  # 'closed-form' or 'quartic-root'

    def real_value(self):
        return float(self.value.real)

    def to_json(self):
        c = self.value
        return {"c": c.real if c.imag == 0.0 else {"re": c.real, "im": c.imag},
                "multiplicity": self.multiplicity,
                "admissible": self.admissible,
                "provenance": self.provenance}


@dataclass(frozen=True)
class SpeedSet:
    mode: int
    regime: str
    speeds: tuple

    def admissible(self):
        """Admissible real speeds, ascending."""
        return sorted(s.real_value() for s in self.speeds if s.admissible)

    def to_json(self):
        return {"m": self.mode, "regime": self.regime,
                "speeds": [s.to_json() for s in self.speeds]}


def _is_real(z, tol_scale=1e-9):
    return abs(z.imag) <= tol_scale * (1.0 + abs(z.real))


def _near_component(c, cfg, tol_scale=1e-10):
    return bool(np.min(np.abs(cfg.as_array() - c)) <= tol_scale * cfg.scale())


def quartic_roots(m, cfg):
    """Companion-matrix roots of the mode-m determinant quartic."""
    return np.roots(determinant_poly(m, cfg))


def bifurcation_speeds(m, cfg):
    """All four determinant roots with multiplicities and admissibility.

    Symmetric and successive regimes use the closed forms (robust near
    the double root) and are cross-checked against the quartic roots.
    """
    a = cfg.as_array()
    if cfg.regime == SYMMETRIC:
        lo, hi = _closed_form_pair(a[0], a[1], cfg.width, m)
        records = [
            SpeedRecord(complex(a[0]), 1, False, "closed-form"),
            SpeedRecord(complex(a[1]), 1, False, "closed-form"),
            SpeedRecord(complex(lo), 1, True, "closed-form"),
            SpeedRecord(complex(hi), 1, True, "closed-form"),
        ]
    elif cfg.regime == SUCCESSIVE:
        if abs(cfg.a_plus_2 - cfg.a_minus_1) <= _EQ_TOL:
            double, pair = cfg.a_plus_2, (cfg.a_plus_1, cfg.a_minus_2)
        else:
            double, pair = cfg.a_plus_1, (cfg.a_plus_2, cfg.a_minus_1)
        lo, hi = _closed_form_pair(pair[0], pair[1], cfg.width, m)
        records = [
            SpeedRecord(complex(double), 2, False, "closed-form"),
            SpeedRecord(complex(lo), 1, not _near_component(lo, cfg), "closed-form"),
            SpeedRecord(complex(hi), 1, not _near_component(hi, cfg), "closed-form"),
        ]
    else:
        roots = quartic_roots(m, cfg)
        records = []
        used = np.zeros(len(roots), dtype=bool)
        tol = 1e-8 * cfg.scale()
        for i, z in enumerate(roots):
            if used[i]:
                continue
            cluster = [z]
            used[i] = True
            for k in range(i + 1, len(roots)):
                if not used[k] and abs(roots[k] - z) <= tol:
                    cluster.append(roots[k])
                    used[k] = True
            center = complex(np.mean(cluster))
            if _is_real(center):
                center = complex(center.real)
            admissible = (len(cluster) == 1 and center.imag == 0.0
                          and not _near_component(center.real, cfg))
            records.append(SpeedRecord(center, len(cluster), admissible,
                                       "quartic-root"))
    return SpeedSet(int(m), cfg.regime, tuple(records))


def _reciprocal_gaps(cfg, c_star):
    gaps = cfg.as_array() - c_star
    if np.min(np.abs(gaps)) <= 1e-13 * cfg.scale():
        raise DegenerateSpeedError(
            f"speed {c_star!r} coincides with an interface velocity")
    return 1.0 / gaps


def kernel_vector(m, cfg, c_star):
    """Null vector of the mode-m pencil at an admissible speed."""
    inv = _reciprocal_gaps(cfg, c_star)
    return inv * np.array([1.0, 1.0, -1.0, -1.0])


def cokernel_vector(m, cfg, c_star):
    """Null vector of the transposed pencil (range orthogonal)."""
    inv = _reciprocal_gaps(cfg, c_star)
    return inv * np.array([1.0, -1.0, -1.0, 1.0])


def reciprocal_sq_weights(cfg, c_star):
    """Component-wise (a_i - c)^-2 (drives the quadratic interaction)."""
    return _reciprocal_gaps(cfg, c_star) ** 2


def transversality(m, cfg, c_star):
    """Pairing m * sum_i (-1)^(k_i+1) (a_i - c)^-2; nonzero at admissible speeds.

    A magnitude below 1e-10 signals numerical trouble (it cannot vanish
    at an admissible speed) and raises DegenerateSpeedError.
    """
    wsq = reciprocal_sq_weights(cfg, c_star)
    value = float(m) * float(np.dot(np.array([1.0, -1.0, 1.0, -1.0]), wsq))
    if abs(value) < 1e-10:
        raise DegenerateSpeedError(
            f"transversality ~ 0 at c={c_star!r}; speed is numerically degenerate")
    return value


def min_admissible_mode(cfg, cap):
    """Smallest mode (scanned 1..cap) whose quartic has four simple real
    roots, all separated from the interface velocities."""
    if cfg.regime != GENERIC:
        raise ValueError("mode scan applies to the generic regime only")
    sep = 1e-8 * cfg.scale()
    a = cfg.as_array()
    for m in range(1, int(cap) + 1):
        roots = quartic_roots(m, cfg)
        if not all(_is_real(z) for z in roots):
            continue
        re = np.sort(roots.real)
        if np.min(np.diff(re)) <= sep:
            continue
        if np.min(np.abs(re[:, None] - a[None, :])) <= sep:
            continue
        return m
    raise NoAdmissibleModeError(f"no admissible mode found with m <= {cap}")
