"""Truncated trigonometric series on the 2pi-torus with m-fold symmetry.

A series stores the reduced harmonics j = 1..count of the fundamental
j*fold; the mean is never stored, so every series averages to zero.
Parity is tracked explicitly: even series carry only cosine
coefficients, odd series only sine coefficients.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

EVEN = "even-cosine"
ODD = "odd-sine"
FULL = "full"

_PARITIES = (EVEN, ODD, FULL)


@dataclass(frozen=True)
class NormParams:
    """Regularity/analyticity indices (s, sigma) of the coefficient norm."""

    s: float = 2.0
    sigma: float = 0.1

    def __post_init__(self):
        if self.s < 0 or self.sigma < 0:
            raise ValueError("norm indices must be nonnegative")


class TrigSeries:
    """Immutable truncated trig series with fold symmetry and parity tag."""

    __slots__ = ("fold", "cos", "sin", "parity")

    def __init__(self, fold, cos, sin, parity=FULL):
        if fold < 1:
            raise ValueError("fold must be a positive integer")
        cos = np.ascontiguousarray(cos, dtype=float)
        sin = np.ascontiguousarray(sin, dtype=float)
        if cos.ndim != 1 or sin.shape != cos.shape:
            raise ValueError("cos/sin must be 1d arrays of equal length")
        if not (np.all(np.isfinite(cos)) and np.all(np.isfinite(sin))):
            raise ValueError("non-finite coefficients")
        if parity not in _PARITIES:
            raise ValueError(f"unknown parity {parity!r}")
        if parity == EVEN and np.any(sin != 0.0):
            raise ValueError("even series must have zero sine coefficients")
        if parity == ODD and np.any(cos != 0.0):
            raise ValueError("odd series must have zero cosine coefficients")
        cos.setflags(write=False)
        sin.setflags(write=False)
        self.fold = int(fold)
        self.cos = cos
        self.sin = sin
        self.parity = parity  # assigned last; later writes are rejected

    def __setattr__(self, name, value):
        if hasattr(self, "parity"):
            raise AttributeError("TrigSeries is immutable")
        object.__setattr__(self, name, value)

    # -- constructors ------------------------------------------------

    @classmethod
    def zeros(cls, fold, count, parity=FULL):
        z = np.zeros(count)
        return cls(fold, z, z.copy(), parity)

    @classmethod
    def from_cos(cls, fold, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        return cls(fold, coeffs, np.zeros_like(coeffs), EVEN)

    @classmethod
    def from_sin(cls, fold, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        return cls(fold, np.zeros_like(coeffs), coeffs, ODD)

    # -- basic queries -----------------------------------------------

    @property
    def count(self):
        return self.cos.shape[0]

    def wavenumbers(self):
        return self.fold * np.arange(1, self.count + 1)

    def max_abs(self):
        return max(np.max(np.abs(self.cos), initial=0.0),
                   np.max(np.abs(self.sin), initial=0.0))

    def with_count(self, count):
        """Pad with zeros or truncate to the requested harmonic count."""
        if count == self.count:
            return self
        c = np.zeros(count)
        s = np.zeros(count)
        n = min(count, self.count)
        c[:n] = self.cos[:n]
        s[:n] = self.sin[:n]
        return TrigSeries(self.fold, c, s, self.parity)

    def eval(self, x):
        """Evaluate the series at the points x (radians on the torus)."""
        x = np.asarray(x, dtype=float)
        phase = np.multiply.outer(x, self.wavenumbers())
        return np.cos(phase) @ self.cos + np.sin(phase) @ self.sin

    # -- arithmetic ----------------------------------------------------

    def _binary(self, other, op):
        if not isinstance(other, TrigSeries):
            return NotImplemented
        if other.fold != self.fold:
            raise ValueError("fold mismatch")
        n = max(self.count, other.count)
        a, b = self.with_count(n), other.with_count(n)
        parity = self.parity if self.parity == other.parity else FULL
        return TrigSeries(self.fold, op(a.cos, b.cos), op(a.sin, b.sin), parity)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return TrigSeries(self.fold, scalar * self.cos, scalar * self.sin,
                          self.parity)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    # -- snapshots -----------------------------------------------------

    def to_json(self):
        return {"fold": self.fold, "count": self.count, "parity": self.parity,
                "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["fold"], obj["cos"], obj["sin"], obj["parity"])


def _flip(parity):
    if parity == EVEN:
        return ODD
    if parity == ODD:
        return EVEN
    return FULL


def deriv(f):
    """d/dx on the coefficients: cos(jmx) -> -jm sin(jmx), sin -> jm cos."""
    w = f.wavenumbers().astype(float)
    return TrigSeries(f.fold, w * f.sin, -w * f.cos, _flip(f.parity))


def antideriv(f):
    """Zero-mean antiderivative: cos(jmx) -> sin(jmx)/(jm), sin -> -cos/(jm)."""
    w = f.wavenumbers().astype(float)
    return TrigSeries(f.fold, -f.sin / w, f.cos / w, _flip(f.parity))


def _product_parity(pf, pg):
    if pf == FULL or pg == FULL:
        return FULL
    return EVEN if pf == pg else ODD


def multiply_with_mean(f, g, out_count=None):
    """Exact truncated product of two series; returns (mean, series).

    The convolution is carried out over the full harmonic range (no
    aliasing); `out_count` controls where the result is cut (default:
    the larger input count).
    """
    if f.fold != g.fold:
        raise ValueError("fold mismatch")
    if out_count is None:
        out_count = max(f.count, g.count)
    mean, hc, hs = kernels.trig_product(f.cos, f.sin, 0.0,
                                        g.cos, g.sin, 0.0, out_count)
    parity = _product_parity(f.parity, g.parity)
    if parity == EVEN:
        hs = np.zeros_like(hs)
    elif parity == ODD:
        hc = np.zeros_like(hc)
        mean = 0.0
    return mean, TrigSeries(f.fold, hc, hs, parity)


def multiply(f, g, out_count=None):
    """Truncated product with the mean discarded (stored series stay mean-free)."""
    return multiply_with_mean(f, g, out_count)[1]


def norm(f, params):
    """Sobolev-analytic coefficient norm (sum_j j^(2s) e^(2 sigma j) u_j^2)^(1/2).

    The weight uses the reduced index j (harmonic j*fold counts as j).
    """
    j = np.arange(1, f.count + 1, dtype=float)
    weight = j ** (2.0 * params.s) * np.exp(2.0 * params.sigma * j)
    return float(np.sqrt(np.sum(weight * (f.cos ** 2 + f.sin ** 2))))


def shift(f, h):
    """Coefficients of x -> f(x + h).

    Shifts by integer multiples of pi/fold use exact +-1 factors so that
    parity-preserving shifts stay coefficient-exact.
    """
    j = np.arange(1, f.count + 1)
    k = f.fold * h / np.pi
    k_round = np.rint(k)
    if abs(k - k_round) < 1e-12:
        signs = np.where((j * int(k_round)) % 2 == 0, 1.0, -1.0)
        return TrigSeries(f.fold, signs * f.cos, signs * f.sin, f.parity)
    cw = np.cos(j * f.fold * h)
    sw = np.sin(j * f.fold * h)
    new_cos = cw * f.cos + sw * f.sin
    new_sin = cw * f.sin - sw * f.cos
    return TrigSeries(f.fold, new_cos, new_sin, FULL)


def pair(f, g):
    """Unweighted coefficient pairing sum_j (f_j g_j) over both bases."""
    n = min(f.count, g.count)
    return float(np.dot(f.cos[:n], g.cos[:n]) + np.dot(f.sin[:n], g.sin[:n]))
