"""Transition-function energy E[eta] = int (x+1) eta'(x)^2 dx and its minimizers.

The energy of a smooth 0-to-1 transition on [-1, 1] has infimum zero.  The
analytic family eta_{s,t} (a clipped 1/(x+1) profile of sharpness s mollified
at scale 1/t) realizes the limit value 1/log((s+1)/(s-1)) as t grows, which
vanishes as s -> 1+.  An independent discrete minimizer over pinned grid
vectors confirms the decay of the minimum with resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np
import scipy.linalg

from .errors import ParameterViolation, SingularSystem
from .quadrature import gauss_rule, integrate_1d


# --------------------------------------------------------------------------
# mollifier
# --------------------------------------------------------------------------

def _bump_raw(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - yi * yi))
    return out


@lru_cache(maxsize=1)
def _bump_norm() -> float:
    return integrate_1d(_bump_raw, -1.0, 1.0, order=24, rel_tol=1e-14).value


def standard_mollifier() -> Callable[[np.ndarray], np.ndarray]:
    """Normalized smooth bump supported on [-1, 1] with unit integral."""
    c = 1.0 / _bump_norm()
    return lambda y: c * _bump_raw(y)


# --------------------------------------------------------------------------
# clipped extremal kernel
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ChiKernel:
    """Normalized kernel 1/(c_s (x+1)) clipped to |x| < 1/s, with closed-form
    antiderivative; c_s = log((s+1)/(s-1))."""

    s: float

    def __post_init__(self):
        if self.s <= 1.0:
            raise ParameterViolation(f"kernel sharpness must exceed 1, got {self.s}")

    @property
    def c_s(self) -> float:
        return math.log((self.s + 1.0) / (self.s - 1.0))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1.0 / self.s
        out[inside] = 1.0 / (self.c_s * (x[inside] + 1.0))
        return out

    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo = 1.0 - 1.0 / self.s
        out = np.zeros_like(x)
        out[x >= 1.0 / self.s] = 1.0
        mid = np.abs(x) < 1.0 / self.s
        out[mid] = (np.log(x[mid] + 1.0) - math.log(lo)) / self.c_s
        return out


# --------------------------------------------------------------------------
# cutoff profiles
# --------------------------------------------------------------------------

class AnalyticCutoff:
    """Transition eta_{s,t}: the antiderivative of chi_s mollified at scale 1/t.

    Requires t >= s/(s-1) so the mollified kernel stays supported in [-1, 1];
    then eta(-1) = 0 and eta(1) = 1 exactly by support arithmetic.
    """

    def __init__(self, s: float, t: float, mollifier=None):
        if s <= 1.0:
            raise ParameterViolation(f"s must exceed 1, got {s}")
        if t < s / (s - 1.0):
            raise ParameterViolation(
                f"t = {t} below the admissible threshold s/(s-1) = {s / (s - 1.0):.6g}")
        self.s = float(s)
        self.t = float(t)
        self.kernel = ChiKernel(s)
        self.mollifier = standard_mollifier() if mollifier is None else mollifier

    @property
    def support_halfwidth(self) -> float:
        return 1.0 / self.s + 1.0 / self.t

    def feature_points(self) -> list[float]:
        """Arguments where the mollified kernel turns on/off or crosses a jump image."""
        s, t = self.s, self.t
        return sorted({-1 / s - 1 / t, -1 / s + 1 / t, 1 / s - 1 / t, 1 / s + 1 / t})

    def _convolve(self, x: np.ndarray, kernel_fn) -> np.ndarray:
        """int kernel(x - y/t) f(y) dy, vectorized over x.

        The y-integrand is smooth away from the images of the kernel clip
        edges, so a fixed high-order rule on the three kink-free subintervals
        is spectrally accurate.
        """
        t = self.t
        nodes, weights = gauss_rule(16)
        c1 = np.clip(t * (x - 1.0 / self.s), -1.0, 1.0)
        c2 = np.clip(t * (x + 1.0 / self.s), -1.0, 1.0)
        edges = np.stack([np.full_like(x, -1.0), c1, c2, np.full_like(x, 1.0)], axis=-1)
        f = self.mollifier
        out = np.zeros_like(x)
        sub = 4  # composite panels per kink-free piece; the mollifier is only
        # C^inf-flat at its support edge, so one Gauss panel is not enough
        for j in range(3):
            lo, hi = edges[..., j], edges[..., j + 1]
            for k in range(sub):
                a = lo + (hi - lo) * (k / sub)
                b = lo + (hi - lo) * ((k + 1) / sub)
                half = 0.5 * (b - a)
                y = a[..., None] + half[..., None] * (nodes + 1.0)
                out += half * ((kernel_fn(x[..., None] - y / t) * f(y)) @ weights)
        return out

    def eta(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        hw = self.support_halfwidth
        out = np.zeros_like(x)
        out[x >= hw] = 1.0
        mid = np.abs(x) < hw
        if np.any(mid):
            out[mid] = self._convolve(x[mid], self.kernel.antiderivative)
        return out

    def eta_prime(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        mid = np.abs(x) < self.support_halfwidth
        if np.any(mid):
            out[mid] = self._convolve(x[mid], self.kernel)
        return out

    def reflected(self) -> "ReflectedCutoff":
        return ReflectedCutoff(self)


class ReflectedCutoff:
    """eta_-(x) = 1 - eta(-x); also a 0-to-1 transition on [-1, 1]."""

    def __init__(self, base):
        self.base = base
        self.s = getattr(base, "s", None)
        self.t = getattr(base, "t", None)

    def feature_points(self) -> list[float]:
        return sorted(-p for p in self.base.feature_points())

    def eta(self, x) -> np.ndarray:
        return 1.0 - self.base.eta(-np.atleast_1d(np.asarray(x, dtype=float)))

    def eta_prime(self, x) -> np.ndarray:
        return self.base.eta_prime(-np.atleast_1d(np.asarray(x, dtype=float)))

    def reflected(self):
        return self.base


@dataclass(frozen=True)
class DiscreteCutoff:
    """Grid transition on [-1, 1], pinned to 0 and 1 at the endpoints."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 3:
            raise ParameterViolation("need at least 3 grid values")
        if abs(v[0]) > 1e-14 or abs(v[-1] - 1.0) > 1e-14:
            raise ParameterViolation("grid transition must be pinned to 0 and 1")
        object.__setattr__(self, "values", v)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.values.size)

    def eta(self, x) -> np.ndarray:
        return np.interp(np.atleast_1d(np.asarray(x, dtype=float)), self.grid, self.values)

    def eta_prime(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        h = 2.0 / (self.values.size - 1)
        cell = np.clip(((x + 1.0) / h).astype(int), 0, self.values.size - 2)
        return (self.values[cell + 1] - self.values[cell]) / h

    def feature_points(self) -> list[float]:
        return []

    def reflected(self) -> "DiscreteCutoff":
        return DiscreteCutoff(1.0 - self.values[::-1])


CutoffProfile = Union[AnalyticCutoff, ReflectedCutoff, DiscreteCutoff]


# --------------------------------------------------------------------------
# the energy functional and its limits
# --------------------------------------------------------------------------

def eta_st(s: float, t: float, mollifier=None) -> AnalyticCutoff:
    """The analytic near-minimizing transition with sharpness s and mollifier scale 1/t."""
    return AnalyticCutoff(s, t, mollifier)


def energy(eta: CutoffProfile) -> float:
    """E[eta] = int_{-1}^{1} (x + 1) eta'(x)^2 dx."""
    if isinstance(eta, DiscreteCutoff):
        return discrete_energy(eta.values)
    splits = list(eta.feature_points())
    lo = min(splits) if splits else -1.0
    hi = max(splits) if splits else 1.0
    t_scale = getattr(eta, "t", None) or 100.0
    inner = []
    for c in splits:
        inner.extend(np.linspace(c - 4e-1 / t_scale, c + 4e-1 / t_scale, 5).tolist())
    res = integrate_1d(lambda x: (x + 1.0) * eta.eta_prime(x) ** 2,
                       max(lo, -1.0), min(hi, 1.0),
                       splits=splits + inner, order=12, rel_tol=1e-9,
                       max_panels=20000)
    return res.value


def reflected_energy(eta: CutoffProfile) -> float:
    """int (y + 1) eta'(-y)^2 dy, the energy entering lower-side boundary terms."""
    res = integrate_1d(lambda y: (y + 1.0) * eta.eta_prime(-y) ** 2,
                       -1.0, 1.0,
                       splits=[-p for p in eta.feature_points()]
                       if hasattr(eta, "feature_points") else [],
                       order=12, rel_tol=1e-9, max_panels=20000)
    return res.value


def energy_limit(s: float) -> float:
    """Large-t limit of E[eta_{s,t}]: 1/log((s+1)/(s-1)), decaying as s -> 1+."""
    if s <= 1.0:
        raise ParameterViolation(f"s must exceed 1, got {s}")
    return 1.0 / math.log((s + 1.0) / (s - 1.0))


def energy_dominating_bound(s: float) -> float:
    """Uniform-in-t bound 2 s^2 / (c_s^2 (s-1)^2) on E[eta_{s,t}]."""
    c_s = math.log((s + 1.0) / (s - 1.0))
    return 2.0 * s * s / (c_s * c_s * (s - 1.0) * (s - 1.0))


# --------------------------------------------------------------------------
# discrete minimizer
# --------------------------------------------------------------------------

def _cell_weights(n_grid: int) -> tuple[np.ndarray, float]:
    """Transition weights (x + 1) sampled at the upper cell nodes of a uniform
    grid on [-1, 1]; keeps the discrete minimum consistent with the
    1/log(2/h) harmonic-sum scale."""
    h = 2.0 / (n_grid - 1)
    nodes = np.linspace(-1.0, 1.0, n_grid)
    return nodes[1:] + 1.0, h


def discrete_energy(values: np.ndarray) -> float:
    """Energy of a pinned grid transition with the minimizer's cell weights."""
    v = np.asarray(values, dtype=float)
    w, h = _cell_weights(v.size)
    d = np.diff(v)
    return float(np.sum(w * d * d) / h)


def minimize_discrete(n_grid: int) -> tuple[DiscreteCutoff, float]:
    """Exact minimizer of the discrete transition energy on n_grid points.

    The quadratic form sum_i w_i (eta_{i+1} - eta_i)^2 / h with pinned
    endpoints has tridiagonal normal equations; the minimizer satisfies
    (eta_{i+1} - eta_i) proportional to 1/w_i and the minimum value equals
    1/(sum_i h/w_i), a truncated harmonic sum of order log(2/h).
    """
    if n_grid < 3:
        raise ParameterViolation("need at least 3 grid points")
    w, h = _cell_weights(n_grid)
    m = n_grid - 2  # interior unknowns
    diag = w[:-1] + w[1:]
    off = -w[1:-1]
    rhs = np.zeros(m)
    rhs[-1] = w[-1] * 1.0
    if np.any(diag <= 0):
        raise SingularSystem("non-positive cell weights")  # pragma: no cover
    if m == 1:
        interior = rhs / diag
    else:
        ab = np.zeros((2, m))
        ab[0, 1:] = off
        ab[1, :] = diag
        interior = scipy.linalg.solveh_banded(ab, rhs)
    values = np.concatenate(([0.0], interior, [1.0]))
    profile = DiscreteCutoff(values)
    return profile, discrete_energy(values)


def discrete_minimum_closed_form(n_grid: int) -> float:
    """1 / sum_i (h / w_i): the exact minimum by the Cauchy-Schwarz argument."""
    w, h = _cell_weights(n_grid)
    return float(1.0 / np.sum(h / w))
