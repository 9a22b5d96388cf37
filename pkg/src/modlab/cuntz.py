"""Truncated shift families and non-signalling unitaries.

A branching-n family of shift isometries S_j e_k = e_{nk+j} realizes the
orthogonal-range relations exactly on a defect-free compression of a
D-dimensional space.  Sums w = sum_i u_i' u_i over two commuting factors are
non-signalling by construction but provably far from any product unitary
u' (x) u on a suitable reference vector; with an independent middle family the
product form is restored exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooSmall, ParameterViolation, TruncationBudgetExceeded
from .linalg import dagger, kron
from .modular import random_unitary

DEFECT_FREE_TOL = 1e-12


@dataclass(frozen=True)
class TruncatedCuntz:
    """Shift matrices S_j e_k = e_{nk+j} (zero when nk+j >= D) with the
    subspace where the orthogonal-isometry relations hold exactly."""

    branching: int
    dim: int
    shifts: list = field(init=False, repr=False)

    def __post_init__(self):
        n, d = self.branching, self.dim
        if n < 1:
            raise DimensionTooSmall("branching must be at least 1")
        if d < n * n:
            raise DimensionTooSmall(f"need dim >= n^2 = {n * n}, got {d}")
        shifts = []
        for j in range(n):
            s = np.zeros((d, d))
            for k in range(d):
                if n * k + j < d:
                    s[n * k + j, k] = 1.0
            shifts.append(s)
        object.__setattr__(self, "shifts", shifts)

    @property
    def defect_free_dim(self) -> int:
        return (self.dim - self.branching) // self.branching

    def defect_free_projector(self) -> np.ndarray:
        p = np.zeros((self.dim, self.dim))
        q = self.defect_free_dim
        p[:q, :q] = np.eye(q)
        return p

    def relation_report(self) -> dict:
        """Exactness of S_i^dag S_j = delta_ij on the defect-free compression,
        the range-sum projection, and the defect norms on the complement."""
        n, d = self.branching, self.dim
        p = self.defect_free_projector()
        comp = np.eye(d) - p
        worst_good, worst_defect = 0.0, 0.0
        for i in range(n):
            for j in range(n):
                prod = self.shifts[i].T @ self.shifts[j]
                target = np.eye(d) if i == j else np.zeros((d, d))
                worst_good = max(worst_good, np.linalg.norm(p @ (prod - target) @ p, 2))
                worst_defect = max(worst_defect, np.linalg.norm((prod - target) @ comp, 2))
        range_sum = sum(s @ s.T for s in self.shifts)
        reachable = np.diag([1.0 if (k % n) + n * (k // n) == k else 0.0
                             for k in range(d)])
        range_residual = float(np.linalg.norm(range_sum - reachable, 2))
        return {"defect_free_residual": float(worst_good),
                "top_sector_defect": float(worst_defect),
                "range_sum_residual": range_residual}


def build_truncated_cuntz(n: int, d: int) -> TruncatedCuntz:
    return TruncatedCuntz(n, d)


# --------------------------------------------------------------------------
# non-signalling scenarios on a two-factor space
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SignallingScenario:
    """Alice acts on the first factor, Charlie inside the defect-free zone of
    the second; w is the candidate non-signalling unitary on the pair."""

    alice_family: TruncatedCuntz
    charlie_family: TruncatedCuntz
    alice_generators: list
    charlie_generators: list
    w: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.alice_family.dim, self.charlie_family.dim

    def commutation_defect(self) -> float:
        """Alice and Charlie generators must commute on the composite space."""
        d1, d2 = self.dims
        worst = 0.0
        for a in self.alice_generators:
            a_full = kron(a, np.eye(d2))
            for c in self.charlie_generators:
                c_full = kron(np.eye(d1), c)
                worst = max(worst, np.linalg.norm(a_full @ c_full - c_full @ a_full, 2))
        return float(worst)


def cuntz_sum_unitary(fam1: TruncatedCuntz, fam2: TruncatedCuntz) -> np.ndarray:
    """w = sum_i T_i (x) S_i^dag built from the two shift families."""
    if fam1.branching != fam2.branching:
        raise DimensionTooSmall("families must share the branching number")
    return sum(kron(t, s.T) for t, s in zip(fam1.shifts, fam2.shifts))


def make_scenario(n: int, d1: int, d2: int, n_generators: int = 3,
                  seed: int = 0, w: np.ndarray | None = None) -> SignallingScenario:
    """Random Hermitian generator families on both sides; Charlie's are
    compressed into the defect-free zone of his factor."""
    fam1 = TruncatedCuntz(n, d1)
    fam2 = TruncatedCuntz(n, d2)
    rng = np.random.default_rng(seed)
    alice = []
    charlie = []
    p2 = fam2.defect_free_projector()
    for _ in range(n_generators):
        g = rng.standard_normal((d1, d1)) + 1j * rng.standard_normal((d1, d1))
        alice.append((g + dagger(g)) / 2.0)
        g = rng.standard_normal((d2, d2)) + 1j * rng.standard_normal((d2, d2))
        charlie.append(p2 @ ((g + dagger(g)) / 2.0) @ p2)
    if w is None:
        w = cuntz_sum_unitary(fam1, fam2)
    return SignallingScenario(fam1, fam2, alice, charlie, w)


def nonsignalling_check(scenario: SignallingScenario) -> dict:
    """max_a,c || P [w a w^dag, c] P || over Alice/Charlie generator pairs,
    with P the defect-free compression of both factors."""
    d1, d2 = scenario.dims
    p = kron(scenario.alice_family.defect_free_projector(),
             scenario.charlie_family.defect_free_projector())
    w = scenario.w
    worst = 0.0
    for a in scenario.alice_generators:
        moved = w @ kron(a, np.eye(d2)) @ dagger(w)
        for c in scenario.charlie_generators:
            c_full = kron(np.eye(d1), c)
            comm = moved @ c_full - c_full @ moved
            worst = max(worst, np.linalg.norm(p @ comm @ p, 2))
    return {"max_commutator": float(worst),
            "tolerance": DEFECT_FREE_TOL,
            "pass": bool(worst <= DEFECT_FREE_TOL),
            "commutation_defect": scenario.commutation_defect()}


# --------------------------------------------------------------------------
# the norm-gap experiment
# --------------------------------------------------------------------------

def gap_floor(epsilon: float) -> float:
    """(1 - eps) sqrt(2 - sqrt 2) - 2 sqrt(2 eps), positive for small eps."""
    return (1.0 - epsilon) * math.sqrt(2.0 - math.sqrt(2.0)) - 2.0 * math.sqrt(2.0 * epsilon)


def _reference_state(fam: TruncatedCuntz, epsilon: float, i_max: int,
                     q: float = 0.5) -> tuple[np.ndarray, float]:
    """Entangled reference matrix Omega = sum_i c_i psi_i' psi_i^T and the
    dropped ideal tail mass.

    psi_1 = (S_0 e_0 + S_1 e_1)/sqrt 2; the remaining psi_i complete it to an
    orthonormal family; psi_i' are standard basis vectors inside the
    defect-free zone of the primed factor.  c_1 = 1 - eps and the remaining
    mass follows a geometric profile c_i ~ q^i truncated at i_max.
    """
    d = fam.dim
    n = fam.branching
    if n < 2:
        raise DimensionTooSmall("the reference state needs branching >= 2")
    if i_max > fam.defect_free_dim:
        raise TruncationBudgetExceeded(
            "reference-state tail does not fit the defect-free zone")
    psi1 = (fam.shifts[0][:, 0] + fam.shifts[1][:, 1]) / math.sqrt(2.0)
    basis = [psi1]
    k = 0
    while len(basis) < i_max and k < d:
        cand = np.zeros(d)
        cand[k] = 1.0
        for b in basis:
            cand = cand - np.dot(b, cand) * b
        norm = np.linalg.norm(cand)
        if norm > 1e-8:
            basis.append(cand / norm)
        k += 1
    if len(basis) < i_max:
        raise TruncationBudgetExceeded("factor too small for the requested tail")
    tail_target = 1.0 - (1.0 - epsilon) ** 2
    geo = np.array([q ** i for i in range(2, i_max + 1)])
    infinite_mass = q ** 4 / (1.0 - q * q)  # sum_{i >= 2} q^{2i}
    kept_mass = float(np.sum(geo * geo))
    slack = tail_target * (1.0 - kept_mass / infinite_mass)
    coeffs = np.concatenate(([1.0 - epsilon],
                             geo * math.sqrt(tail_target / infinite_mass)))
    omega = np.zeros((d, d))
    for i, c in enumerate(coeffs):
        prime = np.zeros(d)
        prime[i] = 1.0
        omega += c * np.outer(prime, basis[i])
    omega /= np.linalg.norm(omega)
    return omega, slack


def _apply_w(omega: np.ndarray, fam: TruncatedCuntz) -> np.ndarray:
    """Matrix form of (sum_j T_j (x) S_j^dag) acting on the reference state."""
    return sum(t @ omega @ s for t, s in zip(fam.shifts, fam.shifts))


def _product_gap(omega: np.ndarray, target: np.ndarray,
                 u_prime: np.ndarray, u: np.ndarray) -> float:
    return float(np.linalg.norm(u_prime @ omega @ u.T - target))


def _polar_unitary(a: np.ndarray) -> np.ndarray:
    uu, _, vv = np.linalg.svd(a)
    return uu @ vv


def align_product(omega: np.ndarray, target: np.ndarray, rng: np.random.Generator,
                  iters: int = 60, restarts: int = 4) -> float:
    """Alternating polar alignment minimizing ||(u' (x) u) Omega - target||
    over product unitaries; returns the best gap found."""
    d = omega.shape[0]
    best = math.inf
    for _ in range(restarts):
        u = random_unitary(d, rng)
        u_prime = random_unitary(d, rng)
        for _ in range(iters):
            # optimal u' for fixed u maximizes Re tr(u'^dag A'), A' = target conj(u) omega^dag
            a_prime = target @ np.conj(u) @ dagger(omega)
            u_prime = _polar_unitary(a_prime)
            # optimal u for fixed u' maximizes Re tr(u C), C = conj(omega^dag u'^dag target)
            c = np.conj(dagger(omega) @ dagger(u_prime) @ target)
            uu, _, vv = np.linalg.svd(c)
            u = dagger(vv) @ dagger(uu)
        best = min(best, _product_gap(omega, target, u_prime, u))
    return best


def norm_gap_experiment(epsilon: float, samples: int, d_factor: int = 32,
                        i_max: int = 12, seed: int = 0,
                        adversarial: bool = True) -> dict:
    """Sample product unitaries against the shift-sum unitary on the reference
    state and verify the gap never falls below the analytic floor.

    epsilon is capped at 0.05; beyond ~0.068 the floor changes sign and the
    experiment is vacuous.
    """
    if not 0.0 < epsilon <= 0.05:
        raise ParameterViolation(f"epsilon must lie in (0, 0.05], got {epsilon}")
    fam = TruncatedCuntz(2, d_factor)
    omega, slack = _reference_state(fam, epsilon, i_max)
    target = _apply_w(omega, fam)
    floor = gap_floor(epsilon)
    rng = np.random.default_rng(seed)
    min_gap = math.inf
    for _ in range(samples):
        u = random_unitary(d_factor, rng)
        u_prime = random_unitary(d_factor, rng)
        min_gap = min(min_gap, _product_gap(omega, target, u_prime, u))
    if adversarial:
        min_gap = min(min_gap, align_product(omega, target, rng))
    return {"epsilon": epsilon, "samples": samples, "floor": floor,
            "min_gap": float(min_gap), "slack": float(slack),
            "pass": bool(min_gap >= floor - slack)}


def norm_gap_report_json(report: dict) -> str:
    return json.dumps(report)


# --------------------------------------------------------------------------
# product reconstruction through a middle family
# --------------------------------------------------------------------------

def product_reconstruction(n: int, outer_dim: int, middle_dim: int) -> dict:
    """Rebuild w = sum_i u_i' u_i as a product u' u using an independent shift
    family on a middle factor: u' = sum_i u_i' c_i^dag, u = sum_i c_i u_i.

    On the defect-free compression the factorization and the unitarity of
    both factors are exact.
    """
    fam1 = TruncatedCuntz(n, outer_dim)
    fam_mid = TruncatedCuntz(n, middle_dim)
    fam3 = TruncatedCuntz(n, outer_dim)
    d1, dm, d3 = outer_dim, middle_dim, outer_dim
    eye1, eyem, eye3 = np.eye(d1), np.eye(dm), np.eye(d3)
    w = sum(kron(kron(t, eyem), s.T) for t, s in zip(fam1.shifts, fam3.shifts))
    u_prime = sum(kron(kron(t, c.T), eye3) for t, c in zip(fam1.shifts, fam_mid.shifts))
    u = sum(kron(kron(eye1, c), s.T) for c, s in zip(fam_mid.shifts, fam3.shifts))
    p = kron(kron(fam1.defect_free_projector(), fam_mid.defect_free_projector()),
             fam3.defect_free_projector())
    residual = float(np.linalg.norm(p @ (u_prime @ u - w) @ p, 2))
    unit_u = float(np.linalg.norm(p @ (dagger(u) @ u - np.eye(d1 * dm * d3)) @ p, 2))
    unit_up = float(np.linalg.norm(p @ (dagger(u_prime) @ u_prime
                                        - np.eye(d1 * dm * d3)) @ p, 2))
    return {"branching": n, "outer_dim": outer_dim, "middle_dim": middle_dim,
            "factorization_residual": residual,
            "u_unitarity_defect": unit_u, "u_prime_unitarity_defect": unit_up,
            "pass": bool(max(residual, unit_u, unit_up) <= DEFECT_FREE_TOL)}


def certify_no_product_form(epsilon: float = 0.01, d_factor: int = 16,
                            seed: int = 0) -> dict:
    """Without a middle family the shift-sum unitary stays provably far from
    every product: the floor bounds the alignment gap from below, so the best
    product alignment certifies a gap > 0.1."""
    fam = TruncatedCuntz(2, d_factor)
    omega, slack = _reference_state(fam, epsilon, i_max=6)
    target = _apply_w(omega, fam)
    rng = np.random.default_rng(seed)
    best = align_product(omega, target, rng, iters=80, restarts=6)
    floor = gap_floor(epsilon)
    certified = floor - slack
    return {"epsilon": epsilon, "best_alignment_gap": float(best),
            "certified_floor": float(certified),
            "pass": bool(best >= certified > 0.1)}
