"""Built-in consistency checks run by ``steerpurity selftest``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import loo, qmat, states
from .estimate import antisymmetric_probability, antisymmetric_probability_swap

LOO_TOLERANCE = 1e-9
FORMULA_TOLERANCE = 1e-12
SWAP_TOLERANCE = 1e-12

DIMS = (2, 3, 4)


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    cases: int
    failing_case: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failing_case is None

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.name:<22} cases={self.cases:<5} "
                f"max_residual={self.max_residual:.3e} tol={self.tolerance:.0e}")


@dataclass
class SelftestReport:
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


class _Tracker:
    def __init__(self, name, tol):
        self.result = SuiteResult(name, 0.0, tol, 0)

    def add(self, residual: float, case: dict):
        r = self.result
        r.cases += 1
        r.max_residual = max(r.max_residual, residual)
        if residual > r.tolerance and r.failing_case is None:
            r.failing_case = {**case, "residual": residual}


def loo_identity_suite(n_states: int, seed: int,
                       basis_builder: Callable[[int], loo.LooBasis] = loo.build_loo) -> SuiteResult:
    """Correlation and marginal sums against purities on random states."""
    t = _Tracker("loo-identities", LOO_TOLERANCE)
    pairs = list(itertools.product(DIMS, DIMS))
    seeds = np.random.SeedSequence(seed).generate_state(n_states, dtype=np.uint64)
    for i in range(n_states):
        d_a, d_b = pairs[i % len(pairs)]
        s = int(seeds[i])
        rho = states.random_density(d_a, d_b, s)
        ba, bb = basis_builder(d_a), basis_builder(d_b)
        case = {"dim_a": d_a, "dim_b": d_b, "seed": s}
        t.add(abs(loo.correlation_sum(rho, ba, bb) - rho.purity()), {**case, "identity": "joint"})
        for wing, basis in ((qmat.Wing.A, ba), (qmat.Wing.B, bb)):
            red = qmat.partial_trace(rho, wing.other)
            t.add(abs(loo.marginal_sum(rho, wing, basis) - red.purity()),
                  {**case, "identity": f"marginal-{wing.value}"})
    return t.result


def _family_cases():
    grid = np.linspace(0.0, 1.0, 101)
    for p in grid:
        yield "werner", p, states.werner(p), 3 * p**2 / 4 + 0.25, 0.5
        yield "free-entangled", p, states.free_entangled(p), 4 * p**2 / 3 - 2 * p / 3 + 1 / 3, 1 / 3
        for d in (2, 3, 4, 5):
            yield (f"isotropic-d{d}", p, states.isotropic(p, d),
                   (d * d - 1) * p**2 / d**2 + 1 / d**2, 1 / d)
    for c in itertools.product(np.linspace(-1, 1, 9), repeat=3):
        if np.all(states.bell_diagonal_eigenvalues(*c) >= 0):
            yield "bell-diagonal", c, states.bell_diagonal(*c), (1 + sum(x * x for x in c)) / 4, 0.5


def family_formula_suite() -> SuiteResult:
    """Closed-form joint and marginal purities of every family."""
    t = _Tracker("family-purities", FORMULA_TOLERANCE)
    for name, param, rho, joint, marginal in _family_cases():
        case = {"family": name, "param": np.asarray(param).tolist()}
        t.add(abs(rho.purity() - joint), case)
        t.add(abs(qmat.partial_trace(rho, "A").purity() - marginal), case)
    return t.result


def swap_suite(n_states: int, seed: int) -> SuiteResult:
    """Explicit swap-operator probability against ``(1 - purity)/2``."""
    t = _Tracker("swap-vs-bernoulli", SWAP_TOLERANCE)
    mats = [states.werner(0.3), states.asymmetric_noisy_singlet(0.6), states.free_entangled(0.4)]
    rng = np.random.default_rng(seed)
    for i in range(n_states):
        d_a, d_b = [(2, 2), (2, 3), (3, 3)][i % 3]
        mats.append(states.random_density(d_a, d_b, rng))
    for i, rho in enumerate(mats):
        for m in (rho.matrix, qmat.partial_trace(rho, "A").matrix, qmat.partial_trace(rho, "B").matrix):
            t.add(abs(antisymmetric_probability_swap(m) - antisymmetric_probability(m)),
                  {"case": i, "size": m.shape[0]})
    return t.result


def run(seed: int = 0, n_states: int = 1000,
        basis_builder: Callable[[int], loo.LooBasis] = loo.build_loo) -> SelftestReport:
    report = SelftestReport()
    report.suites.append(loo_identity_suite(n_states, seed, basis_builder))
    report.suites.append(family_formula_suite())
    report.suites.append(swap_suite(30, seed))
    return report
