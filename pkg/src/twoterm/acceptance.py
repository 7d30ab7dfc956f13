"""Acceptance criteria, runnable from the test-suite and from ``twoterm verify``.

Every criterion returns a CriterionResult carrying the measured figure and
the tolerance it was held to.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .core import NATURAL, PotentialSpec, QuantumNumbers, coulomb_spec
from .oracle import ShootingProblem, oracle_eigenvalue, oracle_levels, track_eigenvalue
from .spectrum import (
    EnergyLevel,
    SolverConfig,
    closed_form_residual_dirac,
    closed_form_residual_kg,
    coulomb_energy,
    hulthen_residual,
    manning_rosen_residual,
    solve_level,
)
from .specfun import hyp2f1_terminating, ln_gamma
from .wavefunction import (
    count_nodes,
    dirac_lower,
    dirac_upper,
    kg_wavefunction,
    norm_integral_closed_form,
    norm_integral_quadrature,
    square_norm,
)

BETAS = (0.1, 0.2)
COUPLINGS = ((1.0, 0.0), (1.0, 0.5), (0.5, 0.25))
ELLS = (0, 1)
KAPPAS = (1, -1, 2)
NS = (0, 1, 2)

ORACLE_TOL = 1e-6
COULOMB_TOL = 1e-4
CLOSED_FORM_TOL = 1e-9
NORM_TOL = 1e-8
IDENTITY_TOL = 1e-8
DEGENERACY_TOL = 1e-12
HYP_TOL = 1e-13
LGAMMA_TOL = 1e-12
NUMEROV_ORDER_MIN = 3.5
DIRAC_RESIDUAL_TOL = 1e-8


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = math.nan

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.key}: {self.title} (measured {self.measured:.3e}, tolerance {self.tolerance:.1e}, "
            f"{self.seconds:.1f} s) {self.detail}"
        ).rstrip()


def grid_specs() -> List[PotentialSpec]:
    return [PotentialSpec(V0, V1, beta, 1.0, 1.0) for beta in BETAS for V0, V1 in COUPLINGS]


@dataclass
class _Cache:
    """Levels shared between criteria within one run."""

    config: SolverConfig
    levels: Dict[tuple, EnergyLevel] = field(default_factory=dict)

    def level(self, spec: PotentialSpec, qn: QuantumNumbers) -> EnergyLevel:
        key = (spec, qn)
        if key not in self.levels:
            self.levels[key] = solve_level(spec, NATURAL, qn, self.config)
        return self.levels[key]


def _kg_grid():
    return [(s, QuantumNumbers.kg(n, ell)) for s in grid_specs() for ell in ELLS for n in NS]


def _dirac_grid():
    return [(s, QuantumNumbers.dirac(n, k, "upper")) for s in grid_specs() for k in KAPPAS for n in NS]


def _oracle_match(cache: _Cache, grid, key: str, title: str) -> CriterionResult:
    worst, where = 0.0, ""
    failures = []
    scans = {}
    for spec, qn in grid:
        angular_key = (spec, qn.angular)
        if angular_key not in scans:
            prob = ShootingProblem(spec, NATURAL, qn)
            scans[angular_key] = (prob, oracle_levels(prob))
        prob, levels = scans[angular_key]
        try:
            analytic = cache.level(spec, qn).E
            numeric = oracle_eigenvalue(prob, qn.n, levels=levels).E
        except (LookupError, RuntimeError, ValueError) as exc:
            failures.append(f"{spec} {qn}: {exc}")
            continue
        err = abs(analytic - numeric)
        if err > worst:
            worst, where = err, f"worst at V0={spec.V0} V1={spec.V1} beta={spec.beta} {qn}"
    if failures:
        return CriterionResult(key, title, False, math.inf, ORACLE_TOL, f"{len(failures)} level(s) unresolved; first: {failures[0]}")
    return CriterionResult(key, title, worst <= ORACLE_TOL, worst, ORACLE_TOL, where)


def oracle_kg(cache: _Cache) -> CriterionResult:
    return _oracle_match(cache, _kg_grid(), "oracle_kg", "KG analytic energies match Numerov shooting")


def oracle_dirac(cache: _Cache) -> CriterionResult:
    return _oracle_match(cache, _dirac_grid(), "oracle_dirac", "Dirac upper-component energies match Numerov shooting")


def coulomb_limit(cache: _Cache, zeta: float = 0.15) -> CriterionResult:
    betas = (1e-2, 1e-3, 1e-4)
    worst_final, monotone, notes = 0.0, True, []
    for ell, n in itertools.product((0, 1), (0, 1)):
        target = coulomb_energy(zeta, n, ell)
        errs = []
        for beta in betas:
            try:
                E = cache.level(coulomb_spec(zeta, beta), QuantumNumbers.kg(n, ell)).E
            except (LookupError, RuntimeError) as exc:
                return CriterionResult("coulomb_limit", "Hulthen tends to the Coulomb energy", False, math.inf, COULOMB_TOL, str(exc))
            errs.append(abs(E - target))
        if not (errs[0] > errs[1] > errs[2]):
            monotone = False
            notes.append(f"non-monotone for n={n} l={ell}: {errs}")
        worst_final = max(worst_final, errs[-1])
    ok = monotone and worst_final <= COULOMB_TOL
    return CriterionResult(
        "coulomb_limit", "Hulthen tends to the Coulomb energy, monotonically in beta", ok, worst_final, COULOMB_TOL, "; ".join(notes)
    )


def closed_forms(cache: _Cache) -> CriterionResult:
    worst, where = 0.0, ""

    def note(val, label):
        nonlocal worst, where
        if abs(val) > worst:
            worst, where = abs(val), label

    for spec, qn in _kg_grid():
        E = cache.level(spec, qn).E
        ell = qn.angular.ell
        note(closed_form_residual_kg(spec, NATURAL, qn, E), f"kg {spec} {qn}")
        b = 1.0 / spec.beta
        A = 2 * b * b * spec.V0
        alpha = 0.5 * (1 + math.sqrt(1 + 8 * b * b * spec.V1))
        note(manning_rosen_residual(A, alpha, b, spec.m0, qn.n, ell, E), f"manning-rosen {spec} {qn}")
        if spec.V1 == 0:
            note(hulthen_residual(spec.V0, spec.beta, spec.m0, qn.n, ell, E), f"hulthen {spec} {qn}")
    for spec, qn in _dirac_grid():
        E = cache.level(spec, qn).E
        note(closed_form_residual_dirac(spec, NATURAL, qn, E), f"dirac {spec} {qn}")
    return CriterionResult(
        "closed_forms", "closed-form energy relations vanish at the quantization roots", worst <= CLOSED_FORM_TOL, worst, CLOSED_FORM_TOL, where
    )


def normalization(cache: _Cache) -> CriterionResult:
    worst, where = 0.0, ""
    for spec, qn in _kg_grid():
        u = kg_wavefunction(spec, NATURAL, cache.level(spec, qn))
        if u.norm_method != "closed_form":
            return CriterionResult("normalization", "closed-form N gives unit norm", False, math.inf, NORM_TOL, f"closed form rejected for {spec} {qn}")
        dev = abs(square_norm(u) - 1.0)
        if dev > worst:
            worst, where = dev, f"{spec} {qn}"
    # the identity is exercised for degrees 0..3 at every (P, Qp) pair the
    # grid produces, whether or not a bound state of that degree exists
    ident = 0.0
    for spec, qn in _kg_grid():
        c = cache.level(spec, qn).coeffs
        P, Qp = 2 * c.A1 - 1, 2 + 2 * c.D
        for n in range(4):
            closed = norm_integral_closed_form(n, P, Qp)
            quad = norm_integral_quadrature(n, P, Qp)
            ident = max(ident, abs(closed - quad) / abs(closed))
    ok = worst <= NORM_TOL and ident <= IDENTITY_TOL
    return CriterionResult(
        "normalization", "unit norm from closed-form N; weighted square-integral identity", ok, max(worst, ident), NORM_TOL,
        f"norm {worst:.2e} ({where}); identity {ident:.2e}",
    )


def node_theorem(cache: _Cache) -> CriterionResult:
    bad = []
    for spec, qn in _kg_grid():
        k = count_nodes(kg_wavefunction(spec, NATURAL, cache.level(spec, qn)))
        if k != qn.n:
            bad.append(f"{spec} {qn}: {k}")
    for spec, qn in _dirac_grid():
        k = count_nodes(dirac_upper(spec, NATURAL, cache.level(spec, qn)))
        if k != qn.n:
            bad.append(f"{spec} {qn}: {k}")
    return CriterionResult("node_theorem", "node count equals n", not bad, float(len(bad)), 0.0, "; ".join(bad[:3]))


def degeneracy(cache: _Cache) -> CriterionResult:
    worst = 0.0
    for spec in grid_specs():
        for ell in ELLS:
            for n in NS:
                E_kg = cache.level(spec, QuantumNumbers.kg(n, ell)).E
                for kappa in {ell + 1, -ell} - {0}:
                    E_d = cache.level(spec, QuantumNumbers.dirac(n, kappa)).E
                    worst = max(worst, abs(E_d - E_kg))
    return CriterionResult("degeneracy", "Dirac kappa = l+1 and -l match KG at l", worst <= DEGENERACY_TOL, worst, DEGENERACY_TOL)


def _naive_hyp2f1(n, b, c, z):
    import mpmath as mp

    with mp.workdps(50):
        total, term = mp.mpf(1), mp.mpf(1)
        b, c, z = mp.mpf(b), mp.mpf(c), mp.mpf(z)
        for k in range(1, n + 1):
            term *= (-n + k - 1) * (b + k - 1) / ((c + k - 1) * k) * z
            total += term
        return float(total)


def numerov_orders(spec=None, qn=None, base_steps: int = 10_000) -> Tuple[List[float], List[float]]:
    """Eigenvalues at four step counts (three halvings of h) and the observed
    orders log2(|dE_k| / |dE_{k+1}|)."""
    spec = spec or PotentialSpec(1.0, 0.5, 0.02)
    qn = qn or QuantumNumbers.kg(10, 5)
    prob = ShootingProblem(spec, NATURAL, qn, steps=base_steps)
    E0 = oracle_eigenvalue(prob, qn.n, tol=1.0).E
    Es = [track_eigenvalue(prob.with_steps(base_steps * 2**k), E0) for k in range(4)]
    d = np.abs(np.diff(Es))
    return Es, list(np.log2(d[:-1] / d[1:]))


def special_functions(cache: _Cache) -> CriterionResult:
    rng = np.random.default_rng(20240611)
    hyp = 0.0
    for _ in range(1000):
        n = int(rng.integers(0, 13))
        b, c, z = rng.uniform(-20, 20), rng.uniform(0.5, 20), rng.uniform(0, 1)
        ref = _naive_hyp2f1(n, b, c, z)
        hyp = max(hyp, abs(hyp2f1_terminating(n, b, c, z) - ref) / abs(ref))
    lg = 0.0
    for x in np.linspace(0.1, 30, 600):
        lhs = math.exp(ln_gamma(x + 1))
        rhs = x * math.exp(ln_gamma(x))
        lg = max(lg, abs(lhs - rhs) / abs(rhs))
    _, orders = numerov_orders()
    ok = hyp <= HYP_TOL and lg <= LGAMMA_TOL and min(orders) >= NUMEROV_ORDER_MIN
    return CriterionResult(
        "special_functions", "2F1 vs naive summation, lgamma recurrence, Numerov order", ok, hyp, HYP_TOL,
        f"lgamma {lg:.1e} (tolerance {LGAMMA_TOL:.0e}); Numerov orders {', '.join(f'{o:.2f}' for o in orders)} (need >= {NUMEROV_ORDER_MIN})",
    )


def _dfdr_numeric(f, r, h=1e-3):
    return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h)


def dirac_coupled_residual(cache: _Cache) -> CriterionResult:
    """(d/dr - kappa/r) f = (m + E) g, with df/dr from finite differences."""
    r = np.linspace(0.1, 30, 300)
    worst, where = 0.0, ""
    for spec, qn in _dirac_grid():
        level = cache.level(spec, qn)
        f = dirac_upper(spec, NATURAL, level)
        g = dirac_lower(spec, NATURAL, level, f)
        kappa = qn.angular.kappa
        res = NATURAL.hbar_c * (_dfdr_numeric(f, r) - kappa * f(r) / r) - (spec.m0 + level.E) * g(r)
        m = float(np.max(np.abs(res)))
        if m > worst:
            worst, where = m, f"{spec} {qn}"
    return CriterionResult(
        "dirac_coupled", "upper/lower components satisfy the first-order coupled equation", worst <= DIRAC_RESIDUAL_TOL, worst, DIRAC_RESIDUAL_TOL, where
    )


CRITERIA: Dict[str, Callable[[_Cache], CriterionResult]] = {
    "oracle_kg": oracle_kg,
    "oracle_dirac": oracle_dirac,
    "coulomb_limit": coulomb_limit,
    "closed_forms": closed_forms,
    "normalization": normalization,
    "node_theorem": node_theorem,
    "degeneracy": degeneracy,
    "special_functions": special_functions,
    "dirac_coupled": dirac_coupled_residual,
}


def run_all(config: SolverConfig = SolverConfig(), only: Optional[List[str]] = None) -> List[CriterionResult]:
    cache = _Cache(config)
    out = []
    for key, fn in CRITERIA.items():
        if only and key not in only:
            continue
        t0 = time.perf_counter()
        try:
            res = fn(cache)
        except Exception as exc:  # a crash is a failed criterion, reported by name
            res = CriterionResult(key, key, False, math.inf, 0.0, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
