"""Numerov shooting on the approximated radial equation.

Solves u'' = W(r; E) u with

    W = L * s(r) - Q^2 (E^2 - m^2c^4) + 2 Q^2 (E + mc^2) V(r),

where s(r) is the exponential surrogate for 1/r^2 (or 1/r^2 itself with
``exact_centrifugal``) and L is l(l+1), k(k-1) or k(k+1). Nothing from the
hypergeometric solution is used here.

The integration runs on a uniform grid in x = ln r with phi = u / sqrt(r),
which turns the equation into phi'' = (r^2 W + 1/4) phi and removes the
1/r^2 singularity at the origin. Outward and inward Numerov solutions are
compared through their Casoratian, which the three-term recurrence conserves
exactly, so the sign of the mismatch does not depend on the matching point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .core import PotentialSpec, QuantumNumbers, UnitSystem
from .spectrum import MultipleRoots, NoBoundState

_BIG = 1e150


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class ShootingProblem:
    spec: PotentialSpec
    units: UnitSystem
    quantum: QuantumNumbers
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    steps: int = 20000
    match_r: Optional[float] = None
    exact_centrifugal: bool = False

    def __post_init__(self):
        beta = self.spec.beta
        if self.r_min is None:
            object.__setattr__(self, "r_min", 1e-6 / beta)
        if self.r_max is None:
            object.__setattr__(self, "r_max", 30.0 / beta)
        if self.spec.q > 1:
            raise ValueError("shooting from r = 0 needs q <= 1 (the potential has a pole for q > 1)")
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.match_r is not None and not self.r_min < self.match_r < self.r_max:
            raise ValueError(f"match_r = {self.match_r} outside ({self.r_min}, {self.r_max})")
        if self.steps < 10_000:
            raise ValueError(f"at least 10^4 steps required, got {self.steps}")
        if self.r_max * beta < 25:
            raise ValueError(f"r_max * beta = {self.r_max * beta} < 25 does not reach the decay region")

    def with_steps(self, steps: int) -> "ShootingProblem":
        return ShootingProblem(
            self.spec, self.units, self.quantum, self.r_min, self.r_max, steps,
            self.match_r, self.exact_centrifugal,
        )

    def _args(self, E: float):
        s, u = self.spec, self.units
        x0 = math.log(self.r_min)
        h = (math.log(self.r_max) - x0) / self.steps
        m = -1 if self.match_r is None else int(round((math.log(self.match_r) - x0) / h))
        return (
            E, s.V0, s.V1, s.beta, s.q, float(self.quantum.angular_factor),
            s.rest_energy(u), u.Q**2, self.exact_centrifugal, x0, h, self.steps + 1, m,
        )


@dataclass(frozen=True)
class OracleLevel:
    E: float
    nodes: int
    steps: int
    delta: float  # |E(h) - E(h/2)| at the last refinement


@njit(cache=True)
def _g(E, V0, V1, beta, q, lam, mc2, Q2, exact, x0, h, npts):
    g = np.empty(npts)
    lq = math.log(q)
    for i in range(npts):
        r = math.exp(x0 + i * h)
        y = math.exp(-beta * r)
        d = -math.expm1(lq - beta * r)
        V = -V0 * y / d + V1 * y * y / (d * d)
        if exact:
            cent = lam / (r * r)
        else:
            cent = lam * beta * beta * y / (d * d)
        W = cent - Q2 * (E * E - mc2 * mc2) + 2.0 * Q2 * (E + mc2) * V
        g[i] = r * r * W + 0.25
    return g


@njit(cache=True)
def _match_index(g, m):
    npts = g.size
    if m < 0:
        # outer classical turning point
        m = npts - 3
        while m > 2 and g[m] > 0.0:
            m -= 1
        if m <= 2:
            m = npts // 2
    return min(max(m, 2), npts - 3)


@njit(cache=True)
def _seeds(g, x0, h):
    # Frobenius start: r^2 W ~ L0 + w1 r near the origin, u ~ r^s (1 + a1 r)
    r0 = math.exp(x0)
    r1 = math.exp(x0 + h)
    l0 = g[0] - 0.25
    l1 = g[1] - 0.25
    w1 = (l1 - l0) / (r1 - r0)
    le = l0 - w1 * r0
    s = 0.5 + math.sqrt(max(0.25 + le, 0.0))
    a1 = w1 / (2.0 * s)
    p0 = (1.0 + a1 * r0)
    p1 = math.exp((s - 0.5) * h) * (1.0 + a1 * r1)
    return p0, p1


@njit(cache=True)
def _sweep(E, V0, V1, beta, q, lam, mc2, Q2, exact, x0, h, npts, m):
    g = _g(E, V0, V1, beta, q, lam, mc2, Q2, exact, x0, h, npts)
    c = h * h / 12.0
    for i in range(npts):
        if c * g[i] >= 1.0:
            return math.nan, -1, m
    m = _match_index(g, m)
    p0, p1 = _seeds(g, x0, h)
    # Numerov variables y = (1 - c g) phi obey y[i+1] = t[i] y[i] - y[i-1]
    a = (1.0 - c * g[0]) * p0
    b = (1.0 - c * g[1]) * p1
    nodes = 0
    for i in range(1, m + 1):
        t = 2.0 * (1.0 + 5.0 * c * g[i]) / (1.0 - c * g[i])
        nxt = t * b - a
        if nxt * b < 0.0 and i < m:
            nodes += 1
        a, b = b, nxt
        if abs(b) > _BIG:
            s = abs(b)
            a /= s
            b /= s
    om, om1 = a, b  # y_out[m], y_out[m+1]
    a = 0.0
    b = 1e-30
    for i in range(npts - 2, m, -1):
        t = 2.0 * (1.0 + 5.0 * c * g[i]) / (1.0 - c * g[i])
        nxt = t * b - a
        if nxt * b < 0.0:
            nodes += 1
        a, b = b, nxt
        if abs(b) > _BIG:
            s = abs(b)
            a /= s
            b /= s
    im1, im = a, b  # y_in[m+1], y_in[m]
    no = math.hypot(om, om1)
    ni = math.hypot(im, im1)
    mismatch = (om1 / no) * (im / ni) - (im1 / ni) * (om / no)
    return mismatch, nodes, m


@njit(cache=True)
def _profile(E, V0, V1, beta, q, lam, mc2, Q2, exact, x0, h, npts, m):
    g = _g(E, V0, V1, beta, q, lam, mc2, Q2, exact, x0, h, npts)
    c = h * h / 12.0
    m = _match_index(g, m)
    p0, p1 = _seeds(g, x0, h)
    y = np.zeros(npts)
    logscale = np.zeros(npts)
    y[0] = (1.0 - c * g[0]) * p0
    y[1] = (1.0 - c * g[1]) * p1
    L = 0.0
    for i in range(1, m + 1):
        t = 2.0 * (1.0 + 5.0 * c * g[i]) / (1.0 - c * g[i])
        y[i + 1] = t * y[i] - y[i - 1]
        logscale[i + 1] = L
        if abs(y[i + 1]) > _BIG:
            s = abs(y[i + 1])
            y[i + 1] /= s
            y[i] /= s
            L += math.log(s)
            logscale[i + 1] = L
            logscale[i] = L
    out_m = y[m]
    Lm = logscale[m]
    yi = np.zeros(npts)
    ls_in = np.zeros(npts)
    yi[npts - 2] = 1e-30
    L = 0.0
    for i in range(npts - 2, m, -1):
        t = 2.0 * (1.0 + 5.0 * c * g[i]) / (1.0 - c * g[i])
        yi[i - 1] = t * yi[i] - yi[i + 1]
        ls_in[i - 1] = L
        if abs(yi[i - 1]) > _BIG:
            s = abs(yi[i - 1])
            yi[i - 1] /= s
            yi[i] /= s
            L += math.log(s)
            ls_in[i - 1] = L
            ls_in[i] = L
    # express everything relative to the outward value at m
    phi = np.zeros(npts)
    for i in range(m + 1):
        phi[i] = y[i] * math.exp(logscale[i] - Lm) / (1.0 - c * g[i])
    ratio = out_m / yi[m]
    Lin_m = ls_in[m]
    for i in range(m + 1, npts):
        phi[i] = ratio * yi[i] * math.exp(ls_in[i] - Lin_m) / (1.0 - c * g[i])
    return phi


def numerov_sweep(prob: ShootingProblem, E: float) -> float:
    """Normalized Casoratian of the outward and inward solutions at the
    matching point; bounded in [-1, 1] and zero at an eigenvalue."""
    mismatch, _, _ = _sweep(*prob._args(E))
    if not math.isfinite(mismatch):
        raise FloatingPointError(f"Numerov step too coarse or W not finite at E = {E}")
    return float(mismatch)


def sweep_with_nodes(prob: ShootingProblem, E: float) -> Tuple[float, int]:
    mismatch, nodes, _ = _sweep(*prob._args(E))
    if not math.isfinite(mismatch):
        raise FloatingPointError(f"Numerov step too coarse or W not finite at E = {E}")
    return float(mismatch), int(nodes)


def numerov_solution(prob: ShootingProblem, E: float) -> Tuple[np.ndarray, np.ndarray]:
    """Radial grid and unit-norm u(r) from shooting at energy E."""
    args = prob._args(E)
    phi = _profile(*args)
    x = args[9] + args[10] * np.arange(args[11])
    r = np.exp(x)
    u = phi * np.sqrt(r)
    # integral of u^2 dr = integral of u^2 r dx (trapezoid in x)
    w = u * u * r
    norm = math.sqrt(args[10] * (w.sum() - 0.5 * (w[0] + w[-1])))
    return r, u / norm


def _window(prob: ShootingProblem, margin: float) -> Tuple[float, float]:
    mc2 = prob.spec.rest_energy(prob.units)
    return -mc2 * (1 - margin), mc2 * (1 - margin)


def oracle_levels(
    prob: ShootingProblem, scan: int = 256, margin: float = 1e-6, max_split: int = 8
) -> List[Tuple[float, int]]:
    """All (E, nodes) eigenvalues found in the bound-state window at the
    problem's step count.

    The window is scanned on a uniform grid; an interval is split further
    whenever the node count jumps by more than the sign changes can account
    for, so closely spaced roots are not skipped.
    """
    lo, hi = _window(prob, margin)
    grid = np.linspace(lo, hi, scan)
    samples = [sweep_with_nodes(prob, E) for E in grid]

    brackets = []

    def visit(a, fa, b, fb, depth):
        jump = abs(fb[1] - fa[1])
        changed = fa[0] * fb[0] < 0
        if (jump > 1 or (jump == 1 and not changed)) and depth < max_split:
            mid = 0.5 * (a + b)
            fm = sweep_with_nodes(prob, mid)
            visit(a, fa, mid, fm, depth + 1)
            visit(mid, fm, b, fb, depth + 1)
        elif changed:
            brackets.append((a, b))

    for i in range(scan - 1):
        visit(grid[i], samples[i], grid[i + 1], samples[i + 1], 0)

    levels = []
    for a, b in brackets:
        E = brentq(lambda e: numerov_sweep(prob, e), a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps)
        levels.append((float(E), sweep_with_nodes(prob, E)[1]))
    return levels


def refine_level(prob: ShootingProblem, E0: float, tol: float = 1e-8, max_depth: int = 6) -> OracleLevel:
    """Step-halving from an eigenvalue found at ``prob.steps`` until successive
    estimates differ by less than ``tol``; returns the Richardson value."""
    E_prev = E0
    steps = prob.steps
    for _ in range(max_depth):
        steps *= 2
        fine = prob.with_steps(steps)
        E = track_eigenvalue(fine, E_prev)
        delta = abs(E - E_prev)
        if delta < tol:
            return OracleLevel(E + (E - E_prev) / 15.0, sweep_with_nodes(fine, E)[1], steps, delta)
        E_prev = E
    raise NonConvergence(f"no step convergence to {tol} after {max_depth} halvings (last change {delta})")


def track_eigenvalue(prob: ShootingProblem, E0: float) -> float:
    """Eigenvalue of ``prob`` nearest a nearby estimate E0 (e.g. from a
    coarser grid), by widening a bracket around E0 and refining it."""
    mc2 = prob.spec.rest_energy(prob.units)
    f0 = numerov_sweep(prob, E0)
    if f0 == 0.0:
        return E0
    d = 1e-9 * mc2
    while d < 1e-2 * mc2:
        a, b = E0 - d, E0 + d
        fa, fb = numerov_sweep(prob, a), numerov_sweep(prob, b)
        if fa * f0 < 0:
            return brentq(lambda e: numerov_sweep(prob, e), a, E0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        if fb * f0 < 0:
            return brentq(lambda e: numerov_sweep(prob, e), E0, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        d *= 8
    raise NonConvergence(f"lost the eigenvalue near E = {E0} on refinement")


def oracle_eigenvalue(prob: ShootingProblem, n: int, levels=None, tol: float = 1e-8) -> OracleLevel:
    """The eigenvalue whose solution has exactly n interior nodes.

    ``levels`` may carry a precomputed ``oracle_levels(prob)`` result so
    several n share one scan.
    """
    if levels is None:
        levels = oracle_levels(prob)
    hits = [E for E, k in levels if k == n]
    if not hits:
        raise NoBoundState(prob.quantum, "no shooting eigenvalue with that node count")
    if len(hits) > 1:
        raise MultipleRoots(prob.quantum, hits)
    return refine_level(prob, hits[0], tol=tol)
