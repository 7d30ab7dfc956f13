"""Terminating Gauss hypergeometric polynomials, log-gamma and composite
Gauss-Legendre quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np


# Error-free transformations for double-double arithmetic. The polynomial
# coefficients and the Horner recurrence are carried with a low-order word,
# so the only rounding left in an evaluation is the final one plus terms of
# order cond * eps**2, where cond = sum|a_k z^k| / |sum a_k z^k|.

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    e = e + (xh * yl + xl * yh)
    return _two_sum(p, e)


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    e = e + (xl + yl)
    return _two_sum(s, e)


def _dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    ph, pl = _dd_mul(q1, 0.0, yh, yl)
    rh, rl = _dd_add(xh, xl, -ph, -pl)
    q2 = (rh + rl) / yh
    return _two_sum(q1, q2)


def _dd_horner(hi: Sequence[float], lo: Sequence[float], z):
    z = np.asarray(z, dtype=float)
    ah = np.full_like(z, hi[-1])
    al = np.full_like(z, lo[-1])
    for h, l in zip(reversed(hi[:-1]), reversed(lo[:-1])):
        ah, al = _dd_mul(ah, al, z, 0.0)
        ah, al = _dd_add(ah, al, h, l)
    out = ah + al
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TerminatingHypergeometric:
    """The degree-n polynomial 2F1(-n, b; c; z).

    Coefficients follow the term ratio (-n + k - 1)(b + k - 1) / ((c + k - 1) k)
    with ``coeffs[0] == 1``; ``coeffs_lo`` holds the low-order words of the
    double-double values.
    """

    n: int
    b: float
    c: float
    coeffs: tuple
    coeffs_lo: tuple = ()

    @classmethod
    def build(cls, n: int, b: float, c: float) -> "TerminatingHypergeometric":
        if n < 0 or int(n) != n:
            raise ValueError(f"degree must be a non-negative integer, got {n}")
        n, b, c = int(n), float(b), float(c)
        hi, lo = [1.0], [0.0]
        for k in range(1, n + 1):
            dh, dl = _two_sum(c, float(k - 1))
            if dh + dl == 0 or abs(dh + dl) <= 1e-14 * max(1.0, abs(c)):
                raise ValueError(f"2F1(-{n}, {b}; {c}; z) undefined: (c)_k vanishes at k = {k}")
            bh, bl = _two_sum(b, float(k - 1))
            xh, xl = _dd_mul(hi[-1], lo[-1], float(-n + k - 1), 0.0)
            xh, xl = _dd_mul(xh, xl, bh, bl)
            dh, dl = _dd_mul(dh, dl, float(k), 0.0)
            xh, xl = _dd_div(xh, xl, dh, dl)
            hi.append(xh)
            lo.append(xl)
        return cls(n, b, c, tuple(hi), tuple(lo))

    def __call__(self, z):
        return _dd_horner(self.coeffs, self.coeffs_lo, z)

    def derivative(self, z):
        if self.n == 0:
            return np.zeros_like(z, dtype=float) if np.ndim(z) else 0.0
        pairs = [_dd_mul(h, l, float(k), 0.0) for k, (h, l) in enumerate(zip(self.coeffs, self.coeffs_lo))]
        return _dd_horner([p[0] for p in pairs[1:]], [p[1] for p in pairs[1:]], z)

    def roots_in(self, lo: float, hi: float) -> np.ndarray:
        """Real roots in the open interval (lo, hi), ascending."""
        if self.n == 0:
            return np.empty(0)
        roots = np.polynomial.polynomial.polyroots(np.array(self.coeffs))
        scale = np.maximum(1.0, np.abs(roots))
        real = roots[np.abs(roots.imag) <= 1e-9 * scale].real
        return np.sort(real[(real > lo) & (real < hi)])


def hyp2f1_terminating(n: int, b: float, c: float, z):
    return TerminatingHypergeometric.build(n, b, c)(z)


def hyp2f1_derivative(n: int, b: float, c: float, z):
    """d/dz 2F1(-n, b; c; z), i.e. (-n b / c) 2F1(-n+1, b+1; c+1; z)."""
    return TerminatingHypergeometric.build(n, b, c).derivative(z)


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"ln_gamma is defined here for x > 0 only, got {x}")
    return math.lgamma(x)


def ln_beta(a: float, b: float) -> float:
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


@lru_cache(maxsize=32)
def _gauss_legendre(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def graded_breakpoints(
    lo: float, hi: float, ratio: float = 0.2, depth: int = 40, ends: str = "both"
) -> np.ndarray:
    """Panel edges shrinking geometrically toward ``lo``, ``hi`` or both.

    Used for integrands with algebraic endpoint behaviour such as
    z**p (1 - z)**q; each panel sees the singularity at a fixed relative
    distance, so a fixed Gauss rule converges uniformly.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if ends not in ("lo", "hi", "both"):
        raise ValueError(f"ends must be 'lo', 'hi' or 'both', got {ends!r}")
    k = ratio ** np.arange(depth, -1, -1.0)
    if ends == "lo":
        pts = lo + (hi - lo) * k
        pts = np.concatenate(([lo], pts))
    elif ends == "hi":
        pts = hi - (hi - lo) * k[::-1]
        pts = np.concatenate((pts, [hi]))
    else:
        mid = 0.5 * (lo + hi)
        left = lo + (mid - lo) * k
        right = hi - (hi - mid) * k[::-1]
        pts = np.concatenate(([lo], left, right[1:], [hi]))
    pts = np.unique(pts)
    # panels narrower than a few ulps would put Gauss nodes on the end points
    keep = [pts[0]]
    for x in pts[1:-1]:
        if x - keep[-1] > 1e3 * np.finfo(float).eps * abs(x) and hi - x > 1e3 * np.finfo(float).eps * abs(hi):
            keep.append(x)
    keep.append(pts[-1])
    return np.array(keep)


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    nodes: int = 32,
    breakpoints: Optional[Sequence[float]] = None,
) -> float:
    """Composite Gauss-Legendre estimate of the integral of f over [lo, hi].

    ``f`` is called once with the array of all nodes when it is vectorised,
    otherwise point by point. ``breakpoints`` (including or excluding the
    ends) define the panels; the default is a single panel.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if nodes < 2:
        raise ValueError("at least two nodes per panel")
    edges = np.unique(np.concatenate(([lo, hi], breakpoints if breakpoints is not None else [])))
    edges = edges[(edges >= lo) & (edges <= hi)]
    x, w = _gauss_legendre(int(nodes))
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    pts = (a + b) * 0.5 + half * x
    wts = half * w
    flat = pts.ravel()
    try:
        vals = np.asarray(f(flat), dtype=float)
    except TypeError:
        vals = None
    if vals is None or vals.shape != flat.shape:
        vals = np.array([f(t) for t in flat], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = flat[~np.isfinite(vals)][0]
        raise ValueError(f"integrand is not finite at x = {bad!r}")
    return float(np.sum(vals * wts.ravel()))
