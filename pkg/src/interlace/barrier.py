"""Barrier functions and soft spectral edges for real-rooted polynomials.

For a real-rooted ``f`` with roots ``l_1 >= ... >= l_n``:

* lower barrier   ``Phi_f(b)  = -f'(b)/f(b) = sum 1/(l_i - b)``  for b below all roots,
* upper barrier   ``Phi^f(b)  =  f'(b)/f(b) = sum 1/(b - l_i)``  for b above all roots.

Both are positive, monotone, and convex on their side.  The soft edges
``smin_phi`` / ``smax_phi`` are the unique points where the barrier
equals ``phi``; they bracket the extreme roots and tighten onto them as
``phi -> inf``.  The shift checks validate how the operator ``1 - d/dx``
moves these soft edges: the lower edge advances by at least
``1/(1+phi)`` and the upper edge by at most ``1/(1-phi)`` (the latter
needs ``phi < 1``).

``multivariate_barrier`` is the several-variables analogue for
``f = det(xI + sum z_i A_i)``: the logarithmic derivative in ``z_j``,
computed as ``trace(M^{-1} A_j)`` at a point where ``M`` is positive
definite.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .poly import Polynomial, apply_shift_operator, real_roots
from .matrices import SymMatrix

__all__ = [
    "DetPolyFamily",
    "lower_barrier",
    "upper_barrier",
    "smin",
    "smax",
    "lower_shift_check",
    "upper_shift_check",
    "laguerre_root_bounds",
    "multivariate_barrier",
]

PSD_TOL = 1e-9


class DetPolyFamily:
    """A list of PSD matrices of one dimension, defining det(xI + sum z_i A_i)."""

    def __init__(self, matrices):
        mats = [m if isinstance(m, SymMatrix) else SymMatrix(m) for m in matrices]
        if not mats:
            raise ValueError("family must contain at least one matrix")
        d = mats[0].n
        if any(m.n != d for m in mats):
            raise ValueError("matrices must share a dimension")
        for i, m in enumerate(mats):
            if not m.is_psd(PSD_TOL):
                raise ValueError(f"matrix {i} is not positive semidefinite")
        self.matrices = mats
        self.dimension = d

    @property
    def m(self) -> int:
        return len(self.matrices)


def _ratio(p: Polynomial, b: float) -> float:
    pf = p.to_float()
    val = pf(float(b))
    der = pf.derivative()(float(b))
    return der / val


def lower_barrier(p: Polynomial, b) -> float:
    """``-p'(b)/p(b)`` for ``b`` strictly below every root of ``p``.

    Equals ``sum_i 1/(l_i - b)`` over the roots, hence positive.
    """
    roots = real_roots(p)
    if len(roots) == 0:
        raise ValueError("constant polynomial has no barrier")
    if not float(b) < roots[-1]:
        raise ValueError(f"b={b} is not strictly below the smallest root {roots[-1]}")
    return -_ratio(p, b)


def upper_barrier(p: Polynomial, b) -> float:
    """``p'(b)/p(b)`` for ``b`` strictly above every root of ``p``."""
    roots = real_roots(p)
    if len(roots) == 0:
        raise ValueError("constant polynomial has no barrier")
    if not float(b) > roots[0]:
        raise ValueError(f"b={b} is not strictly above the largest root {roots[0]}")
    return _ratio(p, b)


def _bisect(fn, lo: float, hi: float, increasing: bool, edge: float) -> float:
    """Find fn == 0 on [lo, hi] by bisection; fn monotone of known direction."""
    tol = 1e-12 * (1.0 + abs(edge))
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        v = fn(mid)
        if (v < 0) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def smin(p: Polynomial, phi) -> float:
    """Soft lower edge: the unique ``b < lambda_min`` with lower barrier == phi.

    The lower barrier increases from 0 to +inf as b climbs toward the
    smallest root, so the solution exists, is unique, and bisection from
    the bracket ``[lambda_min - deg/phi - 1, lambda_min]`` converges
    unconditionally.
    """
    phi = float(phi)
    if phi <= 0:
        raise ValueError("phi must be positive")
    roots = real_roots(p)
    if len(roots) == 0:
        raise ValueError("constant polynomial has no soft edge")
    lmin = float(roots[-1])
    deg = len(roots)
    lo = lmin - deg / phi - 1.0
    pf = p.to_float()
    dpf = pf.derivative()
    # Phi at lo is at most deg/(deg/phi + 1) < phi, so the sign change is inside.
    return _bisect(lambda b: -dpf(b) / pf(b) - phi, lo, lmin,
                   increasing=True, edge=lmin)


def smax(p: Polynomial, phi) -> float:
    """Soft upper edge: the unique ``b > lambda_max`` with upper barrier == phi."""
    phi = float(phi)
    if phi <= 0:
        raise ValueError("phi must be positive")
    roots = real_roots(p)
    if len(roots) == 0:
        raise ValueError("constant polynomial has no soft edge")
    lmax = float(roots[0])
    deg = len(roots)
    hi = lmax + deg / phi + 1.0
    pf = p.to_float()
    dpf = pf.derivative()
    return _bisect(lambda b: dpf(b) / pf(b) - phi, lmax, hi,
                   increasing=False, edge=lmax)


def lower_shift_check(p: Polynomial, phi, slack: float = 1e-7) -> bool:
    """Whether ``smin_phi((1-D)p) >= smin_phi(p) + 1/(1+phi)`` holds (within slack).

    This is the quantitative content of the lower soft edge moving right
    under ``1 - d/dx``; it holds for every real-rooted ``p`` and phi > 0.
    """
    phi = float(phi)
    if phi <= 0:
        raise ValueError("phi must be positive")
    q = apply_shift_operator(p, 1)
    return smin(q, phi) >= smin(p, phi) + 1.0 / (1.0 + phi) - slack


def upper_shift_check(p: Polynomial, phi, slack: float = 1e-7) -> bool:
    """Whether ``smax_phi((1-D)p) <= smax_phi(p) + 1/(1-phi)`` holds (within slack).

    Requires ``0 < phi < 1``; at phi >= 1 the bound degenerates.
    """
    phi = float(phi)
    if not 0 < phi < 1:
        raise ValueError("phi must lie in (0, 1)")
    q = apply_shift_operator(p, 1)
    return smax(q, phi) <= smax(p, phi) + 1.0 / (1.0 - phi) + slack


def laguerre_root_bounds(n: int, k: int) -> tuple[float, float]:
    """Two-sided bound ``[n(1-sqrt(k/n))^2, n(1+sqrt(k/n))^2]`` for roots of (1-D)^n x^k."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    s = np.sqrt(k / n)
    return (float(n * (1.0 - s) ** 2), float(n * (1.0 + s) ** 2))


def multivariate_barrier(fam: DetPolyFamily, j: int, point) -> float:
    """Logarithmic derivative of det(xI + sum z_i A_i) in direction z_j.

    ``point`` is ``(x, z_1, ..., z_m)``.  Requires ``M = xI + sum z_i A_i``
    positive definite at the point (i.e. the point lies above the roots
    in the positive orthant sense); then the derivative is
    ``trace(M^{-1} A_j)``, by Jacobi's formula.
    """
    point = [float(t) for t in point]
    if len(point) != fam.m + 1:
        raise ValueError(f"point must have {fam.m + 1} coordinates (x first)")
    if not 0 <= j < fam.m:
        raise ValueError(f"j={j} out of range for a family of {fam.m} matrices")
    d = fam.dimension
    m_at = point[0] * np.eye(d)
    for z, a in zip(point[1:], fam.matrices):
        m_at = m_at + z * a.a.astype(float)
    try:
        cf = scipy.linalg.cho_factor(m_at)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise ValueError("matrix at query point is not positive definite") from e
    aj = fam.matrices[j].a.astype(float)
    return float(np.trace(scipy.linalg.cho_solve(cf, aj)))
