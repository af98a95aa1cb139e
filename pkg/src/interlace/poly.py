"""Univariate polynomials with exact and floating-point root machinery.

Coefficients are stored lowest-degree first.  A polynomial whose
coefficients are all ``int`` or ``fractions.Fraction`` is *exact*: every
arithmetic operation on it is carried out in rational arithmetic and the
answer has no rounding error.  As soon as a ``float`` enters, the
polynomial silently becomes a float polynomial and all downstream work
happens in double precision.  The two regimes share one API; functions
dispatch on ``Polynomial.is_exact``.

Root-finding is split the same way.  ``is_real_rooted`` uses a
gcd/Sturm certificate in the exact regime (multiplicities handled by
repeatedly splitting off gcd(p, p')) and companion-matrix eigenvalues
with an imaginary-part tolerance in the float regime.  ``real_roots``
always returns floats: companion eigenvalues polished by Newton steps,
with a Sturm-guided bisection fallback for roots that fail a residual
check.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

import numpy as np
import numpy.polynomial.polynomial as npoly

__all__ = [
    "Polynomial",
    "ZeroPolynomialError",
    "NotRealRootedError",
    "poly_eval",
    "apply_shift_operator",
    "laguerre_transform",
    "diagram_identity_check",
    "sturm_sequence",
    "sturm_root_count",
    "is_real_rooted",
    "real_roots",
    "kth_largest_root",
    "interlaces",
    "have_common_interlacing",
]

# Relative tolerance used when comparing roots of float polynomials.
ROOT_TOL = 1e-7


class ZeroPolynomialError(ValueError):
    """The zero polynomial has no degree and no roots."""


class NotRealRootedError(ValueError):
    """Raised when a real-rooted polynomial was required but not supplied."""


def _is_exact_scalar(c) -> bool:
    return isinstance(c, (int, np.integer, Fraction)) and not isinstance(c, bool)


def _normalize_scalar(c):
    """Map numpy scalars onto plain Python ints/floats; pass Fractions through."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (bool, np.bool_)):
        raise TypeError("boolean coefficients are not supported")
    if isinstance(c, (int, np.integer)):
        return int(c)
    if isinstance(c, (float, np.floating)):
        return float(c)
    if isinstance(c, numbers.Rational):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type: {type(c).__name__}")


class Polynomial:
    """Immutable univariate polynomial, coefficients lowest-degree first.

    ``Polynomial([2, 0, 1])`` is ``x**2 + 2``.  Trailing (highest-degree)
    zeros are stripped on construction, so ``coeffs[-1]`` is always nonzero
    for a nonzero polynomial.  The zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        if isinstance(coeffs, Polynomial):
            cs = list(coeffs.coeffs)
        elif isinstance(coeffs, np.ndarray):
            cs = [_normalize_scalar(c) for c in coeffs.tolist()] if coeffs.dtype == object \
                else [_normalize_scalar(c) for c in coeffs]
        else:
            cs = [_normalize_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, lead=1) -> "Polynomial":
        """``lead * x**k``."""
        if k < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls((0,) * k + (lead,))

    @classmethod
    def from_roots(cls, roots, lead=1) -> "Polynomial":
        """Monic-up-to-``lead`` polynomial with the given roots."""
        p = cls((lead,))
        for r in roots:
            p = p * cls((-_normalize_scalar(r), 1))
        return p

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(_is_exact_scalar(c) for c in self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomialError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Polynomial(out)
        c = _normalize_scalar(other)
        return Polynomial([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        lead = self.leading()
        if lead == 1:
            return self
        if self.is_exact:
            inv = Fraction(1) / Fraction(lead)
        else:
            inv = 1.0 / lead
        return Polynomial([c * inv for c in self.coeffs])

    def taylor_shift(self, c) -> "Polynomial":
        """Return ``p(x + c)``."""
        c = _normalize_scalar(c)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] = cs[j] + c * cs[j + 1]
        return Polynomial(cs)

    def to_float(self) -> "Polynomial":
        return Polynomial([float(c) for c in self.coeffs])

    def allclose(self, other: "Polynomial", tol: float = 1e-9) -> bool:
        """Coefficientwise agreement, relative to the larger polynomial's size."""
        a = [float(c) for c in self.coeffs]
        b = [float(c) for c in other.coeffs]
        while len(a) < len(b):
            a.append(0.0)
        while len(b) < len(a):
            b.append(0.0)
        scale = max([1.0] + [abs(c) for c in a + b])
        return all(abs(x - y) <= tol * scale for x, y in zip(a, b))


def poly_eval(p: Polynomial, x):
    """Horner evaluation; exact when both the polynomial and ``x`` are exact."""
    return p(x)


# ----------------------------------------------------------------------
# Differential operators
# ----------------------------------------------------------------------


def apply_shift_operator(p: Polynomial, c) -> Polynomial:
    """Apply ``1 - c*d/dx`` to ``p``.

    For real-rooted ``p`` and ``c >= 0`` the result is again real-rooted
    (it is a nonnegative combination in the sense of polynomial
    convolution); for ``c < 0`` no such guarantee exists and the roots
    may leave the real axis.
    """
    if p.is_zero:
        return p
    c = _normalize_scalar(c)
    return p - c * p.derivative()


def laguerre_transform(n: int, k: int) -> Polynomial:
    """Return ``(1 - d/dx)^n`` applied to ``x**k``, with exact integer coefficients."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    p = Polynomial.monomial(k)
    for _ in range(n):
        p = p - p.derivative()
    return p


def diagram_identity_check(n: int, k: int) -> bool:
    """Verify ``(1 - D)^k x^n == x^(n-k) * ((1 - D)^n x^k)`` exactly.

    Both sides are computed independently in integer arithmetic.
    Requires ``k <= n`` so the left side keeps degree ``n``.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    lhs = Polynomial.monomial(n)
    for _ in range(k):
        lhs = lhs - lhs.derivative()
    rhs = Polynomial.monomial(n - k) * laguerre_transform(n, k)
    return lhs == rhs


# ----------------------------------------------------------------------
# Sturm machinery
# ----------------------------------------------------------------------


def _to_fraction_poly(p: Polynomial) -> Polynomial:
    return Polynomial([Fraction(c) for c in p.coeffs])


def _polydivmod(a: Polynomial, b: Polynomial):
    """Quotient and remainder of exact polynomials, in Fraction arithmetic."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(Fraction(c) for c in a.coeffs)
    bc = [Fraction(c) for c in b.coeffs]
    db = len(bc) - 1
    lead = bc[-1]
    q = [Fraction(0)] * max(len(r) - db, 0)
    while len(r) - 1 >= db and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        shift = len(r) - 1 - db
        factor = r[-1] / lead
        q[shift] = factor
        for i in range(db + 1):
            r[shift + i] -= factor * bc[i]
        r.pop()
    return Polynomial(q), Polynomial(r)


def _polygcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd of exact polynomials by the Euclidean algorithm."""
    a, b = _to_fraction_poly(a), _to_fraction_poly(b)
    while not b.is_zero:
        _, r = _polydivmod(a, b)
        a, b = b, r
    if a.is_zero:
        return a
    return a.monic()


def _normalize_for_sturm(p: Polynomial) -> Polynomial:
    """Scale so the largest |coefficient| is 1; sign-preserving."""
    if p.is_zero:
        return p
    m = max(abs(c) for c in p.coeffs)
    if p.is_exact:
        return Polynomial([Fraction(c) / m for c in p.coeffs])
    return Polynomial([c / m for c in p.coeffs])


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Canonical Sturm sequence ``p, p', -rem(...), ...``.

    Exact input gives an exact sequence.  Float input runs the same
    recurrence in doubles, dropping remainders whose scaled magnitude
    falls below 1e-10; float Sturm sequences are only trustworthy at
    modest degree and well-separated roots, so the exact path is
    authoritative whenever it is available.
    """
    if p.is_zero:
        raise ZeroPolynomialError("Sturm sequence of the zero polynomial")
    exact = p.is_exact
    seq = [_normalize_for_sturm(p)]
    if p.degree == 0:
        return seq
    seq.append(_normalize_for_sturm(p.derivative()))
    while seq[-1].degree > 0:
        if exact:
            _, r = _polydivmod(seq[-2], seq[-1])
        else:
            r = _float_polyrem(seq[-2], seq[-1])
        if r.is_zero:
            break
        seq.append(_normalize_for_sturm(-r))
    return seq


def _float_polyrem(a: Polynomial, b: Polynomial) -> Polynomial:
    r = np.array(a.coeffs, dtype=float)
    bc = np.array(b.coeffs, dtype=float)
    db = len(bc) - 1
    while len(r) - 1 >= db:
        if abs(r[-1]) <= 1e-14 * (np.abs(r).max() + 1.0):
            r = r[:-1]
            continue
        factor = r[-1] / bc[-1]
        shift = len(r) - 1 - db
        r[shift:shift + db + 1] -= factor * bc
        r = r[:-1]
        if len(r) == 0:
            break
    if len(r) and np.abs(r).max() <= 1e-10:
        return Polynomial.zero()
    return Polynomial(r)


def _sign(v) -> int:
    if isinstance(v, float):
        if abs(v) <= 1e-12:
            return 0
        return 1 if v > 0 else -1
    return (v > 0) - (v < 0)


def _sign_changes(seq: list[Polynomial], x) -> int:
    signs = [_sign(q(x)) for q in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_root_count(p: Polynomial, a, b) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (a, b].

    Works without square-free reduction: the Sturm sequence terminates at
    gcd(p, p') and the sign-change count sees each root once regardless
    of multiplicity.  Endpoints where p vanishes are nudged outward.
    """
    if p.is_zero:
        raise ZeroPolynomialError("root count of the zero polynomial")
    if a > b:
        raise ValueError("need a <= b")
    if p.degree == 0:
        return 0
    seq = sturm_sequence(p)
    exact = p.is_exact
    # Nudge an endpoint off a root of p so the sign count is unambiguous.
    def clear(x, direction):
        step = (Fraction(1, 10 ** 6) if exact else 1e-6) * (1 + abs(x))
        while p(x) == 0:
            x = x + direction * step
            step *= 2
        return x
    a = clear(a, -1)
    b = clear(b, 1)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def cauchy_root_bound(p: Polynomial):
    """A bound B with every complex root of p inside |z| <= B."""
    if p.is_zero:
        raise ZeroPolynomialError("root bound of the zero polynomial")
    if p.degree == 0:
        return 0 if p.is_exact else 0.0
    lead = p.leading()
    if p.is_exact:
        return 1 + max(abs(Fraction(c) / lead) for c in p.coeffs[:-1])
    return 1.0 + max(abs(c / lead) for c in p.coeffs[:-1])


# ----------------------------------------------------------------------
# Real-rootedness and root extraction
# ----------------------------------------------------------------------


def is_real_rooted(p: Polynomial, tol: float = 1e-6) -> bool:
    """Whether every complex root of ``p`` is real.

    Exact polynomials get an exact yes/no: peel off multiplicities with
    gcd(p, p') and count distinct real roots by Sturm on each square-free
    layer.  Float polynomials use companion-matrix eigenvalues and accept
    imaginary parts up to ``tol * (1 + |root|)``; nearby conjugate pairs
    below that threshold are treated as a real double root.
    """
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial is not classified")
    if p.degree == 0:
        return True
    if p.is_exact:
        return _is_real_rooted_exact(p)
    return _is_real_rooted_float(p, tol)


def _is_real_rooted_exact(p: Polynomial) -> bool:
    q = _to_fraction_poly(p)
    while q.degree > 0:
        g = _polygcd(q, q.derivative())
        trivial = g.is_zero or g.degree == 0
        distinct = q.degree if trivial else q.degree - g.degree
        bound = cauchy_root_bound(q)
        if sturm_root_count(q, -bound - 1, bound + 1) != distinct:
            return False
        if trivial:
            return True
        q = g
    return True


def _is_real_rooted_float(p: Polynomial, tol: float) -> bool:
    s = _strip_zero_roots(p)
    q = s.reduced
    if q.degree == 0:
        return True
    coeffs = np.array(q.coeffs, dtype=float)
    coeffs = coeffs / np.abs(coeffs).max()
    roots = npoly.polyroots(coeffs)
    if np.all(np.abs(roots.imag) <= tol * (1.0 + np.abs(roots))):
        return True
    # Companion eigenvalues of an m-fold root scatter by about eps**(1/m)
    # into the complex plane, so the imaginary-part test alone rejects
    # honest multiple roots.  Rescue clause: project the roots onto the
    # real axis and accept if the reconstructed polynomial matches the
    # input coefficientwise within sqrt(tol); that is a backward-error
    # criterion, never applied to accept a pair the first test passed on.
    recon = npoly.polyfromroots(np.sort(roots.real))
    monic = coeffs / coeffs[-1]
    scale = max(1.0, float(np.max(np.abs(recon))), float(np.max(np.abs(monic))))
    return bool(np.max(np.abs(recon - monic)) <= math.sqrt(tol) * scale)


class _Stripped:
    __slots__ = ("reduced", "zeros")

    def __init__(self, reduced, zeros):
        self.reduced = reduced
        self.zeros = zeros


def _strip_zero_roots(p: Polynomial) -> _Stripped:
    """Factor out x**s where the s lowest coefficients are exactly zero.

    Polynomials built by shift operators often carry an exact power of x;
    splitting it off keeps the companion matrix well conditioned and
    reports those roots as exact zeros.
    """
    s = 0
    while s < len(p.coeffs) and p.coeffs[s] == 0:
        s += 1
    return _Stripped(Polynomial(p.coeffs[s:]), s)


def real_roots(p: Polynomial, tol: float = 1e-9) -> np.ndarray:
    """All real roots of ``p`` with multiplicity, sorted descending, as floats.

    Raises :class:`NotRealRootedError` if a genuinely complex root is
    detected.  Pipeline: strip exact zero roots, companion-matrix
    eigenvalues, up to four Newton polish steps per root, then a residual
    check ``|p(r)| <= tol * scale(p, r)``; roots failing the check are
    re-bracketed by Sturm counts and bisected.
    """
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial has every number as a root")
    if p.degree == 0:
        return np.empty(0)
    stripped = _strip_zero_roots(p)
    q = stripped.reduced
    out = [0.0] * stripped.zeros
    if q.degree > 0:
        qf = q.to_float()
        coeffs = np.array(qf.coeffs, dtype=float)
        coeffs = coeffs / np.abs(coeffs).max()
        roots = npoly.polyroots(coeffs)
        im_tol = 1e-6
        bad = np.abs(roots.imag) > im_tol * (1.0 + np.abs(roots))
        if np.any(bad):
            certified = _is_real_rooted_exact(p) if p.is_exact \
                else _is_real_rooted_float(qf, im_tol)
            if not certified:
                worst = roots[bad][np.argmax(np.abs(roots[bad].imag))]
                raise NotRealRootedError(
                    f"complex root {worst:.6g} (imag part beyond tolerance)")
            # Certified real: the offending imaginary parts are companion
            # noise around a multiple root, keep the real projections.
        dq = qf.derivative()
        polished = []
        for r in np.sort(roots.real):
            r = _newton_polish(qf, dq, float(r))
            polished.append(r)
        polished = _residual_repair(qf, q, polished, tol)
        out.extend(polished)
    arr = np.array(sorted(out, reverse=True), dtype=float)
    return arr


def _newton_polish(qf: Polynomial, dq: Polynomial, r: float, steps: int = 4) -> float:
    for _ in range(steps):
        fr = qf(r)
        dr = dq(r)
        if dr == 0:
            break
        step = fr / dr
        nxt = r - step
        if not math.isfinite(nxt):
            break
        if abs(qf(nxt)) < abs(fr):
            r = nxt
        else:
            break
    return r


def _residual_scale(qf: Polynomial, r: float) -> float:
    g = max(1.0, abs(r))
    scale = 0.0
    power = 1.0
    for c in qf.coeffs:
        scale += abs(c) * power
        power *= g
    return scale


def _residual_repair(qf: Polynomial, q: Polynomial, roots: list[float], tol: float):
    """Bisection fallback for roots whose residual is out of tolerance.

    Uses Sturm counts on the exact polynomial when available to find a
    bracket around the suspect value, otherwise brackets by sign change
    in a shrinking window.  Multiple roots with zero-derivative plateaus
    are left as polished if no bracket exists.
    """
    fixed = []
    for r in roots:
        if abs(qf(r)) <= tol * _residual_scale(qf, r):
            fixed.append(r)
            continue
        width = 1e-3 * (1.0 + abs(r))
        lo, hi = r - width, r + width
        ok = False
        for _ in range(40):
            if qf(lo) * qf(hi) < 0:
                ok = True
                break
            width *= 0.5
            lo, hi = r - width, r + width
        if not ok:
            fixed.append(r)
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if qf(lo) * qf(mid) <= 0:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-15 * (1.0 + abs(mid)):
                break
        fixed.append(0.5 * (lo + hi))
    return fixed


def kth_largest_root(p: Polynomial, k: int) -> float:
    """The k-th largest real root, 1-indexed with multiplicity."""
    roots = real_roots(p)
    if not 1 <= k <= len(roots):
        raise ValueError(f"k={k} out of range for {len(roots)} roots")
    return float(roots[k - 1])


# ----------------------------------------------------------------------
# Interlacing
# ----------------------------------------------------------------------


def interlaces(g: Polynomial, f: Polynomial, tol: float = ROOT_TOL) -> bool:
    """Whether ``g`` interlaces ``f``.

    With roots of f being a_1 >= ... >= a_n and roots of g being
    b_1 >= ... >= b_m, requires m in {n-1, n} and the alternating chain
    b_i <= a_i and a_(i+1) <= b_i, each inequality slackened by
    ``tol * (1 + |value|)``.  When m = n - 1 the smallest-root condition
    is vacuous.  Both polynomials must be real-rooted.
    """
    ra = real_roots(f)
    rb = real_roots(g)
    n, m = len(ra), len(rb)
    if m not in (n - 1, n) or n == 0:
        return False
    def leq(x, y):
        return x <= y + tol * (1.0 + max(abs(x), abs(y)))
    for i in range(m):
        if not leq(rb[i], ra[i]):
            return False
    for i in range(min(m, n - 1)):
        if not leq(ra[i + 1], rb[i]):
            return False
    return True


def have_common_interlacing(polys, tol: float = ROOT_TOL, grid: int = 11) -> bool:
    """Test whether a family of same-degree polynomials has a common interlacer.

    Two certificates are combined, both necessary, their conjunction the
    working criterion:

    * interval test: for each j, max over the family of the (j+1)-st
      largest root must not exceed the min of the j-th largest (within
      tolerance); a common interlacer can then be threaded through.
    * convex-combination test: every pairwise combination
      ``t*p + (1-t)*q`` on a ``grid``-point t-lattice in [0, 1] must be
      real-rooted, the computable surrogate for the equivalence between
      common interlacing and real-rootedness of all convex combinations.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("empty family")
    degs = {p.degree for p in polys}
    if len(degs) != 1:
        return False
    n = degs.pop()
    if n == 0:
        return True
    leads = [float(p.leading()) for p in polys]
    if not (all(l > 0 for l in leads) or all(l < 0 for l in leads)):
        return False
    allroots = [real_roots(p) for p in polys]
    for j in range(n - 1):
        upper = min(r[j] for r in allroots)
        lower = max(r[j + 1] for r in allroots)
        if lower > upper + tol * (1.0 + max(abs(lower), abs(upper))):
            return False
    exact = all(p.is_exact for p in polys)
    if exact:
        ts = [Fraction(i, grid - 1) for i in range(grid)]
    else:
        ts = [i / (grid - 1) for i in range(grid)]
        polys = [p.to_float() for p in polys]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            for t in ts:
                comb = t * polys[i] + (1 - t) * polys[j]
                if comb.is_zero or comb.degree < n:
                    continue
                if not is_real_rooted(comb):
                    return False
    return True
