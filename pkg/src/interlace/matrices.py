"""Real symmetric matrices and characteristic polynomials.

``SymMatrix`` wraps a numpy array in one of two regimes: float64, or an
exact regime (integer dtype, or object dtype holding ints/Fractions).
Characteristic polynomials follow the convention ``det(xI - A)``, always
monic.  The exact scalar path uses the Berkowitz algorithm, which is
division-free and therefore safe for integer and rational entries; the
float path just takes eigenvalues.  Batched variants cover the
enumeration pipelines: thousands of small matrices at a time, either in
float64 (eigenvalues plus a vectorized Vieta recurrence) or exactly
(Faddeev-LeVerrier, whose only divisions are by ``k`` at step ``k`` and
are exact on integer traces).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .poly import Polynomial

__all__ = ["SymMatrix", "char_poly", "charpoly_batch", "charpoly_batch_exact"]


def _coerce_array(a):
    arr = np.asarray(a)
    if arr.dtype == object or np.issubdtype(arr.dtype, np.integer):
        return np.array(arr, dtype=object)
    return np.array(arr, dtype=float)


class SymMatrix:
    """A real symmetric matrix.

    Exact entries (ints, Fractions) must be symmetric entry-for-entry.
    Float entries may deviate by up to ``1e-12`` relative to the largest
    magnitude - products of symmetric factors routinely do - and are
    symmetrized to ``(A + A.T)/2`` on construction.
    """

    __slots__ = ("a",)

    def __init__(self, a):
        arr = _coerce_array(a)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if arr.dtype == object:
            if not (arr == arr.T).all():
                raise ValueError("matrix is not symmetric")
        elif arr.size:
            scale = max(1.0, float(np.max(np.abs(arr))))
            if float(np.max(np.abs(arr - arr.T))) > 1e-12 * scale:
                raise ValueError("matrix is not symmetric")
            arr = (arr + arr.T) / 2.0
        self.a = arr
        self.a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.a.dtype == object

    @classmethod
    def zeros(cls, n: int, exact: bool = False) -> "SymMatrix":
        if exact:
            return cls(np.zeros((n, n), dtype=int))
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int, exact: bool = False) -> "SymMatrix":
        if exact:
            return cls(np.eye(n, dtype=int))
        return cls(np.eye(n))

    @classmethod
    def outer(cls, v) -> "SymMatrix":
        """Rank-one matrix v v^T."""
        vec = np.asarray(v)
        if vec.dtype != object and not np.issubdtype(vec.dtype, np.floating):
            vec = np.array(vec, dtype=object)
        return cls(np.outer(vec, vec))

    def to_float(self) -> "SymMatrix":
        return SymMatrix(self.a.astype(float))

    def __add__(self, other):
        if isinstance(other, SymMatrix):
            return SymMatrix(self.a + other.a)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SymMatrix):
            return SymMatrix(self.a - other.a)
        return NotImplemented

    def __mul__(self, c):
        return SymMatrix(self.a * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.a.shape == other.a.shape and bool((self.a == other.a).all())

    def __repr__(self):
        return f"SymMatrix({self.a.tolist()!r})"

    def trace(self):
        return self.a.trace()

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues ascending, computed in float64."""
        return np.linalg.eigvalsh(self.a.astype(float))

    def norm2(self) -> float:
        """Spectral norm."""
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues())))

    def is_psd(self, tol: float = 1e-9) -> bool:
        """Positive semidefinite up to ``-tol * max(1, trace)`` on the bottom eigenvalue."""
        if self.n == 0:
            return True
        w = self.eigenvalues()
        scale = max(1.0, abs(float(self.a.astype(float).trace())))
        return bool(w[0] >= -tol * scale)


def _berkowitz(a: np.ndarray) -> list:
    """Division-free characteristic polynomial of ``a`` (highest degree first)."""
    n = a.shape[0]
    if n == 0:
        return [1]
    v = [1, -a[0, 0]]
    for i in range(1, n):
        asub = a[:i, :i]
        row = a[i, :i]
        col = a[:i, i]
        t = [1, -a[i, i]]
        w = col
        for _ in range(i):
            t.append(-(row @ w))
            w = asub @ w
        new = [0] * (i + 2)
        for ell in range(i + 2):
            s = 0
            for j, vj in enumerate(v):
                kk = ell - j
                if 0 <= kk < len(t):
                    s += t[kk] * vj
            new[ell] = s
        v = new
    return v


def char_poly(m: SymMatrix) -> Polynomial:
    """Monic characteristic polynomial ``det(xI - A)``.

    Exact matrices go through Berkowitz and the result is exact; float
    matrices go through ``eigvalsh`` and the coefficients carry the usual
    O(n eps ||A||) error.
    """
    if not isinstance(m, SymMatrix):
        m = SymMatrix(m)
    if m.n == 0:
        return Polynomial.one()
    if m.is_exact:
        coeffs = _berkowitz(m.a)
        return Polynomial(list(reversed(coeffs)))
    import numpy.polynomial.polynomial as npoly
    w = m.eigenvalues()
    return Polynomial(npoly.polyfromroots(w))


def charpoly_batch(mats: np.ndarray) -> np.ndarray:
    """Characteristic polynomials of a (B, n, n) float stack.

    Returns coefficients lowest-first, shape (B, n+1), via batched
    ``eigvalsh`` followed by a vectorized Vieta recurrence.
    """
    mats = np.asarray(mats, dtype=float)
    b, n, _ = mats.shape
    w = np.linalg.eigvalsh(mats)
    # Build monic coefficients highest-degree-first by multiplying out
    # (x - w_j) across the batch, then flip to lowest-first.
    co = np.zeros((b, n + 1))
    co[:, 0] = 1.0
    for j in range(n):
        co[:, 1:j + 2] = co[:, 1:j + 2] - w[:, j:j + 1] * co[:, 0:j + 1]
    return co[:, ::-1].copy()


def charpoly_batch_exact(mats: np.ndarray) -> np.ndarray:
    """Exact characteristic polynomials of a (B, n, n) integer/object stack.

    Faddeev-LeVerrier: c_k = -tr(M_k)/k with M_{k+1} = A (M_k + c_k I).
    Every division is exact (the trace at step k is divisible by k for
    integer matrices; Fractions divide exactly).  Returns an object
    array, coefficients lowest-first, shape (B, n+1).
    """
    mats = np.asarray(mats)
    if mats.dtype != object:
        mats = mats.astype(object)
    b, n, _ = mats.shape
    out = np.zeros((b, n + 1), dtype=object)
    out[:, n] = 1
    eye = np.eye(n, dtype=object)
    m = mats.copy()
    for k in range(1, n + 1):
        tr = np.trace(m, axis1=1, axis2=2)
        c = np.array([_exact_div(t, k) for t in tr], dtype=object)
        out[:, n - k] = c
        if k < n:
            m = np.matmul(mats, m + c[:, None, None] * eye)
    return out


def _exact_div(t, k: int):
    if isinstance(t, int) and t % k == 0:
        return -(t // k)
    return -Fraction(t, k) if isinstance(t, int) else -(t / k)
