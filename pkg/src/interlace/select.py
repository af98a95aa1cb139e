"""Greedy selection by conditional expected characteristic polynomials.

Given independent finitely supported random vectors ``r_1..r_m``, the
expected characteristic polynomial of ``sum r_i r_i^T`` has the property
that its k-th largest root is always attained or beaten by some actual
outcome: at every level of the outcome tree the children's conditional
expected polynomials share a common interlacing, so the best child is at
least as good as their average.  Walking the tree greedily - fix one
vector at a time, always choosing the support element whose conditional
expected polynomial has the best lambda_k - therefore lands on a
realization no worse than the root pledge.  Each walk returns a
:class:`SelectionCertificate` recording the pledge, the per-level trace,
and the achieved value, with the invariant checked numerically.

Three instantiations:

* ``restricted_invertibility_select``: pick k of m isotropic vectors with
  lambda_k of the chosen Gram sum at least ``(1 - sqrt(k/n))^2 * n/m``.
  The i.i.d. uniform sampling model admits the closed form
  ``(1 - (1/m) d/dx)^(k-l) char_poly(fixed sum)`` for the conditional
  polynomials, which is what the level loop evaluates.
* ``weaver_partition``: split an isotropic system into two halves, each
  of spectral norm at most ``(1 + sqrt(2 alpha))^2 / 2``, by walking
  two-point block lifts in dimension 2d.
* ``signing_select``: choose edge signs of a d-regular graph so the
  signed adjacency matrix has largest eigenvalue at most the largest
  root of the matching polynomial (whence at most ``2 sqrt(d-1)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import Polynomial, apply_shift_operator, kth_largest_root, \
    have_common_interlacing
from .matrices import SymMatrix, char_poly
from .mixedchar import DiscreteRandomVector, BudgetExceededError, DEFAULT_BUDGET, \
    _expected_char_with_base, mixed_char
from .graphs import Graph, Signing, signed_adjacency

__all__ = [
    "VectorSystem",
    "AssignmentState",
    "SelectionCertificate",
    "conditional_expected_poly",
    "greedy_walk",
    "restricted_invertibility_select",
    "restricted_invertibility_bound",
    "weaver_partition",
    "weaver_bound",
    "signing_select",
    "signing_vectors",
]

CERT_TOL = 1e-7
ISO_TOL = 1e-8


class VectorSystem:
    """A finite list of vectors in R^n, stored as the rows of an (m, n) array."""

    __slots__ = ("vectors",)

    def __init__(self, vectors):
        arr = np.asarray(vectors)
        if arr.ndim != 2:
            arr = np.array([np.asarray(v) for v in vectors])
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError("need a nonempty list of equal-length vectors")
        if arr.dtype == object or np.issubdtype(arr.dtype, np.integer):
            arr = np.array(arr, dtype=object)
        else:
            arr = np.array(arr, dtype=float)
        self.vectors = arr
        self.vectors.setflags(write=False)

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def is_exact(self) -> bool:
        return self.vectors.dtype == object

    def gram_sum(self) -> SymMatrix:
        """sum_i v_i v_i^T."""
        v = self.vectors
        if self.is_exact:
            acc = np.zeros((self.dim, self.dim), dtype=object)
            for row in v:
                acc = acc + np.outer(row, row)
            return SymMatrix(acc)
        return SymMatrix(v.T @ v)

    def isotropy_defect(self) -> float:
        """Spectral-norm distance of the Gram sum from the identity."""
        g = self.gram_sum().a.astype(float)
        return float(np.max(np.abs(np.linalg.eigvalsh(g - np.eye(self.dim)))))

    def is_isotropic(self, tol: float = ISO_TOL) -> bool:
        return self.isotropy_defect() <= tol

    def max_norm_sq(self) -> float:
        v = self.vectors.astype(float)
        return float(np.max(np.sum(v * v, axis=1)))

    @classmethod
    def random_isotropic(cls, n: int, m: int, rng) -> "VectorSystem":
        """m >= n rows whose outer products sum exactly (numerically) to I_n."""
        if m < n:
            raise ValueError("need at least n vectors for isotropy")
        g = rng.standard_normal((m, n))
        # Whiten: rows of G (G^T G)^(-1/2) have Gram sum exactly I.
        sym = g.T @ g
        w, u = np.linalg.eigh(sym)
        inv_half = u @ np.diag(1.0 / np.sqrt(w)) @ u.T
        return cls(g @ inv_half)


@dataclass
class AssignmentState:
    """A node of the outcome tree: fixed choices plus remaining randomness."""

    fixed: list
    remaining: list
    k: int
    direction: str = "maximize"

    def __post_init__(self):
        if self.direction not in ("maximize", "minimize"):
            raise ValueError("direction must be 'maximize' or 'minimize'")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        dims = {len(np.asarray(v)) for v in self.fixed} \
            | {r.dim for r in self.remaining}
        if len(dims) > 1:
            raise ValueError("fixed vectors and random vectors must share a dimension")
        if not dims:
            raise ValueError("state carries no vectors at all")
        d = dims.pop()
        if self.k > d:
            raise ValueError(f"k={self.k} exceeds the ambient dimension {d}")

    @property
    def dim(self) -> int:
        if self.fixed:
            return len(np.asarray(self.fixed[0]))
        return self.remaining[0].dim

    @property
    def is_exact(self) -> bool:
        def vec_exact(v):
            a = np.asarray(v)
            return a.dtype == object or np.issubdtype(a.dtype, np.integer)
        return all(vec_exact(v) for v in self.fixed) \
            and all(r.is_exact for r in self.remaining)


def _base_matrix(fixed, dim: int, exact: bool) -> np.ndarray:
    acc = np.zeros((dim, dim), dtype=object if exact else float)
    for v in fixed:
        a = np.asarray(v)
        if exact and a.dtype != object:
            a = a.astype(object)
        elif not exact:
            a = a.astype(float)
        acc = acc + np.outer(a, a)
    return acc


def conditional_expected_poly(state: AssignmentState,
                              budget: int = DEFAULT_BUDGET,
                              cross_check: bool = False) -> Polynomial:
    """E over the remaining randomness of char_poly(sum fixed + sum remaining).

    Brute-force enumeration of all remaining outcome tuples, exact in
    exact mode.  With ``cross_check`` the result is recomputed through
    the differential route (mixed characteristic polynomial of the
    covariances together with the fixed rank-one matrices) and the two
    must agree; a disagreement raises RuntimeError.
    """
    exact = state.is_exact
    base = _base_matrix(state.fixed, state.dim, exact)
    out = _expected_char_with_base(base, state.remaining, budget, exact)
    if cross_check:
        mats = [SymMatrix.outer(v) for v in state.fixed] \
            + [r.covariance() for r in state.remaining]
        alt = mixed_char(mats)
        agree = out == alt if (out.is_exact and alt.is_exact) \
            else out.allclose(alt, 1e-8)
        if not agree:
            raise RuntimeError("enumeration and differential paths disagree")
    return out


@dataclass
class SelectionCertificate:
    """The audit trail of one greedy walk.

    ``pledged`` is lambda_k of the root expected polynomial, ``achieved``
    is lambda_k of the realized sum, ``levels`` the lambda_k of the
    chosen conditional polynomial after each fixing.  The walk guarantees
    achieved >= pledged (maximize) resp. <= (minimize) up to tolerance.
    """

    choices: list
    final_poly: Polynomial
    achieved: float
    pledged: float
    k: int
    direction: str
    levels: list = field(default_factory=list)

    def valid(self, tol: float = CERT_TOL) -> bool:
        if self.direction == "maximize":
            return self.achieved >= self.pledged - tol
        return self.achieved <= self.pledged + tol

    def to_json(self) -> dict:
        return {
            "choices": [int(c) for c in self.choices],
            "achieved": float(self.achieved),
            "pledged": float(self.pledged),
            "k": int(self.k),
            "direction": self.direction,
            "levels": [float(v) for v in self.levels],
            "final_poly": [float(c) for c in self.final_poly.coeffs],
            "valid": self.valid(),
        }


def _lambda_k_of_matrix(a: np.ndarray, k: int) -> float:
    w = np.linalg.eigvalsh(a.astype(float))
    return float(w[-k])


def greedy_walk(state: AssignmentState, budget: int = DEFAULT_BUDGET,
                check_interlacing: bool = False) -> SelectionCertificate:
    """Walk the outcome tree, fixing the best support element at each level.

    "Best" means the largest (or smallest, per direction) k-th largest
    root of the child's conditional expected polynomial; ties go to the
    lowest support index, so runs are deterministic.  With
    ``check_interlacing`` every visited sibling family is additionally
    verified to pass :func:`have_common_interlacing` - the structural
    fact that makes greedy sound.
    """
    exact = state.is_exact
    d = state.dim
    k = state.k
    maximize = state.direction == "maximize"
    base = _base_matrix(state.fixed, d, exact)
    pledge_poly = _expected_char_with_base(base, state.remaining, budget, exact)
    pledged = kth_largest_root(pledge_poly, k)
    choices: list[int] = []
    levels: list[float] = []
    remaining = list(state.remaining)
    for lvl, rv in enumerate(remaining):
        tail = remaining[lvl + 1:]
        cand_polys = []
        cand_vals = []
        for prob, vec in rv.support:
            v = np.asarray(vec)
            if exact and v.dtype != object:
                v = v.astype(object)
            elif not exact:
                v = v.astype(float)
            child = _expected_char_with_base(base + np.outer(v, v), tail,
                                             budget, exact)
            cand_polys.append(child)
            cand_vals.append(kth_largest_root(child, k))
        if check_interlacing and len(cand_polys) > 1:
            if not have_common_interlacing(cand_polys):
                raise AssertionError(
                    f"children at level {lvl} lack a common interlacing")
        best = 0
        for j in range(1, len(cand_vals)):
            if (cand_vals[j] > cand_vals[best]) if maximize \
                    else (cand_vals[j] < cand_vals[best]):
                best = j
        v = np.asarray(rv.support[best][1])
        if exact and v.dtype != object:
            v = v.astype(object)
        elif not exact:
            v = v.astype(float)
        base = base + np.outer(v, v)
        choices.append(best)
        levels.append(cand_vals[best])
    achieved = _lambda_k_of_matrix(base, k)
    cert = SelectionCertificate(choices=choices,
                                final_poly=char_poly(SymMatrix(base)),
                                achieved=achieved, pledged=pledged,
                                k=k, direction=state.direction, levels=levels)
    return cert


# ----------------------------------------------------------------------
# Restricted invertibility
# ----------------------------------------------------------------------


def restricted_invertibility_bound(n: int, m: int, k: int) -> float:
    """The pledge ``(1 - sqrt(k/n))^2 * n / m``."""
    return float((1.0 - math.sqrt(k / n)) ** 2 * n / m)


def restricted_invertibility_select(system: VectorSystem, k: int,
                                    tol: float = ISO_TOL):
    """Choose k of m isotropic vectors with a large k-th Gram eigenvalue.

    The sampling model is k i.i.d. draws uniform over the m columns; the
    conditional expected polynomial after fixing vectors summing to A is
    exactly ``(1 - (1/m) d/dx)^(k-l) char_poly(A)``, and that closed
    form is what the level loop evaluates (one shift operator per
    unfixed draw).  Repeated indices exist in the outcome tree but are
    provably never selected while the pledge is positive - this is
    asserted, not assumed.  Returns (chosen index list, certificate).
    """
    if not system.is_isotropic(tol):
        raise ValueError(
            f"system is not isotropic (defect {system.isotropy_defect():.3g})")
    n = system.dim
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    m = system.m
    c = Fraction(1, m)
    pledge_poly = Polynomial.monomial(n)
    for _ in range(k):
        pledge_poly = apply_shift_operator(pledge_poly, c)
    pledged = kth_largest_root(pledge_poly, k)
    exact = system.is_exact
    base = np.zeros((n, n), dtype=object if exact else float)
    chosen: list[int] = []
    levels: list[float] = []
    cf = c if exact else float(c)
    for lvl in range(k):
        best_j = -1
        best_val = None
        for j in range(m):
            v = system.vectors[j]
            chi = char_poly(SymMatrix(base + np.outer(v, v)))
            q = chi
            for _ in range(k - lvl - 1):
                q = apply_shift_operator(q, cf)
            val = kth_largest_root(q, k)
            if best_val is None or val > best_val:
                best_j, best_val = j, val
        v = system.vectors[best_j]
        base = base + np.outer(v, v)
        chosen.append(best_j)
        levels.append(best_val)
    if len(set(chosen)) != k:
        raise RuntimeError("a column was selected twice; the positive pledge "
                           "should make this impossible")
    achieved = _lambda_k_of_matrix(base, k)
    cert = SelectionCertificate(choices=chosen,
                                final_poly=char_poly(SymMatrix(base)),
                                achieved=achieved, pledged=pledged,
                                k=k, direction="maximize", levels=levels)
    return chosen, cert


# ----------------------------------------------------------------------
# Weaver partitions
# ----------------------------------------------------------------------


def weaver_partition(system: VectorSystem, alpha,
                     budget: int = DEFAULT_BUDGET, tol: float = ISO_TOL):
    """Partition an isotropic system into halves of small spectral norm.

    Each vector v is lifted to the two-point random vector taking values
    (v, 0) and (0, v) in R^{2d} with probability 1/2 each; a greedy walk
    minimizing lambda_1 of the lifted Gram sum assigns every vector to a
    side.  The realized maximum of the two block norms is at most
    ``(1 + sqrt(2 alpha))^2 / 2`` whenever ``alpha >= max ||v_i||^2``.
    Returns (side-one indices, side-two indices, certificate).
    """
    if not system.is_isotropic(tol):
        raise ValueError(
            f"system is not isotropic (defect {system.isotropy_defect():.3g})")
    alpha = float(alpha)
    mx = system.max_norm_sq()
    if alpha < mx - 1e-12:
        raise ValueError(f"alpha={alpha} is below the largest squared norm {mx}")
    d = system.dim
    exact = system.is_exact
    rvs = []
    for row in system.vectors:
        zero = np.zeros(d, dtype=object if exact else float)
        up = np.concatenate([np.asarray(row), zero])
        down = np.concatenate([zero, np.asarray(row)])
        rvs.append(DiscreteRandomVector.two_point(up, down))
    state = AssignmentState(fixed=[], remaining=rvs, k=1, direction="minimize")
    cert = greedy_walk(state, budget=budget)
    s1 = [i for i, choice in enumerate(cert.choices) if choice == 0]
    s2 = [i for i, choice in enumerate(cert.choices) if choice == 1]
    return s1, s2, cert


def weaver_bound(alpha) -> float:
    """The half-square bound (1 + sqrt(2 alpha))^2 / 2."""
    return float((1.0 + math.sqrt(2.0 * float(alpha))) ** 2 / 2.0)


# ----------------------------------------------------------------------
# Adjacency signings
# ----------------------------------------------------------------------


def signing_vectors(g: Graph, exact: bool = True) -> list[DiscreteRandomVector]:
    """Per edge (a,b): e_a + e_b or e_a - e_b with probability 1/2 each.

    Their outer-product sum is A_s + dI for d-regular graphs, and the
    covariances sum to d times the identity.
    """
    out = []
    for a, b in g.edges:
        plus = np.zeros(g.n, dtype=object if exact else float)
        minus = np.zeros(g.n, dtype=object if exact else float)
        one = 1 if exact else 1.0
        plus[a] = one
        plus[b] = one
        minus[a] = one
        minus[b] = -one
        out.append(DiscreteRandomVector.two_point(plus, minus))
    return out


def signing_select(g: Graph, budget: int = DEFAULT_BUDGET):
    """Pick edge signs minimizing the top eigenvalue of the signed adjacency.

    Works on the rank-one model: the signed adjacency plus dI is the
    Gram sum of the per-edge two-point vectors, so a greedy walk
    minimizing lambda_1 lands at most at the pledge, which is the top
    matching-polynomial root shifted by d.  Returns (signing, certificate);
    the certificate's values live in the shifted (Gram-sum) coordinates.
    """
    d = g.regularity()
    if d is None:
        raise ValueError("graph is not regular")
    if g.m == 0:
        raise ValueError("graph has no edges")
    rvs = signing_vectors(g, exact=False)
    state = AssignmentState(fixed=[], remaining=rvs, k=1, direction="minimize")
    cert = greedy_walk(state, budget=budget)
    signing = Signing({e: 1 if cert.choices[i] == 0 else -1
                       for i, e in enumerate(g.edges)})
    a_s = signed_adjacency(g, signing)
    lam = float(np.max(a_s.eigenvalues()))
    if abs((lam + d) - cert.achieved) > 1e-8:
        raise AssertionError("signed adjacency spectrum inconsistent with walk")
    return signing, cert
