"""Graphs, matching polynomials, signings, 2-lifts, and spectral certificates.

Graphs are simple (no loops, no parallel edges), vertices are integers
``0..n-1``, and edges are stored as sorted pairs.  Optional positive
weights feed the Laplacian; adjacency is always 0/1.

The spectral story: a signing flips adjacency entries to -1 on chosen
edges.  Averaging the characteristic polynomial over all 2^{|E|}
signings gives exactly the matching polynomial (Godsil-Gutman), whose
largest root is at most ``2 sqrt(d-1)`` for maximum degree d
(Heilmann-Lieb).  A signing whose signed adjacency meets that bound
produces a 2-lift whose new eigenvalues are precisely the signed
spectrum, which is how bipartite Ramanujan graphs of every degree are
built by repeated lifting.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import scipy.linalg

from .poly import Polynomial, real_roots
from .matrices import SymMatrix

__all__ = [
    "Graph",
    "Signing",
    "adjacency",
    "laplacian",
    "signed_adjacency",
    "matching_poly",
    "godsil_gutman_check",
    "heilmann_lieb_check",
    "two_lift",
    "is_ramanujan_bipartite",
    "spectral_approx_factors",
]

MATCHING_CAP = 24
GG_EDGE_CAP = 20


class Graph:
    """Simple undirected graph on vertices 0..n-1 with optional edge weights."""

    __slots__ = ("n", "edges", "weights")

    def __init__(self, n: int, edges, weights=None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) out of range for n={n}")
            norm.append((min(a, b), max(a, b)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edges are not allowed")
        if weights is not None:
            weights = tuple(weights)
            if len(weights) != len(norm):
                raise ValueError("one weight per edge required")
            if any(float(w) <= 0 for w in weights):
                raise ValueError("edge weights must be positive")
            order = sorted(range(len(norm)), key=lambda i: norm[i])
            self.edges = tuple(norm[i] for i in order)
            self.weights = tuple(weights[i] for i in order)
        else:
            self.edges = tuple(sorted(norm))
            self.weights = None
        self.n = n

    # -- constructors -------------------------------------------------

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        spokes = [(i, 5 + i) for i in range(5)]
        return cls(10, outer + inner + spokes)

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse the `u v [w]` per-line format, 0-indexed; n = max vertex + 1."""
        edges, weights = [], []
        any_weight = False
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"line {ln}: expected 'u v [w]', got {raw!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as e:
                raise ValueError(f"line {ln}: bad vertex in {raw!r}") from e
            edges.append((u, v))
            if len(parts) == 3:
                any_weight = True
                weights.append(float(parts[2]))
            else:
                weights.append(1.0)
        if not edges:
            raise ValueError("empty edge list")
        n = max(max(e) for e in edges) + 1
        return cls(n, edges, weights if any_weight else None)

    def to_edge_list(self) -> str:
        lines = []
        for i, (a, b) in enumerate(self.edges):
            if self.weights is None:
                lines.append(f"{a} {b}")
            else:
                lines.append(f"{a} {b} {float(self.weights[i]):.17g}")
        return "\n".join(lines) + "\n"

    # -- structure queries --------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree_sequence(self) -> list[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degree_sequence(), default=0)

    def regularity(self):
        """The common degree d if regular, else None."""
        degs = set(self.degree_sequence())
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_connected(self) -> bool:
        """Union-find over the edges; vacuously true for n <= 1."""
        if self.n <= 1:
            return True
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = self.n
        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return comps == 1

    def bipartition(self):
        """A 2-coloring (set of 'left' vertices) if bipartite, else None."""
        color = [-1] * self.n
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for start in range(self.n):
            if color[start] != -1:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if color[w] == -1:
                        color[w] = 1 - color[v]
                        stack.append(w)
                    elif color[w] == color[v]:
                        return None
        return {v for v in range(self.n) if color[v] == 0}

    def __repr__(self):
        w = "" if self.weights is None else ", weighted"
        return f"Graph(n={self.n}, m={self.m}{w})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.edges, self.weights) == (other.n, other.edges, other.weights)


class Signing:
    """An assignment of +1/-1 to every edge of a graph."""

    __slots__ = ("signs",)

    def __init__(self, signs: dict):
        norm = {}
        for (a, b), s in signs.items():
            if s not in (-1, 1):
                raise ValueError(f"sign for edge ({a},{b}) must be +1 or -1")
            norm[(min(a, b), max(a, b))] = int(s)
        self.signs = norm

    @classmethod
    def all_ones(cls, g: Graph) -> "Signing":
        return cls({e: 1 for e in g.edges})

    def validate_for(self, g: Graph):
        if set(self.signs) != set(g.edges):
            raise ValueError("signing domain does not match the edge set")

    def __getitem__(self, edge):
        a, b = edge
        return self.signs[(min(a, b), max(a, b))]

    def __repr__(self):
        return f"Signing({self.signs!r})"


# ----------------------------------------------------------------------
# Matrices of a graph
# ----------------------------------------------------------------------


def adjacency(g: Graph) -> SymMatrix:
    a = np.zeros((g.n, g.n), dtype=int)
    for u, v in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    return SymMatrix(a)


def laplacian(g: Graph) -> SymMatrix:
    """Sum over edges of w * (e_a - e_b)(e_a - e_b)^T; exact for exact weights."""
    exact = g.weights is None or all(not isinstance(w, float) for w in g.weights)
    l = np.zeros((g.n, g.n), dtype=object if exact else float)
    for i, (u, v) in enumerate(g.edges):
        w = 1 if g.weights is None else g.weights[i]
        if not exact:
            w = float(w)
        l[u, u] += w
        l[v, v] += w
        l[u, v] -= w
        l[v, u] -= w
    return SymMatrix(l)


def signed_adjacency(g: Graph, s: Signing) -> SymMatrix:
    """Adjacency with entries flipped to -1 on negatively signed edges.

    For regular graphs the rank-one decomposition
    ``A_s = sum_e (e_a + s_e e_b)(e_a + s_e e_b)^T - d I`` is re-derived
    and compared entrywise as a consistency check.
    """
    s.validate_for(g)
    a = np.zeros((g.n, g.n), dtype=int)
    for u, v in g.edges:
        a[u, v] = s[(u, v)]
        a[v, u] = s[(u, v)]
    out = SymMatrix(a)
    d = g.regularity()
    if d is not None:
        alt = np.zeros((g.n, g.n), dtype=int)
        for u, v in g.edges:
            vec = np.zeros(g.n, dtype=int)
            vec[u] = 1
            vec[v] = s[(u, v)]
            alt += np.outer(vec, vec)
        alt -= d * np.eye(g.n, dtype=int)
        if not np.array_equal(alt, a):
            raise AssertionError("rank-one decomposition of the signing disagrees")
    return out


# ----------------------------------------------------------------------
# Matching polynomial, two ways
# ----------------------------------------------------------------------


def _matching_counts(g: Graph) -> list[int]:
    """m_i = number of i-edge matchings, by direct enumeration."""
    edges = g.edges
    m = len(edges)
    counts = [0] * (g.n // 2 + 1)
    counts[0] = 1

    def rec(start: int, used: int, size: int):
        for i in range(start, m):
            a, b = edges[i]
            if used >> a & 1 or used >> b & 1:
                continue
            counts[size + 1] += 1
            rec(i + 1, used | 1 << a | 1 << b, size + 1)

    rec(0, 0, 0)
    return counts


def _matching_recurrence(g: Graph) -> Polynomial:
    """mu_G = mu_{G-e} - mu_{G-{a,b}}, memoized on (remaining edges, vertex count)."""
    cache: dict = {}

    def mu(edges: tuple, nv: int) -> Polynomial:
        if not edges:
            return Polynomial.monomial(nv)
        key = (edges, nv)
        hit = cache.get(key)
        if hit is not None:
            return hit
        a, b = edges[0]
        without_edge = mu(edges[1:], nv)
        kept = tuple(e for e in edges[1:] if a not in e and b not in e)
        without_verts = mu(kept, nv - 2)
        out = without_edge - without_verts
        cache[key] = out
        return out

    return mu(g.edges, g.n)


def matching_poly(g: Graph, cap: int = MATCHING_CAP) -> Polynomial:
    """The matching polynomial ``sum_i (-1)^i m_i x^(n-2i)``, exact.

    Computed independently by matching enumeration and by the
    edge-deletion recurrence; the two integer polynomials must agree
    exactly or a RuntimeError flags the internal inconsistency.
    """
    if g.n > cap:
        raise ValueError(f"matching polynomial capped at {cap} vertices, got {g.n}")
    counts = _matching_counts(g)
    coeffs = [0] * (g.n + 1)
    for i, mi in enumerate(counts):
        if g.n - 2 * i >= 0:
            coeffs[g.n - 2 * i] = (-1) ** i * mi
    direct = Polynomial(coeffs)
    recur = _matching_recurrence(g)
    if direct != recur:
        raise RuntimeError("matching polynomial paths disagree; internal error")
    return direct


# ----------------------------------------------------------------------
# Godsil-Gutman and Heilmann-Lieb
# ----------------------------------------------------------------------


def _charpoly_sum_over_signings(g: Graph) -> list[int]:
    """Sum over all 2^m signings of char_poly(A_s) coefficients, exact ints."""
    from .matrices import charpoly_batch_exact

    n, m = g.n, g.m
    basis = np.zeros((m, n, n), dtype=np.int64)
    for i, (u, v) in enumerate(g.edges):
        basis[i, u, v] = 1
        basis[i, v, u] = 1
    total = [0] * (n + 1)
    # Magnitude check for the int64 fast path: coefficients of +-1
    # matrices at n <= 12 stay far below 2^63 (see growth bound below).
    use_int64 = n <= 12
    chunk = 4096
    for start in range(0, 1 << m, chunk):
        stop = min(start + chunk, 1 << m)
        codes = np.arange(start, stop, dtype=np.int64)
        signs = 1 - 2 * ((codes[:, None] >> np.arange(m)[None, :]) & 1)
        mats = np.einsum("bm,mij->bij", signs, basis)
        if use_int64:
            coeffs = _charpoly_batch_int64(mats)
            for j in range(n + 1):
                total[j] += int(coeffs[:, j].sum(dtype=object))
        else:
            coeffs = charpoly_batch_exact(mats.astype(object))
            for j in range(n + 1):
                total[j] += int(coeffs[:, j].sum())
    return total


def _charpoly_batch_int64(mats: np.ndarray) -> np.ndarray:
    """Faddeev-LeVerrier in int64; valid for +-1 entries up to n = 12.

    Intermediate entries are bounded by n^k * max binomial-scale
    coefficients ~ 1e13 at n = 12, comfortably inside int64.
    """
    b, n, _ = mats.shape
    out = np.zeros((b, n + 1), dtype=np.int64)
    out[:, n] = 1
    eye = np.eye(n, dtype=np.int64)
    m = mats.copy()
    for k in range(1, n + 1):
        tr = np.trace(m, axis1=1, axis2=2)
        if np.any(tr % k != 0):
            raise RuntimeError("trace not divisible in exact Faddeev-LeVerrier")
        c = -(tr // k)
        out[:, n - k] = c
        if k < n:
            m = np.matmul(mats, m + c[:, None, None] * eye)
    return out


def godsil_gutman_check(g: Graph) -> bool:
    """Whether the exact signing-average of char polys equals the matching polynomial.

    Compares ``sum_s char_poly(A_s) == 2^m * mu_G`` in integer
    arithmetic, so no division and no tolerance is involved.
    """
    if g.m > GG_EDGE_CAP:
        raise ValueError(f"signing average capped at {GG_EDGE_CAP} edges, got {g.m}")
    total = _charpoly_sum_over_signings(g)
    mu = matching_poly(g)
    scale = 1 << g.m
    mu_c = list(mu.coeffs) + [0] * (g.n + 1 - len(mu.coeffs))
    return all(total[j] == scale * mu_c[j] for j in range(g.n + 1))


def heilmann_lieb_check(g: Graph, tol: float = 1e-9) -> bool:
    """Whether the largest matching-polynomial root is at most 2 sqrt(d-1)."""
    d = g.max_degree()
    if d < 2:
        raise ValueError("maximum degree must be at least 2")
    lam = float(real_roots(matching_poly(g))[0])
    return lam <= 2.0 * math.sqrt(d - 1.0) + tol


# ----------------------------------------------------------------------
# 2-lifts and Ramanujan certification
# ----------------------------------------------------------------------


def two_lift(g: Graph, s: Signing) -> Graph:
    """The 2-cover determined by a signing.

    Vertex (v, layer) becomes ``v + layer*n``.  A +1 edge keeps both
    copies parallel, a -1 edge crosses layers.  The lift's adjacency
    spectrum is verified to be the multiset union of spec(A) and
    spec(A_s) to 1e-8 before the graph is returned.
    """
    s.validate_for(g)
    n = g.n
    edges = []
    weights = [] if g.weights is not None else None
    for i, (a, b) in enumerate(g.edges):
        if s[(a, b)] == 1:
            pair = [(a, b), (a + n, b + n)]
        else:
            pair = [(a, b + n), (b, a + n)]
        edges.extend(pair)
        if weights is not None:
            weights.extend([g.weights[i]] * 2)
    lift = Graph(2 * n, edges, weights)
    got = np.sort(adjacency(lift).eigenvalues())
    want = np.sort(np.concatenate([
        adjacency(g).eigenvalues(),
        signed_adjacency(g, s).eigenvalues(),
    ]))
    if not np.allclose(got, want, atol=1e-8):
        raise AssertionError("lift spectrum does not match spec(A) union spec(A_s)")
    return lift


def is_ramanujan_bipartite(g: Graph, tol: float = 1e-9) -> bool:
    """Certify |lambda| <= 2 sqrt(d-1) for all nontrivial adjacency eigenvalues.

    Requires a connected, d-regular, bipartite graph; one eigenvalue at
    +d and one at -d are the trivial pair and are excluded.
    """
    if not g.is_connected():
        raise ValueError("graph is not connected")
    d = g.regularity()
    if d is None:
        raise ValueError("graph is not regular")
    if g.bipartition() is None:
        raise ValueError("graph is not bipartite")
    w = np.sort(adjacency(g).eigenvalues())
    if abs(w[-1] - d) > 1e-8 or abs(w[0] + d) > 1e-8:
        raise AssertionError("connected regular bipartite graph missing trivial eigenvalues")
    nontrivial = w[1:-1]
    if len(nontrivial) == 0:
        return True
    return bool(np.max(np.abs(nontrivial)) <= 2.0 * math.sqrt(d - 1.0) + tol)


def spectral_approx_factors(h: Graph, g: Graph) -> tuple[float, float]:
    """(kappa1, kappa2) with kappa1 L_H <= L_G <= kappa2 L_H on ones-complement.

    Both graphs must be connected on the same vertex set so the
    Laplacian null spaces coincide (span of the all-ones vector); the
    factors are the extreme generalized eigenvalues of (L_G, L_H)
    restricted to the complement.
    """
    if h.n != g.n:
        raise ValueError("graphs must share a vertex set")
    if not (h.is_connected() and g.is_connected()):
        raise ValueError("null-space mismatch: both graphs must be connected")
    n = g.n
    lg = laplacian(g).a.astype(float)
    lh = laplacian(h).a.astype(float)
    center = np.eye(n) - np.ones((n, n)) / n
    u, sv, _ = np.linalg.svd(center)
    q = u[:, : n - 1]
    w = scipy.linalg.eigh(q.T @ lg @ q, q.T @ lh @ q, eigvals_only=True)
    return (float(w[0]), float(w[-1]))
