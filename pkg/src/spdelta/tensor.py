"""Canonical monomial bases for the graded spaces S^k T* (x) N (x) Lambda^j T*
and matrices for the structure maps between them.

Conventions, fixed once and used bit-exactly everywhere:

* Polynomial (not divided-power) basis.  A symmetric-degree-k coordinate is a
  monomial x^alpha, and the downward differential carries the factor alpha_i:

      delta(x^alpha (x) e (x) dx_I)
          = sum_{i: alpha_i > 0} alpha_i * x^(alpha - e_i) (x) e (x) dx_i ^ dx_I,

  with dx_i ^ dx_I = 0 when i is in I and otherwise the sign (-1)^#{l in I: l < i}
  on the sorted merge.

* Monomial enumeration is colexicographic on the exponent vector; exterior
  index sets are lexicographic tuples; the N index is outermost.  The flat
  coordinate of (mu, alpha, I) is (mu*dimS + rank(alpha))*dimL + rank(I).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .linalg import Matrix, Subspace, rank_of_rows


def sym_dim(n: int, k: int) -> int:
    """dim S^k of an n-dimensional space; zero for k < 0."""
    if k < 0:
        return 0
    return comb(n + k - 1, k)


@lru_cache(maxsize=None)
def sym_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Degree-k exponent vectors over n variables in colex order."""
    if k < 0:
        return ()
    if n == 0:
        return ((),) if k == 0 else ()
    alphas = []
    for combo in itertools.combinations_with_replacement(range(n), k):
        a = [0] * n
        for i in combo:
            a[i] += 1
        alphas.append(tuple(a))
    alphas.sort(key=lambda a: a[::-1])
    return tuple(alphas)


@lru_cache(maxsize=None)
def sym_rank(n: int, k: int) -> dict:
    return {a: i for i, a in enumerate(sym_indices(n, k))}


@lru_cache(maxsize=None)
def wedge_indices(n: int, j: int) -> tuple[tuple[int, ...], ...]:
    """Sorted j-element subsets of {0..n-1}, lexicographic."""
    if j < 0 or j > n:
        return ()
    return tuple(itertools.combinations(range(n), j))


@lru_cache(maxsize=None)
def wedge_rank(n: int, j: int) -> dict:
    return {I: i for i, I in enumerate(wedge_indices(n, j))}


def wedge_insert(i: int, I: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """dx_i ^ dx_I as (sign, sorted merge), or None when i already occurs."""
    if i in I:
        return None
    below = sum(1 for l in I if l < i)
    return (-1) ** below, tuple(sorted(I + (i,)))


@dataclass(frozen=True)
class Slot:
    """The graded space S^k T* (x) N (x) Lambda^j T* with its flat indexing."""

    n: int
    nu: int
    k: int
    j: int = 0

    @property
    def dim(self) -> int:
        if self.k < 0 or self.j < 0 or self.j > self.n:
            return 0
        return self.nu * sym_dim(self.n, self.k) * comb(self.n, self.j)

    @property
    def sdim(self) -> int:
        return sym_dim(self.n, self.k)

    @property
    def ldim(self) -> int:
        return comb(self.n, self.j) if 0 <= self.j <= self.n else 0

    def index(self, mu: int, alpha: tuple[int, ...], I: tuple[int, ...] = ()) -> int:
        s = sym_rank(self.n, self.k)[alpha]
        l = wedge_rank(self.n, self.j)[I]
        return (mu * self.sdim + s) * self.ldim + l

    def unindex(self, flat: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        l = flat % self.ldim
        rest = flat // self.ldim
        s = rest % self.sdim
        mu = rest // self.sdim
        return mu, sym_indices(self.n, self.k)[s], wedge_indices(self.n, self.j)[l]

    def below(self, dj: int = 0) -> "Slot":
        """The slot one symmetric degree down, with j shifted by dj."""
        return Slot(self.n, self.nu, self.k - 1, self.j + dj)

    def basis_labels(self):
        for mu in range(self.nu):
            for alpha in sym_indices(self.n, self.k):
                for I in wedge_indices(self.n, self.j):
                    yield mu, alpha, I


def slot_dim(s: Slot) -> int:
    return s.dim


def delta_matrix(s: Slot) -> Matrix:
    """Spencer differential from slot (k, j) to slot (k-1, j+1)."""
    target = s.below(dj=1)
    m = [[0] * s.dim for _ in range(target.dim)]
    if s.dim == 0 or target.dim == 0:
        return Matrix(target.dim, s.dim, m)
    for col, (mu, alpha, I) in enumerate(s.basis_labels()):
        for i, a_i in enumerate(alpha):
            if a_i == 0:
                continue
            ins = wedge_insert(i, I)
            if ins is None:
                continue
            sign, J = ins
            beta = alpha[:i] + (a_i - 1,) + alpha[i + 1:]
            m[target.index(mu, beta, J)][col] += sign * a_i
    return Matrix(target.dim, s.dim, m)


def partial_vec(vec, direction: int, s: Slot) -> list:
    """Coordinate derivative d/dx_direction on the symmetric factor."""
    target = s.below()
    out = [0] * target.dim
    if target.dim == 0:
        return out
    for flat, val in enumerate(vec):
        if val == 0:
            continue
        mu, alpha, I = s.unindex(flat)
        a_i = alpha[direction]
        if a_i == 0:
            continue
        beta = alpha[:direction] + (a_i - 1,) + alpha[direction + 1:]
        out[target.index(mu, beta, I)] += a_i * val
    return out


def dderiv_vec(vec, v_coords, s: Slot) -> list:
    """Directional derivative along v = sum v_i d/dx_i."""
    target = s.below()
    out = [0] * target.dim
    for direction, c in enumerate(v_coords):
        if c == 0:
            continue
        p = partial_vec(vec, direction, s)
        for idx, val in enumerate(p):
            if val != 0:
                out[idx] = out[idx] + c * val
    return out


def directional_derivative(v_coords, s: Slot) -> Matrix:
    """Matrix of the directional derivative, slot (k, j) -> slot (k-1, j)."""
    target = s.below()
    cols = []
    for flat in range(s.dim):
        unit = [0] * s.dim
        unit[flat] = 1
        cols.append(dderiv_vec(unit, v_coords, s))
    rows = [[cols[c][r] for c in range(s.dim)] for r in range(target.dim)]
    return Matrix(target.dim, s.dim, rows)


def delta_image_vec(vec, s: Slot, dirs=None) -> list:
    """delta applied to one slot vector; `dirs` limits the wedged directions
    (that is the delta' differential along a coordinate block)."""
    target = s.below(dj=1)
    out = [0] * target.dim
    if target.dim == 0:
        return out
    allowed = range(s.n) if dirs is None else dirs
    allowed = set(allowed)
    for flat, val in enumerate(vec):
        if val == 0:
            continue
        mu, alpha, I = s.unindex(flat)
        for i, a_i in enumerate(alpha):
            if a_i == 0 or i not in allowed:
                continue
            ins = wedge_insert(i, I)
            if ins is None:
                continue
            sign, J = ins
            beta = alpha[:i] + (a_i - 1,) + alpha[i + 1:]
            out[target.index(mu, beta, J)] += sign * a_i * val
    return out


def sym_multiply(a, b, n: int, p: int, q: int) -> list:
    """Plain polynomial product S^p x S^q -> S^(p+q) in monomial coordinates.

    Scalar polynomials only (nu = 1, j = 0); x * x = x^2 with coefficient 1.
    """
    ap = sym_indices(n, p)
    bq = sym_indices(n, q)
    rank = sym_rank(n, p + q)
    out = [0] * sym_dim(n, p + q)
    for ia, ca in enumerate(a):
        if ca == 0:
            continue
        alpha = ap[ia]
        for ib, cb in enumerate(b):
            if cb == 0:
                continue
            beta = bq[ib]
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            out[rank[gamma]] += ca * cb
    return out


def poly_times_slot_vec(poly, p: int, vec, s: Slot) -> list:
    """Multiply a scalar S^p polynomial into the symmetric factor of a slot
    vector, giving a vector in slot (k+p, j) with the same N and wedge parts."""
    target = Slot(s.n, s.nu, s.k + p, s.j)
    rank = sym_rank(s.n, s.k + p)
    pmono = sym_indices(s.n, p)
    out = [0] * target.dim
    for flat, val in enumerate(vec):
        if val == 0:
            continue
        mu, alpha, I = s.unindex(flat)
        for ip, cp in enumerate(poly):
            if cp == 0:
                continue
            gamma = tuple(x + y for x, y in zip(alpha, pmono[ip]))
            out[(mu * target.sdim + rank[gamma]) * target.ldim
                + wedge_rank(s.n, s.j)[I]] += cp * val
    return out


class DependentBasis(ValueError):
    """A supplied spanning set was expected to be independent but is not."""


def _det(rows) -> Fraction:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        # parity by counting inversions
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        prod = sign
        for i, pi in enumerate(perm):
            prod = prod * rows[i][pi]
            if prod == 0:
                break
        total = total + prod
    return total


def _substitute_monomial(alpha, w_vectors, m: int) -> dict:
    """Expand prod_i (sum_a w[a][i] t_a)^alpha_i into t-monomials."""
    result = {(0,) * m: 1}
    for i, a_i in enumerate(alpha):
        if a_i == 0:
            continue
        linear = {}
        for a in range(m):
            c = w_vectors[a][i]
            if c != 0:
                e = [0] * m
                e[a] = 1
                linear[tuple(e)] = c
        for _ in range(a_i):
            nxt = {}
            for mono, cm in result.items():
                for le, cl in linear.items():
                    key = tuple(x + y for x, y in zip(mono, le))
                    nxt[key] = nxt.get(key, 0) + cm * cl
            result = nxt
            if not result:
                return {}
    return result


def restriction_matrix(w_vectors, s: Slot) -> Matrix:
    """Pullback matrix S^k T* (x) N (x) Lambda^j T* -> same shape over W.

    `w_vectors` is an independent list of vectors in T (coordinates in the
    ambient basis); the map substitutes x_i = sum_a (w_a)_i t_a in the
    symmetric factor and pulls covectors back in the wedge factor.  With the
    standard full basis this is the identity.
    """
    m = len(w_vectors)
    if any(len(w) != s.n for w in w_vectors):
        raise ValueError("W basis vectors must have ambient length n")
    if rank_of_rows(w_vectors, s.n) != m:
        raise DependentBasis("W basis vectors are linearly dependent")
    target = Slot(m, s.nu, s.k, s.j)
    rows = [[0] * s.dim for _ in range(target.dim)]
    if target.dim == 0 or s.dim == 0:
        return Matrix(target.dim, s.dim, rows)
    tw_rank = wedge_rank(m, s.j)
    t_rank = sym_rank(m, s.k)
    for col, (mu, alpha, I) in enumerate(s.basis_labels()):
        spart = _substitute_monomial(alpha, w_vectors, m)
        if not spart:
            continue
        for J in wedge_indices(m, s.j):
            det = _det([[w_vectors[a][i] for a in J] for i in I]) if I else 1
            if det == 0:
                continue
            for beta, c in spart.items():
                rows[(mu * target.sdim + t_rank[beta]) * target.ldim + tw_rank[J]][col] += c * det
    return Matrix(target.dim, s.dim, rows)


def subspace_product(vstar: Subspace, g: Subspace, s: Slot) -> Subspace:
    """Span of v*p over basis pairs: V* . S^(k-1)T* (x) N inside slot (k, j).

    `vstar` lives in S^1 coordinates (= T*), `g` in the slot `s`; the result
    is a subspace of slot (k+1, j) with the same N and wedge parts.
    """
    if vstar.ambient != s.n:
        raise ValueError("V* must be a subspace of T*")
    target = Slot(s.n, s.nu, s.k + 1, s.j)
    vectors = []
    for v in vstar.basis:
        for p in g.basis:
            vectors.append(poly_times_slot_vec(list(v), 1, list(p), s))
    return Subspace.span(vectors, target.dim)


def power_subspace(vstar: Subspace, k: int) -> Subspace:
    """S^k V* as a subspace of S^k T* (scalar coefficients)."""
    n = vstar.ambient
    if k == 0:
        return Subspace.span([[1]], 1)
    current = vstar
    deg = 1
    while deg < k:
        vectors = []
        for v in vstar.basis:
            for p in current.basis:
                vectors.append(sym_multiply(list(v), list(p), n, 1, deg))
        current = Subspace.span(vectors, sym_dim(n, deg + 1))
        deg += 1
    return current


def tensor_with_full_n(sub: Subspace, n: int, nu: int, k: int, j: int = 0) -> Subspace:
    """Lift a scalar subspace of S^k (x) Lambda^j to S^k (x) N (x) Lambda^j."""
    source = Slot(n, 1, k, j)
    target = Slot(n, nu, k, j)
    block = source.dim
    vectors = []
    for row in sub.basis:
        for mu in range(nu):
            v = [0] * target.dim
            v[mu * block: (mu + 1) * block] = list(row)
            vectors.append(v)
    return Subspace.span(vectors, target.dim)


def comultiplication_matrix(n: int, l: int, k: int, nu: int = 1) -> Matrix:
    """Binomial comultiplication S^(l+k) (x) N -> S^l (x) (S^k (x) N).

    Column (mu, gamma) maps to sum over alpha <= gamma, |alpha| = k of
    prod_i C(gamma_i, alpha_i) at target coordinate (beta, (mu, alpha)) with
    beta = gamma - alpha.  Injective for l, k >= 0.
    """
    source = Slot(n, nu, l + k)
    inner = Slot(n, nu, k)
    sl = sym_dim(n, l)
    rows = [[0] * source.dim for _ in range(sl * inner.dim)]
    l_rank = sym_rank(n, l)
    for col, (mu, gamma, _) in enumerate(source.basis_labels()):
        for alpha in sym_indices(n, k):
            if any(a > g for a, g in zip(alpha, gamma)):
                continue
            beta = tuple(g - a for g, a in zip(gamma, alpha))
            c = 1
            for g_i, a_i in zip(gamma, alpha):
                c *= comb(g_i, a_i)
            rows[l_rank[beta] * inner.dim + inner.index(mu, alpha)][col] += c
    return Matrix(sl * inner.dim, source.dim, rows)
