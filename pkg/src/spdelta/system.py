"""Symbolic systems: graded families g_k inside S^k T* (x) N.

A symbolic system stores one subspace per symmetric degree up to a finite
degree cap, with g_0 inside N and every level contained in the prolongation
of the previous one.  Constructors provided here: generation from equation
functionals, free systems, derived systems g^(|k>), restriction to a
subspace W of T, the first-order equivalence reduction, and the descended
system built from directional derivatives.

Restriction stores the level-wise image and never re-prolongs: there are
systems whose restricted level k is strictly smaller than the prolongation
of restricted level k-1, and the image is the defined object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

from .linalg import Matrix, Subspace, image_of_rows, kernel_rows
from .tensor import (
    Slot,
    partial_vec,
    restriction_matrix,
    sym_dim,
    sym_indices,
    sym_rank,
)


class CapExceeded(Exception):
    """A level beyond the computed degree cap was requested."""


class Precondition(ValueError):
    """An operation's precondition on the system does not hold."""


def prolong(h: Subspace, n: int, nu: int, k: int) -> Subspace:
    """First prolongation of h inside S^k T* (x) N.

    h^(1) = {p in S^(k+1) : all coordinate derivatives of p lie in h},
    computed as the kernel of the stacked maps (project mod h) o d/dx_i.
    """
    lo = Slot(n, nu, k)
    hi = Slot(n, nu, k + 1)
    if h.ambient != lo.dim:
        raise ValueError("subspace does not live in the stated slot")
    if h.is_full():
        return Subspace.full(hi.dim)
    if h.is_zero() and k + 1 >= 1:
        return Subspace.zero(hi.dim)
    comp = h.complement_coords()
    residual = [h.reduce_unit(m) for m in range(lo.dim)]
    nrows = n * len(comp)
    rows = [[0] * hi.dim for _ in range(nrows)]
    for c, (mu, gamma, _) in enumerate(hi.basis_labels()):
        for i, g_i in enumerate(gamma):
            if g_i == 0:
                continue
            m_idx = lo.index(mu, gamma[:i] + (g_i - 1,) + gamma[i + 1:])
            r = residual[m_idx]
            base = i * len(comp)
            for cc, coord in enumerate(comp):
                val = r[coord]
                if val != 0:
                    rows[base + cc][c] += g_i * val
    return Subspace.span(kernel_rows(rows, hi.dim), hi.dim)


def prolong_iterated(h: Subspace, n: int, nu: int, k: int, l: int) -> Subspace:
    if l < 0:
        raise ValueError("prolongation count must be nonnegative")
    cur = h
    for step in range(l):
        cur = prolong(cur, n, nu, k + step)
    return cur


@dataclass(frozen=True)
class SymbolicSystem:
    """Graded family of subspaces g_k, k = 0..cap."""

    n: int
    nu: int
    cap: int
    levels: tuple  # tuple[Subspace], length cap + 1
    generators: tuple = ()  # (order, functional row tuple, source text) triples
    label: str = ""

    def __post_init__(self):
        if len(self.levels) != self.cap + 1:
            raise ValueError("levels must cover 0..cap")

    def slot(self, k: int) -> Slot:
        return Slot(self.n, self.nu, k)

    def level(self, k: int) -> Subspace:
        if k < 0:
            return Subspace.zero(Slot(self.n, self.nu, k).dim)
        if k > self.cap:
            raise CapExceeded(f"level {k} beyond cap {self.cap}")
        return self.levels[k]

    def dims(self) -> list[int]:
        return [s.dim for s in self.levels]

    def is_standard(self) -> bool:
        """g_0 = N, which holds for every equation-generated system."""
        return self.levels[0].is_full()

    def with_label(self, label: str) -> "SymbolicSystem":
        return SymbolicSystem(self.n, self.nu, self.cap, self.levels,
                              self.generators, label)


def free_system(n: int, nu: int, cap: int) -> SymbolicSystem:
    levels = tuple(Subspace.full(Slot(n, nu, k).dim) for k in range(cap + 1))
    return SymbolicSystem(n, nu, cap, levels, (), "free")


def from_functionals(n: int, nu: int, functionals, cap: int,
                     label: str = "") -> SymbolicSystem:
    """System generated by annihilating the given functionals.

    `functionals` is an iterable of (order, row) pairs, each row a linear
    functional on the order's slot.  Level k is the prolongation of level
    k-1 intersected with the joint kernel of the order-k functionals, which
    equals every order-<=k annihilator prolonged up to degree k.
    """
    by_order: dict[int, list] = {}
    for order, row in functionals:
        if order < 1:
            raise Precondition("equation order must be at least 1")
        by_order.setdefault(order, []).append(list(row))
    if by_order and max(by_order) > cap:
        raise CapExceeded(
            f"degree cap {cap} is below the maximal equation order {max(by_order)}"
        )
    levels = [Subspace.full(nu)]
    for k in range(1, cap + 1):
        lev = prolong(levels[k - 1], n, nu, k - 1)
        if k in by_order:
            slot = Slot(n, nu, k)
            for row in by_order[k]:
                if len(row) != slot.dim:
                    raise ValueError("functional length does not match its slot")
            ann = Subspace.span(kernel_rows(by_order[k], slot.dim), slot.dim)
            lev = lev.intersect(ann)
        levels.append(lev)
    gens = tuple((order, tuple(row), "") for order, rows in sorted(by_order.items())
                 for row in rows)
    return SymbolicSystem(n, nu, cap, tuple(levels), gens, label)


def from_levels(n: int, nu: int, levels, label: str = "") -> SymbolicSystem:
    return SymbolicSystem(n, nu, len(levels) - 1, tuple(levels), (), label)


def from_equations(eqs, cap: int, label: str = "") -> SymbolicSystem:
    """System generated by a parsed EquationSet.

    A term c * u_alpha contributes c * alpha! at the (u, alpha) coordinate of
    the order's functional: evaluating d^alpha on the monomial x^alpha gives
    alpha!, so this weighting realises the equation's principal symbol in the
    polynomial basis (for single-monomial equations the weight only rescales
    the functional and no subspace changes).
    """
    n, nu = eqs.n, eqs.nu
    functionals = []
    for eq in eqs.equations:
        slot = Slot(n, nu, eq.order)
        row = [0] * slot.dim
        for coeff, u, alpha in eq.terms:
            weight = 1
            for a in alpha:
                weight *= factorial(a)
            row[slot.index(u, alpha)] += coeff * weight
        functionals.append((eq.order, row))
    return from_functionals(n, nu, functionals, cap, label=label)


@dataclass
class OrderProfile:
    orders: tuple
    multiplicity: dict
    r_min: int | None
    r_max: int | None
    codim: int
    certified_within_cap: bool
    prolonged_dims: tuple  # dim of g_(k-1)^(1) for k = 1..cap

    @property
    def pure(self) -> bool:
        return len(self.orders) == 1


@lru_cache(maxsize=None)
def order_profile(g: SymbolicSystem) -> OrderProfile:
    """Orders ord(g) = {k : g_k != g_(k-1)^(1)} and their multiplicities."""
    orders = []
    mult = {}
    prolonged = []
    for k in range(1, g.cap + 1):
        pk = prolong(g.level(k - 1), g.n, g.nu, k - 1)
        prolonged.append(pk.dim)
        if not pk.contains(g.level(k)):
            raise Precondition("levels violate the symbolic-system axiom")
        m = pk.dim - g.level(k).dim
        if m > 0:
            orders.append(k)
            mult[k] = m
    certified = (not orders) or (orders[-1] < g.cap)
    return OrderProfile(
        orders=tuple(orders),
        multiplicity=mult,
        r_min=orders[0] if orders else None,
        r_max=orders[-1] if orders else None,
        codim=sum(mult.values()),
        certified_within_cap=certified,
        prolonged_dims=tuple(prolonged),
    )


def check_axioms(g: SymbolicSystem) -> bool:
    """g_0 inside N and g_k inside g_(k-1)^(1) for every computed level."""
    if g.level(0).ambient != g.nu:
        return False
    for k in range(1, g.cap + 1):
        pk = prolong(g.level(k - 1), g.n, g.nu, k - 1)
        if not pk.contains(g.level(k)):
            return False
    return True


def derived_system(g: SymbolicSystem, k: int) -> SymbolicSystem:
    """g^(|k>): free below k, the iterated prolongation of g_k from k on."""
    if k > g.cap:
        raise CapExceeded(f"derived order {k} beyond cap {g.cap}")
    levels = [Subspace.full(Slot(g.n, g.nu, i).dim) for i in range(min(k, g.cap + 1))]
    if k <= g.cap:
        cur = g.level(k)
        levels.append(cur)
        for i in range(k + 1, g.cap + 1):
            cur = prolong(cur, g.n, g.nu, i - 1)
            levels.append(cur)
    return SymbolicSystem(g.n, g.nu, g.cap, tuple(levels), (),
                          f"{g.label}|{k}>" if g.label else f"derived<{k}>")


def restrict_system(g: SymbolicSystem, w_vectors) -> SymbolicSystem:
    """Level-wise image of g under restriction to W = span(w_vectors)."""
    w = [list(v) for v in w_vectors]
    levels = []
    for k in range(g.cap + 1):
        m = restriction_matrix(w, g.slot(k))
        levels.append(image_of_rows([m.apply(list(b)) for b in g.level(k).basis],
                                    m.nrows))
    return SymbolicSystem(len(w), g.nu, g.cap, tuple(levels), (),
                          f"{g.label}~" if g.label else "restricted")


def transform_system(g: SymbolicSystem, basis_vectors) -> SymbolicSystem:
    """Rewrite g in the coordinates of a new basis of T (an invertible
    restriction); cohomology dimensions are invariant under this."""
    if len(basis_vectors) != g.n:
        raise ValueError("need a full basis of T")
    return restrict_system(g, basis_vectors).with_label(g.label)


# -- equivalence reduction ----------------------------------------------


def er_matrix(n: int, nu: int, k: int, l: int) -> Matrix:
    """The order-reduction coupling map S^l T* (x) N -> S^(l-k+1) T* (x) N^

    with N^ = S^(k-1) T* (x) N.  On a monomial x^gamma it distributes the
    k-1 lowered factors with binomial multiplicities and carries the overall
    printed factor l!/(l-k+1)!; the factor rescales levels uniformly, so the
    image subspaces (the contract) are unaffected by it.
    """
    if l < k:
        raise Precondition("reduction needs level l >= k")
    source = Slot(n, nu, l)
    inner = Slot(n, nu, k - 1)
    outer_dim = sym_dim(n, l - k + 1)
    rows = [[0] * source.dim for _ in range(inner.dim * outer_dim)]
    factor = factorial(l) // factorial(l - k + 1)
    out_rank = sym_rank(n, l - k + 1)
    for col, (mu, gamma, _) in enumerate(source.basis_labels()):
        for alpha in sym_indices(n, k - 1):
            if any(a > c for a, c in zip(alpha, gamma)):
                continue
            beta = tuple(c - a for c, a in zip(gamma, alpha))
            coeff = factor
            for c_i, a_i in zip(gamma, alpha):
                coeff *= comb(c_i, a_i)
            nhat = inner.index(mu, alpha)
            rows[nhat * outer_dim + out_rank[beta]][col] += coeff
    return Matrix(inner.dim * outer_dim, source.dim, rows)


def equivalence_reduce(g: SymbolicSystem, k: int) -> SymbolicSystem:
    """er_k(g): the equivalent system of order dropped by k-1 over the
    enlarged dependent space S^(k-1) T* (x) N.  Requires r_min(g) >= k."""
    prof = order_profile(g)
    if prof.r_min is not None and prof.r_min < k:
        raise Precondition(
            f"equivalence reduction at order {k} needs r_min >= {k}, got {prof.r_min}"
        )
    if k < 1 or k > g.cap:
        raise Precondition("reduction order must lie in 1..cap")
    nu_hat = g.nu * sym_dim(g.n, k - 1)
    levels = [Subspace.full(nu_hat)]
    for l in range(k, g.cap + 1):
        m = er_matrix(g.n, g.nu, k, l)
        levels.append(image_of_rows([m.apply(list(b)) for b in g.level(l).basis],
                                    m.nrows))
    return SymbolicSystem(g.n, nu_hat, g.cap - k + 1, tuple(levels), (),
                          f"er_{k}({g.label})" if g.label else f"er_{k}")


# -- descended systems ---------------------------------------------------


def descended_level(g: SymbolicSystem, k: int) -> Subspace:
    """Span of all directional derivatives of g_k, inside level k-1."""
    slot = g.slot(k)
    target = Slot(g.n, g.nu, k - 1)
    rows = []
    for b in g.level(k).basis:
        for i in range(g.n):
            rows.append(partial_vec(list(b), i, slot))
    return Subspace.span(rows, target.dim)


def descend(g: SymbolicSystem) -> SymbolicSystem:
    """The descended system (dg)_k = span of derivatives of g_(k+1).

    Level 0 of the result can be a proper subspace of N (Frobenius-type
    systems), so the result need not be standard.
    """
    if g.cap < 1:
        raise CapExceeded("descending needs at least one level above 0")
    levels = tuple(descended_level(g, k + 1) for k in range(g.cap))
    return SymbolicSystem(g.n, g.nu, g.cap - 1, levels, (),
                          f"d({g.label})" if g.label else "descended")


@dataclass
class DescendFixpoint:
    system: SymbolicSystem
    steps: int
    cap_exhausted: bool


def descend_fixpoint(g: SymbolicSystem) -> DescendFixpoint:
    """Iterate the descender until it stabilises level-wise within the cap."""
    current = g
    steps = 0
    while True:
        if current.cap < 1:
            return DescendFixpoint(current, steps, True)
        nxt = descend(current)
        if all(nxt.level(k) == current.level(k) for k in range(nxt.cap + 1)):
            return DescendFixpoint(nxt, steps + 1, False)
        current = nxt
        steps += 1
