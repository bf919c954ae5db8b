"""Spencer delta-cohomology, the Cartan test, involutivity, acyclicity,
delta'-cohomology along a subspace, auxiliary spaces and spectral terms.

The group H^{i,j}(g) is the cohomology of the order-(i+j) complex

    0 -> g_(i+j) -> g_(i+j-1) (x) T* -> ... -> g_(i+j-n) (x) Lambda^n T* -> 0

at the term g_i (x) Lambda^j T*.  All dimensions are exact integers computed
by ranks of the restricted differentials; no quotient bases are formed.

For a subspace V* of T* we fix the frame: a basis of T consisting of a basis
of W = ann(V*) followed by a complement, so that after the change of
coordinates W* is the span of the first dim W coordinate covectors.  The
delta' differential wedges only those, and the filtration by powers of V*
lives on the wedge factor.  Reported dimensions do not depend on the choice
of complement (tested, not assumed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .linalg import Matrix, Subspace, kernel, kernel_rows, rank_of_rows
from .system import (
    CapExceeded,
    SymbolicSystem,
    derived_system,
    order_profile,
    prolong,
    restrict_system,
    transform_system,
)
from .tensor import (
    Slot,
    dderiv_vec,
    delta_image_vec,
    directional_derivative,
    partial_vec,
    poly_times_slot_vec,
    power_subspace,
    sym_dim,
    tensor_with_full_n,
    wedge_indices,
    wedge_rank,
    comultiplication_matrix,
)

# -- plain delta-cohomology ----------------------------------------------


@lru_cache(maxsize=None)
def _delta_block_rank(g: SymbolicSystem, i: int, j: int, wn: int) -> int:
    """Rank of delta restricted to g_i (x) Lambda^j, wedging only the first
    `wn` coordinate directions (wn = n gives the full Spencer delta)."""
    if i < 0 or j < 0 or j > wn:
        return 0
    level = g.level(i)
    if level.dim == 0:
        return 0
    slot = g.slot(i)
    target = Slot(g.n, g.nu, i - 1, j + 1)
    if target.dim == 0 or j + 1 > wn:
        return 0
    dirs = range(wn)
    rows = []
    for b in level.basis:
        partials = [partial_vec(list(b), d, slot) for d in dirs]
        for I in wedge_indices(wn, j):
            out = [0] * target.dim
            for d in dirs:
                if d in I:
                    continue
                sign = (-1) ** sum(1 for l in I if l < d)
                J = tuple(sorted(I + (d,)))
                jr = wedge_rank(g.n, j + 1)[J]
                p = partials[d]
                block = target.ldim
                for sidx, val in enumerate(p):
                    if val != 0:
                        out[sidx * block + jr] += sign * val
            rows.append(out)
    return rank_of_rows(rows, target.dim)


def cohomology_dim(g: SymbolicSystem, i: int, j: int, wn: int | None = None) -> int:
    """dim H^{i,j}; with `wn` set, the delta'-cohomology wedging only the
    first wn coordinates (the system must already be in adapted coordinates)."""
    wn = g.n if wn is None else wn
    if i < 0 or j < 0 or j > wn:
        return 0
    if j >= 1 and i + 1 > g.cap:
        raise CapExceeded(f"H^{{{i},{j}}} needs level {i + 1} beyond cap {g.cap}")
    term = g.level(i).dim * comb(wn, j)
    out_rank = _delta_block_rank(g, i, j, wn)
    in_rank = _delta_block_rank(g, i + 1, j - 1, wn) if j >= 1 else 0
    return term - out_rank - in_rank


def cohomology_table(g: SymbolicSystem, i_max: int | None = None,
                     wn: int | None = None) -> dict:
    """{(i, j): dim H^{i,j}} for 0 <= i <= i_max, 0 <= j <= n."""
    if i_max is None:
        i_max = g.cap - 1
    table = {}
    for i in range(i_max + 1):
        for j in range((wn if wn is not None else g.n) + 1):
            table[(i, j)] = cohomology_dim(g, i, j, wn)
    return table


def nonzero_cohomology(g: SymbolicSystem, i_max: int | None = None) -> dict:
    return {ij: d for ij, d in cohomology_table(g, i_max).items() if d != 0}


# -- Cartan's test and involutivity ---------------------------------------


@dataclass
class CartanResult:
    order: int
    verdict: str  # involutive-at-k | not-involutive-at-k | basis-degenerate
    seed: int
    attempts: int
    basis: tuple | None = None  # the basis that certified the verdict
    ranks: tuple = ()  # (rank, target dim) per direction for `basis`


def _random_basis(rng: random.Random, n: int) -> list[list[int]]:
    return [[rng.randint(-10, 10) for _ in range(n)] for _ in range(n)]


def _surjectivity_profile(low: Subspace, high: Subspace, slot_high: Slot,
                          basis_rows) -> list[tuple[int, int]]:
    """(rank of delta_{v_i}, dim of target) on the nested annihilator
    intersections, for i = 1..n.  Surjectivity everywhere is the quasi-regular
    (Cartan) condition for the pair (low, high = prolongation candidate)."""
    slot_low = slot_high.below()
    d_hi, d_lo = high, low
    out = []
    n = slot_high.n
    for i in range(n):
        v = basis_rows[i]
        rows = [dderiv_vec(list(b), v, slot_high) for b in d_hi.basis]
        out.append((rank_of_rows(rows, slot_low.dim), d_lo.dim))
        if i < n - 1:
            d_hi = d_hi.intersect(kernel(directional_derivative(v, slot_high)))
            d_lo = d_lo.intersect(kernel(directional_derivative(v, slot_low)))
    return out


def cartan_test(g: SymbolicSystem, k: int, basis=None, seed: int = 0,
                retries: int = 5) -> CartanResult:
    """Cartan's involutivity test for the subspace g_k.

    Tries the supplied basis first, then seeded random integer bases.  One
    passing basis certifies involutivity at k; if the supplied basis fails
    while a random one passes, the supplied basis was degenerate.
    """
    h = g.level(k)
    h1 = prolong(h, g.n, g.nu, k)
    slot_hi = Slot(g.n, g.nu, k + 1)
    rng = random.Random(seed)
    candidates = []
    if basis is not None:
        candidates.append([list(v) for v in basis])
    while len(candidates) < (1 if basis is not None else 0) + retries:
        candidates.append(_random_basis(rng, g.n))

    attempts = 0
    supplied_failed = False
    for idx, cand in enumerate(candidates):
        if rank_of_rows(cand, g.n) < g.n:
            if idx == 0 and basis is not None:
                return CartanResult(k, "basis-degenerate", seed, 1,
                                    tuple(tuple(r) for r in cand))
            continue
        attempts += 1
        profile = _surjectivity_profile(h, h1, slot_hi, cand)
        if all(r == d for r, d in profile):
            verdict = "involutive-at-k"
            if idx > 0 and basis is not None and supplied_failed:
                verdict = "basis-degenerate"
            return CartanResult(k, verdict, seed, attempts,
                                tuple(tuple(r) for r in cand), tuple(profile))
        if idx == 0 and basis is not None:
            supplied_failed = True
    return CartanResult(k, "not-involutive-at-k", seed, attempts)


@dataclass
class InvolutivityReport:
    involutive: bool
    per_order: dict  # order -> CartanResult
    cohomology_check: dict  # order -> bool (vanishing of H^{i,j}(g^{|k>}), i >= k)
    agrees: bool
    seed: int
    orders: tuple


def is_involutive(g: SymbolicSystem, seed: int = 0,
                  cross_check: bool = True) -> InvolutivityReport:
    """Involutivity of the system: Cartan's test at every order, with the
    cohomological criterion on the derived systems as a redundant check."""
    prof = order_profile(g)
    per_order = {}
    coh_check = {}
    for r in prof.orders:
        per_order[r] = cartan_test(g, r, seed=seed)
        if cross_check:
            dr = derived_system(g, r)
            coh_check[r] = all(
                cohomology_dim(dr, i, j) == 0
                for i in range(r, g.cap)
                for j in range(g.n + 1)
            )
    involutive = all(res.verdict == "involutive-at-k" for res in per_order.values())
    agrees = (not cross_check) or all(
        coh_check[r] == (per_order[r].verdict == "involutive-at-k")
        for r in prof.orders
    )
    return InvolutivityReport(involutive, per_order, coh_check, agrees, seed,
                              prof.orders)


# -- the I1 / I2 / I3 properties ------------------------------------------


@dataclass
class PropertyIResult:
    which: int
    verdict: str  # holds | fails | found | not-found-within-budget
    detail: dict = field(default_factory=dict)


def property_i1(g: SymbolicSystem) -> PropertyIResult:
    """H^{i,1} = 0 forces H^{i,j} = 0 for every j > 1, within the cap."""
    violations = []
    for i in range(g.cap):
        if cohomology_dim(g, i, 1) == 0:
            for j in range(2, g.n + 1):
                d = cohomology_dim(g, i, j)
                if d != 0:
                    violations.append((i, j, d))
    verdict = "holds" if not violations else "fails"
    return PropertyIResult(1, verdict, {"violations": violations})


def property_i2(g: SymbolicSystem, seed: int = 0, retries: int = 5) -> PropertyIResult:
    """Surjectivity of the nested delta_{v_i} maps g_k -> g_(k-1) for every
    non-order k, for a generic (seeded) basis."""
    prof = order_profile(g)
    rng = random.Random(seed)
    failing = []
    for k in range(1, g.cap + 1):
        if k in prof.orders:
            continue
        ok = False
        for _ in range(retries):
            cand = _random_basis(rng, g.n)
            if rank_of_rows(cand, g.n) < g.n:
                continue
            profile = _surjectivity_profile(g.level(k - 1), g.level(k),
                                            Slot(g.n, g.nu, k), cand)
            if all(r == d for r, d in profile):
                ok = True
                break
        if not ok:
            failing.append(k)
    verdict = "holds" if not failing else "fails"
    return PropertyIResult(2, verdict, {"failing_levels": failing, "seed": seed})


def _check_splitting(g: SymbolicSystem, blocks, orders) -> bool:
    """One I3 candidate: blocks[m] spans U_m (aligned with orders[m]); the
    subordinated basis is their concatenation in order."""
    basis = [v for block in blocks for v in block]
    if rank_of_rows(basis, g.n) < g.n:
        return False
    block_of = []
    for m, block in enumerate(blocks):
        block_of.extend([m] * len(block))
    order_pos = {r: m for m, r in enumerate(orders)}
    for k in range(1, g.cap + 1):
        profile = _surjectivity_profile(g.level(k - 1), g.level(k),
                                        Slot(g.n, g.nu, k), basis)
        skip_block = order_pos.get(k)
        for i, (rank, dim) in enumerate(profile):
            if skip_block is not None and block_of[i] == skip_block:
                continue
            if rank != dim:
                return False
    return True


def _coordinate_splittings(n: int, s: int):
    """All assignments of the n coordinate axes to s nonempty ordered blocks."""
    def rec(axis, blocks):
        if axis == n:
            if all(blocks):
                yield [list(b) for b in blocks]
            return
        for m in range(s):
            blocks[m].append(axis)
            yield from rec(axis + 1, blocks)
            blocks[m].pop()
    yield from rec(0, [[] for _ in range(s)])


def property_i3(g: SymbolicSystem, splitting=None, seed: int = 0,
                budget: int = 40) -> PropertyIResult:
    """Search for a splitting T = U_1 + ... + U_s subordinate to the orders
    making the non-excused maps surjective.  Semi-decidable: a found
    splitting is a certificate, exhaustion of the budget is not a 'no'."""
    prof = order_profile(g)
    orders = prof.orders
    if not orders:
        return PropertyIResult(3, "found", {"splitting": "trivial (no orders)"})
    s = len(orders)
    if splitting is not None:
        blocks = [[list(v) for v in block] for block in splitting]
        if len(blocks) != s:
            raise ValueError(f"splitting must have {s} blocks, one per order")
        ok = _check_splitting(g, blocks, orders)
        return PropertyIResult(3, "found" if ok else "not-found-within-budget",
                               {"splitting": blocks if ok else None,
                                "supplied": True})
    tried = 0
    for blocks_axes in _coordinate_splittings(g.n, s):
        blocks = [[[1 if a == ax else 0 for a in range(g.n)] for ax in axes]
                  for axes in blocks_axes]
        tried += 1
        if _check_splitting(g, blocks, orders):
            return PropertyIResult(3, "found", {"splitting": blocks_axes,
                                                "coordinate": True,
                                                "tried": tried})
        if tried >= budget:
            break
    rng = random.Random(seed)
    while tried < budget:
        tried += 1
        cut = sorted(rng.sample(range(1, g.n), s - 1)) if s > 1 else []
        sizes = [b - a for a, b in zip([0] + cut, cut + [g.n])]
        cand = _random_basis(rng, g.n)
        if rank_of_rows(cand, g.n) < g.n:
            continue
        blocks, pos = [], 0
        for size in sizes:
            blocks.append(cand[pos:pos + size])
            pos += size
        if _check_splitting(g, blocks, orders):
            return PropertyIResult(3, "found", {"splitting": blocks,
                                                "tried": tried, "seed": seed})
    return PropertyIResult(3, "not-found-within-budget",
                           {"tried": tried, "seed": seed})


def property_i(g: SymbolicSystem, which: int, splitting=None,
               seed: int = 0) -> PropertyIResult:
    if which == 1:
        return property_i1(g)
    if which == 2:
        return property_i2(g, seed=seed)
    if which == 3:
        return property_i3(g, splitting=splitting, seed=seed)
    raise ValueError("which must be 1, 2 or 3")


# -- acyclicity ------------------------------------------------------------


@dataclass
class AcyclicityResult:
    m: int
    co: bool
    verdict: bool
    violations: list


def acyclicity(g: SymbolicSystem, m: int, co: bool = False) -> AcyclicityResult:
    """m-acyclic: H^{i,j} = 0 for i outside ord(g) - 1 and 0 <= j <= m,
    excluding (0,0).  The co variant checks the window j >= n - m instead."""
    prof = order_profile(g)
    allowed = {r - 1 for r in prof.orders}
    violations = []
    for i in range(g.cap):
        if i in allowed:
            continue
        js = range(0, min(m, g.n) + 1) if not co else range(max(0, g.n - m), g.n + 1)
        for j in js:
            if (i, j) == (0, 0):
                continue
            d = cohomology_dim(g, i, j)
            if d != 0:
                violations.append((i, j, d))
    return AcyclicityResult(m, co, not violations, violations)


# -- the W-frame: adapted coordinates for a choice of V* -------------------


@dataclass(frozen=True)
class WFrame:
    """A coordinate frame adapted to V*: basis of T = (basis of W, complement),
    so the W-block is the first `w` coordinates and V* the last `t`."""

    g: SymbolicSystem
    vstar: Subspace
    adapted: SymbolicSystem
    restricted: SymbolicSystem
    t: int
    w: int
    basis: tuple


def make_frame(g: SymbolicSystem, vstar_vectors, complement=None) -> WFrame:
    """Build the adapted frame.  `complement` overrides the deterministic
    coordinate complement (used to test independence of the choice)."""
    if isinstance(vstar_vectors, Subspace):
        vstar = vstar_vectors
    else:
        vstar = Subspace.span([list(v) for v in vstar_vectors], g.n)
    if vstar.dim == 0:
        raise ValueError("V* must be nonzero")
    t = vstar.dim
    w_sub = kernel(Matrix.from_rows([list(r) for r in vstar.basis], g.n))
    w_rows = [list(r) for r in w_sub.basis]
    if complement is None:
        taken = set(w_sub.pivots)
        comp = [[1 if c == j else 0 for c in range(g.n)]
                for j in range(g.n) if j not in taken]
    else:
        comp = [list(v) for v in complement]
    basis = w_rows + comp
    if len(basis) != g.n or rank_of_rows(basis, g.n) < g.n:
        raise ValueError("complement does not complete W to a basis of T")
    adapted = transform_system(g, basis)
    restricted = restrict_system(g, w_rows)
    return WFrame(g, vstar, adapted, restricted, t, g.n - t,
                  tuple(tuple(r) for r in basis))


def dprime_cohomology(g: SymbolicSystem, vstar_vectors, i: int, j: int,
                      frame: WFrame | None = None) -> int:
    """Cohomology of (g (x) Lambda W*, delta') at (i, j)."""
    frame = frame or make_frame(g, vstar_vectors)
    return cohomology_dim(frame.adapted, i, j, wn=frame.w)


def dprime_table(frame: WFrame, i_max: int | None = None) -> dict:
    return cohomology_table(frame.adapted, i_max, wn=frame.w)


# -- auxiliary spaces ------------------------------------------------------


def _vstar_units(frame: WFrame) -> Subspace:
    n = frame.adapted.n
    return Subspace.span(
        [[1 if c == j else 0 for c in range(n)] for j in range(frame.w, n)], n)


def _wstar_units(frame: WFrame) -> Subspace:
    n = frame.adapted.n
    return Subspace.span(
        [[1 if c == j else 0 for c in range(n)] for j in range(frame.w)], n)


def _dprime_image_of_full(frame: WFrame, i: int, j: int) -> Subspace:
    """delta'(S^i T* (x) N (x) Lambda^(j-1) W*) inside slot (i-1, j)."""
    g = frame.adapted
    src = Slot(g.n, g.nu, i, j - 1)
    tgt = Slot(g.n, g.nu, i - 1, j)
    rows = []
    if src.dim and tgt.dim and j >= 1:
        for mu in range(g.nu):
            for sidx in range(src.sdim):
                for I in wedge_indices(frame.w, j - 1):
                    vec = [0] * src.dim
                    vec[(mu * src.sdim + sidx) * src.ldim
                        + wedge_rank(g.n, j - 1)[I]] = 1
                    rows.append(delta_image_vec(vec, src, dirs=range(frame.w)))
    return Subspace.span(rows, tgt.dim)


def upsilon_sec4(frame: WFrame, i: int, j: int) -> Subspace:
    """V* . delta'(S^i T* (x) N (x) Lambda^(j-1) W*) inside slot (i, j)."""
    g = frame.adapted
    tgt = Slot(g.n, g.nu, i, j)
    dimg = _dprime_image_of_full(frame, i, j)
    rows = []
    for a in range(frame.w, g.n):
        v = [1 if c == a else 0 for c in range(g.n)]
        for b in dimg.basis:
            rows.append(poly_times_slot_vec(v, 1, list(b),
                                            Slot(g.n, g.nu, i - 1, j)))
    return Subspace.span(rows, tgt.dim)


def xi_space(frame: WFrame, i: int, j: int) -> Subspace:
    """delta'(g_(i+1) (x) Lambda^(j-1) W*) intersected with Upsilon^{i,j}."""
    g = frame.adapted
    src = Slot(g.n, g.nu, i + 1, j - 1)
    tgt = Slot(g.n, g.nu, i, j)
    rows = []
    if j >= 1 and src.dim and tgt.dim:
        lev = g.level(i + 1)
        for b in lev.basis:
            for I in wedge_indices(frame.w, j - 1):
                vec = [0] * src.dim
                lrank = wedge_rank(g.n, j - 1)[I]
                for sidx, val in enumerate(b):
                    if val != 0:
                        mu, srem = divmod(sidx, src.sdim)
                        vec[(mu * src.sdim + srem) * src.ldim + lrank] = val
                rows.append(delta_image_vec(vec, src, dirs=range(frame.w)))
    img = Subspace.span(rows, tgt.dim)
    return img.intersect(upsilon_sec4(frame, i, j))


def upsilon_intro(frame: WFrame, i: int, j: int) -> Subspace:
    """Direct sum over r > 0 of S^r V* (x) delta(S^(i+1-r) W* (x)
    Lambda^(j-1) W*) (x) N, inside slot (i, j)."""
    g = frame.adapted
    tgt_scalar = Slot(g.n, 1, i, j)
    rows = []
    wstar = _wstar_units(frame)
    vstar = _vstar_units(frame)
    for r in range(1, i + 1):
        deg_w = i + 1 - r
        if deg_w < 1 or j < 1:
            continue
        sw = power_subspace(wstar, deg_w)
        sv = power_subspace(vstar, r)
        src = Slot(g.n, 1, deg_w, j - 1)
        for p in sw.basis:
            for I in wedge_indices(frame.w, j - 1):
                vec = [0] * src.dim
                lrank = wedge_rank(g.n, j - 1)[I]
                for sidx, val in enumerate(p):
                    if val != 0:
                        vec[sidx * src.ldim + lrank] = val
                img = delta_image_vec(vec, src, dirs=range(frame.w))
                for q in sv.basis:
                    rows.append(poly_times_slot_vec(list(q), r, img,
                                                    Slot(g.n, 1, deg_w - 1, j)))
    scalar = Subspace.span(rows, tgt_scalar.dim)
    return tensor_with_full_n(scalar, g.n, g.nu, i, j)


def pi_space(frame: WFrame, i: int, j: int) -> Subspace:
    """delta(S^(i+1) V* (x) N (x) Lambda^(j-1) V*) inside slot (i, j)."""
    g = frame.adapted
    src = Slot(g.n, g.nu, i + 1, j - 1)
    tgt = Slot(g.n, g.nu, i, j)
    if j < 1 or src.dim == 0 or tgt.dim == 0:
        return Subspace.zero(tgt.dim)
    sv = power_subspace(_vstar_units(frame), i + 1)
    vblock = range(frame.w, g.n)
    rows = []
    for p in sv.basis:
        for mu in range(g.nu):
            for I in wedge_indices(g.n, j - 1):
                if any(a not in vblock for a in I):
                    continue
                vec = [0] * src.dim
                lrank = wedge_rank(g.n, j - 1)[I]
                for sidx, val in enumerate(p):
                    if val != 0:
                        vec[(mu * src.sdim + sidx) * src.ldim + lrank] = val
                rows.append(delta_image_vec(vec, src))
    return Subspace.span(rows, tgt.dim)


def s_image_dim(frame: WFrame, i: int, j: int) -> int:
    """dim Im(S^(i+j) V* -> S^i V* (x) S^j V*) under comultiplication."""
    if i < 0 or j < 0:
        return 0
    g = frame.adapted
    sv = power_subspace(_vstar_units(frame), i + j)
    if sv.dim == 0:
        return 0
    m = comultiplication_matrix(g.n, i, j)
    return rank_of_rows([m.apply(list(b)) for b in sv.basis], m.nrows)


@dataclass
class AuxSpaces:
    i: int
    j: int
    upsilon_intro_dim: int
    upsilon_sec4_dim: int
    upsilons_agree: bool
    theta_dim: int
    pi_dim: int
    xi_dim: int
    s_dim: int


def theta_dim(frame: WFrame, i: int, j: int) -> int:
    return sum(upsilon_intro(frame, i, q).dim * comb(frame.t, j - q)
               for q in range(1, j + 1))


def aux_spaces(g: SymbolicSystem, vstar_vectors, i: int, j: int,
               frame: WFrame | None = None) -> AuxSpaces:
    frame = frame or make_frame(g, vstar_vectors)
    ui = upsilon_intro(frame, i, j)
    us = upsilon_sec4(frame, i, j)
    return AuxSpaces(
        i=i, j=j,
        upsilon_intro_dim=ui.dim,
        upsilon_sec4_dim=us.dim,
        upsilons_agree=ui == us,
        theta_dim=theta_dim(frame, i, j),
        pi_dim=pi_space(frame, i, j).dim,
        xi_dim=xi_space(frame, i, j).dim,
        s_dim=s_image_dim(frame, i, j),
    )


# -- spectral terms of the V*-filtration ----------------------------------


@lru_cache(maxsize=None)
def _term_dim(g: SymbolicSystem, l: int, j: int) -> int:
    if j < 0 or j > g.n or l - j < 0:
        return 0
    if l - j > g.cap:
        raise CapExceeded(f"spectral term needs level {l - j} beyond cap {g.cap}")
    return g.level(l - j).dim * comb(g.n, j)


@lru_cache(maxsize=None)
def _term_delta_rows(g: SymbolicSystem, l: int, j: int) -> tuple:
    """Matrix rows of delta from term j to term j+1 of the l-th complex, in
    (level-basis x wedge) coordinates on both sides."""
    src_dim = _term_dim(g, l, j)
    tgt_dim = _term_dim(g, l, j + 1)
    if src_dim == 0 or tgt_dim == 0:
        return tuple(tuple([0] * tgt_dim) for _ in range(src_dim))
    hi = g.level(l - j)
    lo = g.level(l - j - 1)
    slot_hi = g.slot(l - j)
    tgt_lrank = wedge_rank(g.n, j + 1)
    coords = []
    for b in hi.basis:
        per_dir = []
        for d in range(g.n):
            pv = partial_vec(list(b), d, slot_hi)
            per_dir.append([pv[p] for p in lo.pivots])
        coords.append(per_dir)
    rows = []
    lo_dim = lo.dim
    tgt_ldim = comb(g.n, j + 1)
    for bi in range(hi.dim):
        for I in wedge_indices(g.n, j):
            out = [0] * tgt_dim
            for d in range(g.n):
                if d in I:
                    continue
                sign = (-1) ** sum(1 for x in I if x < d)
                J = tgt_lrank[tuple(sorted(I + (d,)))]
                c = coords[bi][d]
                for r in range(lo_dim):
                    if c[r] != 0:
                        out[r * tgt_ldim + J] += sign * c[r]
            rows.append(tuple(out))
    return tuple(rows)


def _filtration_support(g: SymbolicSystem, frame_w: int, l: int, p: int,
                        j: int) -> list[int]:
    """Term coordinates of F^{p, j-p}: wedge sets with at least p indices in
    the V*-block.  p <= 0 is the whole term; out-of-range is empty."""
    if j < 0 or j > g.n or l - j < 0 or l - j > g.cap:
        return []
    lev_dim = g.level(l - j).dim
    p = max(p, 0)
    support = []
    ldim = comb(g.n, j)
    for wi, I in enumerate(wedge_indices(g.n, j)):
        if sum(1 for a in I if a >= frame_w) >= p:
            support.extend(b * ldim + wi for b in range(lev_dim))
    return sorted(support)


def _coord_subspace(dim: int, coords) -> Subspace:
    return Subspace.span([[1 if c == x else 0 for c in range(dim)]
                          for x in coords], dim)


def _z_subspace(g: SymbolicSystem, frame_w: int, l: int, r: int, p: int,
                q: int) -> Subspace:
    """Z_r^{p,q} = {omega in F^{p,q} : delta omega in F^{p+r, q-r+1}}."""
    j = p + q
    dim_j = _term_dim(g, l, j)
    support = _filtration_support(g, frame_w, l, p, j)
    if not support:
        return Subspace.zero(dim_j)
    delta_rows = _term_delta_rows(g, l, j)
    tgt_dim = _term_dim(g, l, j + 1)
    f_next = set(_filtration_support(g, frame_w, l, p + r, j + 1))
    outside = [c for c in range(tgt_dim) if c not in f_next]
    if not outside:
        return _coord_subspace(dim_j, support)
    # kernel of (drop-to-outside o delta) in the F^{p,q}-coordinates
    constraint = [[delta_rows[c][o] for c in support] for o in outside]
    vectors = []
    for kv in kernel_rows(constraint, len(support)):
        v = [0] * dim_j
        for idx, c in enumerate(support):
            if kv[idx] != 0:
                v[c] = kv[idx]
        vectors.append(v)
    return Subspace.span(vectors, dim_j)


def _b_subspace(g: SymbolicSystem, frame_w: int, l: int, r: int, p: int,
                q: int) -> Subspace:
    """B_r^{p,q} = delta(F^(p-r, q+r-1)) intersected with F^{p,q}."""
    j = p + q
    dim_j = _term_dim(g, l, j)
    src_support = _filtration_support(g, frame_w, l, p - r, j - 1)
    if not src_support:
        return Subspace.zero(dim_j)
    delta_rows = _term_delta_rows(g, l, j - 1)
    img = Subspace.span([list(delta_rows[c]) for c in src_support], dim_j)
    fpq = _coord_subspace(dim_j, _filtration_support(g, frame_w, l, p, j))
    return img.intersect(fpq)


def spectral_term_dim(g: SymbolicSystem, vstar_vectors, l: int, r: int,
                      p: int, q: int, frame: WFrame | None = None) -> int:
    """dim E_r^{p,q} of the l-th complex for the filtration by powers of V*,
    via explicit r-th order cocycle and coboundary subspaces."""
    frame = frame or make_frame(g, vstar_vectors)
    ga, w = frame.adapted, frame.w
    z = _z_subspace(ga, w, l, r, p, q)
    if z.dim == 0:
        return 0
    z_prev = _z_subspace(ga, w, l, r - 1, p + 1, q - 1)
    b_prev = _b_subspace(ga, w, l, r - 1, p, q)
    return z.dim - z_prev.add(b_prev).dim


def e1_grid(frame: WFrame, l: int) -> dict:
    """{(p, q): (dim E_1, dim E_2)} over the visible (p, q) window."""
    out = {}
    for p in range(frame.t + 1):
        for q in range(frame.w + 1):
            if l - p - q < 0 or l - p - q > frame.adapted.cap:
                continue
            e1 = spectral_term_dim(frame.g, frame.vstar, l, 1, p, q, frame=frame)
            e2 = spectral_term_dim(frame.g, frame.vstar, l, 2, p, q, frame=frame)
            out[(p, q)] = (e1, e2)
    return out
