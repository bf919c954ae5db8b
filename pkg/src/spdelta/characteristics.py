"""Characteristic covectors and the four (non-)characteristicity predicates.

Conventions from the definitions: the *characteristic* tests (weak and
strong) are taken at the maximal order of the system, the *non-characteristic*
tests at the minimal order; for a free system, where no order exists within
the cap, characteristic tests fall back to the cap (every covector is then
characteristic) and non-characteristic tests to level one.

Complex characteristics are handled over Q(i) together with gcd-degree
certificates: existence of a characteristic covector in a pencil is decided
exactly by the degree of the gcd of the maximal minors, because a binary form
of positive degree always has complex projective roots.  Every positive
answer carries a witness that is re-verified by exact membership.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .binforms import BinForm, form_gcd, gaussian_poly_qi_roots, projective_qi_roots
from .field import GaussianRational, qdiv
from .linalg import Matrix, Subspace, kernel_rows, rank_of_rows, solve
from .system import SymbolicSystem, order_profile
from .tensor import (
    Slot,
    power_subspace,
    subspace_product,
    sym_multiply,
    tensor_with_full_n,
)


class UnsupportedPencil(ValueError):
    """pencil_char_search only decides pencils of dimension one or two."""


def char_level(g: SymbolicSystem) -> int:
    prof = order_profile(g)
    return prof.r_max if prof.r_max is not None else g.cap


def nonchar_level(g: SymbolicSystem) -> int:
    prof = order_profile(g)
    return prof.r_min if prof.r_min is not None else min(1, g.cap)


def _as_vstar(vstar, n: int) -> Subspace:
    if isinstance(vstar, Subspace):
        return vstar
    return Subspace.span([list(v) for v in vstar], n)


def weak_product_space(g: SymbolicSystem, vstar: Subspace, k: int) -> Subspace:
    """V* . S^(k-1) T* (x) N inside slot (k, 0)."""
    lower = Slot(g.n, g.nu, k - 1)
    return subspace_product(vstar, Subspace.full(lower.dim), lower)


def strong_power_space(g: SymbolicSystem, vstar: Subspace, k: int) -> Subspace:
    """S^k V* (x) N inside slot (k, 0)."""
    return tensor_with_full_n(power_subspace(vstar, k), g.n, g.nu, k)


def weakly_characteristic_at(g, vstar, k) -> tuple[bool, tuple | None]:
    vstar = _as_vstar(vstar, g.n)
    meet = g.level(k).intersect(weak_product_space(g, vstar, k))
    return (not meet.is_zero()), (meet.basis[0] if meet.dim else None)


def strongly_characteristic_at(g, vstar, k) -> tuple[bool, tuple | None]:
    vstar = _as_vstar(vstar, g.n)
    meet = g.level(k).intersect(strong_power_space(g, vstar, k))
    return (not meet.is_zero()), (meet.basis[0] if meet.dim else None)


def strongly_nonchar_at(g, vstar, k) -> bool:
    return not weakly_characteristic_at(g, vstar, k)[0]


def weakly_nonchar_at(g, vstar, k) -> bool:
    return not strongly_characteristic_at(g, vstar, k)[0]


@dataclass
class CharReport:
    weakly_char: bool
    strongly_char: bool
    weakly_nonchar: bool
    strongly_nonchar: bool
    k_char: int
    k_nonchar: int
    witness_weak: tuple | None
    witness_strong: tuple | None
    restriction_iso: bool  # rank check of g_(r_min) -> restricted level


def char_report(g: SymbolicSystem, vstar) -> CharReport:
    """The four predicates of V* against g, with witnesses, plus the
    restriction-isomorphism characterisation of strong non-characteristicity
    as a redundant cross-check."""
    vstar = _as_vstar(vstar, g.n)
    kc, kn = char_level(g), nonchar_level(g)
    wc, wit_w = weakly_characteristic_at(g, vstar, kc)
    sc, wit_s = strongly_characteristic_at(g, vstar, kc)
    snc = strongly_nonchar_at(g, vstar, kn)
    wnc = weakly_nonchar_at(g, vstar, kn)
    # restriction to W = ann(V*) is injective on g_k iff V* strongly non-char
    from .tensor import restriction_matrix  # local: avoids import cycle at top
    w_rows = [list(r) for r in
              Subspace.span(kernel_rows([list(r) for r in vstar.basis], g.n),
                            g.n).basis]
    if w_rows:
        rmat = restriction_matrix(w_rows, g.slot(kn))
        level = g.level(kn)
        iso = rank_of_rows([rmat.apply(list(b)) for b in level.basis],
                           rmat.nrows) == level.dim
    else:
        iso = g.level(kn).is_zero()
    return CharReport(wc, sc, wnc, snc, kc, kn, wit_w, wit_s, iso)


def covector_power(v, k: int, n: int) -> list:
    """v^k in S^k coordinates; exact over Q or Q(i)."""
    out = [1]
    for deg in range(k):
        out = sym_multiply(list(v), out, n, 1, deg)
    return out


def is_char_covector(g: SymbolicSystem, v, k: int | None = None
                     ) -> tuple[bool, list | None]:
    """Does v^k (x) w lie in g_k for some w != 0?  Returns the witness w.

    Works for rational and Gaussian-rational covectors; the level defaults
    to the maximal order (cap for a free system)."""
    if all(x == 0 for x in v):
        raise ValueError("the zero covector is excluded")
    if k is None:
        k = char_level(g)
    level = g.level(k)
    vk = covector_power(v, k, g.n)
    slot = g.slot(k)
    block = slot.sdim
    cols = []
    for mu in range(g.nu):
        vec = [0] * slot.dim
        for sidx, val in enumerate(vk):
            vec[mu * block + sidx] = val
        cols.append(level.reduce(vec))
    rows = [[cols[mu][c] for mu in range(g.nu)] for c in range(slot.dim)]
    ker = kernel_rows(rows, g.nu)
    if not ker:
        return False, None
    w = ker[0]
    member = [0] * slot.dim
    for mu, wm in enumerate(w):
        if wm != 0:
            for sidx, val in enumerate(vk):
                if val != 0:
                    member[mu * block + sidx] = wm * val
    assert level.contains_vector(member)
    return True, w


def annihilator_functionals(g: SymbolicSystem, k: int) -> list[list]:
    """Functionals on slot (k, 0) cutting out g_k."""
    level = g.level(k)
    if level.dim == 0:
        return [list(r) for r in Matrix.identity(g.slot(k).dim).rows]
    return kernel_rows([list(b) for b in level.basis], g.slot(k).dim)


@dataclass
class PencilResult:
    exists: bool
    covector: list | None = None  # explicit characteristic covector, if found
    witness: list | None = None
    gcd_degree: int | None = None  # None when the minors vanish identically
    gcd_coeffs: tuple = ()
    every_covector: bool = False
    leftover_factors: tuple = ()  # minimal polynomials of non-Q(i) roots


def _pencil_matrix(g: SymbolicSystem, a, b, k: int) -> list[list[BinForm]]:
    """A(s,t): rows = annihilator functionals, columns = N-components; the
    entry is the functional evaluated on (s a + t b)^k (x) e_mu."""
    n = g.n
    # coordinates of (s a + t b)^k as binary forms of degree k
    cur = [BinForm.constant(1)]
    for deg in range(k):
        nxt = [BinForm((Fraction(0),) * (deg + 2))
               for _ in range(Slot(n, 1, deg + 1).sdim)]
        for shift_t, vec in ((False, a), (True, b)):
            for sidx, f in enumerate(cur):
                if f.is_zero():
                    continue
                shifted = BinForm((Fraction(0),) + tuple(f.coeffs)) if shift_t \
                    else BinForm(tuple(f.coeffs) + (Fraction(0),))
                prod = sym_multiply(list(vec), _unit(sidx, Slot(n, 1, deg).sdim),
                                    n, 1, deg)
                for tidx, c in enumerate(prod):
                    if c != 0:
                        nxt[tidx] = nxt[tidx] + (c * shifted)
        cur = nxt
    vk_forms = cur
    functionals = annihilator_functionals(g, k)
    slot = g.slot(k)
    block = slot.sdim
    rows = []
    for f in functionals:
        row = []
        for mu in range(g.nu):
            entry = BinForm((Fraction(0),) * (k + 1))
            for sidx, form in enumerate(vk_forms):
                c = f[mu * block + sidx]
                if c != 0 and not form.is_zero():
                    entry = entry + c * form
            row.append(entry)
        rows.append(row)
    return rows


def _unit(i: int, dim: int) -> list:
    v = [0] * dim
    v[i] = 1
    return v


def _form_minor(rows: list[list[BinForm]], degree_each: int) -> BinForm:
    """Determinant of a small square matrix of binary forms (Leibniz)."""
    import itertools

    m = len(rows)
    total = BinForm((Fraction(0),) * (m * degree_each + 1))
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for i in range(m) for j in range(i + 1, m)
                  if perm[i] > perm[j])
        prod = BinForm.constant(-1 if inv % 2 else 1)
        zero = False
        for i, pi in enumerate(perm):
            if rows[i][pi].is_zero():
                zero = True
                break
            prod = prod * rows[i][pi]
        if not zero:
            total = total + prod
    return total


def pencil_char_search(g: SymbolicSystem, vstar, field: str = "qi"
                       ) -> PencilResult:
    """Existence (and an explicit example when it lies in the chosen field)
    of a characteristic covector in a pencil V* of dimension one or two."""
    vstar = _as_vstar(vstar, g.n)
    k = char_level(g)
    if vstar.dim == 1:
        v = list(vstar.basis[0])
        flag, w = is_char_covector(g, v, k)
        return PencilResult(exists=flag, covector=v if flag else None, witness=w)
    if vstar.dim != 2:
        raise UnsupportedPencil(
            f"pencil search supports dim V* in {{1, 2}}, got {vstar.dim}")
    a, b = [list(r) for r in vstar.basis]
    rows = _pencil_matrix(g, a, b, k)
    if len(rows) < g.nu:
        flag, w = is_char_covector(g, a, k)
        return PencilResult(exists=True, covector=a, witness=w,
                            every_covector=True)
    import itertools

    minors = []
    for combo in itertools.combinations(range(len(rows)), g.nu):
        minors.append(_form_minor([rows[r] for r in combo], k))
    gcd = form_gcd(minors)
    if gcd is None:
        flag, w = is_char_covector(g, a, k)
        return PencilResult(exists=True, covector=a, witness=w,
                            every_covector=True)
    if gcd.degree < 1:
        return PencilResult(exists=False, gcd_degree=0, gcd_coeffs=gcd.coeffs)
    roots, leftovers = projective_qi_roots(gcd)
    if field == "q":
        roots = [r for r in roots
                 if not any(isinstance(x, GaussianRational) and x.im != 0
                            for x in r)]
    for s0, t0 in roots:
        v = [s0 * x + t0 * y for x, y in zip(a, b)]
        flag, w = is_char_covector(g, v, k)
        if flag:
            return PencilResult(exists=True, covector=v, witness=w,
                                gcd_degree=gcd.degree, gcd_coeffs=gcd.coeffs,
                                leftover_factors=tuple(tuple(f) for f in leftovers))
    return PencilResult(exists=True, covector=None, witness=None,
                        gcd_degree=gcd.degree, gcd_coeffs=gcd.coeffs,
                        leftover_factors=tuple(tuple(f) for f in leftovers))


# -- constructive search for first-order systems --------------------------


@dataclass
class GuilleminResult:
    status: str  # covector | omega-characteristic | failure
    covector: list | None = None
    witness: list | None = None
    omega: list | None = None
    v0_basis: tuple = ()
    eigenvalues: tuple = ()
    certificate: dict = field(default_factory=dict)


def _charpoly(rows: list[list]) -> list:
    """Characteristic polynomial, ascending coefficients, by the
    trace-recursion (Faddeev-LeVerrier); exact over Q and Q(i)."""
    k = len(rows)
    if k == 0:
        return [1]
    ident = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    n_mat = [row[:] for row in ident]
    coeffs_desc = [Fraction(1)]
    m = rows
    for i in range(1, k + 1):
        mn = [[sum(m[r][x] * n_mat[x][c] for x in range(k)) for c in range(k)]
              for r in range(k)]
        tr = sum(mn[d][d] for d in range(k))
        c_i = qdiv(-tr, i)
        coeffs_desc.append(c_i)
        n_mat = [[mn[r][c] + (c_i if r == c else 0) for c in range(k)]
                 for r in range(k)]
    return list(reversed(coeffs_desc))


def _common_eigenvector(ops: list[list[list]], dim: int):
    """A common eigenvector over Q(i) of commuting operators, with
    backtracking over eigenvalue choices; None plus the certificates of the
    missing eigenvalues when none exists over Q(i)."""
    certificates = []

    def rec(space: Subspace, idx: int, eigs: tuple):
        if space.dim == 0:
            return None
        if idx == len(ops):
            return list(space.basis[0]), eigs
        op = ops[idx]
        basis = [list(b) for b in space.basis]
        restricted = []
        for b in basis:
            image = [sum(op[r][c] * b[c] for c in range(dim)) for r in range(dim)]
            coords = space.coords(image)
            if coords is None:
                certificates.append({"reason": "space not invariant"})
                return None
            restricted.append(coords)
        # operator acts on coordinates as the transpose of `restricted`
        d = space.dim
        mat = [[restricted[c][r] for c in range(d)] for r in range(d)]
        roots, leftovers = gaussian_poly_qi_roots(_charpoly(mat))
        if not roots:
            certificates.append({
                "reason": "eigenvalue outside Q(i)",
                "minimal_polynomial": leftovers[0] if leftovers else None})
            return None
        seen = []
        for root in roots:
            if root in seen:
                continue
            seen.append(root)
            shifted = [[mat[r][c] - (root if r == c else 0) for c in range(d)]
                       for r in range(d)]
            eigvecs = kernel_rows(shifted, d)
            lifted = []
            for ev in eigvecs:
                vec = [0] * dim
                for ci, coeff in enumerate(ev):
                    if coeff != 0:
                        for x in range(dim):
                            if basis[ci][x] != 0:
                                vec[x] = vec[x] + coeff * basis[ci][x]
                lifted.append(vec)
            result = rec(Subspace.span(lifted, dim), idx + 1, eigs + (root,))
            if result is not None:
                return result
        return None

    got = rec(Subspace.full(dim), 0, ())
    return got, certificates


def guillemin_b_search(g: SymbolicSystem, vstar, seed: int = 0,
                       budget: int = 30) -> GuilleminResult:
    """Constructive characteristic-covector search in a strongly
    characteristic subspace V* of a pure first-order system.

    Picks a maximal non-characteristic V0* inside V* by seeded descending
    search (the choice is recorded, not canonical), forms the commuting
    family on N' = [omega (x) N meet (V0* (x) N + g)] / omega and extracts a
    common eigenvector exactly over Q(i); failures name the minimal
    polynomial of the missing eigenvalue.
    """
    prof = order_profile(g)
    if prof.orders and prof.orders != (1,):
        raise ValueError("the constructive search applies to first-order systems")
    vstar = _as_vstar(vstar, g.n)
    flag, _ = strongly_characteristic_at(g, vstar, 1)
    if not flag:
        return GuilleminResult("failure",
                               certificate={"reason": "V* is not strongly characteristic"})
    rng = random.Random(seed)
    t = vstar.dim
    vbasis = [list(r) for r in vstar.basis]

    def noncharacteristic(sub: Subspace) -> bool:
        return sub.dim == 0 or strongly_nonchar_at(g, sub, 1)

    v0 = Subspace.zero(g.n)
    for d in range(t - 1, 0, -1):
        found = None
        import itertools
        for combo in itertools.combinations(range(t), d):
            cand = Subspace.span([vbasis[i] for i in combo], g.n)
            if cand.dim == d and noncharacteristic(cand):
                found = cand
                break
        tries = 0
        while found is None and tries < budget:
            tries += 1
            mix = [[sum(rng.randint(-5, 5) * Fraction(vbasis[r][c])
                        for r in range(t)) for c in range(g.n)]
                   for _ in range(d)]
            cand = Subspace.span(mix, g.n)
            if cand.dim == d and noncharacteristic(cand):
                found = cand
        if found is not None:
            v0 = found
            break

    omega = None
    for i in range(t):
        if not v0.contains_vector(vbasis[i]):
            omega = vbasis[i]
            break
    if omega is None:
        return GuilleminResult("failure",
                               certificate={"reason": "no omega outside V0*"})
    flag, w = is_char_covector(g, omega, 1)
    if flag:
        return GuilleminResult("omega-characteristic", covector=omega, witness=w,
                               omega=omega, v0_basis=v0.basis)

    slot1 = g.slot(1)
    v0n = subspace_product(v0, Subspace.full(g.nu), Slot(g.n, g.nu, 0)) \
        if v0.dim else Subspace.zero(slot1.dim)
    s_sum = v0n.add(g.level(1))

    def omega_tensor(xi) -> list:
        vec = [0] * slot1.dim
        for mu, c in enumerate(xi):
            if c != 0:
                for i, o in enumerate(omega):
                    if o != 0:
                        vec[mu * slot1.sdim + i] = c * o
        return vec

    rows = []
    for mu in range(g.nu):
        unit = [0] * g.nu
        unit[mu] = 1
        rows.append(s_sum.reduce(omega_tensor(unit)))
    nprime = Subspace.span(kernel_rows([[rows[mu][c] for mu in range(g.nu)]
                                        for c in range(slot1.dim)], g.nu), g.nu)
    if nprime.dim == 0:
        return GuilleminResult("failure", omega=omega, v0_basis=v0.basis,
                               certificate={"reason": "N' is trivial"})

    # lambda(xi) = the unique V0*-part of omega (x) xi modulo g
    d0 = v0.dim
    columns = []
    for j in range(d0):
        for mu in range(g.nu):
            vec = [0] * slot1.dim
            for i, c in enumerate(v0.basis[j]):
                if c != 0:
                    vec[mu * slot1.sdim + i] = c
            columns.append(vec)
    for b in g.level(1).basis:
        columns.append(list(b))
    solver = Matrix.from_rows([[col[r] for col in columns]
                               for r in range(slot1.dim)], len(columns))

    lam_mats = []  # one nu x nu matrix per V0* basis direction
    for j in range(d0):
        lam_mats.append([[0] * g.nu for _ in range(g.nu)])
    for mu in range(g.nu):
        unit = [0] * g.nu
        unit[mu] = 1
        target = omega_tensor(unit)
        z = solve(solver, target)
        if z is None:
            return GuilleminResult("failure", omega=omega, v0_basis=v0.basis,
                                   certificate={"reason": "decomposition failed"})
        for j in range(d0):
            for m2 in range(g.nu):
                lam_mats[j][m2][mu] = z[j * g.nu + m2]

    # restrict the family to N' and check it is internal
    nb = [list(b) for b in nprime.basis]
    ops = []
    for j in range(d0):
        op_rows = []
        for b in nb:
            img = [sum(lam_mats[j][r][c] * b[c] for c in range(g.nu))
                   for r in range(g.nu)]
            coords = nprime.coords(img)
            if coords is None:
                return GuilleminResult(
                    "failure", omega=omega, v0_basis=v0.basis,
                    certificate={"reason": "lambda does not preserve N' "
                                           "(hypotheses of the search violated)"})
            op_rows.append(coords)
        d = nprime.dim
        ops.append([[op_rows[c][r] for c in range(d)] for r in range(d)])

    got, certificates = _common_eigenvector(ops, nprime.dim)
    if got is None:
        cert = certificates[-1] if certificates else {"reason": "no eigenvector"}
        return GuilleminResult("failure", omega=omega, v0_basis=v0.basis,
                               certificate=cert)
    xi_coords, eigs = got
    covector = list(omega)
    for j, c in enumerate(eigs):
        for x in range(g.n):
            covector[x] = covector[x] - c * v0.basis[j][x]
    flag, w = is_char_covector(g, covector, 1)
    if not flag:
        return GuilleminResult("failure", omega=omega, v0_basis=v0.basis,
                               certificate={"reason": "candidate failed membership"})
    return GuilleminResult("covector", covector=covector, witness=w,
                           omega=omega, v0_basis=v0.basis, eigenvalues=eigs)
