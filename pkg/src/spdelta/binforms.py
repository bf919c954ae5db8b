"""Binary forms over Q and exact root extraction over Q and Q(i).

A binary form of degree d is stored as the coefficient list [c_0, ..., c_d]
of sum_j c_j s^(d-j) t^j.  The gcd of a family of forms is computed through
dehomogenisation at s = 1 with separate bookkeeping of the s- and t-powers;
a form of positive degree always has complex projective roots, so existence
questions are decided by the gcd degree alone, without numerics.

Root extraction over Q(i) reduces to factoring integer polynomials over Q:
any Gaussian-rational root has a minimal polynomial of degree at most two,
so linear factors give the rational roots and irreducible quadratics with
minus-a-square discriminant give the Gaussian ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import sympy

from .field import GaussianRational


@dataclass(frozen=True)
class BinForm:
    """Homogeneous polynomial in (s, t); coeffs[j] multiplies s^(d-j) t^j."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "BinForm") -> "BinForm":
        if self.degree != other.degree:
            raise ValueError("can only add forms of equal degree")
        return BinForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BinForm":
        return BinForm(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "BinForm") -> "BinForm":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BinForm(tuple(a * other for a in self.coeffs))
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return BinForm(tuple(out))

    __rmul__ = __mul__

    def evaluate(self, s, t):
        d = self.degree
        total = 0
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = c
            for _ in range(d - j):
                term = term * s
            for _ in range(j):
                term = term * t
            total = total + term
        return total

    @classmethod
    def constant(cls, value) -> "BinForm":
        return cls((Fraction(value),))

    @classmethod
    def linear(cls, cs, ct) -> "BinForm":
        return cls((Fraction(cs), Fraction(ct)))


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Monic gcd of univariate polynomials with ascending coefficients."""
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        r = list(a)
        db, lb = len(b) - 1, b[-1]
        while len(r) - 1 >= db and trim(r):
            dr, lr = len(r) - 1, r[-1]
            f = lr / lb
            for i in range(db + 1):
                r[dr - db + i] -= f * b[i]
            trim(r)
        a, b = b, trim(r)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def form_gcd(forms: list[BinForm]) -> BinForm | None:
    """Monic gcd of binary forms; None means every form was identically zero
    (so the gcd is the zero form and every point is a common root)."""
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        return None
    # multiplicity of s in a form = degree - (largest j with c_j != 0)
    s_mult = min(f.degree - max(j for j, c in enumerate(f.coeffs) if c != 0)
                 for f in nonzero)
    t_mult = min(min(j for j, c in enumerate(f.coeffs) if c != 0) for f in nonzero)
    gcd_poly: list[Fraction] | None = None
    for f in nonzero:
        js = [j for j, c in enumerate(f.coeffs) if c != 0]
        lo, hi = min(js), max(js)
        core = [f.coeffs[j] for j in range(lo, hi + 1)]  # poly in t, ascending
        gcd_poly = core if gcd_poly is None else _poly_gcd(gcd_poly, core)
        if len(gcd_poly) == 1 and s_mult == 0 and t_mult == 0:
            break
    lead = gcd_poly[-1]
    gcd_poly = [c / lead for c in gcd_poly]
    d_core = len(gcd_poly) - 1
    coeffs = [Fraction(0)] * (s_mult + t_mult + d_core + 1)
    for j, c in enumerate(gcd_poly):
        coeffs[t_mult + j] = c
    return BinForm(tuple(coeffs))


def _is_rational_square(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    pn, pd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def rational_factors(coeffs: list[Fraction]):
    """sympy factorisation over Q of an ascending-coefficient polynomial;
    yields (factor ascending coeffs, multiplicity), constants dropped."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(
        sum(sympy.Rational(c.numerator, c.denominator) * x ** i
            for i, c in enumerate(coeffs)), x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fc = [Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
              for c in reversed(sympy.Poly(fac, x).all_coeffs())]
        out.append((fc, mult))
    return out


def qi_roots(coeffs: list[Fraction]):
    """All roots in Q and Q(i) of an ascending-coefficient polynomial over Q.

    Returns (roots, leftovers): `roots` are Fraction or GaussianRational
    values; `leftovers` are the irreducible factors (ascending coefficients)
    carrying no Q(i) root, i.e. the minimal polynomials of the missing roots.
    """
    roots: list = []
    leftovers: list[list[Fraction]] = []
    for fac, _mult in rational_factors(coeffs):
        deg = len(fac) - 1
        if deg == 1:
            roots.append(-fac[0] / fac[1])
        elif deg == 2:
            c, b, a = fac[0], fac[1], fac[2]
            disc = b * b - 4 * a * c
            root_negdisc = _is_rational_square(-disc)
            if root_negdisc is not None:
                re = -b / (2 * a)
                im = root_negdisc / (2 * a)
                roots.append(GaussianRational(re, im))
                roots.append(GaussianRational(re, -im))
            else:
                leftovers.append(fac)
        elif deg > 2:
            leftovers.append(fac)
    return roots, leftovers


def gaussian_poly_qi_roots(coeffs: list):
    """Q(i) roots of a polynomial whose coefficients may be Gaussian.

    Multiplies by the coefficient-conjugate polynomial to obtain rational
    coefficients, extracts Q(i) roots there, and keeps those that evaluate
    to zero exactly in the original.
    """
    def conj(c):
        return c.conjugate() if isinstance(c, GaussianRational) else c

    if all(not isinstance(c, GaussianRational) or c.im == 0 for c in coeffs):
        rat = [c.re if isinstance(c, GaussianRational) else Fraction(c)
               for c in coeffs]
        return qi_roots(rat)
    other = [conj(c) for c in coeffs]
    prod = [Fraction(0)] * (2 * len(coeffs) - 1)
    for i, a in enumerate(coeffs):
        for j, b in enumerate(other):
            term = a * b
            if isinstance(term, GaussianRational):
                prod[i + j] += term.re
            else:
                prod[i + j] += term
    candidates, leftovers = qi_roots(prod)
    def evaluate(root):
        total = 0
        power = 1
        for c in coeffs:
            total = total + c * power
            power = power * root
        return total
    roots = [r for r in candidates if evaluate(r) == 0]
    return roots, leftovers


def projective_qi_roots(form: BinForm):
    """Projective roots (s0, t0) of a binary form over Q(i), plus leftover
    irreducible factors without Q(i) roots."""
    js = [j for j, c in enumerate(form.coeffs) if c != 0]
    if not js:
        raise ValueError("the zero form has every point as a root")
    lo, hi = min(js), max(js)
    roots: list[tuple] = []
    if form.degree - hi > 0:
        roots.append((0, 1))  # s-power factor
    if lo > 0:
        roots.append((1, 0))  # t-power factor
    core = [form.coeffs[j] for j in range(lo, hi + 1)]
    tau_roots, leftovers = qi_roots(core)
    roots.extend((1, tau) for tau in tau_roots)
    return roots, leftovers
