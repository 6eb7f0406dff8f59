"""Commutation and expansion identities for simple stalk complexes at one vertex.

For a vertex i with g loops write S = S_i, v_(i) = v^{1-g} and
[[X]] = [X]/|Aut X|.  Each builder returns the two sides of an identity as
SDHElements.  ``variant="literal"`` follows the commonly printed form;
``variant="corrected"`` flips the v_(i) exponent where the printed form is
off by the involution C <-> C*, K <-> K*.  The two agree whenever g = 1 or
k = l.
"""
from __future__ import annotations

from fractions import Fraction

from .scalars import phi_poly
from .sdh import SDHContext, SDHElement

IDENTITIES = ("c-cstar", "cstar-c", "balanced", "expand-kstar", "expand-k")
VARIANTS = ("corrected", "literal")


def _phi(r: int, t: Fraction) -> Fraction:
    return Fraction(phi_poly(r, t))


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def coeff_product(q: int, k: int, l: int, r: int) -> Fraction:
    """q^{-r(l+k-r)} / phi_r(q^{-1})."""
    return Fraction(1, q ** (r * (l + k - r))) / _phi(r, Fraction(1, q))


def coeff_expansion(q: int, k: int, l: int, r: int) -> Fraction:
    """(-1)^r q^{-r(k+l)+binom(r+1,2)} / phi_r(q^{-1})."""
    return (-1) ** r * Fraction(q) ** (-r * (k + l) + _binom2(r + 1)) / _phi(r, Fraction(1, q))


def coeff_balanced(q: int, k: int, l: int, r: int) -> Fraction:
    """q^{-r(k+l)+r(r+1)} / phi_r(q)."""
    return Fraction(q) ** (-r * (k + l) + r * (r + 1)) / _phi(r, Fraction(q))


class _Stalks:
    def __init__(self, ctx: SDHContext, i):
        self.ctx = ctx
        self.i = i
        self.S = ctx.reps.simple(i)
        self.g = ctx.quiver.loops(i)

    def vi(self, n: int):
        return self.ctx.v_power(n * (1 - self.g))

    def rep(self, k: int):
        return self.S.power(k) if k else self.ctx.reps.zero()

    def C(self, k: int) -> SDHElement:
        return self.ctx.double_bracket_basis(self.rep(k), None)

    def Cs(self, l: int) -> SDHElement:
        return self.ctx.double_bracket_basis(None, self.rep(l))

    def CCs(self, k: int, l: int) -> SDHElement:
        return self.ctx.double_bracket_basis(self.rep(k), self.rep(l))

    def K(self, r: int) -> SDHElement:
        return self.ctx.k(self.i, r)

    def Ks(self, r: int) -> SDHElement:
        return self.ctx.kstar(self.i, r)


def identity_sides(ctx: SDHContext, name: str, i, k: int, l: int,
                   variant: str = "corrected") -> tuple[SDHElement, SDHElement]:
    if name not in IDENTITIES:
        raise ValueError("unknown identity %r; choose from %s" % (name, IDENTITIES))
    if variant not in VARIANTS:
        raise ValueError("variant must be one of %s" % (VARIANTS,))
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    st = _Stalks(ctx, i)
    q = ctx.q
    lit = variant == "literal"
    rs = range(0, min(k, l) + 1)
    zero = ctx.zero_element()

    if name == "c-cstar":
        lhs = st.C(k) * st.Cs(l)
        rhs = sum((st.CCs(k - r, l - r) * st.Ks(r) * (coeff_product(q, k, l, r) * st.vi(r * (l - k)))
                   for r in rs), zero)
    elif name == "cstar-c":
        s = 1 if lit else -1
        lhs = st.Cs(l) * st.C(k)
        rhs = sum((st.CCs(k - r, l - r) * st.K(r) * (coeff_product(q, k, l, r) * st.vi(s * r * (l - k)))
                   for r in rs), zero)
    elif name == "expand-kstar":
        lhs = st.CCs(k, l)
        rhs = sum((st.C(k - r) * st.Cs(l - r) * st.Ks(r) * (coeff_expansion(q, k, l, r) * st.vi(r * (l - k)))
                   for r in rs), zero)
    elif name == "expand-k":
        s = 1 if lit else -1
        lhs = st.CCs(k, l)
        rhs = sum((st.Cs(l - r) * st.C(k - r) * st.K(r) * (coeff_expansion(q, k, l, r) * st.vi(s * r * (l - k)))
                   for r in rs), zero)
    else:
        lhs = sum((st.C(k - r) * st.Cs(l - r) * st.Ks(r) * (coeff_balanced(q, k, l, r) * st.vi(r * (l - k)))
                   for r in rs), zero)
        if lit:
            rhs = sum((st.C(l - r) * st.Cs(k - r) * st.K(r) * (coeff_balanced(q, k, l, r) * st.vi(r * (l - k)))
                       for r in rs), zero)
        else:
            rhs = sum((st.Cs(l - r) * st.C(k - r) * st.K(r) * (coeff_balanced(q, k, l, r) * st.vi(r * (k - l)))
                       for r in rs), zero)
    return lhs, rhs


def check_identity(ctx: SDHContext, name: str, i, k: int, l: int, variant: str = "corrected") -> bool:
    lhs, rhs = identity_sides(ctx, name, i, k, l, variant)
    return lhs == rhs
