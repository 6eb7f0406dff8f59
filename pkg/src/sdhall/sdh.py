"""The twisted semi-derived Hall algebra in its normal-form basis.

Basis elements are [C_A + C*_B] * [K_alpha] * [K*_beta] with A, B iso classes
of representations and alpha, beta integer vectors.  Coefficients live in
Q(sqrt q).

Two multiplication routes are provided for the product of the stalk parts:

* ``"count"``: extensions of (B in degree 0, A in degree 1) by
  (B' in degree 0, A' in degree 1) are parametrised by the rep-level
  extension data eta on each component together with the two connecting
  morphisms eps0: B -> A' and eps1: A -> B'.  Only the homology and the
  ranks of eps enter the reduction, and for a hereditary category the
  homology classes are uniformly distributed over Ext(ker eps0, coker eps1)
  and Ext(ker eps1, coker eps0).  Everything reduces to subobject and
  extension profiles in rep(Q).
* ``"scan"``: enumerate Ext^1 in the category of complexes and reduce every
  middle term.  Slow; used as an oracle.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complexes import ComplexCategory, Z2Complex, stalk
from .quiver import Quiver, euler_form, sym_form
from .reps import Budget, IsoClass, RepCategory, Representation
from .scalars import QuadExt

MODES = ("nilpotent", "modified")
METHODS = ("count", "scan")


@dataclass(frozen=True)
class KWeight:
    alpha: tuple
    beta: tuple

    def __add__(self, other: "KWeight") -> "KWeight":
        return KWeight(_vadd(self.alpha, other.alpha), _vadd(self.beta, other.beta))


@dataclass(frozen=True)
class NormalBasisElement:
    """[C_A + C*_B] * [K_alpha] * [K*_beta]."""

    A: IsoClass
    B: IsoClass
    alpha: tuple
    beta: tuple

    @property
    def weight(self) -> KWeight:
        return KWeight(self.alpha, self.beta)

    @property
    def sort_key(self):
        return (self.A.sort_key, self.B.sort_key, self.alpha, self.beta)

    def describe(self) -> dict:
        return {"A": self.A.label, "B": self.B.label, "alpha": list(self.alpha), "beta": list(self.beta)}


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class SDHElement:
    """Finite Q(sqrt q)-combination of normal-form basis elements."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: "SDHContext", terms: dict | None = None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    def _scalar(self, c) -> QuadExt:
        if isinstance(c, QuadExt):
            return c
        return QuadExt(self.ctx.q, c)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, SDHElement):
            other = self.ctx.one() * other
        self.ctx._same(other.ctx)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return SDHElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return SDHElement(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SDHElement):
            return self.ctx.mul(self, other)
        c = self._scalar(other)
        return SDHElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = self._scalar(other)
        return SDHElement(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __truediv__(self, other):
        return self * self._scalar(other).inverse()

    def __pow__(self, n: int):
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            other = self.ctx.one() * other
        if not isinstance(other, SDHElement):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key)

    def to_records(self) -> list[dict]:
        out = []
        for k, v in self.sorted_terms():
            rec = k.describe()
            rec["coeff"] = [str(v.a), str(v.b), v.q]
            out.append(rec)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.sorted_terms():
            w = ""
            if any(k.alpha):
                w += " K%s" % (list(k.alpha),)
            if any(k.beta):
                w += " K*%s" % (list(k.beta),)
            parts.append("(%s)[C %s + C* %s]%s" % (v, k.A.label, k.B.label, w))
        return " + ".join(parts)


class SDHContext:
    """Structure constants of the semi-derived Hall algebra for one (quiver, q, mode)."""

    def __init__(self, quiver: Quiver, q: int, mode: str = "nilpotent", budget: Budget | None = None,
                 method: str = "count"):
        if mode not in MODES:
            raise ValueError("mode must be one of %s" % (MODES,))
        if method not in METHODS:
            raise ValueError("method must be one of %s" % (METHODS,))
        self.method = method
        self.quiver = quiver
        self.q = q
        self.mode = mode
        self.budget = budget or Budget()
        self.reps = RepCategory(quiver, q, self.budget)
        self.cx = ComplexCategory(quiver, q, self.budget, base=self.reps)
        self.zero_class = self.reps.classify(self.reps.zero())
        self._zero_vec = quiver.zero_vector()
        self._cprod: dict = {}

    def _same(self, other: "SDHContext") -> None:
        if other is not self:
            raise ValueError("elements from different SDH contexts")

    # scalars
    def v_power(self, n: int) -> QuadExt:
        return QuadExt.sqrt_power(self.q, n)

    def scalar(self, c) -> QuadExt:
        return c if isinstance(c, QuadExt) else QuadExt(self.q, c)

    def euler(self, d, e) -> int:
        return euler_form(self.quiver, d, e)

    def sym(self, d, e) -> int:
        return sym_form(self.quiver, d, e)

    # elements
    def _check_class(self, A: IsoClass) -> None:
        if self.mode == "nilpotent" and not A.rep.is_nilpotent():
            raise ValueError("class %s is not nilpotent (nilpotent mode)" % A.label)

    def classify(self, A) -> IsoClass:
        c = self.reps.classify(A)
        self._check_class(c)
        return c

    def element_from(self, terms: dict) -> SDHElement:
        return SDHElement(self, {k: self.scalar(v) for k, v in terms.items()})

    def zero_element(self) -> SDHElement:
        return SDHElement(self)

    def one(self) -> SDHElement:
        return self.basis(self.zero_class, self.zero_class)

    def basis(self, A=None, B=None, alpha=None, beta=None, coeff=1) -> SDHElement:
        A = self.zero_class if A is None else self.classify(A)
        B = self.zero_class if B is None else self.classify(B)
        alpha = tuple(alpha) if alpha is not None else self._zero_vec
        beta = tuple(beta) if beta is not None else self._zero_vec
        return SDHElement(self, {NormalBasisElement(A, B, alpha, beta): self.scalar(coeff)})

    def c(self, A) -> SDHElement:
        """[C_A]."""
        return self.basis(A, None)

    def cstar(self, B) -> SDHElement:
        """[C*_B]."""
        return self.basis(None, B)

    def k_weight(self, alpha=None, beta=None) -> SDHElement:
        return self.basis(None, None, alpha, beta)

    def k(self, i, power: int = 1) -> SDHElement:
        """[K_{S_i}]^power."""
        return self.k_weight(tuple(power * x for x in self.quiver.unit(i)), None)

    def kstar(self, i, power: int = 1) -> SDHElement:
        return self.k_weight(None, tuple(power * x for x in self.quiver.unit(i)))

    # reduction of arbitrary complexes
    def reduce(self, M: Z2Complex) -> SDHElement:
        """[M] = v^{-<h0 - h1, im0 - im1>} [C_{H^1} + C*_{H^0}] * [K_{Im d^0}] * [K*_{Im d^1}]."""
        h0, h1 = M.homology()
        im0, im1 = M.image_dims()
        e = -self.euler(_vsub(h0.dims, h1.dims), _vsub(im0, im1))
        return self.basis(self.classify(h1), self.classify(h0), im0, im1, self.v_power(e))

    def double_bracket(self, M: Z2Complex) -> SDHElement:
        """[[M]] = [M] / |Aut M|, automorphisms taken in the category of complexes."""
        return self.reduce(M) / self.cx.aut_order(M)

    def double_bracket_basis(self, A=None, B=None) -> SDHElement:
        """[[C_A + C*_B]]; Aut splits as Aut A x Aut B since Hom(C_A, C*_B) = 0 = Hom(C*_B, C_A)."""
        A = self.zero_class if A is None else self.classify(A)
        B = self.zero_class if B is None else self.classify(B)
        return self.basis(A, B) / (self.reps.aut_order(A) * self.reps.aut_order(B))

    def stalk_sum(self, A=None, B=None) -> Z2Complex:
        """The complex C_A + C*_B."""
        Ar = self.reps.zero() if A is None else _rep(A)
        Br = self.reps.zero() if B is None else _rep(B)
        return stalk(Ar, "C").direct_sum(stalk(Br, "Cstar"))

    # multiplication
    def mul(self, x: SDHElement, y: SDHElement, method: str | None = None) -> SDHElement:
        method = method or self.method
        self._same(x.ctx)
        self._same(y.ctx)
        out: dict = {}
        for bx, cx in x.terms.items():
            for by, cy in y.terms.items():
                for k, c in self._basis_product(bx, by, method).items():
                    c = c * cx * cy
                    out[k] = out[k] + c if k in out else c
        return SDHElement(self, out)

    def _basis_product(self, bx: NormalBasisElement, by: NormalBasisElement, method: str) -> dict:
        A2d, B2d = by.A.dims, by.B.dims
        scal = self.v_power(self.sym(_vsub(bx.alpha, bx.beta), _vsub(A2d, B2d)))
        alpha = _vadd(bx.alpha, by.alpha)
        beta = _vadd(bx.beta, by.beta)
        out = {}
        for (H1, H0, r0, r1), c in self.stalk_product(bx.A, bx.B, by.A, by.B, method).items():
            k = NormalBasisElement(H1, H0, _vadd(alpha, r0), _vadd(beta, r1))
            out[k] = out[k] + c * scal if k in out else c * scal
        return out

    def stalk_product(self, A, B, A2, B2, method: str = "count") -> dict:
        """[C_A + C*_B] * [C_A2 + C*_B2] as {(H1, H0, r0, r1): coefficient}."""
        key = (A, B, A2, B2, method)
        if key not in self._cprod:
            if method == "count":
                self._cprod[key] = self._stalk_product_count(A, B, A2, B2)
            elif method == "scan":
                self._cprod[key] = self._stalk_product_scan(A, B, A2, B2)
            else:
                raise ValueError("unknown multiplication method %r" % method)
        return self._cprod[key]

    def _stalk_product_count(self, A, B, A2, B2) -> dict:
        R = self.reps
        e = self.euler(B.dims, B2.dims) + self.euler(A.dims, A2.dims)
        # v^{<res, res>} times q^{-dim C^0 + dim C^1} collapses to v^{-e}
        pref = self.v_power(-e)
        acc: dict = {}
        for (P0, Q0), n0 in R.map_profile(B, A2).items():
            r0 = _vsub(B.dims, P0.dims)
            for (P1, Q1), n1 in R.map_profile(A, B2).items():
                r1 = _vsub(A.dims, P1.dims)
                prof0 = R.ext_profile(P0, Q1)
                prof1 = R.ext_profile(P1, Q0)
                tot = sum(prof0.values()) * sum(prof1.values())
                for H0, c0 in prof0.items():
                    for H1, c1 in prof1.items():
                        ex = -self.euler(_vsub(H0.dims, H1.dims), _vsub(r0, r1))
                        c = pref * self.v_power(ex) * Fraction(n0 * n1 * c0 * c1, tot)
                        k = (H1, H0, r0, r1)
                        acc[k] = acc[k] + c if k in acc else c
        return acc

    def _stalk_product_scan(self, A, B, A2, B2) -> dict:
        prod = self.hall_product_cx(self.stalk_sum(A, B), self.stalk_sum(A2, B2))
        return {(k.A, k.B, k.alpha, k.beta): c for k, c in prod.terms.items()}

    def hall_product_cx(self, L: Z2Complex, M: Z2Complex) -> SDHElement:
        """v^{<res L, res M>} sum over Ext^1(L, M) of [X]/|Hom(L, M)|, each [X] reduced."""
        e = self.euler(L.m0.dims, M.m0.dims) + self.euler(L.m1.dims, M.m1.dims)
        hom = self.q ** self.cx.hom_dim(L, M)
        acc = SDHElement(self)
        counts = Counter(self.cx.extensions(L, M))
        for X, n in counts.items():
            acc = acc + self.reduce(X) * Fraction(n, hom)
        return acc * self.v_power(e)

    def hall_product_cx_terms(self, L: Z2Complex, M: Z2Complex) -> list[tuple[Z2Complex, QuadExt]]:
        """Unreduced twisted product: [(X, coefficient)] with one entry per Ext class."""
        e = self.euler(L.m0.dims, M.m0.dims) + self.euler(L.m1.dims, M.m1.dims)
        w = self.v_power(e) * Fraction(1, self.q ** self.cx.hom_dim(L, M))
        return [(X, w) for X in self.cx.extensions(L, M)]

    def rep_hall_product(self, X, Y) -> dict:
        """Twisted Hall product in rep(Q): [X]*[Y] = v^{<X,Y>} sum |Ext(X,Y)_Z|/|Hom(X,Y)| [Z]."""
        X, Y = self.reps.classify(X), self.reps.classify(Y)
        w = self.v_power(self.euler(X.dims, Y.dims))
        hom = self.q ** self.reps.hom_dim(X, Y)
        return {Z: w * Fraction(n, hom) for Z, n in self.reps.ext_profile(X, Y).items()}

    def linear_rank(self, elements: Sequence[SDHElement]) -> int:
        """Rank of a family of elements over Q(sqrt q)."""
        keys = sorted({k for x in elements for k in x.terms}, key=lambda k: k.sort_key)
        rows = [[x.terms.get(k, QuadExt(self.q)) for k in keys] for x in elements]
        return _field_rank(rows)


def mode_select(quiver: Quiver, q: int, mode: str, budget: Budget | None = None,
                method: str = "count") -> SDHContext:
    """Context for the nilpotent algebra or the modified (all representations) variant."""
    return SDHContext(quiver, q, mode, budget, method)


def _field_rank(rows: list[list]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _rep(A) -> Representation:
    return A.rep if isinstance(A, IsoClass) else A
