"""Finite-dimensional representations of a quiver over F_q.

A :class:`RepCategory` owns the isomorphism-class registry for one
(quiver, q) pair together with memo tables for Hom/Aut/Hall data.  Classes
are identified by a fingerprint of iso-invariants; fingerprint collisions
are resolved by searching Hom(M, N) for an invertible element.
"""
from __future__ import annotations

import hashlib
import itertools
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import linalg as la
from .quiver import Quiver, euler_form


@dataclass(frozen=True)
class Budget:
    """Hard limits on exhaustive scans; exceeding one raises ResourceError."""

    max_tuples: int = 300_000        # matrix tuples in enumerate_reps
    max_enumeration: int = 1 << 21   # elements of a Hom/End space scanned
    max_ext: int = 1 << 16           # extension classes enumerated
    max_subspaces: int = 400_000     # candidate subspace tuples
    iso_samples: int = 256           # random draws before an exhaustive iso search


class ResourceError(RuntimeError):
    """An enumeration would exceed its configured budget."""


def _check(what: str, size: int, limit: int) -> None:
    if size > limit:
        raise ResourceError("%s of size %d exceeds the budget %d" % (what, size, limit))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Representation:
    """Vector spaces F_q^{d_i} with one matrix per arrow.

    The matrix of an arrow s -> t has shape (d_t, d_s) and acts on columns.
    """

    __slots__ = ("quiver", "q", "dims", "mats", "_key", "_nil")

    def __init__(self, quiver: Quiver, q: int, dims: Sequence[int], mats: Sequence = ()):
        self.quiver = quiver
        self.q = q
        self.dims = tuple(int(x) for x in dims)
        if len(self.dims) != quiver.n or min(self.dims, default=0) < 0:
            raise ValueError("dimension vector %r does not fit %d vertices" % (dims, quiver.n))
        arrows = quiver.arrow_indices
        if len(mats) != len(arrows):
            raise ValueError("expected %d arrow matrices, got %d" % (len(arrows), len(mats)))
        out = []
        for (s, t), m in zip(arrows, mats):
            a = np.asarray(m, dtype=np.int64)
            shape = (self.dims[t], self.dims[s])
            if a.size != shape[0] * shape[1]:
                raise ValueError("arrow matrix of shape %s does not match %s" % (a.shape, shape))
            out.append(_frozen(a.reshape(shape) % q))
        self.mats = tuple(out)
        self._key = None
        self._nil = None

    @property
    def key(self):
        if self._key is None:
            self._key = (self.dims, b"".join(m.tobytes() for m in self.mats))
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.quiver == other.quiver
                and self.q == other.q and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Representation(dims=%s, mats=%s)" % (self.dims, [m.tolist() for m in self.mats])

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def direct_sum(self, other: "Representation") -> "Representation":
        mats = []
        for (s, t), a, b in zip(self.quiver.arrow_indices, self.mats, other.mats):
            m = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
            m[:a.shape[0], :a.shape[1]] = a
            m[a.shape[0]:, a.shape[1]:] = b
            mats.append(m)
        return Representation(self.quiver, self.q, [x + y for x, y in zip(self.dims, other.dims)], mats)

    def power(self, k: int) -> "Representation":
        out = zero_rep(self.quiver, self.q)
        for _ in range(k):
            out = out.direct_sum(self)
        return out

    def change_basis(self, T: Sequence[np.ndarray]) -> "Representation":
        """Structure transported along invertible T_i (columns = new basis)."""
        Tinv = [la.np_inverse(t, self.q) for t in T]
        mats = [Tinv[t] @ m @ T[s] for (s, t), m in zip(self.quiver.arrow_indices, self.mats)]
        return Representation(self.quiver, self.q, self.dims, mats)

    def is_nilpotent(self) -> bool:
        """Iterated image chain U_1 = sum Im x_a, U_{k+1} = sum x_a(U_k) reaches 0."""
        if self._nil is None:
            self._nil = _nilpotent(self)
        return self._nil


def zero_rep(quiver: Quiver, q: int) -> Representation:
    return Representation(quiver, q, quiver.zero_vector(), [np.zeros((0, 0), dtype=np.int64)] * len(quiver.arrows))


def simple_at(quiver: Quiver, q: int, i, lam: Sequence[int] = ()) -> Representation:
    """One-dimensional representation at i; the l-th loop acts by lam[l]."""
    loops = quiver.loop_arrows(i)
    lam = tuple(lam) if lam else (0,) * len(loops)
    if len(lam) != len(loops):
        raise ValueError("vertex %r has %d loops but lambda has length %d" % (i, len(loops), len(lam)))
    dims = quiver.unit(i)
    mats = []
    k = 0
    for a, (s, t) in enumerate(quiver.arrow_indices):
        if a in loops:
            mats.append([[lam[k] % q]])
            k += 1
        else:
            mats.append(np.zeros((dims[t], dims[s]), dtype=np.int64))
    return Representation(quiver, q, dims, mats)


def _nilpotent(M: Representation) -> bool:
    q = M.q
    arrows = M.quiver.arrow_indices
    cur = [[] for _ in M.dims]
    for (s, t), m in zip(arrows, M.mats):
        if m.size:
            cur[t].append(m.T)
    U = [la.np_row_basis(np.vstack(c), q) if c else np.zeros((0, d), dtype=np.int64) for c, d in zip(cur, M.dims)]
    for _ in range(M.total_dim + 1):
        if all(u.shape[0] == 0 for u in U):
            return True
        nxt = [[] for _ in M.dims]
        for (s, t), m in zip(arrows, M.mats):
            if U[s].shape[0] and m.size:
                nxt[t].append((U[s] @ m.T) % q)
        U = [la.np_row_basis(np.vstack(c), q) if c else np.zeros((0, d), dtype=np.int64) for c, d in zip(nxt, M.dims)]
    return all(u.shape[0] == 0 for u in U)


# -- subspaces and induced structures ----------------------------------------

def _pivots(U: np.ndarray) -> list[int]:
    """Pivot columns of an RREF basis."""
    piv = []
    for row in U:
        nz = np.nonzero(row)[0]
        piv.append(int(nz[0]))
    return piv


def _is_invariant(x: np.ndarray, Us: np.ndarray, Ut: np.ndarray, q: int) -> bool:
    """x(span Us) inside span Ut (both RREF row bases)."""
    if Us.shape[0] == 0:
        return True
    img = (Us @ x.T) % q
    if Ut.shape[0] == 0:
        return not img.any()
    piv = _pivots(Ut)
    return not ((img - img[:, piv] @ Ut) % q).any()


def sub_and_quotient(M: Representation, U: Sequence[np.ndarray]) -> tuple[Representation, Representation]:
    """Induced structures on an invariant subspace tuple (RREF row bases) and on the quotient."""
    q = M.q
    subs, quots = [], []
    proj = []   # quotient maps F^d -> F^{d-k}
    incl = []   # section W^T: F^{d-k} -> F^d
    pivs = []
    for Ui, d in zip(U, M.dims):
        piv = _pivots(Ui) if Ui.shape[0] else []
        nonpiv = [c for c in range(d) if c not in set(piv)]
        E = np.eye(d, dtype=np.int64)
        P = (E - (Ui.T @ E[piv]) if piv else E)[nonpiv] % q if nonpiv else np.zeros((0, d), dtype=np.int64)
        proj.append(P)
        incl.append(E[:, nonpiv])
        pivs.append(piv)
    for (s, t), x in zip(M.quiver.arrow_indices, M.mats):
        img = (x @ U[s].T) % q if U[s].shape[0] else np.zeros((M.dims[t], 0), dtype=np.int64)
        subs.append(img[pivs[t], :] if pivs[t] else np.zeros((0, U[s].shape[0]), dtype=np.int64))
        quots.append((proj[t] @ x @ incl[s]) % q)
    sub = Representation(M.quiver, q, [u.shape[0] for u in U], subs)
    quot = Representation(M.quiver, q, [d - u.shape[0] for d, u in zip(M.dims, U)], quots)
    return sub, quot


def restrict(M: Representation, U: Sequence[np.ndarray]) -> Representation:
    return sub_and_quotient(M, U)[0]


def quotient(M: Representation, U: Sequence[np.ndarray]) -> Representation:
    return sub_and_quotient(M, U)[1]


def coords_in(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Coordinates (rows) of the vectors V inside the RREF basis U."""
    if V.shape[0] == 0:
        return np.zeros((0, U.shape[0]), dtype=np.int64)
    return V[:, _pivots(U)] if U.shape[0] else np.zeros((V.shape[0], 0), dtype=np.int64)


def subquotient(M: Representation, big: Sequence[np.ndarray], small: Sequence[np.ndarray]) -> Representation:
    """Structure on span(big)/span(small); requires small inside big, both invariant."""
    S = restrict(M, big)
    inner = [la.np_row_basis(coords_in(b, s), M.q) if s.shape[0] else np.zeros((0, b.shape[0]), dtype=np.int64)
             for b, s in zip(big, small)]
    return quotient(S, inner)


# -- polynomials over F_p (for the one-loop complete invariant) ---------------

def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


_IRRED: dict = {}


def monic_irreducibles(deg: int, p: int) -> list[tuple[int, ...]]:
    """Monic irreducible polynomials of degree ``deg`` over F_p (coefficients low to high)."""
    key = (deg, p)
    if key in _IRRED:
        return _IRRED[key]
    reducible = set()
    for d1 in range(1, deg // 2 + 1):
        for f in monic_irreducibles(d1, p):
            for g in _monic_all(deg - d1, p):
                reducible.add(tuple(_poly_mul(list(f), list(g), p)))
    out = [f for f in _monic_all(deg, p) if f not in reducible]
    _IRRED[key] = out
    return out


def _monic_all(deg: int, p: int):
    for low in itertools.product(range(p), repeat=deg):
        yield tuple(low) + (1,)


def _poly_eval_matrix(f, x: np.ndarray, p: int) -> np.ndarray:
    n = x.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f):
        out = (out @ x + c * np.eye(n, dtype=np.int64)) % p
    return out


def _poly_str(f) -> str:
    terms = []
    for e in range(len(f) - 1, -1, -1):
        c = f[e]
        if not c:
            continue
        mono = "" if e == 0 else ("x" if e == 1 else "x^%d" % e)
        if e == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else "%d%s" % (c, mono))
    return "+".join(terms)


def elementary_divisors(x: np.ndarray, p: int) -> tuple:
    """Complete similarity invariant: per irreducible f, the partition of f-block sizes."""
    n = x.shape[0]
    out = []
    remaining = n
    for deg in range(1, n + 1):
        if deg > remaining:
            break
        for f in monic_irreducibles(deg, p):
            fx = _poly_eval_matrix(f, x, p)
            ranks = [n, la.np_rank(fx, p)]
            if ranks[1] == n:
                continue
            power = fx
            while True:
                power = (power @ fx) % p
                r = la.np_rank(power, p)
                if r == ranks[-1]:
                    break
                ranks.append(r)
            # number of blocks of size >= k is (r_{k-1} - r_k) / deg
            ge = [(ranks[k - 1] - ranks[k]) // deg for k in range(1, len(ranks))]
            parts = []
            for k in range(len(ge)):
                nxt = ge[k + 1] if k + 1 < len(ge) else 0
                parts.extend([k + 1] * (ge[k] - nxt))
            parts.sort(reverse=True)
            out.append((f, tuple(parts)))
            remaining -= deg * sum(parts)
    return tuple(out)


# -- iso classes --------------------------------------------------------------

_CATEGORY_IDS = itertools.count(1)


class IsoClass:
    """Isomorphism class inside one category registry."""

    __slots__ = ("category_id", "index", "rep", "fingerprint", "label")

    def __init__(self, category_id: int, index: int, rep: Representation, fingerprint, label: str):
        self.category_id = category_id
        self.index = index
        self.rep = rep
        self.fingerprint = fingerprint
        self.label = label

    def __eq__(self, other):
        return isinstance(other, IsoClass) and self.category_id == other.category_id and self.index == other.index

    def __hash__(self):
        return hash((self.category_id, self.index))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def sort_key(self):
        return (self.rep.total_dim, self.rep.dims, self.label)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.rep.dims

    @property
    def total_dim(self) -> int:
        return self.rep.total_dim

    def __repr__(self):
        return "IsoClass(%s)" % self.label


class RepCategory:
    """rep_k(Q) over F_q with an isomorphism-class registry and memo tables."""

    def __init__(self, quiver: Quiver, q: int, budget: Budget | None = None, path_length: int = 3):
        self.quiver = quiver
        self.q = q
        self.budget = budget or Budget()
        self.id = next(_CATEGORY_IDS)
        self._lock = threading.RLock()
        self._memo: dict = {}
        self._classes: list[IsoClass] = []
        self._by_fp: dict = {}
        self._cache: dict = {}
        self.counters: Counter = Counter()
        self._path_length = path_length
        self._words = self._path_words(path_length)
        loops = [a for a, (s, t) in enumerate(quiver.arrow_indices) if s == t]
        self._jordan_type = quiver.n == 1 and len(quiver.arrows) <= 1
        self._loops = loops
        self._probes = None

    # construction helpers
    def rep(self, dims: Sequence[int], mats: Sequence = ()) -> Representation:
        return Representation(self.quiver, self.q, dims, mats)

    def zero(self) -> Representation:
        return zero_rep(self.quiver, self.q)

    def simple(self, i, lam: Sequence[int] = ()) -> Representation:
        return simple_at(self.quiver, self.q, i, lam)

    def euler(self, d, e) -> int:
        return euler_form(self.quiver, d, e)

    def _path_words(self, length: int) -> list[tuple[int, ...]]:
        arrows = self.quiver.arrow_indices
        words = [(a,) for a in range(len(arrows))]
        out = list(words)
        for _ in range(length - 1):
            words = [w + (b,) for w in words for b in range(len(arrows)) if arrows[b][0] == arrows[w[-1]][1]]
            out.extend(words)
        return out

    # -- Hom ---------------------------------------------------------------------
    def hom_map(self, M: Representation, N: Representation) -> la.BlockLinearMap:
        """Linear map (f_i) -> (f_t x_a - y_a f_s)_a whose kernel is Hom(M, N)."""
        src = [(N.dims[i], M.dims[i]) for i in range(self.quiver.n)]
        dst = [(N.dims[t], M.dims[s]) for s, t in self.quiver.arrow_indices]
        L = la.BlockLinearMap(src, dst)
        for a, (s, t) in enumerate(self.quiver.arrow_indices):
            L.add(a, None, t, M.mats[a], 1)
            L.add(a, N.mats[a], s, None, -1)
        return L

    def hom_basis(self, M, N) -> list[tuple[np.ndarray, ...]]:
        M, N = _rep(M), _rep(N)
        L = self.hom_map(M, N)
        if L.ncols == 0:
            return []
        ker = la.np_nullspace(L.matrix(self.q), self.q) if L.mat.shape[0] else np.eye(L.ncols, dtype=np.int64)
        return [tuple(L.split_src(v)) for v in ker]

    def hom_dim(self, M, N) -> int:
        if isinstance(M, IsoClass) and isinstance(N, IsoClass):
            key = ("hom", M, N)
            if key not in self._cache:
                self._cache[key] = self._hom_dim(M.rep, N.rep)
            return self._cache[key]
        return self._hom_dim(_rep(M), _rep(N))

    def _hom_dim(self, M: Representation, N: Representation) -> int:
        L = self.hom_map(M, N)
        if L.ncols == 0:
            return 0
        return L.ncols - (la.np_rank(L.matrix(self.q), self.q) if L.mat.shape[0] else 0)

    def ext1_dim(self, M, N) -> int:
        d = self.hom_dim(M, N) - self.euler(_rep(M).dims, _rep(N).dims)
        assert d >= 0, "negative Ext dimension signals an inconsistent Hom computation"
        return d

    def _hom_stacks(self, basis, dims_out, dims_in) -> list[np.ndarray]:
        """Per vertex, an (h, out_i, in_i) stack of the basis morphisms."""
        h = len(basis)
        return [np.stack([b[i] for b in basis]) if h else np.zeros((0, o, n), dtype=np.int64)
                for i, (o, n) in enumerate(zip(dims_out, dims_in))]

    def _count_invertible(self, stacks: list[np.ndarray], coeffs: np.ndarray) -> np.ndarray:
        ok = np.ones(coeffs.shape[0], dtype=bool)
        for st in stacks:
            if st.shape[1] == 0:
                continue
            mats = np.tensordot(coeffs, st, axes=(1, 0)) % self.q
            ok &= la.batch_invertible(mats, self.q)
        return ok

    def aut_order(self, M) -> int:
        """|Aut M| by scanning End(M)."""
        if isinstance(M, IsoClass):
            key = ("aut", M)
            if key not in self._cache:
                self._cache[key] = self._aut_order(M.rep)
            return self._cache[key]
        return self._aut_order(_rep(M))

    def _aut_order(self, M: Representation) -> int:
        basis = self.hom_basis(M, M)
        h = len(basis)
        _check("endomorphism scan", self.q ** h, self.budget.max_enumeration)
        stacks = self._hom_stacks(basis, M.dims, M.dims)
        total = 0
        for coeffs in la.coefficient_batches(h, self.q):
            total += int(self._count_invertible(stacks, coeffs).sum())
        self.counters["aut_scanned"] += self.q ** h
        return total

    def find_isomorphism(self, M: Representation, N: Representation):
        """An invertible element of Hom(M, N), or None."""
        if M.dims != N.dims:
            return None
        if M.key == N.key:
            return tuple(np.eye(d, dtype=np.int64) for d in M.dims)
        basis = self.hom_basis(M, N)
        h = len(basis)
        if h != self._hom_dim(M, M) or h != self._hom_dim(N, N):
            return None
        stacks = self._hom_stacks(basis, N.dims, M.dims)
        rng = np.random.default_rng(20240611)
        coeffs = rng.integers(0, self.q, size=(self.budget.iso_samples, h))
        ok = self._count_invertible(stacks, coeffs)
        if ok.any():
            c = coeffs[int(np.argmax(ok))]
            return tuple((np.tensordot(c, st, axes=(0, 0)) % self.q) for st in stacks)
        _check("isomorphism search", self.q ** h, self.budget.max_enumeration)
        self.counters["iso_exhaustive"] += 1
        for coeffs in la.coefficient_batches(h, self.q):
            ok = self._count_invertible(stacks, coeffs)
            if ok.any():
                c = coeffs[int(np.argmax(ok))]
                return tuple((np.tensordot(c, st, axes=(0, 0)) % self.q) for st in stacks)
        return None

    def is_isomorphic(self, M, N) -> bool:
        if isinstance(M, IsoClass) or isinstance(N, IsoClass):
            return self.classify(M) == self.classify(N)
        return self.find_isomorphism(M, N) is not None

    # -- classification ------------------------------------------------------------
    def _simple_probes(self) -> list[Representation]:
        if self._probes is None:
            probes = []
            for i in self.quiver.vertices:
                g = self.quiver.loops(i)
                lams = list(itertools.product(range(self.q), repeat=g)) if self.q ** g <= 9 else [(0,) * g]
                probes.extend(self.simple(i, lam) for lam in lams)
            self._probes = probes
        return self._probes

    def fingerprint(self, M: Representation):
        q = self.q
        if self._jordan_type:
            if not self.quiver.arrows:
                return ("dims", M.dims)
            return ("jordan", M.dims, elementary_divisors(M.mats[0], q))
        fp = [M.dims, self._hom_dim(M, M)]
        ranks = []
        for w in self._words:
            prod = None
            for a in w:
                prod = M.mats[a] if prod is None else (M.mats[a] @ prod) % q
            ranks.append(la.np_rank(prod, q) if prod.size else 0)
        fp.append(tuple(ranks))
        loopr = []
        for a in self._loops:
            x = M.mats[a]
            n = x.shape[0]
            for c in range(q):
                y = (x - c * np.eye(n, dtype=np.int64)) % q
                loopr.append((la.np_rank(y, q), la.np_rank((y @ y) % q, q)) if n else (0, 0))
        fp.append(tuple(loopr))
        fp.append(tuple((self._hom_dim(S, M), self._hom_dim(M, S)) for S in self._simple_probes()))
        return tuple(fp)

    def _label(self, fp, ordinal: int) -> str:
        if fp[0] == "dims":
            return "d%s" % (list(fp[1]),) if sum(fp[1]) else "0"
        if fp[0] == "jordan":
            if not fp[2]:
                return "0"
            return " ".join("[%s:%s]" % (_poly_str(f), ",".join(map(str, parts))) for f, parts in fp[2])
        if sum(fp[0]) == 0:
            return "0"
        digest = hashlib.sha1(repr(fp).encode()).hexdigest()[:8]
        return "d%s#%s%s" % (list(fp[0]), digest, "" if ordinal == 0 else "/%d" % ordinal)

    def classify(self, M) -> IsoClass:
        if isinstance(M, IsoClass):
            if M.category_id != self.id:
                return self.classify(M.rep)
            return M
        if M.quiver != self.quiver or M.q != self.q:
            raise ValueError("representation belongs to a different category")
        hit = self._memo.get(M.key)
        if hit is not None:
            return hit
        fp = self.fingerprint(M)
        complete = self._jordan_type
        with self._lock:
            hit = self._memo.get(M.key)
            if hit is not None:
                return hit
            cands = self._by_fp.setdefault(fp, [])
            found = None
            for c in cands:
                if complete or self.find_isomorphism(M, c.rep) is not None:
                    found = c
                    break
            if found is None:
                found = IsoClass(self.id, len(self._classes), M, fp, self._label(fp, len(cands)))
                self._classes.append(found)
                cands.append(found)
                self._memo[M.key] = found
                self.counters["classes"] += 1
            else:
                self._memo[M.key] = found
        return found

    @property
    def classes(self) -> list[IsoClass]:
        return list(self._classes)

    # -- subobjects ------------------------------------------------------------------
    def subobjects(self, Z) -> Iterator[tuple[tuple[np.ndarray, ...], Representation, Representation]]:
        """All subrepresentations as (subspace tuple, sub, quotient)."""
        Z = _rep(Z)
        q = self.q
        size = 1
        for d in Z.dims:
            size *= la.count_subspaces(d, q)
        _check("subspace scan", size, self.budget.max_subspaces)
        arrows = self.quiver.arrow_indices
        n = self.quiver.n
        per_vertex = [[U for k in range(d + 1) for U in la.np_subspaces(d, k, q)] for d in Z.dims]
        checks_at = [[a for a, (s, t) in enumerate(arrows) if max(s, t) == v] for v in range(n)]
        chosen: list = [None] * n

        def rec(v):
            if v == n:
                tup = tuple(chosen)
                sub, quot = sub_and_quotient(Z, tup)
                yield tup, sub, quot
                return
            for U in per_vertex[v]:
                chosen[v] = U
                good = True
                for a in checks_at[v]:
                    s, t = arrows[a]
                    if not _is_invariant(Z.mats[a], chosen[s], chosen[t], q):
                        good = False
                        break
                if good:
                    yield from rec(v + 1)
            chosen[v] = None

        self.counters["subspace_scans"] += 1
        yield from rec(0)

    def subobject_profile(self, Z) -> Counter:
        """Counter mapping (quotient class, sub class) to the number of subobjects."""
        Zc = self.classify(Z)
        key = ("sub", Zc)
        if key not in self._cache:
            prof = Counter()
            for _, sub, quot in self.subobjects(Zc.rep):
                prof[(self.classify(quot), self.classify(sub))] += 1
            self._cache[key] = prof
        return self._cache[key]

    def hall_number(self, X, Y, Z) -> int:
        """F_{XY}^Z = #{L <= Z : L ~ Y, Z/L ~ X}."""
        X, Y, Z = self.classify(X), self.classify(Y), self.classify(Z)
        if tuple(a + b for a, b in zip(X.dims, Y.dims)) != Z.dims:
            return 0
        return self.subobject_profile(Z).get((X, Y), 0)

    def ext_count(self, X, Y, Z) -> Fraction:
        """|Ext^1(X,Y)_Z| / |Hom(X,Y)| = F_{XY}^Z |Aut X| |Aut Y| / |Aut Z|."""
        X, Y, Z = self.classify(X), self.classify(Y), self.classify(Z)
        F = self.hall_number(X, Y, Z)
        if F == 0:
            return Fraction(0)
        return Fraction(F * self.aut_order(X) * self.aut_order(Y), self.aut_order(Z))

    # -- extensions ------------------------------------------------------------------
    def coboundary_map(self, X: Representation, Y: Representation) -> la.BlockLinearMap:
        """h = (h_i: X_i -> Y_i)  |->  (y_a h_s - h_t x_a)_a in C^1(X, Y)."""
        src = [(Y.dims[i], X.dims[i]) for i in range(self.quiver.n)]
        dst = [(Y.dims[t], X.dims[s]) for s, t in self.quiver.arrow_indices]
        L = la.BlockLinearMap(src, dst)
        for a, (s, t) in enumerate(self.quiver.arrow_indices):
            L.add(a, Y.mats[a], s, None, 1)
            L.add(a, None, t, X.mats[a], -1)
        return L

    def extension(self, X: Representation, Y: Representation, eta: Sequence[np.ndarray]) -> Representation:
        """Middle term of 0 -> Y -> E -> X -> 0 with arrows [[y, eta], [0, x]]."""
        mats = []
        for a, (s, t) in enumerate(self.quiver.arrow_indices):
            y, x = Y.mats[a], X.mats[a]
            m = np.zeros((y.shape[0] + x.shape[0], y.shape[1] + x.shape[1]), dtype=np.int64)
            m[:y.shape[0], :y.shape[1]] = y
            m[:y.shape[0], y.shape[1]:] = eta[a]
            m[y.shape[0]:, y.shape[1]:] = x
            mats.append(m)
        return Representation(self.quiver, self.q, [a + b for a, b in zip(Y.dims, X.dims)], mats)

    def ext_representatives(self, X, Y) -> tuple[la.BlockLinearMap, np.ndarray]:
        """(cochain layout, rows spanning a complement of the coboundaries in C^1)."""
        X, Y = _rep(X), _rep(Y)
        L = self.coboundary_map(X, Y)
        n1 = int(L.dst_off[-1])
        B = la.np_row_basis(L.matrix(self.q).T, self.q) if L.ncols and n1 else np.zeros((0, n1), dtype=np.int64)
        comp = la.np_complement(B, self.q, n1)
        return L, comp

    def ext_profile(self, X, Y) -> Counter:
        """Counter of middle-term classes over all of Ext^1(X, Y)."""
        Xc, Yc = self.classify(X), self.classify(Y)
        key = ("ext", Xc, Yc)
        if key in self._cache:
            return self._cache[key]
        L, comp = self.ext_representatives(Xc.rep, Yc.rep)
        h = comp.shape[0]
        assert h == self.ext1_dim(Xc, Yc), "Ext complement disagrees with hom - euler"
        _check("extension scan", self.q ** h, self.budget.max_ext)
        prof = Counter()
        for coeffs in la.coefficient_batches(h, self.q):
            etas = (coeffs @ comp) % self.q if h else np.zeros((1, comp.shape[1]), dtype=np.int64)
            for vec in etas:
                E = self.extension(Xc.rep, Yc.rep, L.split_dst(vec))
                prof[self.classify(E)] += 1
        self.counters["ext_scanned"] += self.q ** h
        self._cache[key] = prof
        return prof

    def ext_count_enum(self, X, Y, Z) -> Fraction:
        """|Ext^1(X,Y)_Z| / |Hom(X,Y)| by enumerating extension classes."""
        X, Y, Z = self.classify(X), self.classify(Y), self.classify(Z)
        return Fraction(self.ext_profile(X, Y).get(Z, 0), self.q ** self.hom_dim(X, Y))

    # -- morphism profiles -------------------------------------------------------------
    def map_profile(self, B, A) -> Counter:
        """#{f: B -> A with ker f ~ P, coker f ~ Q}, keyed by (P, Q).

        Uses sum_I F^B_{I,P} F^A_{Q,I} |Aut I|: a morphism is a quotient of B
        identified with a subobject of A.
        """
        Bc, Ac = self.classify(B), self.classify(A)
        key = ("maps", Bc, Ac)
        if key in self._cache:
            return self._cache[key]
        out = Counter()
        pa = self.subobject_profile(Ac)
        by_sub: dict = {}
        for (Qc, Ic), f in pa.items():
            by_sub.setdefault(Ic, []).append((Qc, f))
        for (Ic, Pc), f1 in self.subobject_profile(Bc).items():
            if Ic not in by_sub:
                continue
            aut = self.aut_order(Ic)
            for Qc, f2 in by_sub[Ic]:
                out[(Pc, Qc)] += f1 * f2 * aut
        self._cache[key] = out
        return out

    def kernel_cokernel(self, B: Representation, A: Representation, f: Sequence[np.ndarray]):
        q = self.q
        ker = []
        img = []
        for fi, db, da in zip(f, B.dims, A.dims):
            if db == 0:
                ker.append(np.zeros((0, 0), dtype=np.int64))
            elif da == 0:
                ker.append(np.eye(db, dtype=np.int64))
            else:
                ker.append(la.np_row_basis(la.np_nullspace(fi, q), q))
            img.append(la.np_row_basis(fi.T % q, q) if db and da else np.zeros((0, da), dtype=np.int64))
        return restrict(B, ker), quotient(A, img)

    def map_profile_enum(self, B, A) -> Counter:
        """Same as map_profile, by scanning Hom(B, A)."""
        B, A = _rep(B), _rep(A)
        basis = self.hom_basis(B, A)
        h = len(basis)
        _check("hom scan", self.q ** h, self.budget.max_enumeration)
        stacks = self._hom_stacks(basis, A.dims, B.dims)
        out = Counter()
        for coeffs in la.coefficient_batches(h, self.q):
            for c in coeffs:
                f = [np.tensordot(c, st, axes=(0, 0)) % self.q if st.shape[0] else np.zeros(st.shape[1:], dtype=np.int64)
                     for st in stacks]
                K, C = self.kernel_cokernel(B, A, f)
                out[(self.classify(K), self.classify(C))] += 1
        return out

    # -- enumeration -------------------------------------------------------------------
    def matrix_tuples(self, dims: Sequence[int]) -> Iterator[Representation]:
        shapes = [(dims[t], dims[s]) for s, t in self.quiver.arrow_indices]
        n = sum(r * c for r, c in shapes)
        _check("matrix tuple enumeration", self.q ** n, self.budget.max_tuples)
        offs = np.cumsum([0] + [r * c for r, c in shapes])
        for batch in la.coefficient_batches(n, self.q):
            for vec in batch:
                yield Representation(self.quiver, self.q, dims,
                                     [vec[offs[k]:offs[k + 1]].reshape(shapes[k]) for k in range(len(shapes))])

    def enumerate_reps(self, dims: Sequence[int], nilpotent_only: bool = False) -> list[IsoClass]:
        """All iso classes of the given dimension vector, sorted deterministically."""
        dims = tuple(dims)
        key = ("enum", dims, nilpotent_only)
        if key in self._cache:
            return self._cache[key]
        seen = set()
        for M in self.matrix_tuples(dims):
            if nilpotent_only and not M.is_nilpotent():
                continue
            seen.add(self.classify(M))
        out = sorted(seen)
        self._cache[key] = out
        return out

    def enumerate_up_to(self, total: int, nilpotent_only: bool = False) -> list[IsoClass]:
        out = []
        for t in range(total + 1):
            for dims in dimension_vectors(self.quiver.n, t):
                out.extend(self.enumerate_reps(dims, nilpotent_only))
        return out


def dimension_vectors(n: int, total: int) -> Iterator[tuple[int, ...]]:
    for c in itertools.product(range(total + 1), repeat=n):
        if sum(c) == total:
            yield c


def gl_product_order(dims: Sequence[int], q: int) -> int:
    out = 1
    for d in dims:
        out *= la.gl_order(d, q)
    return out


def _rep(M) -> Representation:
    return M.rep if isinstance(M, IsoClass) else M
