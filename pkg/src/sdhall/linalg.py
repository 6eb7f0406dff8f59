"""Dense linear algebra over the prime field F_p.

Matrices are tuples of row tuples with entries in ``range(p)``.  A matrix with
zero rows is the empty tuple; callers that need the column count of such a
matrix carry it separately (representations know their dimension vectors).
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

Matrix = tuple  # tuple[tuple[int, ...], ...]


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def scalar_matrix(n: int, c: int, p: int) -> Matrix:
    c %= p
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def to_matrix(rows: Iterable[Iterable[int]], p: int) -> Matrix:
    return tuple(tuple(int(x) % p for x in row) for row in rows)


def mat_mul(a: Matrix, b: Matrix, p: int, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b`` mod p.

    ``inner``/``cols`` are only needed when a factor has no rows and the shape
    cannot be read off the tuples.
    """
    if cols is None:
        cols = len(b[0]) if b else 0
    if not a:
        return ()
    if not b:
        return tuple((0,) * cols for _ in a)
    bt = tuple(zip(*b)) if cols else ()
    out = []
    for row in a:
        out.append(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) if cols else ())
    return tuple(out)


def mat_add(a: Matrix, b: Matrix, p: int) -> Matrix:
    return tuple(tuple((x + y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix, p: int) -> Matrix:
    return tuple(tuple((x - y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c: int, p: int) -> Matrix:
    return tuple(tuple((c * x) % p for x in row) for row in a)


def mat_neg(a: Matrix, p: int) -> Matrix:
    return tuple(tuple((-x) % p for x in row) for row in a)


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*a))


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def block(blocks: Sequence[Sequence[Matrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``None`` entries are zero blocks."""
    out = []
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            row: list[int] = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                row.extend(blk[r] if blk is not None else (0,) * cs)
            out.append(tuple(row))
    return tuple(out)


def sub_block(a: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    return tuple(tuple(row[c0:c1]) for row in a[r0:r1])


def rref(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                mr = m[r]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], mr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix, p: int) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: Matrix, p: int, ncols: int) -> list[tuple[int, ...]]:
    """Basis of {x : a x = 0} as a list of vectors of length ``ncols``."""
    if ncols == 0:
        return []
    if not a:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    red, piv = rref(a, p, ncols)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, piv):
            v[pc] = (-row[f]) % p
        basis.append(tuple(v))
    return basis


def row_basis(vectors: Iterable[Sequence[int]], p: int, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical (RREF) basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors]
    if not vecs or ncols == 0:
        return ()
    red, _ = rref(vecs, p, ncols)
    return tuple(tuple(r) for r in red)


def extend_basis(basis: Sequence[Sequence[int]], p: int, n: int) -> list[tuple[int, ...]]:
    """Standard unit vectors completing ``basis`` to a basis of F_p^n."""
    red, piv = rref(basis, p, n) if basis else ([], [])
    pivset = set(piv)
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n) if j not in pivset]


def inverse(a: Matrix, p: int) -> Matrix:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug, p, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return tuple(tuple(row[n:]) for row in red[:n])


def is_invertible(a: Matrix, p: int) -> bool:
    n = len(a)
    return n == 0 or rank(a, p) == n


def coordinates(vec: Sequence[int], basis_cols: Matrix, p: int) -> tuple[int, ...]:
    """Solve ``basis_cols @ x = vec`` (basis given as columns of a matrix)."""
    n = len(basis_cols)
    k = len(basis_cols[0]) if basis_cols else 0
    aug = [list(basis_cols[i]) + [vec[i]] for i in range(n)]
    red, piv = rref(aug, p, k + 1)
    if k in piv:
        raise ValueError("vector not in span")
    x = [0] * k
    for row, pc in zip(red, piv):
        x[pc] = row[k]
    return tuple(x)


def columns_to_matrix(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def image_basis(a: Matrix, p: int, nrows: int, ncols: int) -> tuple[tuple[int, ...], ...]:
    """RREF basis of the column space of ``a`` (vectors of length nrows)."""
    if nrows == 0 or ncols == 0:
        return ()
    return row_basis(transpose(a), p, nrows)


def kernel_basis(a: Matrix, p: int, nrows: int, ncols: int) -> tuple[tuple[int, ...], ...]:
    if ncols == 0:
        return ()
    if nrows == 0:
        return tuple(tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols))
    return row_basis(nullspace(a, p, ncols), p, ncols)


def span_sum(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int, n: int) -> tuple[tuple[int, ...], ...]:
    return row_basis(list(a) + list(b), p, n)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gl_order(n: int, q: int) -> int:
    out = 1
    for t in range(n):
        out *= q ** n - q ** t
    return out


def subspaces(n: int, k: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All k-dimensional subspaces of F_p^n, each as its RREF basis."""
    for pivots in itertools.combinations(range(n), k):
        free_slots = []
        for r, pc in enumerate(pivots):
            later = set(pivots[r + 1:])
            for c in range(pc + 1, n):
                if c not in later:
                    free_slots.append((r, c))
        for vals in itertools.product(range(p), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free_slots, vals):
                rows[r][c] = v
            yield tuple(tuple(row) for row in rows)


def all_subspaces(n: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for k in range(n + 1):
        yield from subspaces(n, k, p)


def span_elements(basis: Sequence[Sequence[int]], p: int) -> Iterator[tuple[int, ...]]:
    n = len(basis[0]) if basis else 0
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                for i, x in enumerate(b):
                    v[i] = (v[i] + c * x) % p
        yield tuple(v)


# -- batched invertibility (numpy) -------------------------------------------

def batch_invertible(stack: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of invertible matrices in an (N, n, n) integer stack."""
    a = np.array(stack, dtype=np.int64) % p
    count, n, _ = a.shape
    ok = np.ones(count, dtype=bool)
    if n == 0:
        return ok
    inv_table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv_table[x] = pow(x, -1, p)
    idx = np.arange(count)
    for c in range(n):
        sub = a[:, c:, c]
        nz = sub != 0
        has = nz.any(axis=1)
        ok &= has
        piv = np.argmax(nz, axis=1) + c
        rows_c = a[idx, c, :].copy()
        rows_p = a[idx, piv, :].copy()
        a[idx, c, :] = rows_p
        a[idx, piv, :] = rows_c
        pv = a[:, c, c]
        a[:, c, :] = (a[:, c, :] * inv_table[pv][:, None]) % p
        factors = a[:, :, c].copy()
        factors[:, c] = 0
        a = (a - factors[:, :, None] * a[:, c, :][:, None, :]) % p
    return ok


def combination_stack(basis: Sequence[np.ndarray], coeffs: np.ndarray, p: int) -> np.ndarray:
    """Evaluate sum_k coeffs[:, k] * basis[k] for a batch of coefficient rows."""
    b = np.stack(basis).astype(np.int64)  # (h, r, c)
    return np.tensordot(coeffs.astype(np.int64), b, axes=(1, 0)) % p


def coefficient_batches(h: int, p: int, chunk: int = 1 << 15) -> Iterator[np.ndarray]:
    """All vectors of F_p^h in batches, as int64 arrays of shape (m, h)."""
    total = p ** h
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        nums = np.arange(start, stop, dtype=np.int64)
        out = np.empty((stop - start, h), dtype=np.int64)
        for k in range(h):
            out[:, k] = nums % p
            nums //= p
        yield out


# -- numpy elimination ---------------------------------------------------------

def np_rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """RREF of an integer array mod p; returns (nonzero rows, pivot columns)."""
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape if m.ndim == 2 else (0, 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        f = m[:, c].copy()
        f[r] = 0
        if f.any():
            m = (m - np.outer(f, m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def np_rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(np_rref(a, p)[1])


def np_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of {x : a @ x = 0}."""
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    red, piv = np_rref(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, pc in zip(red, piv):
            out[k, pc] = (-row[f]) % p
    return out


def np_row_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    return np_rref(a, p)[0]


def np_inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    red, piv = np_rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return red[:n, n:]


def np_complement(basis: np.ndarray, p: int, n: int) -> np.ndarray:
    """Unit vectors spanning a complement of the row space of ``basis`` in F_p^n."""
    piv = set(np_rref(basis, p)[1]) if basis.shape[0] else set()
    eye = np.eye(n, dtype=np.int64)
    return eye[[j for j in range(n) if j not in piv]] if n > len(piv) else np.zeros((0, n), dtype=np.int64)


def np_subspaces(n: int, k: int, p: int) -> Iterator[np.ndarray]:
    """k-dimensional subspaces of F_p^n as (k, n) RREF arrays."""
    for rows in subspaces(n, k, p):
        yield np.array(rows, dtype=np.int64).reshape(k, n)


def count_subspaces(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


class BlockLinearMap:
    """A linear map between direct sums of matrix spaces.

    Source and target are lists of matrix shapes; ``add(dst, L, src, R, c)``
    registers the contribution ``dst += c * L @ src @ R``.  Vectorisation is
    row-major, so the block of the assembled matrix is ``kron(L, R.T)``.
    """

    def __init__(self, src_shapes: Sequence[tuple[int, int]], dst_shapes: Sequence[tuple[int, int]]):
        self.src_shapes = list(src_shapes)
        self.dst_shapes = list(dst_shapes)
        self.src_off = np.cumsum([0] + [r * c for r, c in self.src_shapes])
        self.dst_off = np.cumsum([0] + [r * c for r, c in self.dst_shapes])
        self.mat = np.zeros((int(self.dst_off[-1]), int(self.src_off[-1])), dtype=np.int64)

    @property
    def ncols(self) -> int:
        return int(self.src_off[-1])

    def add(self, dst: int, left: np.ndarray | None, src: int, right: np.ndarray | None, coef: int = 1) -> None:
        dr, dc = self.dst_shapes[dst]
        sr, sc = self.src_shapes[src]
        if dr * dc == 0 or sr * sc == 0:
            return
        left = np.eye(sr, dtype=np.int64) if left is None else np.asarray(left, dtype=np.int64)
        right = np.eye(sc, dtype=np.int64) if right is None else np.asarray(right, dtype=np.int64)
        assert left.shape == (dr, sr) and right.shape == (sc, dc), (left.shape, right.shape, (dr, dc), (sr, sc))
        blk = np.kron(left, right.T) * coef
        d0, s0 = self.dst_off[dst], self.src_off[src]
        self.mat[d0:d0 + dr * dc, s0:s0 + sr * sc] += blk

    def matrix(self, p: int) -> np.ndarray:
        return self.mat % p

    def split_src(self, vec: np.ndarray) -> list[np.ndarray]:
        return [np.asarray(vec[self.src_off[k]:self.src_off[k + 1]], dtype=np.int64).reshape(r, c)
                for k, (r, c) in enumerate(self.src_shapes)]

    def split_dst(self, vec: np.ndarray) -> list[np.ndarray]:
        return [np.asarray(vec[self.dst_off[k]:self.dst_off[k + 1]], dtype=np.int64).reshape(r, c)
                for k, (r, c) in enumerate(self.dst_shapes)]
