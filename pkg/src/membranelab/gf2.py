"""Bit-packed GF(2) linear algebra.

Matrices are stored row-major as numpy uint64 arrays of shape (rows, words);
bit j of word w is column 64*w + j (little-endian within words). Row
operations are word-wise XOR, which is the dominant cost of every entropy
and canonical-form computation in the package.
"""

from __future__ import annotations

import numpy as np

WORD = 64
_ONE = np.uint64(1)

__all__ = [
    "WORD", "nwords", "zeros", "from_bool", "to_bool", "get_bit", "set_bit",
    "get_col", "xor_col", "rank", "rank_profile", "rref", "reduce_row",
    "in_rowspace", "nullspace", "transpose", "popcount_rows", "to_bytes",
]


def nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, nwords(cols)), dtype=np.uint64)


def from_bool(b: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) boolean/0-1 array into packed rows."""
    b = np.asarray(b, dtype=np.uint8)
    if b.ndim == 1:
        b = b[None, :]
    rows, cols = b.shape
    out = zeros(rows, cols)
    for w in range(nwords(cols)):
        chunk = b[:, w * WORD:(w + 1) * WORD]
        weights = (_ONE << np.arange(chunk.shape[1], dtype=np.uint64))
        out[:, w] = (chunk.astype(np.uint64) * weights).sum(axis=1)
    return out


def to_bool(m: np.ndarray, cols: int) -> np.ndarray:
    """Unpack packed rows into a (rows, cols) uint8 array."""
    rows = m.shape[0]
    out = np.empty((rows, cols), dtype=np.uint8)
    for w in range(nwords(cols)):
        span = min(WORD, cols - w * WORD)
        shifts = np.arange(span, dtype=np.uint64)
        out[:, w * WORD:w * WORD + span] = \
            ((m[:, w][:, None] >> shifts[None, :]) & _ONE).astype(np.uint8)
    return out


def get_bit(row: np.ndarray, col: int) -> int:
    w, s = divmod(col, WORD)
    return int((row[w] >> np.uint64(s)) & _ONE)


def set_bit(row: np.ndarray, col: int, value: int) -> None:
    w, s = divmod(col, WORD)
    if value:
        row[w] |= _ONE << np.uint64(s)
    else:
        row[w] &= ~(_ONE << np.uint64(s))


def get_col(m: np.ndarray, col: int) -> np.ndarray:
    """Column bits of all rows, as a uint64 0/1 vector."""
    w, s = divmod(col, WORD)
    return (m[:, w] >> np.uint64(s)) & _ONE


def xor_col(m: np.ndarray, col: int, bits: np.ndarray) -> None:
    """XOR a 0/1 vector into one column of all rows."""
    w, s = divmod(col, WORD)
    m[:, w] ^= bits.astype(np.uint64) << np.uint64(s)


def _eliminate(m: np.ndarray, col_order, reduce_above: bool, limit: int | None = None):
    """In-place Gaussian elimination following col_order.

    Returns (pivot columns, prefix_ranks) with prefix_ranks[i] = rank of the
    submatrix of the first i+1 columns in col_order.
    """
    rows = m.shape[0]
    r = 0
    pivots: list[int] = []
    prefix = np.empty(len(col_order), dtype=np.int64)
    for ci, c in enumerate(col_order):
        if r < rows:
            w, s = divmod(int(c), WORD)
            colbits = (m[r:, w] >> np.uint64(s)) & _ONE
            nz = np.nonzero(colbits)[0]
            if nz.size:
                p = r + int(nz[0])
                if p != r:
                    m[[r, p]] = m[[p, r]]
                rest = r + nz[1:]
                if rest.size:
                    m[rest] ^= m[r]
                if reduce_above and r:
                    above = np.nonzero((m[:r, w] >> np.uint64(s)) & _ONE)[0]
                    if above.size:
                        m[above] ^= m[r]
                pivots.append(int(c))
                r += 1
        prefix[ci] = r
        if limit is not None and ci + 1 >= limit:
            return pivots, prefix[:ci + 1]
    return pivots, prefix


def rank(m: np.ndarray, cols: int) -> int:
    work = m.copy()
    pivots, _ = _eliminate(work, range(cols), reduce_above=False)
    return len(pivots)


def rank_profile(m: np.ndarray, col_order, limit: int | None = None) -> np.ndarray:
    """Prefix ranks along an arbitrary column order (matrix left untouched)."""
    work = m.copy()
    _, prefix = _eliminate(work, list(col_order), reduce_above=False, limit=limit)
    return prefix


def rref(m: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (unique for a given row space).

    Zero rows are dropped; remaining rows are ordered by pivot column.
    """
    work = m.copy()
    pivots, _ = _eliminate(work, range(cols), reduce_above=True)
    return work[: len(pivots)].copy(), pivots


def reduce_row(row: np.ndarray, echelon: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Residual of row after reduction against an echelon basis."""
    res = row.copy()
    for i, c in enumerate(pivots):
        if get_bit(res, c):
            res ^= echelon[i]
    return res


def in_rowspace(row: np.ndarray, echelon: np.ndarray, pivots: list[int]) -> bool:
    return not reduce_row(row, echelon, pivots).any()


def nullspace(m: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Packed basis (as rows) of {x : m @ x = 0} over GF(2)."""
    red, pivots = rref(m[:rows], cols)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = zeros(len(free), cols)
    for bi, f in enumerate(free):
        set_bit(basis[bi], f, 1)
        for ri, p in enumerate(pivots):
            if get_bit(red[ri], f):
                set_bit(basis[bi], p, 1)
    return basis


def transpose(m: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return from_bool(to_bool(m[:rows], cols).T)


def popcount_rows(m: np.ndarray) -> np.ndarray:
    return np.bitwise_count(m).sum(axis=1)


def to_bytes(m: np.ndarray) -> bytes:
    """Row-major packed bits, little-endian within words (documented layout)."""
    return np.ascontiguousarray(m, dtype="<u8").tobytes()
