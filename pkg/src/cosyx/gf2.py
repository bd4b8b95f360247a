"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers used as bitsets: bit ``j``
holds coordinate ``j``.  Python integers are packed machine words internally, so
XOR, AND and popcount run word-parallel without a per-bit loop.

Elimination always pivots on the lowest-index column still available, which
makes every echelon form, kernel basis and quotient basis reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError


def popcount(x: int) -> int:
    return x.bit_count()


def support(x: int) -> list[int]:
    """Sorted indices of the set bits of ``x``."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def from_support(indices: Iterable[int]) -> int:
    x = 0
    for i in indices:
        x ^= 1 << i
    return x


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class Gf2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise InputError(f"bits do not fit in a vector of length {self.length}")

    @classmethod
    def from_support(cls, length: int, indices: Iterable[int]) -> "Gf2Vector":
        return cls(length, from_support(indices))

    @classmethod
    def from_dense(cls, entries: Sequence[int]) -> "Gf2Vector":
        return cls(len(entries), from_support(i for i, e in enumerate(entries) if int(e) & 1))

    @property
    def support(self) -> list[int]:
        return support(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.length != other.length:
            raise InputError("vector lengths differ")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[self.support] = 1
        return out


@dataclass(frozen=True)
class Gf2Matrix:
    """Dense F2 matrix; ``rows[i]`` is the bitset of row ``i``."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise InputError("row count does not match nrows")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise InputError("row has bits beyond ncols")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_dense(cls, array) -> "Gf2Matrix":
        a = np.asarray(array, dtype=np.int64) & 1
        if a.ndim != 2:
            raise InputError("expected a 2-d array")
        nrows, ncols = a.shape
        rows = tuple(from_support(np.flatnonzero(a[i]).tolist()) for i in range(nrows))
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> "Gf2Matrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in support(col):
                rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "Gf2Matrix":
        return Gf2Matrix.from_columns(self.ncols, self.rows)

    def column(self, j: int) -> int:
        bit = 1 << j
        return from_support(i for i, r in enumerate(self.rows) if r & bit)

    def columns(self) -> list[int]:
        return list(self.T.rows)

    def matvec(self, x: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.nrows:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for i in support(r):
                acc ^= other.rows[i]
            out.append(acc)
        return Gf2Matrix(self.nrows, other.ncols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def col_weights(self) -> list[int]:
        return [c.bit_count() for c in self.columns()]

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i, support(r)] = 1
        return out


# ---------------------------------------------------------------------------
# elimination


def echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced echelon basis of span(vectors), keyed by pivot (lowest set bit).

    Each stored row has a 1 in its pivot column and 0 in every other pivot
    column, so the result is the unique reduced row echelon form.
    """
    piv: dict[int, int] = {}
    for v in vectors:
        insert(piv, v)
    return piv


def insert(piv: dict[int, int], v: int) -> int:
    """Add ``v`` to an echelon basis in place; returns its reduced remainder."""
    v = reduce(piv, v)
    if v:
        p = (v & -v).bit_length() - 1
        bit = 1 << p
        for q, r in piv.items():
            if r & bit:
                piv[q] = r ^ v
        piv[p] = v
    return v


def reduce(piv: dict[int, int], v: int) -> int:
    """Reduce ``v`` against an echelon basis from :func:`echelon`.

    Stored rows vanish on every other pivot column, so one pass suffices.
    """
    for p, r in piv.items():
        if (v >> p) & 1:
            v ^= r
    return v


def rank(m: Gf2Matrix | Sequence[int]) -> int:
    rows = m.rows if isinstance(m, Gf2Matrix) else m
    return len(echelon(rows))


def in_span(piv: dict[int, int], v: int) -> bool:
    return reduce(piv, v) == 0


def span_basis(vectors: Iterable[int]) -> list[int]:
    """RREF basis rows sorted by pivot."""
    piv = echelon(vectors)
    return [piv[p] for p in sorted(piv)]


def kernel_basis(m: Gf2Matrix) -> list[int]:
    """Basis of {x : Mx = 0}, one vector per free column in ascending order."""
    piv = echelon(m.rows)
    free = [j for j in range(m.ncols) if j not in piv]
    basis = []
    for f in free:
        x = 1 << f
        fb = 1 << f
        for p, r in piv.items():
            if r & fb:
                x |= 1 << p
        basis.append(x)
    return basis


def solve(m: Gf2Matrix, b: Gf2Vector | int) -> tuple[int, list[int]] | None:
    """Solve ``Mx = b``.

    Returns ``(x, kernel_basis)`` with free variables of ``x`` set to zero, or
    ``None`` when the system is inconsistent.
    """
    if isinstance(b, Gf2Vector):
        if b.length != m.nrows:
            raise InputError(f"rhs length {b.length} != rows {m.nrows}")
        b = b.bits
    elif b >> m.nrows:
        raise InputError("rhs has bits beyond the row count")
    aug_bit = 1 << m.ncols
    piv: dict[int, int] = {}
    for i, r in enumerate(m.rows):
        v = r | (aug_bit if (b >> i) & 1 else 0)
        v = reduce(piv, v)
        if not v:
            continue
        if v == aug_bit:
            return None
        p = (v & -v).bit_length() - 1
        bit = 1 << p
        for q, row in piv.items():
            if row & bit:
                piv[q] = row ^ v
        piv[p] = v
    x = 0
    for p, r in piv.items():
        if r & aug_bit:
            x |= 1 << p
    mask = aug_bit - 1
    kernel = []
    for f in range(m.ncols):
        if f in piv:
            continue
        v = 1 << f
        for p, r in piv.items():
            if (r & mask) >> f & 1:
                v |= 1 << p
        kernel.append(v)
    return x, kernel


def quotient_basis(z: Sequence[int], b: Sequence[int]) -> list[int]:
    """Members of ``z`` whose classes form a basis of span(z)/span(b).

    Vectors are taken from ``z`` in order, first fit, so the output is
    reproducible.  Raises :class:`InputError` when span(b) is not inside span(z).
    """
    zpiv = echelon(z)
    for v in b:
        if not in_span(zpiv, v):
            raise InputError("span(B) is not contained in span(Z)")
    piv = echelon(b)
    out = []
    for v in z:
        if insert(piv, v):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# dense text format: "rows cols" followed by one 0/1 string per row


def dumps_dense(m: Gf2Matrix) -> str:
    lines = [f"{m.nrows} {m.ncols}"]
    for r in m.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(m.ncols)))
    return "\n".join(lines) + "\n"


def loads_dense(text: str) -> Gf2Matrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise InputError("empty matrix file")
    try:
        nrows, ncols = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise InputError(f"bad header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != nrows:
        raise InputError(f"expected {nrows} rows, found {len(body)}")
    rows = []
    for ln in body:
        if len(ln) != ncols or set(ln) - {"0", "1"}:
            raise InputError(f"bad row {ln!r}")
        rows.append(from_support(j for j, ch in enumerate(ln) if ch == "1"))
    return Gf2Matrix(nrows, ncols, tuple(rows))
