"""Based chain complexes over F2.

A complex stores, for every dimension ``k``, an ordered list of cells and for
each cell the bitmask of its boundary in dimension ``k - 1`` (``down``) and of
its coboundary in dimension ``k + 1`` (``up``).  Chains and cochains are bitsets
over the cells of one dimension, identified with their supports.

Simplicial complexes carry vertex-set labels.  An augmented complex has one
extra cell of dimension -1 (the empty simplex) that every vertex bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import gf2
from .errors import InputError, ValidationError
from .gf2 import Gf2Matrix, Gf2Vector

HAMMING = "hamming"
NORMALIZED = "normalized"
TOPCELL = "topcell"
WEIGHT_KINDS = (HAMMING, NORMALIZED, TOPCELL)


def vertex_key(v) -> tuple:
    """Sort key that puts integers (numerically) before strings."""
    if isinstance(v, (int, np.integer)):
        return (0, int(v), "")
    return (1, 0, str(v))


def label_key(label: Sequence) -> tuple:
    return tuple(vertex_key(v) for v in label)


def parse_vertex(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


@dataclass(frozen=True)
class Cochain:
    """A (co)chain of dimension ``k``: a bitset over the ``k``-cells."""

    k: int
    v: Gf2Vector

    @property
    def bits(self) -> int:
        return self.v.bits

    @property
    def support(self) -> list[int]:
        return self.v.support

    @property
    def size(self) -> int:
        return self.v.weight

    def __xor__(self, other: "Cochain") -> "Cochain":
        if self.k != other.k:
            raise InputError("cochain dimensions differ")
        return Cochain(self.k, self.v ^ other.v)

    def __bool__(self) -> bool:
        return bool(self.v)


@dataclass(frozen=True)
class WeightFn:
    """Per-cell weights ``num[i] / den`` for one dimension of one complex."""

    kind: str
    k: int
    num: tuple[int, ...]
    den: int

    def of(self, bits: int) -> Fraction:
        return Fraction(self.raw(bits), self.den)

    def raw(self, bits: int) -> int:
        """Numerator of the weight of ``bits``; the denominator is ``self.den``."""
        if self.kind == HAMMING:
            return bits.bit_count()
        num = self.num
        return sum(num[i] for i in gf2.support(bits))

    def array(self) -> np.ndarray:
        return np.asarray(self.num, dtype=np.int64)

    def cell(self, i: int) -> Fraction:
        return Fraction(self.num[i], self.den)


@dataclass
class ValidationReport:
    ok: bool
    witness: tuple[int, int] | None
    upper: dict[int, int] = field(default_factory=dict)
    lower: dict[int, int] = field(default_factory=dict)
    pure: bool = True
    simplicial: bool = False

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}"]
        if self.witness is not None:
            out.append(f"witness={self.witness[0]}:{self.witness[1]}")
        for k in sorted(self.upper):
            out.append(f"p_{k}={self.upper[k]}")
        for k in sorted(self.lower):
            out.append(f"q_{k}={self.lower[k]}")
        out.append(f"pure={int(self.pure)}")
        out.append(f"simplicial={int(self.simplicial)}")
        return out


class BasedComplex:
    """An F2 chain complex with distinguished cell bases.

    ``down[k][i]`` is the boundary of the ``i``-th ``k``-cell as a bitmask
    over ``(k-1)``-cells.  Construct through :func:`from_facets`,
    :func:`from_simplices` or :func:`from_boundaries`.
    """

    def __init__(
        self,
        down: dict[int, Sequence[int]],
        labels: dict[int, Sequence] | None = None,
        augmented: bool = False,
        check: bool = True,
    ):
        kmin = -1 if augmented else 0
        dims = [k for k, v in down.items() if len(v) and k >= 0]
        self.dim = max(dims) if dims else -1
        self.augmented = augmented
        self.kmin = kmin
        self._down: dict[int, tuple[int, ...]] = {}
        self._labels: dict[int, tuple] = {}
        for k in range(kmin, self.dim + 1):
            masks = tuple(int(m) for m in down.get(k, ()))
            if k == kmin and any(masks):
                raise InputError(f"cells of dimension {k} cannot have a boundary")
            self._down[k] = masks
            lab = labels.get(k) if labels else None
            if lab is not None and len(lab) != len(masks):
                raise InputError(f"label count mismatch in dimension {k}")
            self._labels[k] = tuple(lab) if lab is not None else (None,) * len(masks)
        if augmented:
            if len(self._down[-1]) != 1:
                raise InputError("an augmented complex has exactly one (-1)-cell")
        for k in range(kmin + 1, self.dim + 1):
            limit = 1 << self.n(k - 1)
            for i, m in enumerate(self._down[k]):
                if m < 0 or m >= limit:
                    raise InputError(f"boundary of cell ({k},{i}) refers to missing cells")
        self._up: dict[int, tuple[int, ...]] = {}
        for k in range(kmin, self.dim + 1):
            up = [0] * self.n(k)
            for j, m in enumerate(self._down.get(k + 1, ())):
                for i in gf2.support(m):
                    up[i] |= 1 << j
            self._up[k] = tuple(up)
        self._index: dict[int, dict] | None = None
        self._simplicial: bool | None = None
        self._weights: dict = {}
        if check:
            w = self.dd_witness()
            if w is not None:
                raise ValidationError(f"boundary of boundary is nonzero at cell {w}", witness=w)

    # ------------------------------------------------------------ basic access

    def n(self, k: int) -> int:
        return len(self._down.get(k, ()))

    def counts(self) -> tuple[int, ...]:
        return tuple(self.n(k) for k in range(0, self.dim + 1))

    def dims(self) -> range:
        return range(self.kmin, self.dim + 1)

    def labels(self, k: int) -> tuple:
        return self._labels.get(k, ())

    def label(self, k: int, i: int):
        return self._labels[k][i]

    def down(self, k: int) -> tuple[int, ...]:
        return self._down.get(k, ())

    def up(self, k: int) -> tuple[int, ...]:
        return self._up.get(k, ())

    def full(self, k: int) -> int:
        return (1 << self.n(k)) - 1

    def boundary(self, k: int) -> Gf2Matrix:
        """Matrix of the boundary map from k-chains to (k-1)-chains."""
        return Gf2Matrix(self.n(k - 1), self.n(k), tuple(self._up.get(k - 1, (0,) * self.n(k - 1))))

    def coboundary(self, k: int) -> Gf2Matrix:
        """Matrix of the coboundary map from k-cochains to (k+1)-cochains."""
        return Gf2Matrix(self.n(k + 1), self.n(k), tuple(self._down.get(k + 1, ())))

    def cochain(self, k: int, cells: Iterable[int] | int = ()) -> Cochain:
        bits = cells if isinstance(cells, int) else gf2.from_support(cells)
        return Cochain(k, Gf2Vector(self.n(k), bits))

    def delta(self, k: int, bits: int) -> int:
        """Coboundary of a k-cochain given as a bitset."""
        out = 0
        up = self._up.get(k, ())
        while bits:
            low = bits & -bits
            out ^= up[low.bit_length() - 1]
            bits ^= low
        return out

    def partial(self, k: int, bits: int) -> int:
        """Boundary of a k-chain given as a bitset."""
        out = 0
        down = self._down.get(k, ())
        while bits:
            low = bits & -bits
            out ^= down[low.bit_length() - 1]
            bits ^= low
        return out

    # ------------------------------------------------------------ structure

    def dd_witness(self) -> tuple[int, int] | None:
        for k in range(self.kmin + 2, self.dim + 1):
            for i, m in enumerate(self._down[k]):
                if self.partial(k - 1, m):
                    return (k, i)
        return None

    @property
    def is_simplicial(self) -> bool:
        if self._simplicial is None:
            self._simplicial = self._check_simplicial()
        return self._simplicial

    def _check_simplicial(self) -> bool:
        for k in self.dims():
            for lab in self._labels[k]:
                if lab is None or len(lab) != k + 1 or len(set(lab)) != k + 1:
                    return False
        index = self.index
        for k in range(self.kmin + 1, self.dim + 1):
            for i, lab in enumerate(self._labels[k]):
                want = 0
                for j in range(len(lab)):
                    face = lab[:j] + lab[j + 1:]
                    if face not in index[k - 1]:
                        return False
                    want |= 1 << index[k - 1][face]
                if want != self._down[k][i]:
                    return False
        return True

    @property
    def index(self) -> dict[int, dict]:
        """Label -> position lookup per dimension (labels are sorted tuples)."""
        if self._index is None:
            self._index = {
                k: {lab: i for i, lab in enumerate(self._labels[k]) if lab is not None}
                for k in self.dims()
            }
        return self._index

    def find(self, label: Iterable) -> tuple[int, int]:
        """(k, index) of the simplex with the given vertex set."""
        lab = tuple(sorted(label, key=vertex_key))
        k = len(lab) - 1
        try:
            return k, self.index[k][lab]
        except KeyError:
            raise InputError(f"no cell with vertices {lab}") from None

    def top_cover(self) -> dict[int, int]:
        """Bitmask per dimension of cells contained in some top-dimensional cell."""
        cover = {self.dim: self.full(self.dim)}
        for k in range(self.dim, max(self.kmin, 0), -1):
            acc = 0
            for i in gf2.support(cover[k]):
                acc |= self._down[k][i]
            cover[k - 1] = acc
        return cover

    @property
    def is_pure(self) -> bool:
        cover = self.top_cover()
        return all(cover.get(k, 0) == self.full(k) for k in range(0, self.dim + 1))

    def top_counts(self, k: int) -> list[int]:
        """Number of top-dimensional cells containing each k-cell."""
        if k == self.dim:
            return [1] * self.n(k)
        counts = [0] * self.n(k)
        if k == -1:
            return [self.n(self.dim)] * self.n(-1)
        if self.is_simplicial:
            index = self.index[k]
            for lab in self._labels[self.dim]:
                for face in itertools.combinations(lab, k + 1):
                    counts[index[face]] += 1
            return counts
        for t in range(self.n(self.dim)):
            layer = 1 << t
            for j in range(self.dim, k, -1):
                acc = 0
                for i in gf2.support(layer):
                    acc |= self._down[j][i]
                layer = acc
            for i in gf2.support(layer):
                counts[i] += 1
        return counts

    def validate(self) -> ValidationReport:
        w = self.dd_witness()
        upper = {k: max((m.bit_count() for m in self._up[k]), default=0) for k in range(0, self.dim + 1)}
        lower = {k: max((m.bit_count() for m in self._down[k]), default=0) for k in range(0, self.dim + 1)}
        if self.augmented:
            lower[0] = max((m.bit_count() for m in self._down[0]), default=0)
        return ValidationReport(
            ok=w is None,
            witness=w,
            upper=upper,
            lower=lower,
            pure=self.is_pure,
            simplicial=self.is_simplicial if w is None else False,
        )

    def upper_locality(self, k: int) -> int:
        return max((m.bit_count() for m in self._up.get(k, ())), default=0)

    def lower_locality(self, k: int) -> int:
        return max((m.bit_count() for m in self._down.get(k, ())), default=0)

    # ------------------------------------------------------------ weights

    def weight_fn(self, kind: str, k: int) -> WeightFn:
        key = (kind, k)
        if key in self._weights:
            return self._weights[key]
        n = self.n(k)
        if kind == HAMMING:
            wf = WeightFn(kind, k, (1,) * n, 1)
        elif kind == NORMALIZED:
            wf = WeightFn(kind, k, (1,) * n, max(n, 1))
        elif kind == TOPCELL:
            if not self.is_pure:
                raise InputError("TopCell weight requires a pure complex")
            d = self.dim
            den = comb(d + 1, k + 1) * self.n(d)
            wf = WeightFn(kind, k, tuple(self.top_counts(k)), den)
        else:
            raise InputError(f"unknown weight kind {kind!r}")
        self._weights[key] = wf
        return wf

    def weight(self, a: Cochain, kind: str = HAMMING) -> Fraction:
        return self.weight_fn(kind, a.k).of(a.bits)

    def weight_ratio_bound(self, k: int) -> int:
        """B with TopCell/NormalizedHamming weight ratios in [1/B, B].

        Valid for pure simplicial complexes: each k-cell lies in between 1 and
        prod(p_i, i = k..d-1) top cells, and each top cell has C(d+1, k+1)
        k-faces.
        """
        return prod(self.upper_locality(i) for i in range(k, self.dim)) if k < self.dim else 1

    # ------------------------------------------------------------ derived complexes

    def augmented_copy(self) -> "BasedComplex":
        if self.augmented:
            return self
        down = dict(self._down)
        labels = dict(self._labels)
        down[-1] = (0,)
        labels[-1] = ((),)
        down[0] = (1,) * self.n(0)
        return BasedComplex(down, labels, augmented=True, check=False)

    def unaugmented_copy(self) -> "BasedComplex":
        if not self.augmented:
            return self
        down = {k: v for k, v in self._down.items() if k >= 0}
        labels = {k: v for k, v in self._labels.items() if k >= 0}
        down[0] = (0,) * self.n(0)
        return BasedComplex(down, labels, augmented=False, check=False)

    def __repr__(self) -> str:
        aug = ", augmented" if self.augmented else ""
        return f"{type(self).__name__}(counts={self.counts()}{aug})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasedComplex):
            return NotImplemented
        return (
            self.augmented == other.augmented
            and self._down == other._down
            and self._labels == other._labels
        )

    __hash__ = None  # type: ignore[assignment]


def differential(X: BasedComplex, a: Cochain, direction: str = "up") -> Cochain:
    """Apply the coboundary (``up``) or boundary (``down``) to ``a``."""
    k = a.k
    if k < X.kmin or k > X.dim:
        raise InputError(f"dimension {k} out of range")
    if a.v.length != X.n(k):
        raise InputError("cochain length does not match the cell count")
    if direction == "up":
        if k + 1 > X.dim:
            return X.cochain(k + 1, 0)
        return X.cochain(k + 1, X.delta(k, a.bits))
    if direction == "down":
        if k - 1 < X.kmin:
            raise InputError("boundary below the lowest dimension")
        return X.cochain(k - 1, X.partial(k, a.bits))
    raise InputError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------- builders


def from_simplices(simplices: Iterable[Iterable], augmented: bool = False) -> BasedComplex:
    """Complex on a downward-closed family of simplices (closure is taken)."""
    cells: set[tuple] = set()
    for s in simplices:
        lab = tuple(sorted(set(s), key=vertex_key))
        if not lab:
            raise InputError("empty facet")
        if lab in cells:
            continue
        for r in range(1, len(lab) + 1):
            cells.update(itertools.combinations(lab, r))
    return _from_closed(cells, augmented)


def _from_closed(cells: set[tuple], augmented: bool) -> BasedComplex:
    by_dim: dict[int, list[tuple]] = {}
    for c in cells:
        by_dim.setdefault(len(c) - 1, []).append(c)
    labels: dict[int, list[tuple]] = {}
    down: dict[int, list[int]] = {}
    index: dict[int, dict] = {}
    for k in sorted(by_dim):
        labs = sorted(by_dim[k], key=label_key)
        labels[k] = labs
        index[k] = {lab: i for i, lab in enumerate(labs)}
        if k == 0:
            down[0] = [1 if augmented else 0] * len(labs)
            continue
        prev = index[k - 1]
        masks = []
        for lab in labs:
            m = 0
            for j in range(k + 1):
                m |= 1 << prev[lab[:j] + lab[j + 1:]]
            masks.append(m)
        down[k] = masks
    if augmented:
        down[-1] = [0]
        labels[-1] = [()]
    X = BasedComplex(down, labels, augmented=augmented, check=False)
    X._index = {k: index.get(k, {}) for k in X.dims()}
    if augmented:
        X._index[-1] = {(): 0}
    X._simplicial = True
    return X


def from_facets(facets: Iterable[Iterable], augmented: bool = False) -> BasedComplex:
    """All nonempty subsets of the facets, sorted by (dimension, vertex labels)."""
    return from_simplices(facets, augmented=augmented)


def from_boundaries(
    boundaries: dict[int, Sequence[Iterable[int] | int]],
    counts: dict[int, int] | None = None,
    labels: dict[int, Sequence] | None = None,
    augmented: bool = False,
    check: bool = True,
) -> BasedComplex:
    """Complex from explicit boundary supports.

    ``boundaries[k][i]`` lists the (k-1)-cells in the boundary of cell (k, i).
    Raises :class:`ValidationError` with witness ``(k, i)`` when ∂∂ ≠ 0,
    unless ``check`` is off (then :meth:`BasedComplex.validate` reports it).
    """
    down: dict[int, list[int]] = {}
    counts = dict(counts or {})
    for k, rows in boundaries.items():
        down[k] = [r if isinstance(r, int) else gf2.from_support(r) for r in rows]
    for k, n in counts.items():
        down.setdefault(k, [0] * n)
        if len(down[k]) != n:
            raise InputError(f"dimension {k}: {len(down[k])} boundaries for {n} cells")
    if augmented:
        down.setdefault(-1, [0])
        if 0 in down and not any(down[0]):
            down[0] = [1] * len(down[0])
    return BasedComplex(down, labels, augmented=augmented, check=check)


def validate(X: BasedComplex) -> ValidationReport:
    return X.validate()


# ---------------------------------------------------------------- file formats


def dumps(X: BasedComplex, extra: list[str] | None = None) -> str:
    lines = [f"dim {X.dim} augmented {int(X.augmented)}"]
    for k in range(0, X.dim + 1):
        lines.append(f"cells {k} {X.n(k)}")
        for i, lab in enumerate(X.labels(k)):
            if lab is None:
                lines.append(str(i))
            else:
                lines.append(" ".join([str(i), *(str(v) for v in lab)]))
    for k in range(1, X.dim + 1):
        for i, m in enumerate(X.down(k)):
            lines.append(f"bnd {k} {i} : " + " ".join(str(j) for j in gf2.support(m)))
    if extra:
        lines.extend(extra)
    return "\n".join(lines) + "\n"


def loads(text: str, check: bool = True) -> BasedComplex:
    """Parse the complex file format; a file without header is a facet list."""
    rows = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if ln:
            rows.append(ln.split())
    if not rows:
        raise InputError("empty complex file")
    if rows[0][0] != "dim":
        return from_facets([parse_vertex(t) for t in r] for r in rows)
    head = rows[0]
    if len(head) != 4 or head[2] != "augmented":
        raise InputError(f"bad header {' '.join(head)!r}")
    augmented = head[3] == "1"
    ids: dict[int, dict[str, int]] = {}
    labels: dict[int, list] = {}
    bnd: dict[int, dict[int, list[int]]] = {}
    pos = 1
    try:
        while pos < len(rows):
            r = rows[pos]
            if r[0] == "cells":
                k, n = int(r[1]), int(r[2])
                ids[k] = {}
                labels[k] = []
                for j in range(n):
                    cr = rows[pos + 1 + j]
                    ids[k][cr[0]] = j
                    labels[k].append(tuple(parse_vertex(t) for t in cr[1:]) if len(cr) > 1 else None)
                pos += n + 1
            elif r[0] == "bnd":
                k = int(r[1])
                if r[3] != ":":
                    raise InputError(f"bad boundary line {' '.join(r)!r}")
                i = ids[k][r[2]]
                bnd.setdefault(k, {})[i] = [ids[k - 1][t] for t in r[4:]]
                pos += 1
            elif r[0] == "bigrade":
                pos += 1
            else:
                raise InputError(f"unexpected line {' '.join(r)!r}")
    except (IndexError, KeyError, ValueError) as exc:
        raise InputError(f"malformed complex file near line {pos + 1}") from exc
    boundaries = {}
    counts = {k: len(v) for k, v in ids.items()}
    for k, n in counts.items():
        if k <= 0:
            continue
        boundaries[k] = [bnd.get(k, {}).get(i, []) for i in range(n)]
    if any(lab is None for labs in labels.values() for lab in labs):
        lab_arg = None
    else:
        lab_arg = {k: v for k, v in labels.items()}
    X = from_boundaries(boundaries, counts=counts, labels=lab_arg, augmented=augmented, check=check)
    return X


def read(path: str) -> BasedComplex:
    with open(path) as fh:
        return loads(fh.read())


def write(X: BasedComplex, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(X))
