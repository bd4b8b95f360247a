"""Tensor products of based complexes with bigrade bookkeeping.

Product k-cells are pairs (σ, τ) with dim σ + dim τ = k.  They are ordered
bigrade-major: every (0, k) cell first, then (1, k-1), and so on, and inside a
block by (index of σ, index of τ).  A block is therefore a contiguous slice,
and as a matrix it has rows indexed by the Y-cells and columns by the X-cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .complex import BasedComplex, Cochain, dumps
from .errors import InputError


class TensorComplex(BasedComplex):
    """A product complex that remembers its factors and bigrades.

    ``factors`` lists the source complexes of an iterated left-fold product;
    ``multi[k][c]`` is the multi-index of product cell ``c`` and
    ``origin[k][c]`` the tuple of factor-cell indices.
    """

    factors: tuple[BasedComplex, ...]
    left: BasedComplex
    right: BasedComplex

    @property
    def base(self) -> BasedComplex:
        return self

    def block(self, k: int, i: int) -> tuple[int, int, int, int]:
        """(offset, |X_i|, |Y_{k-i}|, end) of bigrade (i, k-i) in dimension k."""
        return self._blocks[k][i]

    def bigrades(self, k: int) -> list[tuple[int, int]]:
        return [(i, k - i) for i in sorted(self._blocks.get(k, {}))]

    def bigrade(self, k: int, c: int) -> tuple[int, int]:
        for i, (off, nx, ny, end) in self._blocks[k].items():
            if off <= c < end:
                return (i, k - i)
        raise InputError(f"cell {c} out of range in dimension {k}")

    def pair(self, k: int, c: int) -> tuple[int, int, int]:
        """(i, σ, τ) for product cell c."""
        for i, (off, nx, ny, end) in self._blocks[k].items():
            if off <= c < end:
                s, t = divmod(c - off, ny)
                return i, s, t
        raise InputError(f"cell {c} out of range in dimension {k}")

    def cell(self, i: int, j: int, s: int, t: int) -> int:
        off, nx, ny, _ = self._blocks[i + j][i]
        return off + s * ny + t

    def block_mask(self, k: int, i: int) -> int:
        off, nx, ny, end = self._blocks[k][i]
        return ((1 << (end - off)) - 1) << off

    def to_matrix(self, a: Cochain, i: int) -> np.ndarray:
        """Bigrade (i, k-i) block of ``a`` as a |Y_{k-i}| x |X_i| 0/1 array."""
        k = a.k
        if i not in self._blocks.get(k, {}):
            raise InputError(f"no bigrade ({i},{k - i}) in dimension {k}")
        off, nx, ny, end = self._blocks[k][i]
        bits = (a.bits >> off) & ((1 << (end - off)) - 1)
        out = np.zeros((ny, nx), dtype=np.uint8)
        for c in gf2.support(bits):
            s, t = divmod(c, ny)
            out[t, s] = 1
        return out

    def from_matrix(self, k: int, i: int, m: np.ndarray) -> Cochain:
        off, nx, ny, end = self._blocks[k][i]
        m = np.asarray(m)
        if m.shape != (ny, nx):
            raise InputError(f"expected shape {(ny, nx)}, got {m.shape}")
        bits = 0
        for t, s in zip(*np.nonzero(m & 1)):
            bits |= 1 << (off + int(s) * ny + int(t))
        return self.cochain(k, bits)

    def bigrade_lines(self) -> list[str]:
        out = []
        for k in range(0, self.dim + 1):
            for c in range(self.n(k)):
                out.append(f"bigrade {k} {c} : " + " ".join(str(x) for x in self.multi[k][c]))
        return out


def tensor(X: BasedComplex, Y: BasedComplex) -> TensorComplex:
    """X ⊗ Y with ∂(σ, τ) = (∂σ, τ) + (σ, ∂τ)."""
    if X.augmented or Y.augmented:
        raise InputError("tensor factors must not be augmented")
    dim = X.dim + Y.dim
    blocks: dict[int, dict[int, tuple[int, int, int, int]]] = {}
    for k in range(0, dim + 1):
        off = 0
        blocks[k] = {}
        for i in range(0, k + 1):
            j = k - i
            nx, ny = X.n(i), Y.n(j)
            if i > X.dim or j > Y.dim or nx == 0 or ny == 0:
                continue
            blocks[k][i] = (off, nx, ny, off + nx * ny)
            off += nx * ny

    def idx(i, j, s, t):
        off, nx, ny, _ = blocks[i + j][i]
        return off + s * ny + t

    down: dict[int, list[int]] = {}
    for k in range(0, dim + 1):
        masks = []
        for i, (off, nx, ny, end) in blocks[k].items():
            j = k - i
            xd = X.down(i)
            yd = Y.down(j)
            for s in range(nx):
                for t in range(ny):
                    m = 0
                    if i > 0:
                        for s2 in gf2.support(xd[s]):
                            m ^= 1 << idx(i - 1, j, s2, t)
                    if j > 0:
                        for t2 in gf2.support(yd[t]):
                            m ^= 1 << idx(i, j - 1, s, t2)
                    masks.append(m)
        down[k] = masks
    T = TensorComplex.__new__(TensorComplex)
    BasedComplex.__init__(T, down, None, augmented=False, check=False)
    T._blocks = blocks
    T.left, T.right = X, Y
    fx = X.factors if isinstance(X, TensorComplex) else (X,)
    fy = Y.factors if isinstance(Y, TensorComplex) else (Y,)
    T.factors = fx + fy
    multi: dict[int, list[tuple[int, ...]]] = {}
    origin: dict[int, list[tuple[int, ...]]] = {}
    for k in range(0, dim + 1):
        mk, ok = [], []
        for i, (off, nx, ny, end) in blocks[k].items():
            j = k - i
            for s in range(nx):
                ms = X.multi[i][s] if isinstance(X, TensorComplex) else (i,)
                os_ = X.origin[i][s] if isinstance(X, TensorComplex) else (s,)
                for t in range(ny):
                    mt = Y.multi[j][t] if isinstance(Y, TensorComplex) else (j,)
                    ot = Y.origin[j][t] if isinstance(Y, TensorComplex) else (t,)
                    mk.append(ms + mt)
                    ok.append(os_ + ot)
        multi[k] = mk
        origin[k] = ok
    T.multi = multi
    T.origin = origin
    return T


def tensor_power(X: BasedComplex, l: int) -> BasedComplex:
    """Left fold (...(X ⊗ X) ⊗ ...) ⊗ X with l factors."""
    if l < 1:
        raise InputError("tensor power needs l >= 1")
    out = X
    for _ in range(l - 1):
        out = tensor(out, X)
    return out


def component(T: TensorComplex, a: Cochain, bigrade: tuple[int, int]) -> Cochain:
    i, j = bigrade
    if i + j != a.k or i < 0 or j < 0:
        raise InputError(f"bigrade {bigrade} does not sum to {a.k}")
    if i not in T._blocks.get(a.k, {}):
        return T.cochain(a.k, 0)
    return T.cochain(a.k, a.bits & T.block_mask(a.k, i))


def delta_x(T: TensorComplex, a: Cochain) -> Cochain:
    """δ^X ⊗ Id applied to ``a``: maps block (i, j) into (i+1, j)."""
    return _partial_delta(T, a, left=True)


def delta_y(T: TensorComplex, a: Cochain) -> Cochain:
    """Id ⊗ δ^Y applied to ``a``: maps block (i, j) into (i, j+1)."""
    return _partial_delta(T, a, left=False)


def _partial_delta(T: TensorComplex, a: Cochain, left: bool) -> Cochain:
    k = a.k
    X, Y = T.left, T.right
    out = 0
    for c in gf2.support(a.bits):
        i, s, t = T.pair(k, c)
        j = k - i
        if left:
            for s2 in gf2.support(X.delta(i, 1 << s)):
                out ^= 1 << T.cell(i + 1, j, s2, t)
        else:
            for t2 in gf2.support(Y.delta(j, 1 << t)):
                out ^= 1 << T.cell(i, j + 1, s, t2)
    return T.cochain(k + 1, out)


def dumps_tensor(T: TensorComplex) -> str:
    return dumps(T, extra=T.bigrade_lines())
