"""Homology and cohomology over F2, class membership and Künneth checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import gf2
from .complex import BasedComplex, Cochain
from .errors import InputError
from .gf2 import Gf2Matrix
from .tensor import tensor


def _rank_down(X: BasedComplex, k: int) -> int:
    """rank of ∂_k (zero outside the stored range)."""
    if k <= X.kmin or k > X.dim:
        return 0
    cache = X.__dict__.setdefault("_rank_cache", {})
    if k not in cache:
        cache[k] = gf2.rank(X.down(k))
    return cache[k]


def betti(X: BasedComplex, k: int, reduced: bool = False) -> int:
    """dim ker ∂_k - rank ∂_{k+1}; with ``reduced`` the augmented complex is used."""
    if reduced:
        X = X.augmented_copy()
    if k < X.kmin or k > X.dim:
        return 0
    return X.n(k) - _rank_down(X, k) - _rank_down(X, k + 1)


def betti_numbers(X: BasedComplex, reduced: bool = False) -> list[int]:
    Y = X.augmented_copy() if reduced else X
    return [betti(Y, k) for k in range(Y.kmin, Y.dim + 1)]


@dataclass
class CohomologyBasis:
    k: int
    reps: list[Cochain]
    betti: int
    coboundaries: list[int] = field(default_factory=list)


def cocycle_space(X: BasedComplex, k: int) -> list[int]:
    return gf2.kernel_basis(X.coboundary(k))


def coboundary_space(X: BasedComplex, k: int) -> list[int]:
    """Spanning set of B^k: coboundaries of the (k-1)-cells."""
    return [m for m in X.up(k - 1) if m] if k - 1 >= X.kmin else []


def cycle_space(X: BasedComplex, k: int) -> list[int]:
    return gf2.kernel_basis(X.boundary(k))


def boundary_space(X: BasedComplex, k: int) -> list[int]:
    return [m for m in X.down(k + 1) if m]


def cohomology_basis(X: BasedComplex, k: int) -> CohomologyBasis:
    z = cocycle_space(X, k)
    b = gf2.span_basis(coboundary_space(X, k))
    reps = gf2.quotient_basis(z, b)
    return CohomologyBasis(k, [X.cochain(k, r) for r in reps], len(reps), b)


def homology_basis(X: BasedComplex, k: int) -> CohomologyBasis:
    z = cycle_space(X, k)
    b = gf2.span_basis(boundary_space(X, k))
    reps = gf2.quotient_basis(z, b)
    return CohomologyBasis(k, [X.cochain(k, r) for r in reps], len(reps), b)


@dataclass
class Classification:
    kind: str  # "not-cocycle" | "coboundary" | "nontrivial"
    witness: Cochain | None = None
    coords: tuple[int, ...] | None = None

    def lines(self) -> list[str]:
        out = [f"class={self.kind}"]
        if self.witness is not None:
            out.append("witness=" + " ".join(map(str, self.witness.support)))
        if self.coords is not None:
            out.append("coords=" + "".join(map(str, self.coords)))
        return out


def coboundary_preimage(X: BasedComplex, a: Cochain) -> int | None:
    """Some γ with δγ = a, or None when ``a`` is not a coboundary."""
    k = a.k
    if k - 1 < X.kmin:
        return 0 if a.bits == 0 else None
    res = gf2.solve(X.coboundary(k - 1), a.bits)
    return None if res is None else res[0]


def classify(X: BasedComplex, a: Cochain, basis: CohomologyBasis | None = None) -> Classification:
    k = a.k
    if k < X.kmin or k > X.dim or a.v.length != X.n(k):
        raise InputError("cochain does not match the complex")
    if X.delta(k, a.bits):
        return Classification("not-cocycle")
    pre = coboundary_preimage(X, a)
    if pre is not None:
        return Classification("coboundary", witness=X.cochain(k - 1, pre) if k - 1 >= X.kmin else None)
    if basis is None:
        basis = cohomology_basis(X, k)
    h = basis.betti
    cols = [r.bits for r in basis.reps] + list(basis.coboundaries)
    M = Gf2Matrix.from_columns(X.n(k), cols)
    res = gf2.solve(M, a.bits)
    assert res is not None, "cocycle outside Z^k"
    x = res[0]
    return Classification("nontrivial", coords=tuple((x >> i) & 1 for i in range(h)))


@dataclass
class KunnethReport:
    ok: bool
    lhs: dict[int, int]
    rhs: dict[int, int]

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}"]
        for k in sorted(self.lhs):
            out.append(f"h_{k}={self.lhs[k]} kunneth_{k}={self.rhs[k]}")
        return out


def kunneth_check(X: BasedComplex, Y: BasedComplex, kmax: int, product: BasedComplex | None = None) -> KunnethReport:
    P = product if product is not None else tensor(X, Y)
    hx = {i: betti(X, i) for i in range(0, kmax + 1)}
    hy = {i: betti(Y, i) for i in range(0, kmax + 1)}
    lhs, rhs = {}, {}
    for k in range(0, kmax + 1):
        lhs[k] = betti(P, k)
        rhs[k] = sum(hx[i] * hy[k - i] for i in range(0, k + 1))
    return KunnethReport(lhs == rhs, lhs, rhs)
