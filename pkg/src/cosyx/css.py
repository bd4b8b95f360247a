"""Quantum CSS codes from the k-th homology/cohomology pair of a complex.

H_X is the matrix of ∂_k (rows indexed by (k-1)-cells) and H_Z is the
transpose of ∂_{k+1} (rows indexed by (k+1)-cells).  Both act on the n = |X_k|
qubits, and ∂_k∂_{k+1} = 0 makes them orthogonal: H_X·H_Zᵀ = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import gf2
from .complex import HAMMING, BasedComplex
from .errors import BudgetExceeded, InputError
from .expansion import cosystole, systole
from .gf2 import Gf2Matrix
from .homology import betti
from .search import default_budget, mitm_limit, mitm_min, span_min
from .tensor import tensor
from .zoo import cycle


@dataclass
class CssCode:
    n: int
    HX: Gf2Matrix
    HZ: Gf2Matrix
    k_dim: int
    source: tuple[str, int]
    complex: BasedComplex | None = None
    dX: int | None = None
    dZ: int | None = None

    @property
    def d(self) -> int | None:
        if self.dX is None or self.dZ is None:
            return None
        return min(self.dX, self.dZ)

    def orthogonal(self) -> bool:
        return (self.HX @ self.HZ.T).is_zero()


def from_complex(X: BasedComplex, k: int, name: str = "X") -> CssCode:
    """Extract the code of the k-th (homology, cohomology) pair."""
    if k < max(X.kmin, 0) or k > X.dim:
        raise InputError(f"degree {k} out of range for a complex of dimension {X.dim}")
    HX = X.boundary(k) if k - 1 >= X.kmin else Gf2Matrix.zeros(0, X.n(k))
    HZ = X.coboundary(k) if k + 1 <= X.dim else Gf2Matrix.zeros(0, X.n(k))
    n = X.n(k)
    code = CssCode(n, HX, HZ, n - gf2.rank(HX) - gf2.rank(HZ), (name, k), X)
    if not code.orthogonal():
        raise InputError("H_X·H_Zᵀ ≠ 0: the input is not a chain complex")
    return code


@dataclass
class CodeParams:
    n: int
    k_dim: int
    dX: int | None
    dZ: int | None
    hx_row: int
    hx_col: int
    hz_row: int
    hz_col: int
    note: str = ""

    @property
    def d(self) -> int | None:
        if self.dX is None or self.dZ is None:
            return None
        return min(self.dX, self.dZ)

    def lines(self) -> list[str]:
        def show(v):
            return "unknown" if v is None else str(v)

        out = [f"n={self.n}", f"k={self.k_dim}", f"dX={show(self.dX)}", f"dZ={show(self.dZ)}", f"d={show(self.d)}"]
        out += [f"hx_max_row={self.hx_row}", f"hx_max_col={self.hx_col}"]
        out += [f"hz_max_row={self.hz_row}", f"hz_max_col={self.hz_col}"]
        out.append(f"max_stabilizer_weight={max(self.hx_row, self.hz_row)}")
        if self.note:
            out.append(f"note={self.note}")
        return out


def _maxw(ws: list[int]) -> int:
    return max(ws) if ws else 0


def code_params(code: CssCode, budget: int | None = None, workers: int = 1) -> CodeParams:
    """Exact distances via the systole/cosystole searches under Hamming weight.

    dX = Sys_k and dZ = CoSys^k.  When a search does not fit the budget the
    distance is left as None and the reason is recorded.
    """
    X, k = code.complex, code.source[1]
    if X is None:
        raise InputError("code_params needs the source complex; use matrix_distances for bare matrices")
    dX = dZ = None
    notes = []
    if code.k_dim == 0:
        notes.append("no logical qubits")
    else:
        try:
            s = systole(X, k, HAMMING, budget=budget, workers=workers)
            dX = int(s.value)
        except BudgetExceeded as exc:
            notes.append(f"dX over budget ({exc})")
        try:
            c = cosystole(X, k, HAMMING, budget=budget, workers=workers)
            dZ = int(c.value)
        except BudgetExceeded as exc:
            notes.append(f"dZ over budget ({exc})")
    code.dX, code.dZ = dX, dZ
    return CodeParams(
        code.n,
        code.k_dim,
        dX,
        dZ,
        _maxw(code.HX.row_weights()),
        _maxw(code.HX.col_weights()),
        _maxw(code.HZ.row_weights()),
        _maxw(code.HZ.col_weights()),
        "; ".join(notes),
    )


def matrix_distance(H1: Gf2Matrix, H2: Gf2Matrix, budget: int | None = None) -> int | None:
    """min |x| over x ∈ ker H1 outside the row space of H2, from the matrices alone.

    Enumerates ker H1 when it fits the budget and otherwise runs meet in the
    middle with syndromes H1 and signatures given by representatives of
    ker H2 / rowspace H1.  None when the quotient is trivial.
    """
    budget = default_budget() if budget is None else budget
    n = H1.ncols
    ker = gf2.kernel_basis(H1)
    row = gf2.span_basis(H2.rows)
    reps = gf2.quotient_basis(ker, row)
    if not reps:
        return None
    ones = [1] * n
    if len(ker) <= budget:
        res = span_min(row + reps, n, ones, skip_low=len(row))
        return res[0]
    dual = gf2.quotient_basis(gf2.kernel_basis(H2), gf2.span_basis(H1.rows))
    sig = [0] * n
    for i, v in enumerate(dual):
        for c in gf2.support(v):
            sig[c] |= 1 << i
    syn = list(H1.columns())
    res = mitm_min(n, syn, sig, ones, mitm_limit(budget))
    return res.weight


def matrix_distances(code: CssCode, budget: int | None = None) -> tuple[int | None, int | None]:
    """(dX, dZ) computed from H_X and H_Z only."""
    return matrix_distance(code.HX, code.HZ, budget), matrix_distance(code.HZ, code.HX, budget)


# ---------------------------------------------------------------- export


def dumps_alist(H: Gf2Matrix) -> str:
    """alist text: sizes, max weights, weights, then zero-padded 1-based indices."""
    cols = H.columns()
    col_sets = [[i + 1 for i in gf2.support(c)] for c in cols]
    row_sets = [[j + 1 for j in gf2.support(r)] for r in H.rows]
    mc = _maxw([len(c) for c in col_sets])
    mr = _maxw([len(r) for r in row_sets])
    out = [f"{H.ncols} {H.nrows}", f"{mc} {mr}"]
    out.append(" ".join(str(len(c)) for c in col_sets))
    out.append(" ".join(str(len(r)) for r in row_sets))
    for c in col_sets:
        out.append(" ".join(map(str, c + [0] * (mc - len(c)))))
    for r in row_sets:
        out.append(" ".join(map(str, r + [0] * (mr - len(r)))))
    return "\n".join(out) + "\n"


def loads_alist(text: str) -> Gf2Matrix:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        rows = [0] * m
        for j, ln in enumerate(lines[4 : 4 + n]):
            for t in ln:
                i = int(t)
                if i:
                    rows[i - 1] |= 1 << j
    except (IndexError, ValueError) as exc:
        raise InputError("malformed alist file") from exc
    return Gf2Matrix(m, n, tuple(rows))


# ---------------------------------------------------------------- balancing


@dataclass
class Prediction:
    length: Fraction
    distance: Fraction
    dimension: Fraction
    linear_distance: float
    linear_dimension: float

    def lines(self) -> list[str]:
        return [
            f"predicted_length={self.length}",
            f"predicted_distance={self.distance}",
            f"predicted_dimension={self.dimension}",
            f"predicted_linear_distance={self.linear_distance:.6g}",
            f"predicted_linear_dimension={self.linear_dimension:.6g}",
            "predicted_caveat=asymptotic scalings evaluated with unit constants",
        ]


def predict_balanced(m, sys, cosys) -> Prediction:
    """Formula values of the balanced scalings, all constants set to one."""
    m, sys, cosys = Fraction(m), Fraction(sys), Fraction(cosys)
    if sys <= 0:
        raise InputError("the systole must be positive")
    if cosys < sys:
        raise InputError("balancing needs cosys >= sys")
    length = m * cosys / sys
    return Prediction(length, cosys, cosys / sys, math.sqrt(length * sys), math.sqrt(length / sys))


@dataclass
class BalanceReport:
    m: int
    sys: int | None
    cosys: int | None
    L: int
    prediction: Prediction | None
    params: CodeParams
    h_in: int
    h_out: int

    def lines(self) -> list[str]:
        def show(v):
            return "unknown" if v is None else str(v)

        out = [f"m={self.m}", f"sys={show(self.sys)}", f"cosys={show(self.cosys)}", f"L={self.L}"]
        out += [f"h_in={self.h_in}", f"h_out={self.h_out}"]
        if self.prediction is not None:
            out += self.prediction.lines()
        out += ["code_" + ln for ln in self.params.lines()]
        return out


def balance(X: BasedComplex, k: int, L: int | None = None, budget: int | None = None, workers: int = 1) -> BalanceReport:
    """Tensor X with cycle(L) and measure the degree-(k+1) code.

    By Künneth h_{k+1}(X ⊗ cycle(L)) ≥ h_k(X)·h_1(cycle(L)) = h_k(X).  L
    defaults to round(CoSys^k / Sys_k), clamped to at least 3.
    """
    h_in = betti(X, k)
    if h_in == 0:
        raise InputError(f"h_{k}(X) = 0: nothing to balance")
    s = c = None
    try:
        s = int(systole(X, k, HAMMING, budget=budget, workers=workers).value)
        c = int(cosystole(X, k, HAMMING, budget=budget, workers=workers).value)
    except BudgetExceeded:
        if L is None:
            raise
    if L is None:
        L = max(3, round(c / s))
    if L < 3:
        raise InputError("cycle length must be at least 3")
    P = tensor(X, cycle(L))
    code = from_complex(P, k + 1, name=f"X*cycle{L}")
    params = code_params(code, budget=budget, workers=workers)
    pred = predict_balanced(X.n(k), s, c) if s is not None and c is not None and c >= s else None
    return BalanceReport(X.n(k), s, c, L, pred, params, h_in, code.k_dim)
