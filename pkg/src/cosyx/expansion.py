"""Exact systoles, cosystoles, cofilling and collective cofilling constants.

All quantities are computed by exhaustive enumeration within a budget and are
returned as exact fractions.  When an instance does not fit the budget a
:class:`BudgetExceeded` error is raised; no estimate is ever returned.

Budget semantics (``budget`` = b):

* a subspace of dimension at most b is enumerated vector by vector;
* (co)systoles of larger spaces use meet in the middle, storing at most
  2**(b-4) subsets;
* collective cofilling evaluates at most 2**(b+2) (tuple, preimage tuple)
  combinations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import gf2
from .complex import HAMMING, BasedComplex, Cochain
from .errors import BudgetExceeded, InputError
from .homology import (
    betti,
    boundary_space,
    coboundary_space,
    cocycle_space,
    cohomology_basis,
    cycle_space,
    homology_basis,
)
from .search import (
    Weigher,
    default_budget,
    from_words,
    mitm_limit,
    mitm_min,
    span_min,
    span_table,
    to_words,
)
from .tensor import tensor


@dataclass
class Extremum:
    """A measured minimum or maximum with its witness."""

    value: Fraction
    witness: Cochain
    method: str = "span"


def _budget(budget: int | None) -> int:
    return default_budget() if budget is None else budget


def _min_nontrivial(X: BasedComplex, k: int, weight: str, budget, method: str, workers: int, co: bool):
    if k < 0 or k > X.dim:
        raise InputError(f"dimension {k} out of range")
    budget = _budget(budget)
    wf = X.weight_fn(weight, k)
    if co:
        z = cocycle_space(X, k)
        b = gf2.span_basis(coboundary_space(X, k))
    else:
        z = cycle_space(X, k)
        b = gf2.span_basis(boundary_space(X, k))
    reps = gf2.quotient_basis(z, b)
    if not reps:
        return None
    dim_z = len(b) + len(reps)
    if method == "auto":
        method = "span" if dim_z <= budget else "mitm"
    if method == "span":
        if dim_z > budget:
            raise BudgetExceeded(
                f"enumerating a {dim_z}-dimensional space exceeds budget {budget}",
                required=dim_z,
                allowed=budget,
            )
        res = span_min(b + reps, X.n(k), wf.num, skip_low=len(b), workers=workers)
        raw, bits = res
    elif method == "mitm":
        n = X.n(k)
        if co:
            syn = list(X.up(k))
            dual = homology_basis(X, k).reps
        else:
            syn = list(X.down(k))
            dual = cohomology_basis(X, k).reps
        sig = [0] * n
        for i, rep in enumerate(dual):
            for c in rep.support:
                sig[c] |= 1 << i
        res = mitm_min(n, syn, sig, list(wf.num), mitm_limit(budget))
        raw, bits = res.weight, res.bits
    else:
        raise InputError(f"unknown method {method!r}")
    return Extremum(Fraction(raw, wf.den), X.cochain(k, bits), method)


def systole(X: BasedComplex, k: int, weight: str = HAMMING, budget: int | None = None,
            method: str = "auto", workers: int = 1) -> Extremum | None:
    """Minimum weight of a k-cycle that is not a boundary (None when h_k = 0)."""
    return _min_nontrivial(X, k, weight, budget, method, workers, co=False)


def cosystole(X: BasedComplex, k: int, weight: str = HAMMING, budget: int | None = None,
              method: str = "auto", workers: int = 1) -> Extremum | None:
    """Minimum weight of a k-cocycle that is not a coboundary (None when h^k = 0)."""
    return _min_nontrivial(X, k, weight, budget, method, workers, co=True)


def layer_weight(X: BasedComplex, k: int, weight: str) -> Fraction:
    return X.weight_fn(weight, k).of(X.full(k))


def cosystolic_bound(X: BasedComplex, k: int, weight: str = HAMMING, budget=None, workers: int = 1) -> Fraction:
    """η_k = CoSys^k / ‖X_k‖, with η_k = 1 when there is no nontrivial class."""
    cs = cosystole(X, k, weight, budget, workers=workers)
    if cs is None:
        return Fraction(1)
    return cs.value / layer_weight(X, k, weight)


# ---------------------------------------------------------------------------
# cofilling


@dataclass
class _Fibers:
    """C^k organised as cosets of Z^k indexed by coboundaries.

    Row ``a`` of ``pre`` is a particular preimage of coboundary ``alpha[a]``;
    the fibre of ``alpha[a]`` is ``pre[a] ^ ztab``.
    """

    k: int
    pre: np.ndarray
    alpha: np.ndarray
    ztab: np.ndarray
    wk: Weigher
    wk1: Weigher
    den_k: int
    den_k1: int
    alpha_w: np.ndarray
    min_pre: np.ndarray | None = None

    @property
    def count(self) -> int:
        return self.pre.shape[0]


def _fibers(X: BasedComplex, k: int, weight: str, budget: int) -> _Fibers:
    if k < X.kmin or k > X.dim:
        raise InputError(f"dimension {k} out of range")
    n = X.n(k)
    if n > budget:
        raise BudgetExceeded(
            f"cofilling enumerates 2^{n} cochains, budget is 2^{budget}", required=n, allowed=budget
        )
    piv: dict[int, int] = {}
    cells = []
    images = []
    for c in range(n):
        img = X.delta(k, 1 << c)
        if gf2.insert(piv, img):
            cells.append(1 << c)
            images.append(img)
    z = cocycle_space(X, k)
    n1 = X.n(k + 1)
    wf_k = X.weight_fn(weight, k)
    wf_k1 = X.weight_fn(weight, k + 1) if k + 1 <= X.dim else None
    pre = span_table(to_words(cells, n)) if cells else np.zeros((1, len(to_words([0], n)[0])), np.uint64)
    alpha = span_table(to_words(images, n1)) if images else np.zeros((1, 1), np.uint64)
    ztab = span_table(to_words(z, n)) if z else np.zeros((1, pre.shape[1]), np.uint64)
    wk = Weigher(wf_k.num, n)
    wk1 = Weigher(wf_k1.num if wf_k1 else (), n1)
    fb = _Fibers(k, pre, alpha, ztab, wk, wk1, wf_k.den, wf_k1.den if wf_k1 else 1, wk1(alpha))
    return fb


def _min_preimages(fb: _Fibers) -> np.ndarray:
    if fb.min_pre is None:
        f = fb.ztab.shape[0]
        step = max(1, (1 << 20) // f)
        out = np.empty(fb.count, dtype=np.int64)
        for s in range(0, fb.count, step):
            block = fb.pre[s : s + step, None, :] ^ fb.ztab[None, :, :]
            out[s : s + step] = fb.wk(block).min(axis=1)
        fb.min_pre = out
    return fb.min_pre


def _best_preimage(fb: _Fibers, a: int) -> int:
    block = fb.pre[a][None, :] ^ fb.ztab
    w = fb.wk(block)
    m = w.min()
    return min(from_words(block[i]) for i in np.flatnonzero(w == m))


def _exact_argmax(num: np.ndarray, den: np.ndarray, keys) -> tuple[Fraction, list[int]]:
    """Exact max of num/den with the indices attaining it."""
    ratio = num / den
    top = ratio.max()
    close = np.flatnonzero(ratio >= top * (1 - 1e-12))
    vals = {int(i): Fraction(int(num[i]), int(den[i])) for i in close}
    best = max(vals.values())
    return best, [i for i, v in vals.items() if v == best]


@dataclass
class CofillingResult:
    value: Fraction
    alpha: Cochain | None
    beta: Cochain | None
    coboundaries: int

    def ratio_ok(self) -> bool:
        return self.value >= 0


def cofilling(X: BasedComplex, k: int, weight: str = HAMMING, budget: int | None = None) -> CofillingResult:
    """μ_k: worst ratio ‖shortest δ-preimage‖ / ‖α‖ over nonzero α in B^{k+1}.

    Returns 0 when B^{k+1} = {0}.  The witness α is the maximiser with the
    smallest bitset; β is its lightest preimage with the smallest bitset.
    """
    budget = _budget(budget)
    fb = _fibers(X, k, weight, budget)
    return _cofilling_from(X, fb)


def _cofilling_from(X: BasedComplex, fb: _Fibers) -> CofillingResult:
    k = fb.k
    if fb.count <= 1:
        return CofillingResult(Fraction(0), None, None, 0)
    mp = _min_preimages(fb)
    num = mp[1:] * fb.den_k1
    den = fb.alpha_w[1:] * fb.den_k
    value, idx = _exact_argmax(num, den, None)
    cands = sorted((from_words(fb.alpha[i + 1]), i + 1) for i in idx)
    abits, a = cands[0]
    beta = _best_preimage(fb, a)
    return CofillingResult(value, X.cochain(k + 1, abits), X.cochain(k, beta), fb.count - 1)


@dataclass
class CollectiveResult:
    k: int
    values: dict[int, Fraction]
    witnesses: dict[int, tuple[tuple[Cochain, ...], tuple[Cochain, ...]]]
    m_max: int

    @property
    def mu(self) -> Fraction:
        return self.values.get(1, Fraction(0))

    def value(self, m: int | None = None) -> Fraction:
        return self.values[self.m_max if m is None else m]


def _collective_evals(count: int, f: int, m: int) -> int:
    return comb(count, m) * f**m


def collective_cofilling(
    X: BasedComplex,
    k: int,
    weight: str = HAMMING,
    m_max: int = 3,
    budget: int | None = None,
    adaptive: bool = False,
) -> CollectiveResult:
    """μ̄_k restricted to collections of at most m coboundaries, for m ≤ m_max.

    Collections are sets of distinct nonzero coboundaries: repeating a member
    changes neither union.  ``values[m]`` is the maximum over all collections
    of size ≤ m.  With ``adaptive`` the largest feasible m is used instead of
    raising when a larger m would exceed the budget.
    """
    if m_max < 1:
        raise InputError("m_max must be at least 1")
    budget = _budget(budget)
    fb = _fibers(X, k, weight, budget)
    base = _cofilling_from(X, fb)
    values = {1: base.value}
    witnesses = {}
    if base.alpha is not None:
        witnesses[1] = ((base.alpha,), (base.beta,))
    else:
        witnesses[1] = ((), ())
    count = fb.count - 1
    f = fb.ztab.shape[0]
    limit = 1 << (budget + 2)
    reached = 1
    for m in range(2, m_max + 1):
        if m > count:
            values[m] = values[m - 1]
            witnesses[m] = witnesses[m - 1]
            reached = m
            continue
        need = _collective_evals(count, f, m)
        if need > limit:
            if adaptive:
                break
            raise BudgetExceeded(
                f"collective cofilling with m={m} needs {need} evaluations", required=need, allowed=limit
            )
        best, wit = _collective_m(X, fb, m)
        if best > values[m - 1]:
            values[m] = best
            witnesses[m] = wit
        else:
            values[m] = values[m - 1]
            witnesses[m] = witnesses[m - 1]
        reached = m
    return CollectiveResult(k, values, witnesses, reached)


def _collective_m(X: BasedComplex, fb: _Fibers, m: int):
    """Best collection of exactly m distinct nonzero coboundaries."""
    count = fb.count - 1
    f = fb.ztab.shape[0]
    best = Fraction(-1)
    best_keys: list[tuple[int, ...]] = []
    alpha, pre, ztab = fb.alpha, fb.pre, fb.ztab
    fibers = pre[:, None, :] ^ ztab[None, :, :]  # (count+1, f, W)
    per_prefix_cap = max(1, (1 << 18) // (f**m))
    for prefix in itertools.combinations(range(1, count + 1), m - 1):
        last0 = prefix[-1] + 1
        if last0 > count:
            continue
        aun = np.zeros(alpha.shape[1], dtype=np.uint64)
        U = fibers[prefix[0]]
        aun = aun | alpha[prefix[0]]
        for a in prefix[1:]:
            U = (U[:, None, :] | fibers[a][None, :, :]).reshape(-1, U.shape[-1])
            aun = aun | alpha[a]
        for s in range(last0, count + 1, per_prefix_cap):
            lasts = np.arange(s, min(count + 1, s + per_prefix_cap))
            unions = U[None, :, None, :] | fibers[lasts][:, None, :, :]
            unions = unions.reshape(len(lasts), -1, U.shape[-1])
            num = fb.wk(unions).min(axis=1) * fb.den_k1
            den = fb.wk1(aun[None, :] | alpha[lasts]) * fb.den_k
            ratio = num / den
            top = ratio.max()
            if best >= 0 and top < float(best) * (1 - 1e-12):
                continue
            for i in np.flatnonzero(ratio >= top * (1 - 1e-12)):
                val = Fraction(int(num[i]), int(den[i]))
                key = prefix + (int(lasts[i]),)
                if val > best:
                    best, best_keys = val, [key]
                elif val == best:
                    best_keys.append(key)
    # canonical witness: smallest sorted tuple of coboundary bitsets
    def canon(key):
        return tuple(sorted(from_words(alpha[a]) for a in key))

    key = min(best_keys, key=canon)
    betas, pres = _collective_witness(X, fb, key)
    return best, (betas, pres)


def _collective_witness(X: BasedComplex, fb: _Fibers, key: tuple[int, ...]):
    k = fb.k
    fibers = [fb.pre[a][None, :] ^ fb.ztab for a in key]
    f = fb.ztab.shape[0]
    best = None
    for choice in itertools.product(range(f), repeat=len(key)):
        u = np.zeros(fb.pre.shape[1], dtype=np.uint64)
        for fa, c in zip(fibers, choice):
            u |= fa[c]
        w = int(fb.wk(u[None, :])[0])
        vecs = tuple(from_words(fa[c]) for fa, c in zip(fibers, choice))
        cand = (w, vecs)
        if best is None or cand < best:
            best = cand
    order = sorted(range(len(key)), key=lambda i: from_words(fb.alpha[key[i]]))
    betas = tuple(X.cochain(k + 1, from_words(fb.alpha[key[i]])) for i in order)
    pres = tuple(X.cochain(k, best[1][i]) for i in order)
    return betas, pres


def union_ratio(X: BasedComplex, betas, pres, weight: str = HAMMING) -> Fraction:
    """‖∪pres‖ / ‖∪betas‖ for explicit tuples (checks δ(pre_a) = beta_a)."""
    ub = 0
    up = 0
    for b, p in zip(betas, pres):
        if X.delta(p.k, p.bits) != b.bits:
            raise InputError("preimage does not map to its coboundary")
        ub |= b.bits
        up |= p.bits
    if not ub:
        return Fraction(0)
    k = betas[0].k
    return X.weight_fn(weight, k - 1).of(up) / X.weight_fn(weight, k).of(ub)


# ---------------------------------------------------------------------------
# reports


@dataclass
class ExpansionReport:
    k: int
    weight: str
    sys: Extremum | None
    cosys: Extremum | None
    eta: Fraction
    mu: CofillingResult | None
    mu_coll: CollectiveResult | None
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"k={self.k}", f"weight={self.weight}"]
        if self.sys is None:
            out.append("sys=none")
        else:
            out.append(f"sys={self.sys.value}")
            out.append("sys_witness=" + " ".join(map(str, self.sys.witness.support)))
        if self.cosys is None:
            out.append("cosys=none")
        else:
            out.append(f"cosys={self.cosys.value}")
            out.append("cosys_witness=" + " ".join(map(str, self.cosys.witness.support)))
        out.append(f"eta={self.eta}")
        if self.mu is not None:
            out.append(f"mu={self.mu.value}")
            if self.mu.alpha is not None:
                out.append("mu_witness=" + " ".join(map(str, self.mu.alpha.support)))
                out.append("mu_preimage=" + " ".join(map(str, self.mu.beta.support)))
        if self.mu_coll is not None:
            for m in sorted(self.mu_coll.values):
                out.append(f"mu_coll_{m}={self.mu_coll.values[m]}")
                betas, _ = self.mu_coll.witnesses[m]
                out.append(
                    f"mu_coll_{m}_witness="
                    + " | ".join(" ".join(map(str, b.support)) for b in betas)
                )
        out.extend(self.notes)
        return out


def expansion_report(
    X: BasedComplex,
    k: int,
    weight: str = HAMMING,
    m_max: int = 3,
    budget: int | None = None,
    workers: int = 1,
) -> ExpansionReport:
    sy = systole(X, k, weight, budget, workers=workers)
    cs = cosystole(X, k, weight, budget, workers=workers)
    eta = Fraction(1) if cs is None else cs.value / layer_weight(X, k, weight)
    mu = coll = None
    if k + 1 <= X.dim:
        coll = collective_cofilling(X, k, weight, m_max=m_max, budget=budget)
        fb_mu = coll.values[1]
        betas, pres = coll.witnesses[1]
        mu = CofillingResult(fb_mu, betas[0] if betas else None, pres[0] if pres else None, 0)
    else:
        mu = CofillingResult(Fraction(0), None, None, 0)
    return ExpansionReport(k, weight, sy, cs, eta, mu, coll)


# ---------------------------------------------------------------------------
# product constants


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)


@dataclass
class ProductConstants:
    l: int
    lambda_l: Fraction
    b: list[Fraction]
    nu_l: Fraction
    nu_l_proof: Fraction
    chain_ok: bool
    eta: list[Fraction]
    eta_p: list[Fraction]
    q_p: list[Fraction]
    mu: list[Fraction]
    mu_bar_p: dict[int, Fraction]

    def lines(self) -> list[str]:
        out = [f"l={self.l}", f"lambda={self.lambda_l}"]
        out.append("b=" + " ".join(str(x) for x in self.b))
        out.append(f"nu={self.nu_l}")
        out.append(f"nu_proof={self.nu_l_proof}")
        out.append(f"chain_ok={int(self.chain_ok)}")
        return out


def product_constants(eta, eta_p, q_p, mu, mu_bar_p, l: int) -> ProductConstants:
    """λ_l, b_j and ν_l of the tensor-product theorem.

    Inputs are indexed as in the formulas: ``eta[i]``, ``eta_p[i]`` and
    ``q_p[i]`` for 0 ≤ i ≤ l; ``mu[i]`` for 0 ≤ i ≤ l-1; ``mu_bar_p[j]`` for
    1 ≤ j ≤ l (a mapping or a sequence whose entry 0 is ignored).

    ``nu_l`` is the closed form

        μ_{l-1} + Σ_{j=1}^{l-1} (b_j/η_{l-j}) (μ̄'_j + μ_{l-j-1}),

    and ``nu_l_proof`` the sum of the per-block estimates it is assembled from,
    which also carries the j = l term (b_l/η_0) μ̄'_l.
    """
    if l < 0:
        raise InputError("l must be nonnegative")
    eta = [_frac(x) for x in eta]
    eta_p = [_frac(x) for x in eta_p]
    q_p = [_frac(x) for x in q_p]
    mu = [_frac(x) for x in mu]
    if isinstance(mu_bar_p, dict):
        mbp = {int(j): _frac(v) for j, v in mu_bar_p.items()}
    else:
        mbp = {j: _frac(v) for j, v in enumerate(mu_bar_p) if j >= 1}
    if len(eta) < l + 1 or len(eta_p) < l + 1 or len(q_p) < l or len(mu) < l:
        raise InputError("not enough inputs for this l")
    for name, seq in (("eta", eta[: l + 1]), ("eta'", eta_p[: l + 1])):
        for x in seq:
            if not 0 < x <= 1:
                raise InputError(f"{name} values must lie in (0, 1]")
    for j in range(1, l + 1):
        if j not in mbp:
            raise InputError(f"missing mu_bar'[{j}]")
    for name, seq in (("q'", q_p[:l]), ("mu", mu[:l]), ("mu_bar'", [mbp[j] for j in range(1, l + 1)])):
        for x in seq:
            if x < 1:
                raise InputError(f"{name} values must be at least 1")
    floor = min(eta[l - j] * eta_p[j] for j in range(l + 1))
    den = Fraction(1)
    numr = Fraction(1)
    for i in range(l):
        numr *= eta[i]
        den *= q_p[i] * mu[l - i - 1]
    lam = numr / den * floor
    b = [Fraction(1)]
    if l >= 1:
        b.append(q_p[0] * mu[l - 1])
    for j in range(1, l):
        b.append(q_p[j] * mu[l - j - 1] / eta[l - j] * b[j])
    chain_ok = all(bj * lam <= floor for bj in b)
    if l == 0:
        nu = Fraction(0)
        nu_proof = Fraction(0)
    else:
        nu = mu[l - 1] + sum(
            (b[j] / eta[l - j] * (mbp[j] + mu[l - j - 1]) for j in range(1, l)), Fraction(0)
        )
        nu_proof = mu[l - 1]
        nu_proof += sum((b[j] / eta[l - j] * mu[l - j - 1] for j in range(1, l)), Fraction(0))
        nu_proof += sum((b[j] / eta[l - j] * mbp[j] for j in range(1, l + 1)), Fraction(0))
    return ProductConstants(l, lam, b, nu, nu_proof, chain_ok, eta, eta_p, q_p, mu, mbp)


@dataclass
class ProductVerification:
    ok: bool
    l: int
    constants: ProductConstants
    constants_coll: ProductConstants
    h_l: int
    N: int
    cosys: Fraction | None
    mu_prev: Fraction | None
    mu_coll_prev: Fraction | None
    m_used: int
    checks: dict[str, bool]
    literal: dict[str, bool | None]
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}", f"l={self.l}", f"h_l={self.h_l}", f"N={self.N}"]
        out.append(f"lambda={self.constants.lambda_l}")
        out.append("b=" + " ".join(map(str, self.constants.b)))
        out.append(f"nu={self.constants.nu_l}")
        out.append(f"nu_proof={self.constants.nu_l_proof}")
        out.append(f"nu_coll={self.constants_coll.nu_l}")
        out.append(f"nu_coll_proof={self.constants_coll.nu_l_proof}")
        out.append(f"cosys={'none' if self.cosys is None else self.cosys}")
        out.append(f"mu_prev={'none' if self.mu_prev is None else self.mu_prev}")
        out.append(f"mu_coll_prev={'none' if self.mu_coll_prev is None else self.mu_coll_prev}")
        out.append(f"m_used={self.m_used}")
        for key in sorted(self.checks):
            out.append(f"check_{key}={int(self.checks[key])}")
        for key in sorted(self.literal):
            v = self.literal[key]
            out.append(f"closed_form_{key}={'unknown' if v is None else int(v)}")
        out.extend(self.notes)
        return out


def _at_least_one(x: Fraction) -> Fraction:
    return x if x >= 1 else Fraction(1)


def measure_factor_inputs(X: BasedComplex, Y: BasedComplex, l: int, m: int = 2, budget=None):
    """Measured inputs of :func:`product_constants` (Hamming weight).

    Cofilling-type constants and upper localities are raised to 1 where the
    measured value is smaller; any larger value is still a valid constant.
    """
    eta = [cosystolic_bound(X, i, budget=budget) for i in range(l + 1)]
    eta_p = [cosystolic_bound(Y, i, budget=budget) for i in range(l + 1)]
    q_p = [_at_least_one(Fraction(Y.upper_locality(i))) for i in range(l + 1)]
    mu = []
    mu_coll = []
    for i in range(l):
        c = collective_cofilling(X, i, m_max=m, budget=budget, adaptive=True)
        mu.append(_at_least_one(c.values[1]))
        mu_coll.append(_at_least_one(c.value()))
    hmax = max([betti(X, i) for i in range(l + 1)] + [1])
    mbp = {}
    mbp_coll = {}
    for j in range(1, l + 1):
        c = collective_cofilling(Y, j - 1, m_max=hmax * m, budget=budget, adaptive=True)
        mbp_coll[j] = _at_least_one(c.value())
        mbp[j] = _at_least_one(c.values[min(hmax, c.m_max)])
    return eta, eta_p, q_p, mu, mu_coll, mbp, mbp_coll


def verify_product_theorem(
    X: BasedComplex,
    Y: BasedComplex,
    l: int,
    m_max: int = 2,
    budget: int | None = None,
    workers: int = 1,
) -> ProductVerification:
    """Measure the factors and the product and compare with the theorem's constants.

    Checked: (a) CoSys^l(X⊗Y) ≥ λ_l·N when h_l ≠ 0, (b) μ_{l-1}(X⊗Y) ≤ ν_l,
    (c) μ̄_{l-1}(X⊗Y) ≤ ν_l^coll, where ν uses the per-block sum and μ̄
    replaces μ for the collective version.  The closed-form ν is compared too
    and reported separately, along with μ_l(X⊗Y) against it.
    """
    if l < 0 or l > min(X.dim, Y.dim):
        raise InputError("need 0 <= l <= min(dim X, dim Y)")
    eta, eta_p, q_p, mu, mu_coll, mbp, mbp_coll = measure_factor_inputs(X, Y, l, m_max, budget)
    pc = product_constants(eta, eta_p, q_p, mu, mbp, l)
    pcc = product_constants(eta, eta_p, q_p, mu_coll, mbp_coll, l)
    P = tensor(X, Y)
    h = betti(P, l)
    N = min(X.n(i) * Y.n(l - i) for i in range(l + 1))
    checks: dict[str, bool] = {"chain": pc.chain_ok and pcc.chain_ok}
    literal: dict[str, bool | None] = {}
    cs = None
    if h:
        ext = cosystole(P, l, budget=budget, workers=workers)
        cs = ext.value
        checks["a_cosystole"] = cs >= pc.lambda_l * N
    else:
        checks["a_cosystole"] = True
    mu_prev = mu_coll_prev = None
    m_used = 0
    if l >= 1:
        c = collective_cofilling(P, l - 1, m_max=m_max, budget=budget, adaptive=True)
        mu_prev = c.values[1]
        mu_coll_prev = c.value()
        m_used = c.m_max
        checks["b_cofilling"] = mu_prev <= pc.nu_l_proof
        checks["c_collective"] = mu_coll_prev <= pcc.nu_l_proof
        literal["b_prev"] = mu_prev <= pc.nu_l
        literal["c_prev"] = mu_coll_prev <= pcc.nu_l
    else:
        checks["b_cofilling"] = True
        checks["c_collective"] = True
    notes = []
    if l + 1 <= P.dim:
        try:
            cl = collective_cofilling(P, l, m_max=m_max, budget=budget, adaptive=True)
            mu_l, mu_coll_l = cl.values[1], cl.value()
            literal["b_same_degree"] = mu_l <= pc.nu_l
            literal["c_same_degree"] = mu_coll_l <= pcc.nu_l
            notes += [f"mu_l={mu_l}", f"mu_coll_l={mu_coll_l}", f"mu_coll_l_m={cl.m_max}"]
        except BudgetExceeded:
            literal["b_same_degree"] = None
            literal["c_same_degree"] = None
    ok = all(checks.values())
    return ProductVerification(ok, l, pc, pcc, h, N, cs, mu_prev, mu_coll_prev, m_used, checks, literal, notes)
