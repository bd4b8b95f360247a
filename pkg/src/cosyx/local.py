"""Links, localization, locally minimal collections and the fat machinery.

Everything here works on pure simplicial complexes with the TopCell weight
unless a weight is passed explicitly.  Cells are addressed as ``(j, index)``
pairs; the empty simplex is ``(-1, 0)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import gf2
from .complex import TOPCELL, BasedComplex, Cochain, from_simplices, vertex_key
from .errors import BudgetExceeded, InputError
from .homology import coboundary_space
from .search import Weigher, default_budget, from_words, span_table, to_words


@dataclass
class CochainCollection:
    k: int
    members: list[Cochain]

    @property
    def union(self) -> int:
        u = 0
        for a in self.members:
            u |= a.bits
        return u

    @property
    def bits(self) -> list[int]:
        return [a.bits for a in self.members]

    @classmethod
    def of(cls, X: BasedComplex, k: int, bits) -> "CochainCollection":
        return cls(k, [X.cochain(k, b) for b in bits])


def _require_simplicial(X: BasedComplex):
    if not X.is_simplicial:
        raise InputError("this operation needs a simplicial complex")


def cell_label(X: BasedComplex, sigma) -> tuple:
    """Vertex tuple of a cell.

    A pair of ints is read as a ``(j, index)`` address; any other collection
    (list, set, frozenset) is read as the vertex set of the cell.
    """
    if isinstance(sigma, tuple) and len(sigma) == 2 and all(isinstance(t, int) for t in sigma):
        j, i = sigma
        if j == -1:
            if i != 0:
                raise InputError("the empty simplex has index 0")
            return ()
        if j < -1 or j > X.dim or not 0 <= i < X.n(j):
            raise InputError(f"no cell ({j},{i})")
        return X.label(j, i)
    lab = tuple(sorted(sigma, key=vertex_key))
    if lab and lab not in X.index.get(len(lab) - 1, {}):
        raise InputError(f"{lab} is not a cell")
    return lab


# ---------------------------------------------------------------- links


class Link:
    """The link of σ with the index maps used by localization and lifting."""

    def __init__(self, X: BasedComplex, lab: tuple):
        """``lab`` is the sorted vertex tuple of σ, as returned by :func:`cell_label`."""
        _require_simplicial(X)
        self.X = X
        self.sigma = lab
        self.j = len(lab) - 1
        sv = set(lab)
        if not lab:
            faces = [l for k in range(0, X.dim + 1) for l in X.labels(k)]
        else:
            faces = []
            for k in range(self.j + 1, X.dim + 1):
                for l in X.labels(k):
                    if sv.issubset(l):
                        rest = tuple(v for v in l if v not in sv)
                        faces.append(rest)
        self.complex = from_simplices(faces, augmented=True)
        L = self.complex
        self.lift_index: dict[int, list[int]] = {}
        for t in L.dims():
            out = []
            for tau in L.labels(t):
                full = tuple(sorted(sv.union(tau), key=vertex_key))
                out.append(X.index[len(full) - 1][full] if full else 0)
            self.lift_index[t] = out

    def localize(self, a: Cochain) -> Cochain:
        t = a.k - self.j - 1
        L = self.complex
        if t < L.kmin or t > L.dim:
            return L.cochain(t, 0) if L.kmin <= t else Cochain(t, gf2.Gf2Vector(0, 0))
        bits = 0
        for i, c in enumerate(self.lift_index[t]):
            if (a.bits >> c) & 1:
                bits |= 1 << i
        return L.cochain(t, bits)

    def lift(self, b: Cochain) -> Cochain:
        k = b.k + self.j + 1
        bits = 0
        for i in gf2.support(b.bits):
            bits |= 1 << self.lift_index[b.k][i]
        if k == -1:
            return Cochain(-1, gf2.Gf2Vector(1, bits))
        return self.X.cochain(k, bits)


def _link_cache(X: BasedComplex) -> dict:
    return X.__dict__.setdefault("_link_cache", {})


def get_link(X: BasedComplex, sigma) -> Link:
    lab = cell_label(X, sigma)
    cache = _link_cache(X)
    if lab not in cache:
        cache[lab] = Link(X, lab)
    return cache[lab]


def link(X: BasedComplex, sigma) -> BasedComplex:
    """The (augmented) link of σ."""
    return get_link(X, sigma).complex


def localize(X: BasedComplex, sigma, a: Cochain) -> Cochain:
    return get_link(X, sigma).localize(a)


def lift(X: BasedComplex, sigma, b: Cochain) -> Cochain:
    return get_link(X, sigma).lift(b)


def container(X: BasedComplex, a: Cochain, r: int) -> Cochain:
    """Γ^r(a): every r-cell containing some cell of ``a``."""
    _require_simplicial(X)
    if r < a.k:
        raise InputError("container dimension must be at least k")
    if r > X.dim:
        raise InputError("container dimension exceeds the complex")
    bits = a.bits
    for t in range(a.k, r):
        acc = 0
        up = X.up(t)
        for i in gf2.support(bits):
            acc |= up[i]
        bits = acc
    return X.cochain(r, bits)


# ---------------------------------------------------------------- minimality


@dataclass
class MinimalityVerdict:
    ok: bool
    sigma: tuple | None = None
    gammas: tuple[int, ...] | None = None
    before: Fraction | None = None
    after: Fraction | None = None

    def lines(self) -> list[str]:
        out = [f"minimal={int(self.ok)}"]
        if not self.ok:
            out.append("sigma=" + " ".join(map(str, self.sigma or ())))
            out.append(f"union_before={self.before}")
            out.append(f"union_after={self.after}")
        return out


@dataclass
class _Cobs:
    """B^k with, for each element, a δ-preimage in the same row order."""

    pre: np.ndarray
    img: np.ndarray


def _coboundaries_with_preimages(Y: BasedComplex, k: int, budget: int) -> _Cobs:
    n_prev = Y.n(k - 1) if k - 1 >= Y.kmin else 0
    piv: dict[int, int] = {}
    cells, images = [], []
    for c in range(n_prev):
        img = Y.delta(k - 1, 1 << c)
        if gf2.insert(piv, img):
            cells.append(1 << c)
            images.append(img)
    if len(cells) > budget:
        raise BudgetExceeded(f"B^{k} has dimension {len(cells)}", required=len(cells), allowed=budget)
    pre = span_table(to_words(cells, max(n_prev, 1))) if cells else np.zeros((1, 1), np.uint64)
    img = span_table(to_words(images, max(Y.n(k), 1))) if images else np.zeros((1, 1), np.uint64)
    return _Cobs(pre, img)


def _best_shift(Y: BasedComplex, k: int, members: list[int], weight: str, budget: int):
    """Lightest union of (α_a + γ_a) over coboundary tuples.

    Returns (best raw weight, index tuple, cobs); ties go to the smallest
    index tuple in lexicographic order.
    """
    cobs = _coboundaries_with_preimages(Y, k, budget)
    f = cobs.img.shape[0]
    m = len(members)
    limit = 1 << (budget + 2)
    if f**m > limit:
        raise BudgetExceeded(f"{f}^{m} coboundary tuples exceed the budget", required=f**m, allowed=limit)
    n = max(Y.n(k), 1)
    wf = Y.weight_fn(weight, k)
    weigh = Weigher(wf.num, Y.n(k))
    A = to_words(members, n)
    U = A[0][None, :] ^ cobs.img
    for a in range(1, m):
        U = (U[:, None, :] | (A[a][None, :] ^ cobs.img)[None, :, :]).reshape(-1, U.shape[-1])
    w = weigh(U) if Y.n(k) else np.zeros(U.shape[0], dtype=np.int64)
    best = int(w.min())
    flat = int(np.flatnonzero(w == best)[0])
    idx = []
    for _ in range(m):
        idx.append(flat % f)
        flat //= f
    return best, tuple(reversed(idx)), cobs, wf


def is_minimal(Y: BasedComplex, k: int, members: list[int], weight: str = TOPCELL, budget: int | None = None):
    """Global minimality of a collection of k-cochains of Y."""
    budget = default_budget() if budget is None else budget
    if not members:
        return MinimalityVerdict(True)
    union = 0
    for b in members:
        union |= b
    if Y.n(k) == 0:
        return MinimalityVerdict(True)
    best, idx, cobs, wf = _best_shift(Y, k, members, weight, budget)
    cur = wf.raw(union)
    if best < cur:
        gam = tuple(from_words(cobs.img[i]) for i in idx)
        return MinimalityVerdict(False, None, gam, Fraction(cur, wf.den), Fraction(best, wf.den))
    return MinimalityVerdict(True)


def proper_cells(X: BasedComplex, k: int):
    """Cells σ with 0 ≤ dim σ ≤ k-1, in canonical order."""
    for j in range(0, k):
        for i in range(X.n(j)):
            yield (j, i)


def is_minimal_collection(
    X: BasedComplex, C: CochainCollection, locality: str = "global", weight: str = TOPCELL, budget: int | None = None
) -> MinimalityVerdict:
    """Global or local minimality; the counterexample names σ and the γ tuple."""
    if locality == "global":
        return is_minimal(X, C.k, C.bits, weight, budget)
    if locality != "local":
        raise InputError("locality must be 'global' or 'local'")
    _require_simplicial(X)
    for j, i in proper_cells(X, C.k):
        lk = get_link(X, (j, i))
        loc = [lk.localize(a).bits for a in C.members]
        t = C.k - j - 1
        v = is_minimal(lk.complex, t, loc, weight, budget)
        if not v.ok:
            v.sigma = lk.sigma
            return v
    return MinimalityVerdict(True)


def max_link_size(X: BasedComplex, k: int) -> Fraction:
    """Q with ‖∪γ‖ ≤ Q‖∪α‖ for :func:`local_minimize` on k-cochains.

    Q is the largest proper-link size in units of N(·): |X_d|·C(d+1, k+1)
    times the weight of the lifted full (k-j-2)-layer of the link of a
    j-cell.  One local move adds at most that lifted layer to ∪γ while N
    drops by at least one.
    """
    best = Fraction(0)
    d = X.dim
    scale = X.n(d) * comb(d + 1, k + 1)
    for sigma in proper_cells(X, k):
        lk = get_link(X, sigma)
        t = k - lk.j - 2
        L = lk.complex
        if t < L.kmin or t > L.dim:
            continue
        lifted = lk.lift(L.cochain(t, L.full(t)))
        q = X.weight_fn(TOPCELL, k - 1).of(lifted.bits) * scale
        best = max(best, q)
    return best


def N_value(X: BasedComplex, k: int, bits: int) -> int:
    """N(α) = |X_d|·C(d+1, k+1)·‖α‖, an integer for the TopCell weight."""
    w = X.weight_fn(TOPCELL, k).of(bits)
    v = w * X.n(X.dim) * comb(X.dim + 1, k + 1)
    assert v.denominator == 1
    return int(v)


@dataclass
class LocalMinimizeResult:
    collection: CochainCollection
    gammas: list[Cochain]
    steps: int
    Q: Fraction
    trace: list[int] = field(default_factory=list)


def local_minimize(
    X: BasedComplex, C: CochainCollection, budget: int | None = None, max_steps: int | None = None
) -> LocalMinimizeResult:
    """Add coboundaries until the collection is locally minimal.

    Each step picks the first cell σ (by dimension, then index) whose link
    admits an improving coboundary tuple, applies the lightest such tuple
    lifted to X, and repeats.  N(∪α) drops by at least one per step.
    """
    _require_simplicial(X)
    budget = default_budget() if budget is None else budget
    k = C.k
    members = list(C.bits)
    gammas = [0] * len(members)
    Q = max_link_size(X, k) if k >= 1 else Fraction(0)
    trace = []
    steps = 0
    while True:
        union = 0
        for b in members:
            union |= b
        trace.append(N_value(X, k, union))
        moved = False
        for sigma in proper_cells(X, k):
            lk = get_link(X, sigma)
            L = lk.complex
            t = k - lk.j - 1
            loc = [lk.localize(X.cochain(k, b)).bits for b in members]
            if not any(loc):
                continue
            best, idx, cobs, wf = _best_shift(L, t, loc, TOPCELL, budget)
            if best >= wf.raw(_or(loc)):
                continue
            for a, ix in enumerate(idx):
                g = from_words(cobs.pre[ix])
                if not g:
                    continue
                gl = lk.lift(L.cochain(t - 1, g) if t - 1 >= L.kmin else Cochain(t - 1, gf2.Gf2Vector(1, g)))
                dg = X.delta(k - 1, gl.bits)
                lifted_img = lk.lift(L.cochain(t, from_words(cobs.img[ix]))).bits
                assert dg == lifted_img, "lift does not commute with δ"
                members[a] ^= dg
                gammas[a] ^= gl.bits
            moved = True
            steps += 1
            break
        if not moved:
            break
        if max_steps is not None and steps >= max_steps:
            break
    out = CochainCollection.of(X, k, members)
    return LocalMinimizeResult(out, [X.cochain(k - 1, g) for g in gammas], steps, Q, trace)


def _or(bits) -> int:
    u = 0
    for b in bits:
        u |= b
    return u


# ---------------------------------------------------------------- skeleton expansion


def skeleton_rho(X: BasedComplex, weight: str = TOPCELL, max_vertices: int = 20) -> Fraction:
    """Smallest ρ ≥ 0 with ‖E(A,A)‖ ≤ 4(‖A‖² + ρ‖A‖) for every vertex set A."""
    n = X.n(0)
    if n == 0 or X.dim < 1 or X.n(1) == 0:
        return Fraction(0)
    if n > max_vertices:
        raise BudgetExceeded(f"{n} vertices exceed the subset budget", required=n, allowed=max_vertices)
    wv = X.weight_fn(weight, 0)
    we = X.weight_fn(weight, 1)
    vnum = np.asarray(wv.num, dtype=np.int64)
    enum = np.asarray(we.num, dtype=np.int64)
    ends = [gf2.support(m) for m in X.down(1)]
    eu = np.array([e[0] for e in ends])
    ev = np.array([e[1] for e in ends])
    best = Fraction(0)
    step = 1 << 16
    for s in range(1, 1 << n, step):
        idx = np.arange(s, min(1 << n, s + step), dtype=np.int64)
        bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
        a = bits @ vnum
        inside = bits[:, eu] & bits[:, ev]
        e = inside @ enum
        # ρ_A = (e/De) / (4 a/Dv) - a/Dv, compared exactly below
        val = (e / we.den) / (4 * a / wv.den) - a / wv.den
        top = val.max()
        if top <= 0 and best == 0:
            continue
        for i in np.flatnonzero(val >= top - 1e-12 * max(1.0, abs(top))):
            A = Fraction(int(a[i]), wv.den)
            E = Fraction(int(e[i]), we.den)
            r = E / (4 * A) - A
            if r > best:
                best = r
    return best


def links_rho(X: BasedComplex, max_vertices: int = 20) -> dict[tuple, Fraction]:
    """ρ of X (key ()) and of every proper link that has edges."""
    out = {(): skeleton_rho(X.unaugmented_copy(), max_vertices=max_vertices)}
    for j in range(0, X.dim - 1):
        for i in range(X.n(j)):
            lk = get_link(X, (j, i))
            out[lk.sigma] = skeleton_rho(lk.complex, max_vertices=max_vertices)
    return out


# ---------------------------------------------------------------- fat machinery


@dataclass
class FatStrata:
    xi: Fraction
    k: int
    S: dict[int, int]
    ladders: dict[tuple[int, int], int]
    L: dict[int, int]
    degenerate: int
    empty_fat: bool

    def lines(self) -> list[str]:
        out = [f"xi={self.xi}", f"k={self.k}"]
        for i in sorted(self.S):
            out.append(f"S_{i}=" + " ".join(map(str, gf2.support(self.S[i]))))
        for i in sorted(self.L):
            out.append(f"L_{i}=" + " ".join(map(str, gf2.support(self.L[i]))))
        out.append("degenerate=" + " ".join(map(str, gf2.support(self.degenerate))))
        out.append(f"empty_fat={int(self.empty_fat)}")
        return out


def _as_fraction(xi) -> Fraction:
    xi = Fraction(xi) if not isinstance(xi, float) else Fraction(xi).limit_denominator(10**9)
    if not 0 < xi < 1:
        raise InputError("xi must lie in (0, 1)")
    return xi


def fat_strata(X: BasedComplex, C: CochainCollection, xi) -> FatStrata:
    """Fat faces S^i, ladders L(·, σ), L(·, i) and degenerate faces Υ."""
    _require_simplicial(X)
    xi = _as_fraction(xi)
    k = C.k
    alpha = C.union
    d = X.dim
    S: dict[int, int] = {k: alpha}
    top = {t: X.top_counts(t) for t in range(0, k + 1)}
    ntop = X.n(d)
    for i in range(k, -1, -1):
        thr = xi ** (2 ** (k - i))
        cur = S[i]
        nxt = 0
        if i == 0:
            # σ = ∅: its link is X, weight of S^0 in X itself
            w = X.weight_fn(TOPCELL, 0).of(cur)
            S[-1] = 1 if w >= thr else 0
            break
        # link of an (i-1)-cell σ has dimension d-i; its vertices v ↔ σ ⊔ v
        up = X.up(i - 1)
        cnt_sigma = top[i - 1]
        for s in range(X.n(i - 1)):
            hits = up[s] & cur
            if not hits:
                continue
            num = sum(top[i][r] for r in gf2.support(hits))
            w = Fraction(num, (d - i + 1) * cnt_sigma[s])
            if w >= thr:
                nxt |= 1 << s
        S[i - 1] = nxt
    # ladders: cells of α reachable from σ through fat faces one dimension at a time
    ladders: dict[tuple[int, int], int] = {}
    for r in gf2.support(S[k]):
        ladders[(k, r)] = 1 << r
    for i in range(k - 1, -1, -1):
        up = X.up(i)
        for s in gf2.support(S[i]):
            acc = 0
            for r in gf2.support(up[s] & S[i + 1]):
                acc |= ladders[(i + 1, r)]
            ladders[(i, s)] = acc
    if S.get(-1):
        acc = 0
        for r in gf2.support(S[0]):
            acc |= ladders[(0, r)]
        ladders[(-1, 0)] = acc
    L: dict[int, int] = {}
    for i in range(-1, k + 1):
        acc = 0
        for (t, s), m in ladders.items():
            if t == i:
                acc |= m
        L[i] = acc
    # degenerate (k+1)-faces
    deg = 0
    if k + 1 <= d:
        fat_sets = {i: {X.label(i, s) for s in gf2.support(S[i])} for i in range(0, k + 1)}
        fat_sets[-1] = {()} if S.get(-1) else set()
        for t, lab in enumerate(X.labels(k + 1)):
            found = False
            for i in range(0, k + 1):
                faces = [f for f in itertools.combinations(lab, i + 1) if f in fat_sets[i]]
                for f1, f2 in itertools.combinations(faces, 2):
                    inter = tuple(v for v in f1 if v in f2)
                    if len(inter) == i and inter not in fat_sets[i - 1]:
                        found = True
                        break
                if found:
                    break
            if found:
                deg |= 1 << t
    return FatStrata(xi, k, S, ladders, L, deg, bool(S.get(-1)))


def c_ladder(k: int, mu, eps, xi) -> dict[int, Fraction]:
    """c^k_k = 1 and c^k_{i-1} = (c^k_i - ε - (k+2)2^{k+4}ξ) / ((k+2) μ C(k+2, i+1))."""
    mu, eps, xi = Fraction(mu), Fraction(eps), Fraction(xi)
    if mu <= 0:
        raise InputError("mu must be positive")
    c = {k: Fraction(1)}
    for i in range(k, -1, -1):
        c[i - 1] = (c[i] - eps - (k + 2) * 2 ** (k + 4) * xi) / ((k + 2) * mu * comb(k + 2, i + 1))
    return c


@dataclass
class FatBoundsReport:
    ok: bool
    hypothesis_rho: bool
    hypothesis_minimal: bool
    rho_max: Fraction
    upsilon: Fraction
    upsilon_bound: Fraction
    upsilon_ok: bool | None
    ladder: dict[int, tuple[Fraction, Fraction]]
    ladder_ok: bool | None
    mu_bar: Fraction
    mu_source: str
    c: dict[int, Fraction]
    c_positive: bool
    strata: FatStrata

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}", f"rho_max={self.rho_max}", f"hypothesis_rho={int(self.hypothesis_rho)}"]
        out.append(f"hypothesis_minimal={int(self.hypothesis_minimal)}")
        out.append(f"upsilon={self.upsilon}")
        out.append(f"upsilon_bound={self.upsilon_bound}")
        out.append(f"upsilon_ok={'hypothesis' if self.upsilon_ok is None else int(self.upsilon_ok)}")
        for i in sorted(self.ladder):
            lhs, rhs = self.ladder[i]
            out.append(f"ladder_{i}={lhs} bound_{i}={rhs}")
        out.append(f"ladder_ok={'hypothesis' if self.ladder_ok is None else int(self.ladder_ok)}")
        out.append(f"mu_bar={self.mu_bar}")
        out.append(f"mu_bar_source={self.mu_source}")
        for i in sorted(self.c):
            out.append(f"c_{i}={self.c[i]}")
        out.append(f"c_positive={int(self.c_positive)}")
        return out


def link_mu_bar(X: BasedComplex, k: int, m_max: int = 3, budget: int | None = None) -> Fraction:
    """Largest measured μ̄_{k-i-1} over links of i-cells, 0 ≤ i ≤ k."""
    from .expansion import collective_cofilling

    cache = X.__dict__.setdefault("_link_mu_cache", {})
    key = (k, m_max)
    if key in cache:
        return cache[key]
    best = Fraction(0)
    for i in range(0, k + 1):
        for s in range(X.n(i)):
            lk = get_link(X, (i, s))
            L = lk.complex
            t = k - i - 1
            if t + 1 > L.dim or t < L.kmin:
                continue
            res = collective_cofilling(L, t, TOPCELL, m_max=m_max, budget=budget, adaptive=True)
            best = max(best, res.value())
    cache[key] = best
    return best


def check_fat_bounds(
    X: BasedComplex,
    C: CochainCollection,
    xi,
    mu_bar=None,
    eps=0,
    m_max: int = 3,
    budget: int | None = None,
) -> FatBoundsReport:
    """Check the degenerate-face bound and the ladder inequality on one collection."""
    _require_simplicial(X)
    xi = _as_fraction(xi)
    k = C.k
    strata = fat_strata(X, C, xi)
    wk = X.weight_fn(TOPCELL, k)
    alpha = C.union
    a_w = wk.of(alpha)
    rhos = links_rho(X)
    rho_max = max(rhos.values())
    hyp_rho = rho_max < xi ** (2 ** (k + 1))
    wk1 = X.weight_fn(TOPCELL, k + 1) if k + 1 <= X.dim else None
    ups = wk1.of(strata.degenerate) if wk1 else Fraction(0)
    ups_bound = (k + 2) * 2 ** (k + 4) * xi * a_w
    ups_ok = (ups <= ups_bound) if hyp_rho else None
    hyp_min = is_minimal_collection(X, C, "local", budget=budget).ok
    if mu_bar is None:
        mu = link_mu_bar(X, k, m_max=m_max, budget=budget)
        source = f"measured_links_m{m_max}"
    else:
        mu = Fraction(mu_bar)
        source = "supplied"
    dunion = 0
    for a in C.members:
        dunion |= X.delta(k, a.bits)
    d_w = wk1.of(dunion) if wk1 else Fraction(0)
    ladder = {}
    ok_l = True
    for i in range(0, k + 1):
        lhs = wk.of(strata.L[i])
        rhs = mu * comb(k + 2, i + 1) * ((k + 2) * wk.of(strata.L[i - 1]) + d_w + ups)
        ladder[i] = (lhs, rhs)
        ok_l = ok_l and lhs <= rhs
    ladder_ok = ok_l if hyp_min else None
    c = c_ladder(k, mu if mu > 0 else Fraction(1), eps, xi)
    c_pos = all(v > 0 for v in c.values())
    ok = (ups_ok is not False) and (ladder_ok is not False)
    if a_w < xi ** (2 ** (k + 1)) and strata.empty_fat:
        ok = False
    return FatBoundsReport(
        ok, hyp_rho, hyp_min, rho_max, ups, ups_bound, ups_ok, ladder, ladder_ok, mu, source, c, c_pos, strata
    )
