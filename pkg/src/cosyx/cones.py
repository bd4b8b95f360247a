"""Cone systems, contraction operators and building-like data.

A cone system on an augmented simplicial complex assigns to every cell σ of
dimension -1..n-1 and every parameter s a (dim σ + 1)-chain c[σ, s].  When the
boundary law ∂c[σ,s] = σ + Σ_i c[σ∖i, s] holds, the contraction
(ι_s b)(σ) = ⟨b, c[σ,s]⟩ satisfies δι_s + ι_sδ = id, so ι_s turns a coboundary
into one of its preimages.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from . import gf2
from .complex import TOPCELL, BasedComplex, Cochain, from_simplices, vertex_key
from .errors import InputError
from .homology import betti, classify
from .local import CochainCollection
from .zoo import DIFFERENCE_SETS, flag_pg2, simplex_skeleton


@dataclass
class ConeSystem:
    """``cones[(σ label, s)]`` is a bitmask over the (dim σ + 1)-cells."""

    S: list[Hashable]
    cones: dict[tuple[tuple, Hashable], int]

    def get(self, sigma: tuple, s) -> int:
        try:
            return self.cones[(sigma, s)]
        except KeyError:
            raise InputError(f"no cone for ({sigma}, {s})") from None


def _require(X: BasedComplex):
    if not X.augmented or not X.is_simplicial:
        raise InputError("cone systems live on augmented simplicial complexes")


def _faces(X: BasedComplex, j: int, i: int) -> list[tuple]:
    """Labels of the codimension-one faces of cell (j, i)."""
    if j == 0:
        return [()]
    return [X.label(j - 1, f) for f in gf2.support(X.down(j)[i])]


def simplex_cones(N: int) -> tuple[BasedComplex, ConeSystem]:
    """The full simplex on N vertices with c[σ, v] = v ⊔ σ (or 0 if v ∈ σ)."""
    if N < 2:
        raise InputError("simplex_cones needs N >= 2")
    X = simplex_skeleton(N, N - 1, augmented=True)
    S = list(range(N))
    cones = {}
    for j in range(-1, X.dim):
        labs = [()] if j == -1 else X.labels(j)
        for lab in labs:
            for v in S:
                if v in lab:
                    cones[(lab, v)] = 0
                else:
                    up = tuple(sorted(lab + (v,), key=vertex_key))
                    cones[(lab, v)] = 1 << X.index[j + 1][up]
    return X, ConeSystem(S, cones)


@dataclass
class ConeVerdict:
    ok: bool
    witness: tuple | None = None

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}"]
        if self.witness is not None:
            sigma, s = self.witness
            out.append("witness_sigma=" + " ".join(map(str, sigma)))
            out.append(f"witness_s={s}")
        return out


def validate_cones(X: BasedComplex, C: ConeSystem) -> ConeVerdict:
    """Check the boundary law for every (σ, s); the witness is the first failure."""
    _require(X)
    for j in range(-1, X.dim):
        labs = [()] if j == -1 else X.labels(j)
        for i, lab in enumerate(labs):
            own = 1 << (0 if j == -1 else i)
            for s in C.S:
                lhs = X.partial(j + 1, C.get(lab, s))
                rhs = own
                if j >= 0:
                    for f in _faces(X, j, i):
                        rhs ^= C.get(f, s)
                if lhs != rhs:
                    return ConeVerdict(False, (lab, s))
    return ConeVerdict(True)


def _cell_labels(X: BasedComplex, k: int) -> list[tuple]:
    return [()] if k == -1 else X.labels(k)


def contraction(X: BasedComplex, C: ConeSystem, s, b: Cochain) -> Cochain:
    """(ι_s b)(σ) = ⟨b, c[σ, s]⟩ for σ of dimension dim b - 1."""
    _require(X)
    if s not in C.S:
        raise InputError(f"{s!r} is not a cone parameter")
    k = b.k - 1
    if k < -1 or k > X.dim - 1:
        raise InputError("contraction needs a cochain of dimension 0..n")
    bits = 0
    for i, lab in enumerate(_cell_labels(X, k)):
        if gf2.parity(b.bits & C.get(lab, s)):
            bits |= 1 << i
    return X.cochain(k, bits)


def homotopy_defect(X: BasedComplex, C: ConeSystem, s, b: Cochain) -> int:
    """Bits of (δι_s + ι_sδ)b + b; zero when the identity holds."""
    j = b.k
    out = b.bits
    ib = contraction(X, C, s, b)
    out ^= X.delta(j - 1, ib.bits)
    if j + 1 <= X.dim:
        db = X.cochain(j + 1, X.delta(j, b.bits))
        out ^= contraction(X, C, s, db).bits
    return out


def check_homotopy(X: BasedComplex, C: ConeSystem) -> ConeVerdict:
    """δι_s + ι_sδ = id on each basis cochain of C^j for 0 ≤ j ≤ n-1 and every s."""
    _require(X)
    for j in range(0, X.dim):
        for i, lab in enumerate(X.labels(j)):
            b = X.cochain(j, 1 << i)
            for s in C.S:
                if homotopy_defect(X, C, s, b):
                    return ConeVerdict(False, (lab, s))
    return ConeVerdict(True)


def theta(X: BasedComplex, C: ConeSystem, k: int) -> Fraction:
    """θ_k = max over (k+1)-cells σ of Σ_{(η,s): σ ∈ c[η,s]} w(η) / (|S| w(σ))."""
    _require(X)
    if not C.S or k + 1 > X.dim:
        return Fraction(0)
    wk = X.weight_fn(TOPCELL, k)
    wk1 = X.weight_fn(TOPCELL, k + 1)
    acc = [0] * X.n(k + 1)
    for i, lab in enumerate(_cell_labels(X, k)):
        for s in C.S:
            for t in gf2.support(C.get(lab, s)):
                acc[t] += wk.num[i]
    best = Fraction(0)
    for t, tot in enumerate(acc):
        if tot:
            val = Fraction(tot * wk1.den, len(C.S) * wk1.num[t] * wk.den)
            best = max(best, val)
    return best


@dataclass
class ConeCofill:
    s_star: Hashable
    preimages: list[Cochain]
    ratio: Fraction
    per_s: dict
    theta: Fraction
    average: Fraction
    average_ok: bool

    def lines(self) -> list[str]:
        out = [f"s_star={self.s_star}", f"ratio={self.ratio}", f"theta={self.theta}"]
        out.append(f"average_ratio={self.average}")
        out.append(f"average_ok={int(self.average_ok)}")
        for s in self.per_s:
            out.append(f"union_s{s}={self.per_s[s]}")
        return out


def cofill_via_cones(X: BasedComplex, C: ConeSystem, betas: CochainCollection) -> ConeCofill:
    """Preimages ι_s β_a for the s minimising the union weight.

    The average over s of ‖∪ι_sβ_a‖ is compared with θ_k‖∪β_a‖.
    """
    _require(X)
    if not C.S:
        raise InputError("cone system has an empty parameter set")
    kk = betas.k - 1
    for b in betas.members:
        cl = classify(X, b)
        if cl.kind != "coboundary":
            raise InputError(f"input is not a coboundary ({cl.kind}): " + " ".join(map(str, b.support)))
    wk = X.weight_fn(TOPCELL, kk)
    wb = X.weight_fn(TOPCELL, betas.k).of(betas.union)
    per_s = {}
    pres = {}
    for s in C.S:
        ps = [contraction(X, C, s, b) for b in betas.members]
        for p, b in zip(ps, betas.members):
            if X.delta(kk, p.bits) != b.bits:
                raise AssertionError(f"contraction with s={s} did not give a preimage")
        u = 0
        for p in ps:
            u |= p.bits
        per_s[s] = wk.of(u)
        pres[s] = ps
    s_star = min(C.S, key=lambda s: per_s[s])  # first in S order on ties
    th = theta(X, C, kk)
    avg = sum(per_s.values(), Fraction(0)) / len(C.S)
    ratio = per_s[s_star] / wb if wb else Fraction(0)
    avg_ratio = avg / wb if wb else Fraction(0)
    return ConeCofill(s_star, pres[s_star], ratio, per_s, th, avg_ratio, avg <= th * wb)


# ---------------------------------------------------------------- building-like data


@dataclass
class BuildingLikeData:
    """Group generators and the subcomplex family B[(σ, s)].

    A generator is a pair (vertex map, S map), both dicts.  Each B entry is a
    set of simplices; it is closed under faces on construction.
    """

    generators: list[tuple[dict, dict]]
    B: dict[tuple[tuple, Hashable], frozenset]

    def __post_init__(self):
        self.B = {key: _closure(cells) for key, cells in self.B.items()}


def _closure(cells: Iterable[Sequence]) -> frozenset:
    out = set()
    for c in cells:
        c = tuple(sorted(c, key=vertex_key))
        for r in range(1, len(c) + 1):
            out.update(itertools.combinations(c, r))
    return frozenset(out)


def _act(g: tuple[dict, dict], lab: tuple) -> tuple:
    return tuple(sorted((g[0][v] for v in lab), key=vertex_key))


@dataclass
class BuildingVerdict:
    ok: bool
    items: dict[str, bool]
    witnesses: dict[str, object]
    a: dict[int, int] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"ok={int(self.ok)}"]
        for name, good in self.items.items():
            out.append(f"{name}={int(good)}")
            if name in self.witnesses:
                out.append(f"{name}_witness={self.witnesses[name]}")
        for k in sorted(self.a):
            out.append(f"a_{k}={self.a[k]}")
        return out


def _orbits(X: BasedComplex, gens, k: int) -> list[set]:
    seen: dict[tuple, int] = {}
    orbits: list[set] = []
    for lab in X.labels(k):
        if lab in seen:
            continue
        orb = {lab}
        queue = deque([lab])
        while queue:
            c = queue.popleft()
            for g in gens:
                d = _act(g, c)
                if d not in orb:
                    orb.add(d)
                    queue.append(d)
        for c in orb:
            seen[c] = len(orbits)
        orbits.append(orb)
    return orbits


def _reduced_acyclic_upto(cells: frozenset, k: int) -> int | None:
    """First i in -1..k with nonzero reduced homology of the subcomplex, else None."""
    if not cells:
        return -1
    Y = from_simplices(list(cells), augmented=True)
    for i in range(-1, k + 1):
        if betti(Y, i):
            return i
    return None


def check_building_like(X: BasedComplex, S: Sequence, D: BuildingLikeData, nmax: int | None = None) -> BuildingVerdict:
    """Check nesting, transitivity, equivariance and acyclicity; compute a_k.

    ``nmax`` caps the cell dimension k of the pairs (σ, s) examined (default
    dim X - 1).
    """
    if not X.is_simplicial:
        raise InputError("building-like checks need a simplicial complex")
    n = X.dim
    kmax = n - 1 if nmax is None else min(nmax, n - 1)
    verts = set(X.labels(0))
    cells = {lab for k in range(0, n + 1) for lab in X.labels(k)}
    for g in D.generators:
        if set(g[0]) != {v[0] for v in verts} or set(g[1]) != set(S):
            raise InputError("generator must permute all vertices and all of S")
        for lab in cells:
            if _act(g, lab) not in cells:
                raise InputError(f"generator does not preserve the cell {lab}")
    items: dict[str, bool] = {}
    wit: dict[str, object] = {}
    keys = [(lab, s) for k in range(-1, kmax + 1) for lab in _cell_labels(X, k) for s in S]
    for key in keys:
        if key not in D.B:
            raise InputError(f"missing B entry for {key}")

    # nesting: σ ∈ B[σ,s] ⊆ B[σ',s] for σ ⊆ σ'
    items["nesting"] = True
    for lab, s in keys:
        B = D.B[(lab, s)]
        if lab and lab not in B:
            items["nesting"], wit["nesting"] = False, (lab, s)
            break
        bad = None
        for r in range(len(lab)):
            for f in itertools.combinations(lab, r):
                if not D.B[(f, s)] <= B:
                    bad = (f, lab, s)
                    break
            if bad:
                break
        if bad:
            items["nesting"], wit["nesting"] = False, bad
            break

    # 1: transitivity on top cells
    orbit = _orbits(X, D.generators, n)
    items["transitive"] = len(orbit) == 1
    if len(orbit) > 1:
        wit["transitive"] = f"{len(orbit)} orbits"

    # 2: equivariance on generator images
    items["equivariant"] = True
    for gi, g in enumerate(D.generators):
        for lab, s in keys:
            img = frozenset(_act(g, c) for c in D.B[(lab, s)])
            target = D.B.get((_act(g, lab), g[1][s]))
            if img != target:
                items["equivariant"], wit["equivariant"] = False, (gi, lab, s)
                break
        if not items["equivariant"]:
            break

    # 3: reduced homology vanishes in degrees -1..k
    items["acyclic"] = True
    cache: dict[tuple, int | None] = {}
    for lab, s in keys:
        k = len(lab) - 1
        B = D.B[(lab, s)]
        ck = (B, k)
        if ck not in cache:
            cache[ck] = _reduced_acyclic_upto(B, k)
        if cache[ck] is not None:
            items["acyclic"], wit["acyclic"] = False, (lab, s, cache[ck])
            break

    a = {}
    for k in range(0, kmax + 1):
        orbs = _orbits(X, D.generators, k + 1)
        best = 0
        for lab in X.labels(k):
            for s in S:
                B = D.B[(lab, s)]
                for o in orbs:
                    best = max(best, len(o & B))
        a[k] = best
    return BuildingVerdict(all(items.values()), items, wit, a)


def full_simplex_building_data(N: int) -> tuple[BasedComplex, list, BuildingLikeData]:
    """Full simplex, S = vertices, G = symmetric group, every B the whole complex."""
    X, _ = simplex_cones(N)
    S = list(range(N))
    swap = {v: v for v in S}
    swap[0], swap[1] = 1, 0
    rot = {v: (v + 1) % N for v in S}
    gens = [(swap, swap), (rot, rot)] if N > 2 else [(swap, swap)]
    whole = [X.labels(X.dim)[0]]
    B = {(lab, s): whole for k in range(-1, X.dim) for lab in _cell_labels(X, k) for s in S}
    return X, S, BuildingLikeData(gens, B)


def flag_pg2_building_data(q: int) -> tuple[BasedComplex, list, BuildingLikeData]:
    """Flag complex of the cyclic plane of order q with apartment intersections.

    S is the set of chambers (flags).  G is generated by the Singer cycle, the
    multiplier x ↦ px when it fixes the difference set, and the polarity
    point x ↔ line -x.  B[σ, θ] is the intersection of the apartments (ordinary
    triangles) containing both σ and the chamber θ.
    """
    X = flag_pg2(q).augmented_copy()
    N = q * q + q + 1
    D = DIFFERENCE_SETS[q]
    lines = [frozenset((j + d) % N for d in D) for j in range(N)]

    def on(p, j):
        return p in lines[j]

    S = list(X.labels(1))
    gens_v = [{**{p: (p + 1) % N for p in range(N)}, **{N + j: N + (j + 1) % N for j in range(N)}}]
    pch = min(pp for pp in range(2, q + 1) if q % pp == 0)
    if frozenset((pch * d) % N for d in D) == frozenset(D):
        gens_v.append({**{p: (pch * p) % N for p in range(N)}, **{N + j: N + (pch * j) % N for j in range(N)}})
    gens_v.append({**{p: N + (-p) % N for p in range(N)}, **{N + j: (-j) % N for j in range(N)}})
    gens = [(g, {c: _act((g, None), c) for c in S}) for g in gens_v]

    apartments = []
    for tri in itertools.combinations(range(N), 3):
        a, b, c = tri
        lab = [next(j for j in range(N) if on(x, j) and on(y, j)) for x, y in ((a, b), (b, c), (a, c))]
        if lab[0] == lab[1]:
            continue  # collinear
        la, lb, lc = (N + j for j in lab)
        edges = [(a, la), (b, la), (b, lb), (c, lb), (a, lc), (c, lc)]
        apartments.append(_closure(edges))
    B = {}
    for k in (-1, 0):
        for lab in _cell_labels(X, k):
            for th in S:
                inter = None
                for ap in apartments:
                    if th in ap and (not lab or lab in ap):
                        inter = ap if inter is None else inter & ap
                B[(lab, th)] = inter if inter is not None else frozenset()
    return X, S, BuildingLikeData(gens, B)


# ---------------------------------------------------------------- serialization


def dumps_cones(X: BasedComplex, C: ConeSystem) -> str:
    """One line per entry: ``(j:i, s) : cell ids`` with j = dim σ."""
    out = []
    for j in range(-1, X.dim):
        for i, lab in enumerate(_cell_labels(X, j)):
            for s in C.S:
                ids = " ".join(map(str, gf2.support(C.get(lab, s))))
                out.append(f"({j}:{i}, {s}) : {ids}".rstrip())
    return "\n".join(out) + "\n"


def loads_cones(X: BasedComplex, text: str, S: Sequence | None = None) -> ConeSystem:
    cones = {}
    seen_s: list = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        try:
            left, right = ln.split(")", 1)
            cell, s = left.lstrip("(").split(",")
            j, i = (int(t) for t in cell.split(":"))
            s = s.strip()
            s = int(s) if s.lstrip("-").isdigit() else s
            ids = [int(t) for t in right.split(":", 1)[1].split()]
        except (ValueError, IndexError) as exc:
            raise InputError(f"bad cone line {raw!r}") from exc
        lab = _cell_labels(X, j)[i]
        cones[(lab, s)] = gf2.from_support(ids)
        if s not in seen_s:
            seen_s.append(s)
    return ConeSystem(list(S) if S is not None else seen_s, cones)


def dumps_generators(D: BuildingLikeData, verts: Sequence, S: Sequence) -> str:
    """One generator per line: vertex images, then ``|``, then S images."""
    out = []
    for g in D.generators:
        out.append(" ".join(str(g[0][v]) for v in verts) + " | " + " ".join(str(S.index(g[1][s])) for s in S))
    return "\n".join(out) + "\n"
