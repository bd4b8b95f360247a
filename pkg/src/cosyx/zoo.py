"""Generators for small complex families.

Random complexes use the PCG64 generator (64-bit state permuted congruential
generator, XSL-RR output) as shipped in numpy, seeded through
``numpy.random.SeedSequence(seed)``.  Each candidate cell, visited in
lexicographic order of its vertex tuple, consumes one raw 64-bit draw ``r``
and is kept iff ``(r >> 11) * 2**-53 < p``.  Any implementation of PCG64 with
the same seeding reproduces the corpus bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .complex import BasedComplex, _from_closed, from_facets
from .errors import InputError

PRNG_NAME = "pcg64-seedsequence-u53"

# perfect difference sets giving cyclic projective planes of order q
DIFFERENCE_SETS = {
    2: (1, 2, 4),
    3: (0, 1, 3, 9),
    4: (0, 1, 4, 14, 16),
}


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: tuple = field(default_factory=tuple)

    def header(self) -> str:
        args = " ".join(str(p) for p in self.params)
        line = f"# gen {self.kind} {args}".rstrip()
        if self.kind == "lm_random":
            line += f" prng={PRNG_NAME}"
        return line


def point() -> BasedComplex:
    return from_facets([[0]])


def cycle(L: int) -> BasedComplex:
    if L < 3:
        raise InputError("cycle length must be at least 3")
    return from_facets([(i, (i + 1) % L) for i in range(L)])


def simplex_skeleton(N: int, k: int, augmented: bool = False) -> BasedComplex:
    """All subsets of {0..N-1} with at most k+1 elements."""
    if not 0 <= k < N:
        raise InputError("need 0 <= k < N")
    cells = set()
    for r in range(1, k + 2):
        cells.update(itertools.combinations(range(N), r))
    return _from_closed(cells, augmented)


def uniform_draws(seed: int, count: int) -> np.ndarray:
    gen = np.random.PCG64(np.random.SeedSequence(seed))
    raw = np.asarray(gen.random_raw(count), dtype=np.uint64)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def lm_random(n: int, k: int, p: float, seed: int) -> BasedComplex:
    """Full (k-1)-skeleton on n vertices plus each k-cell with probability p."""
    if not 1 <= k < n:
        raise InputError("need 1 <= k < n")
    if not 0.0 <= p <= 1.0:
        raise InputError("p must lie in [0, 1]")
    cells = set()
    for r in range(1, k + 1):
        cells.update(itertools.combinations(range(n), r))
    cands = list(itertools.combinations(range(n), k + 1))
    u = uniform_draws(seed, len(cands))
    cells.update(c for c, x in zip(cands, u) if x < p)
    return _from_closed(cells, False)


def flag_pg2(q: int) -> BasedComplex:
    """Point-line incidence graph of the cyclic projective plane of order q.

    Points are vertices 0..N-1 and lines N..2N-1 with N = q^2 + q + 1; line j
    is the translate j + D of the difference set D.
    """
    if q not in DIFFERENCE_SETS:
        raise InputError("flag_pg2 supports q in {2, 3, 4}")
    N = q * q + q + 1
    D = DIFFERENCE_SETS[q]
    edges = [(p, N + j) for j in range(N) for p in sorted((j + d) % N for d in D)]
    return from_facets(edges)


def pg2_lines(q: int) -> list[tuple[int, ...]]:
    N = q * q + q + 1
    return [tuple(sorted((j + d) % N for d in DIFFERENCE_SETS[q])) for j in range(N)]


def generate(spec: GenSpec) -> BasedComplex:
    kind, a = spec.kind, spec.params
    try:
        if kind == "cycle":
            return cycle(int(a[0]))
        if kind == "simplex_skeleton":
            return simplex_skeleton(int(a[0]), int(a[1]))
        if kind == "lm_random":
            return lm_random(int(a[0]), int(a[1]), float(a[2]), int(a[3]))
        if kind == "flag_pg2":
            return flag_pg2(int(a[0]))
        if kind == "point":
            return point()
    except (IndexError, ValueError) as exc:
        raise InputError(f"bad parameters for {kind}: {a}") from exc
    raise InputError(f"unknown generator {kind!r}")


ALIASES = {
    "cycle": "cycle",
    "skeleton": "simplex_skeleton",
    "simplex_skeleton": "simplex_skeleton",
    "lm": "lm_random",
    "lm_random": "lm_random",
    "pg2": "flag_pg2",
    "flag_pg2": "flag_pg2",
    "point": "point",
}


def parse_spec(tokens: list[str]) -> GenSpec:
    if not tokens or tokens[0] not in ALIASES:
        raise InputError(f"unknown generator {' '.join(tokens)!r}")
    kind = ALIASES[tokens[0]]
    try:
        params = tuple(float(t) if "." in t else int(t) for t in tokens[1:])
    except ValueError as exc:
        raise InputError(f"bad generator parameters {tokens[1:]}") from exc
    return GenSpec(kind, params)
