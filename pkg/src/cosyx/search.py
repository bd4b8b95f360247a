"""Exact enumeration engines shared by the expansion, local and css modules.

Two strategies are provided:

* span enumeration: every vector of a subspace given by a basis is visited in
  numpy chunks of packed 64-bit words; used when the subspace dimension fits
  the budget (2**budget vectors).
* meet in the middle: all subsets of at most ``r`` cells are bucketed by
  syndrome; two subsets with equal syndrome and different logical signature
  combine into a valid nontrivial vector.  ``r`` grows until the best candidate
  is provably optimal.

Minimisers are ordered by (weight, integer value of the bitset), so witnesses
are canonical for the span strategy and deterministic for both.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 24
CHUNK_BITS = 16


def default_budget() -> int:
    env = os.environ.get("COSYX_BUDGET")
    if env:
        try:
            b = int(env)
        except ValueError:
            return DEFAULT_BUDGET
        if b > 0:
            return b
    return DEFAULT_BUDGET


def nwords(n: int) -> int:
    return max(1, (n + 63) // 64)


def to_words(vectors: Sequence[int], n: int) -> np.ndarray:
    W = nwords(n)
    out = np.zeros((len(vectors), W), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, v in enumerate(vectors):
        for w in range(W):
            out[i, w] = (v >> (64 * w)) & mask
    return out


def from_words(row: np.ndarray) -> int:
    v = 0
    for w in range(len(row) - 1, -1, -1):
        v = (v << 64) | int(row[w])
    return v


def span_table(gens: np.ndarray) -> np.ndarray:
    """All 2**g combinations of the rows of ``gens``; row i uses the bits of i."""
    g, W = gens.shape
    table = np.zeros((1 << g, W), dtype=np.uint64)
    for i in range(g):
        h = 1 << i
        np.bitwise_xor(table[:h], gens[i], out=table[h : 2 * h])
    return table


class Weigher:
    """Integer weights of packed vectors: sum of per-cell numerators."""

    def __init__(self, num: Sequence[int], n: int):
        self.n = n
        self.W = nwords(n)
        num = np.asarray(list(num) + [0] * (64 * self.W - n), dtype=np.int64)
        self.num = num[:n]
        positive = num[:n]
        self.uniform = int(positive[0]) if n and np.all(positive == positive[0]) else None
        if n == 0:
            self.uniform = 1
        if self.uniform is None:
            nbytes = 8 * self.W
            tab = np.zeros((nbytes, 256), dtype=np.int64)
            bits = (np.arange(256)[:, None] >> np.arange(8)[None, :]) & 1
            for j in range(nbytes):
                tab[j] = bits @ num[8 * j : 8 * j + 8]
            self.tab = tab
            self._cols = np.arange(nbytes)[None, :]

    def __call__(self, arr: np.ndarray) -> np.ndarray:
        if self.uniform is not None:
            return np.bitwise_count(arr).sum(axis=-1, dtype=np.int64) * self.uniform
        shape = arr.shape[:-1]
        b = np.ascontiguousarray(arr.astype("<u8")).view(np.uint8).reshape(-1, 8 * self.W)
        return self.tab[self._cols, b].sum(axis=1).reshape(shape)

    def of_int(self, v: int) -> int:
        if self.uniform is not None:
            return v.bit_count() * self.uniform
        total = 0
        while v:
            low = v & -v
            total += int(self.num[low.bit_length() - 1])
            v ^= low
        return total

    @property
    def min_cell(self) -> int:
        return int(self.num.min()) if self.n else 1


def _best_rows(arr: np.ndarray, weights: np.ndarray, valid: np.ndarray | None):
    """(weight, int) of the canonical minimiser among valid rows, or None."""
    if valid is not None:
        if not valid.any():
            return None
        w = np.where(valid, weights, np.iinfo(np.int64).max)
    else:
        w = weights
    m = int(w.min())
    if m == np.iinfo(np.int64).max:
        return None
    idx = np.flatnonzero(w == m)
    return m, min(from_words(arr[i]) for i in idx)


def _span_min_range(args):
    gens, lo_bits, skip_low, hi_start, hi_stop, num, n = args
    weigh = Weigher(num, n)
    lo_table = span_table(gens[:lo_bits])
    hi_gens = gens[lo_bits:]
    lo_idx = np.arange(1 << lo_bits, dtype=np.int64)
    best = None
    cur = np.zeros(gens.shape[1], dtype=np.uint64)
    for b in range(hi_gens.shape[0]):
        if (hi_start >> b) & 1:
            cur ^= hi_gens[b]
    prev = hi_start
    for hi in range(hi_start, hi_stop):
        if hi != prev:
            diff = hi ^ prev
            b = 0
            while diff:
                if diff & 1:
                    cur ^= hi_gens[b]
                diff >>= 1
                b += 1
            prev = hi
        if skip_low > lo_bits and (hi >> (skip_low - lo_bits)) == 0:
            continue
        arr = lo_table ^ cur
        weights = weigh(arr)
        valid = None
        if skip_low <= lo_bits and hi == 0:
            valid = (lo_idx >> skip_low) != 0
        cand = _best_rows(arr, weights, valid)
        if cand is not None and (best is None or cand < best):
            best = cand
    return best


def span_min(
    gens: Sequence[int],
    n: int,
    num: Sequence[int],
    skip_low: int = 0,
    workers: int = 1,
):
    """Minimum-weight vector sum(c_i g_i) with (index >> skip_low) != 0.

    ``index`` has bit i equal to c_i, so with the first ``skip_low``
    generators spanning a subspace B the search runs over the complement of B.
    Returns ``(raw weight, bits)`` or None when no index qualifies.
    """
    g = len(gens)
    if g <= skip_low:
        return None
    G = to_words(gens, n)
    lo_bits = min(g, CHUNK_BITS)
    n_hi = 1 << (g - lo_bits)
    parts = max(1, min(workers, n_hi))
    bounds = [n_hi * p // parts for p in range(parts + 1)]
    jobs = [(G, lo_bits, skip_low, bounds[p], bounds[p + 1], list(num), n) for p in range(parts)]
    results = pmap(_span_min_range, jobs, workers)
    best = None
    for r in results:
        if r is not None and (best is None or r < best):
            best = r
    return best


def pmap(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


# ---------------------------------------------------------------------------
# meet in the middle


@dataclass
class MitmResult:
    weight: int
    bits: int
    radius: int
    enumerated: int


def mitm_min(
    n: int,
    syndromes: Sequence[int],
    signatures: Sequence[int],
    num: Sequence[int],
    max_subsets: int,
) -> MitmResult | None:
    """Minimum weight x with XOR of syndromes 0 and XOR of signatures nonzero.

    Cells have positive integer weights ``num``.  Raises BudgetExceeded when
    more than ``max_subsets`` subsets would be needed to certify optimality.
    """
    if not any(signatures):
        return None
    wmin = min(num) if n else 1
    if wmin <= 0:
        raise ValueError("cell weights must be positive")
    # buckets[syndrome][signature] = (weight, bits)
    buckets: dict[int, dict[int, tuple[int, int]]] = {0: {0: (0, 0)}}
    enumerated = 1
    best: tuple[int, int] | None = None
    r = 0
    while True:
        if best is not None and best[0] < (2 * r + 1) * wmin:
            return MitmResult(best[0], best[1], r, enumerated)
        if r >= n:
            break
        r += 1
        need = comb(n, r)
        if enumerated + need > max_subsets:
            raise BudgetExceeded(
                f"meet-in-the-middle needs more than {max_subsets} subsets",
                required=enumerated + need,
                allowed=max_subsets,
            )
        touched = set()
        for combo in itertools.combinations(range(n), r):
            s = 0
            t = 0
            w = 0
            bits = 0
            for c in combo:
                s ^= syndromes[c]
                t ^= signatures[c]
                w += num[c]
                bits |= 1 << c
            b = buckets.get(s)
            if b is None:
                buckets[s] = {t: (w, bits)}
            else:
                old = b.get(t)
                if old is None or (w, bits) < old:
                    b[t] = (w, bits)
            touched.add(s)
        enumerated += need
        for s in touched:
            b = buckets[s]
            if len(b) < 2:
                continue
            two = sorted(b.values())[:2]
            x = two[0][1] ^ two[1][1]
            wx = sum(num[i] for i in _bits(x))
            cand = (wx, x)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return MitmResult(best[0], best[1], r, enumerated)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mitm_limit(budget: int) -> int:
    """Subsets the meet-in-the-middle search may store.

    Each subset costs a Python dict entry rather than a packed word, so the
    allowance is 2**(budget - 4).
    """
    return 1 << max(budget - 4, 1)
