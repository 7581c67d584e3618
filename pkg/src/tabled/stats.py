"""Statistical and sampling builtins: Fisher's exact test and seeded row sampling."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .contracts import ensures, require
from .errors import Kind
from .model import MISSING, Table

MODULUS = 2**31 - 1
MULTIPLIER = 48271


def prng_next(state: int) -> int:
    """One step of the multiplicative congruential generator (48271, 2^31 - 1)."""
    require(
        isinstance(state, int) and not isinstance(state, bool) and 1 <= state <= MODULUS - 1,
        Kind.INVALID_SEED,
        f"PRNG state must be an integer in [1, {MODULUS - 1}], got {state!r}",
        seed=state,
    )
    return (MULTIPLIER * state) % MODULUS


def prng_stream(seed: int, count: int) -> list[int]:
    out = []
    state = seed
    for _ in range(count):
        state = prng_next(state)
        out.append(state)
    return out


def bounded_draw(value: int, k: int) -> int:
    """Map a generator output in [1, m-1] to an index in [0, k)."""
    return value * k // MODULUS


def sample_indices(nrows: int, n: int, seed: int) -> list[int]:
    """Partial Fisher-Yates: ``n`` distinct row indices, returned in table order.

    Step ``i`` advances the generator once and swaps position ``i`` with
    ``i + floor(next * (nrows - i) / (2^31 - 1))``.
    """
    require(
        isinstance(n, int) and 0 <= n <= nrows,
        Kind.SAMPLE_TOO_LARGE,
        f"cannot sample {n} rows from a table with {nrows} rows",
        n=n,
        nrows=nrows,
    )
    prng_next(seed)  # validates the seed even when n == 0
    idx = list(range(nrows))
    state = seed
    for i in range(n):
        state = prng_next(state)
        j = i + bounded_draw(state, nrows - i)
        idx[i], idx[j] = idx[j], idx[i]
    return sorted(idx[:n])


def _is_subsequence(t2, t1, n, seed):
    rows = iter(t1.rows)
    if not all(any(r == s for s in rows) for r in t2.rows):
        return "sampled rows are not a subsequence of the input"


@ensures(_is_subsequence)
def sample_rows(t1: Table, n: int, seed: int) -> Table:
    if isinstance(n, float) and n.is_integer():
        n = int(n)
    picked = sample_indices(t1.nrows, n, seed)
    return Table(t1.schema, tuple(t1.rows[i] for i in picked))


def contingency(a: Sequence[bool], b: Sequence[bool]) -> tuple[tuple[int, int], tuple[int, int]]:
    """2x2 counts: rows split on ``a`` (true first), columns on ``b``."""
    require(len(a) == len(b), Kind.LENGTH_MISMATCH, f"sequences have lengths {len(a)} and {len(b)}",
            expected=len(a), actual=len(b))
    require(len(a) > 0, Kind.EMPTY_INPUT, "fisherTest needs non-empty sequences")
    for seq in (a, b):
        for i, v in enumerate(seq):
            require(v is not MISSING, Kind.MISSING_CELL, f"element {i} is empty", row=i)
            require(isinstance(v, bool), Kind.SORT_MISMATCH, f"element {i} is {v!r}, not a Boolean", row=i)
    tt = sum(1 for x, y in zip(a, b) if x and y)
    tf = sum(1 for x, y in zip(a, b) if x and not y)
    ft = sum(1 for x, y in zip(a, b) if not x and y)
    ff = len(a) - tt - tf - ft
    return (tt, tf), (ft, ff)


def fisher_exact(a: Sequence[bool], b: Sequence[bool]) -> Fraction:
    """Two-sided Fisher exact p-value as an exact fraction.

    With the margins fixed, sums the hypergeometric probabilities of every
    table no more probable than the observed one. All comparisons are on
    integer numerators over the shared denominator C(n, row total).
    """
    (tt, tf), (ft, ff) = contingency(a, b)
    n = tt + tf + ft + ff
    row1 = tt + tf
    col1 = tt + ft
    lo, hi = max(0, row1 + col1 - n), min(row1, col1)
    weights = {k: comb(col1, k) * comb(n - col1, row1 - k) for k in range(lo, hi + 1)}
    observed = weights[tt]
    total = sum(w for w in weights.values() if w <= observed)
    return Fraction(total, comb(n, row1))


def fisher_test(a: Sequence[bool], b: Sequence[bool]) -> float:
    return float(fisher_exact(a, b))
