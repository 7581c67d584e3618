from fractions import Fraction

import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fisher_two_sided, prng_closed_form
from strategies import tables
from tabled import stats
from tabled.errors import ContractViolation, Kind

# frozen from the closed form pow(48271, k, 2^31 - 1)
SEED1_STREAM = [
    48271, 182605794, 1291394886, 1914720637, 2078669041,
    407355683, 1105902161, 854716505, 564586691, 1596680831,
]


def test_prng_first_steps():
    assert stats.prng_next(1) == 48271
    assert stats.prng_next(42) == 2027382
    # 48271^2 = 2330089441 = 2147483647 + 182605794
    assert stats.prng_next(48271) == 182605794


def test_prng_stream_matches_closed_form():
    assert stats.prng_stream(1, 10) == SEED1_STREAM
    assert SEED1_STREAM == [prng_closed_form(1, k) for k in range(1, 11)]


@given(st.integers(1, stats.MODULUS - 1), st.integers(1, 30))
def test_prng_closed_form(seed, k):
    assert stats.prng_stream(seed, k)[-1] == prng_closed_form(seed, k)


@pytest.mark.parametrize("bad", [0, stats.MODULUS, -3, 1.5, True])
def test_prng_rejects_bad_state(bad):
    with pytest.raises(ContractViolation) as info:
        stats.prng_next(bad)
    assert info.value.kind is Kind.INVALID_SEED


def test_sample_indices_by_hand():
    # n=3, k=2, seed 42: draw 2027382 * 3 // m = 0 keeps 0 first;
    # next state 1226992407 * 2 // m = 1, so position 1 swaps with 2
    assert stats.prng_next(2027382) == 1226992407
    assert stats.sample_indices(3, 2, 42) == [0, 2]


@settings(max_examples=100)
@given(tables(), st.integers(1, stats.MODULUS - 1))
def test_full_sample_is_identity(t, seed):
    assert stats.sample_rows(t, t.nrows, seed) == t


@given(st.integers(0, 8), st.data())
def test_sample_is_ordered_subset(nrows, data):
    n = data.draw(st.integers(0, nrows))
    seed = data.draw(st.integers(1, stats.MODULUS - 1))
    idx = stats.sample_indices(nrows, n, seed)
    assert len(idx) == n
    assert idx == sorted(set(idx))
    assert all(0 <= i < nrows for i in idx)
    assert stats.sample_indices(nrows, n, seed) == idx


def test_sample_too_large():
    with pytest.raises(ContractViolation) as info:
        stats.sample_indices(3, 4, 1)
    assert info.value.kind is Kind.SAMPLE_TOO_LARGE


def test_fisher_margins_four_four():
    a = [True] * 4 + [False] * 4
    b = [True, True, True, False, True, False, False, False]
    p = stats.fisher_exact(a, b)
    assert p == Fraction(34, 70)
    assert abs(stats.fisher_test(a, b) - 0.4857142857) <= 1e-10


bool_pairs = st.integers(1, 12).flatmap(
    lambda n: st.tuples(st.lists(st.booleans(), min_size=n, max_size=n), st.lists(st.booleans(), min_size=n, max_size=n))
)


@given(bool_pairs)
def test_fisher_matches_enumeration_oracle(pair):
    a, b = pair
    assert stats.fisher_exact(a, b) == fisher_two_sided(a, b)


@settings(max_examples=300)
@given(bool_pairs)
def test_fisher_matches_scipy(pair):
    a, b = pair
    (tt, tf), (ft, ff) = stats.contingency(a, b)
    _, p = scipy.stats.fisher_exact([[tt, tf], [ft, ff]], alternative="two-sided")
    assert stats.fisher_test(a, b) == pytest.approx(min(p, 1.0), rel=1e-9, abs=1e-12)


@given(bool_pairs)
def test_fisher_is_a_probability(pair):
    p = stats.fisher_exact(*pair)
    assert 0 < p <= 1


def test_contingency_counts():
    a = [True, True, False, False]
    b = [True, False, True, True]
    assert stats.contingency(a, b) == ((1, 1), (2, 0))
