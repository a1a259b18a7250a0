from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from leonard_lab.errors import BracketVanished, EvenIndexUnsupported, NotEnoughTerms, RatioInconsistent
from leonard_lab.qbracket import (
    BetaContext,
    assert_odd_brackets_nonzero,
    beta_of,
    bracket_ratio,
    context_for,
    odd_bracket_polynomial,
    q_bracket_odd,
)
from leonard_lab.scalar import QQ

from conftest import GF13


def ctx(beta, field=QQ, d=9):
    return BetaContext(d, field(beta))


def power_sum_bracket(n, q: Fraction) -> Fraction:
    """[n]_q straight from its definition q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    return sum((q ** (n - 1 - 2 * k) for k in range(n)), Fraction(0))


def test_beta_krawtchouk():
    assert beta_of([QQ(3), QQ(1), QQ(-1), QQ(-3)]).beta == 2


def test_beta_q_sequence():
    q = Fraction(2)
    seq = [q ** (2 * i) + q ** (-2 * i) for i in range(4)]
    oracle = (seq[0] - seq[3]) / (seq[1] - seq[2]) - 1
    assert oracle == Fraction(17, 4)
    assert beta_of([QQ(x) for x in seq]).beta == QQ.fraction(17, 4)


def test_beta_single_window_is_always_consistent():
    # d = 3 has one ratio window, so (0,1,2,4) yields beta = 3 rather than an error
    assert beta_of([QQ(x) for x in (0, 1, 2, 4)]).beta == 3


def test_beta_ratio_inconsistent():
    with pytest.raises(RatioInconsistent) as info:
        beta_of([QQ(x) for x in (0, 1, 2, 4, 5)])
    assert info.value.index == 3


def test_beta_needs_d3():
    with pytest.raises(NotEnoughTerms):
        beta_of([QQ(0), QQ(1), QQ(2)])


def test_context_default_for_small_d():
    c = context_for([QQ(1), QQ(-1)])
    assert c.beta == 2 and not c.derived
    assert context_for([QQ(1), QQ(-1)], beta=5).beta == 5


@pytest.mark.parametrize("beta", [0, 2, -2, 7, "1/3"])
def test_low_brackets(beta):
    c = ctx(beta)
    b = QQ(beta)
    assert q_bracket_odd(1, c) == 1
    assert q_bracket_odd(3, c) == b + 1
    assert q_bracket_odd(5, c) == b * b + b - 1


def test_even_rejected():
    with pytest.raises(EvenIndexUnsupported):
        q_bracket_odd(4, ctx(2))
    with pytest.raises(EvenIndexUnsupported):
        q_bracket_odd(0, ctx(2))


@pytest.mark.parametrize("n", range(1, 26, 2))
def test_beta_two_gives_n(n):
    assert q_bracket_odd(n, ctx(2)) == n


@pytest.mark.parametrize("n", range(1, 26, 2))
def test_beta_minus_two_alternates(n):
    assert q_bracket_odd(n, ctx(-2)) == (-1) ** ((n - 1) // 2)


def test_beta_one_mod_13_table():
    c = ctx(1, GF13, d=7)
    assert [q_bracket_odd(n, c).value for n in (1, 3, 5, 7)] == [1, 2, 1, 12]
    assert len(assert_odd_brackets_nonzero(7, c)) == 4


@pytest.mark.parametrize("beta", [2, -2])
def test_nonzero_check_passes(beta):
    assert len(assert_odd_brackets_nonzero(9, ctx(beta))) == 5


def test_nonzero_check_reports_index():
    # beta = -1: [3] = 0
    with pytest.raises(BracketVanished) as info:
        assert_odd_brackets_nonzero(5, ctx(-1))
    assert info.value.index == 3


@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda q: q != 0),
    st.sampled_from(range(1, 16, 2)),
)
def test_recurrence_matches_definition(q, n):
    beta = q**2 + q**-2
    assert q_bracket_odd(n, ctx(beta)) == QQ(power_sum_bracket(n, q))


@pytest.mark.parametrize("n", range(1, 20, 2))
def test_polynomial_form(n):
    coeffs = odd_bracket_polynomial(n)
    assert len(coeffs) - 1 == (n - 1) // 2
    assert all(isinstance(c, int) for c in coeffs)
    for beta in (-3, 0, 2, 5, Fraction(2, 7)):
        value = sum(c * Fraction(beta) ** k for k, c in enumerate(coeffs))
        assert q_bracket_odd(n, ctx(beta)) == QQ(value)


@given(
    st.fractions(min_value=-4, max_value=4, max_denominator=5),
    st.integers(1, 4),
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.data(),
)
def test_eigenvalue_ratio_identity(q, scale, offset, other, data):
    """(θ_i − θ_j)/(θ_r − θ_s) = [j−i]/[s−r] for θ_i = a + b q^{2i} + c q^{−2i}."""
    assume(q not in (0, 1, -1))
    d = 7
    b, c = Fraction(scale), Fraction(other)
    assume(b != 0 or c != 0)
    theta = [QQ(offset + b * q ** (2 * i) + c * q ** (-2 * i)) for i in range(d + 1)]
    assume(len(set(theta)) == d + 1)
    context = beta_of(theta)
    assert context.beta == QQ(q**2 + q**-2)
    total = data.draw(st.sampled_from(range(1, 2 * d, 2)))
    pairs = [(i, total - i) for i in range(d + 1) if i < total - i <= d]
    (i, j), (r, s) = data.draw(st.sampled_from(pairs)), data.draw(st.sampled_from(pairs))
    assert (theta[i] - theta[j]) / (theta[r] - theta[s]) == bracket_ratio(j - i, s - r, context)
