import math

import pytest

from qsperner.closure import (
    IntervalL,
    closure_length_bound,
    count_closed_pairs,
    is_q_closed,
    q_closure,
)
from qsperner.padic import PrimePower

QS = [4, 8, 9, 16, 25, 27]


def closed_by_arithmetic(q: int, lo: int, hi: int) -> bool:
    """Oracle: direct big-integer binomial divisibility."""
    p = PrimePower.from_q(q).p
    return math.comb(hi, hi - lo + 1) % p != 0


class TestIsClosed:
    def test_examples(self):
        pp9 = PrimePower.from_q(9)
        assert not is_q_closed(pp9, IntervalL(2, 3))  # C(3,2) = 3
        assert is_q_closed(pp9, IntervalL(1, 3))  # C(3,3) = 1

    def test_prime_modulus_always_closed(self):
        for q in (2, 3, 5, 7, 11):
            pp = PrimePower.from_q(q)
            for lo in range(1, q):
                for hi in range(lo, q):
                    assert is_q_closed(pp, IntervalL(lo, hi))

    @pytest.mark.parametrize("q", QS)
    def test_against_arithmetic_oracle(self, q):
        pp = PrimePower.from_q(q)
        for lo in range(1, q):
            for hi in range(lo, q):
                assert is_q_closed(pp, IntervalL(lo, hi)) == closed_by_arithmetic(
                    q, lo, hi
                )

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            is_q_closed(PrimePower.from_q(4), IntervalL(2, 4))


class TestLengthBound:
    def test_examples(self):
        assert closure_length_bound(PrimePower.from_q(9), 1) == 3
        assert closure_length_bound(PrimePower.from_q(8), 3) == 6  # (0,1,1): 3+4-1
        assert closure_length_bound(PrimePower.from_q(4), 3) == 3  # s = q-1

    def test_empty_digit_range_collapses_to_s(self):
        # leading digits already maxed: the construction cannot widen
        assert closure_length_bound(PrimePower.from_q(8), 4) == 4
        assert closure_length_bound(PrimePower.from_q(8), 6) == 6
        assert closure_length_bound(PrimePower.from_q(9), 6) == 6

    def test_below_q_minus_1_unless_full(self):
        for q in QS:
            pp = PrimePower.from_q(q)
            for s in range(1, q - 1):
                assert closure_length_bound(pp, s) < q - 1
            assert closure_length_bound(pp, q - 1) == q - 1

    def test_range_enforced(self):
        pp = PrimePower.from_q(8)
        with pytest.raises(ValueError):
            closure_length_bound(pp, 0)
        with pytest.raises(ValueError):
            closure_length_bound(pp, 8)


class TestClosure:
    def test_examples(self):
        pp9 = PrimePower.from_q(9)
        res = q_closure(pp9, IntervalL(3, 3))
        assert res.length == 3 and res.interval == IntervalL(1, 3)

        res = q_closure(PrimePower.from_q(4), IntervalL(2, 2))
        assert res.length == 2 and res.interval == IntervalL(1, 2)

        res = q_closure(pp9, IntervalL(1, 3))
        assert res.length == 3 and res.interval == IntervalL(1, 3)

    @pytest.mark.parametrize("q", QS)
    def test_contains_closed_minimal(self, q):
        pp = PrimePower.from_q(q)
        for lo in range(1, q):
            for hi in range(lo, q):
                res = q_closure(pp, IntervalL(lo, hi))
                out = res.interval
                assert out.lo <= lo and hi <= out.hi
                assert is_q_closed(pp, out)
                assert res.length == out.size
                # exhaustive minimality check by the arithmetic oracle
                for length in range(hi - lo + 1, res.length):
                    for lo2 in range(max(1, hi - length + 1), lo + 1):
                        hi2 = lo2 + length - 1
                        if hi2 <= q - 1:
                            assert not closed_by_arithmetic(q, lo2, hi2)

    @pytest.mark.parametrize("q", QS)
    def test_length_within_bound(self, q):
        pp = PrimePower.from_q(q)
        for lo in range(1, q):
            for hi in range(lo, q):
                res = q_closure(pp, IntervalL(lo, hi))
                assert res.length <= closure_length_bound(pp, hi - lo + 1)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_tightness_at_prime_squares(self, p):
        pp = PrimePower(p, 2)
        res = q_closure(pp, IntervalL(p, p))
        assert res.length == p == closure_length_bound(pp, 1)


class TestCensus:
    def test_examples(self):
        # q=4: (1,1), (2,2), (3,1), (3,2), (3,3)
        assert count_closed_pairs(PrimePower.from_q(4)).count == 5
        # q=3: (1,1), (2,1), (2,2) all avoid the prime 3
        assert count_closed_pairs(PrimePower.from_q(3)).count == 3
        for p in (2, 3, 5, 7):
            assert count_closed_pairs(PrimePower.from_q(p)).count == p * (p - 1) // 2

    @pytest.mark.parametrize("q", [3, 4, 8, 9, 16, 25, 27])
    def test_closed_form_agreement(self, q):
        pp = PrimePower.from_q(q)
        census = count_closed_pairs(pp)
        assert census.count == (pp.p * (pp.p + 1) // 2) ** pp.k - q

    def test_alt_form_differs_and_is_not_asserted(self):
        census = count_closed_pairs(PrimePower.from_q(4))
        assert census.alt_form == -3
        assert census.alt_form != census.count

    @pytest.mark.parametrize("q", [4, 8, 9])
    def test_matches_direct_enumeration(self, q):
        pp = PrimePower.from_q(q)
        direct = sum(
            1
            for b in range(1, q)
            for s in range(1, b + 1)
            if math.comb(b, s) % pp.p != 0
        )
        assert count_closed_pairs(pp).count == direct
