from __future__ import annotations

import pytest

from awkit.model import cyclic
from awkit.formulas import (
    UnclassifiedPrimeError,
    aw_zn3,
    ceil_log3,
    classified_factorization,
    classify_prime,
    f,
    is_power_of_3,
    is_prime,
    log3_bound,
    m_of,
    trial_division,
)
from awkit.solver import aw


class TestWindowIndex:
    def test_examples(self):
        assert m_of(9) == 2
        assert m_of(22) == 3
        assert m_of(567) == 5  # 567 = 21 * 27 is the top of the m=5 window

    def test_small_windows(self):
        assert m_of(2) == 0
        assert m_of(3) == 1
        assert m_of(7) == 1
        assert m_of(8) == 2
        assert m_of(21) == 2

    def test_rejects_below_two(self):
        with pytest.raises(ValueError):
            m_of(1)

    def test_windows_partition(self):
        # consecutive windows abut exactly: 9n <= 21*3^m and 9n > 7*3^m pick one m
        prev_top = 2  # m_of(2) == 0 window ends at n=2 (9*2=18 <= 21)
        for m in range(1, 14):
            low = prev_top + 1
            top = (7 * 3 ** (m + 1)) // 9
            assert m_of(low) == m and m_of(top) == m
            if low > 2:
                assert m_of(low - 1) == m - 1
            prev_top = top
        assert prev_top >= 10 ** 6

    def test_unique_on_sample(self):
        for n in list(range(2, 2000)) + [10 ** 4, 10 ** 5, 10 ** 6]:
            m = m_of(n)
            assert 7 * 3 ** m < 9 * n <= 21 * 3 ** m
            assert not (7 * 3 ** (m - 1) < 9 * n <= 21 * 3 ** (m - 1))
            assert not (7 * 3 ** (m + 1) < 9 * n <= 21 * 3 ** (m + 1))

    def test_total_and_unique_to_one_million(self):
        import numpy as np

        n = np.arange(2, 10 ** 6 + 1, dtype=np.int64)
        coverage = np.zeros(n.shape, dtype=np.int64)
        for m in range(0, 15):
            window = (7 * 3 ** m < 9 * n) & (9 * n <= 21 * 3 ** m)
            coverage += window
        assert np.all(coverage == 1)


class TestF:
    def test_examples(self):
        assert f(9) == 4
        assert f(8) == 5
        assert f(3 ** 7) == 9

    def test_small_values(self):
        assert f(1) == 2  # no 3-AP in [1]: aw = |G| + 1
        assert f(2) == 3
        assert f(3) == 3

    def test_powers_of_three(self):
        for m in range(1, 12):
            assert f(3 ** m) == m + 2
            if m >= 2:
                assert f(3 ** m - 1) == m + 3
                assert f(3 ** m + 1) == m + 3

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            f(0)


class TestLog3:
    def test_bound_examples(self):
        assert log3_bound(9) == (4, True)
        assert log3_bound(18) == (5, True)
        assert log3_bound(5) == (4, False)

    def test_exact_powers(self):
        for j in range(1, 39):
            assert ceil_log3(3 ** j) == j
            assert ceil_log3(3 ** j + 1) == j + 1
            assert ceil_log3(3 ** j - 1) == j

    def test_tightness_characterization(self):
        tight = {n for n in range(3, 2000) if log3_bound(n)[1]}
        expected = set()
        p = 3
        while p < 2000:
            expected.add(p)
            if 2 * p < 2000:
                expected.add(2 * p)
            p *= 3
        assert tight == expected

    def test_power_of_three_predicate(self):
        assert is_power_of_3(1) and is_power_of_3(27)
        assert not is_power_of_3(12)


class TestTrialDivision:
    def test_round_trip(self):
        for n in range(1, 500):
            e0, odd = trial_division(n)
            product = 2 ** e0
            for p, e in odd:
                assert p % 2 == 1 and is_prime(p)
                product *= p ** e
            assert product == n

    def test_primality(self):
        primes = [p for p in range(2, 100) if is_prime(p)]
        assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
                          43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


class TestClassifyPrime:
    def test_small_primes_are_class_three(self):
        # computed by the solver, matching the published small-prime values
        for p in (3, 5, 7, 11, 13):
            assert classify_prime(p) == 3

    def test_seventeen_computed(self):
        value = classify_prime(17)
        assert value in (3, 4)
        assert value == aw(cyclic(17), 3).aw_value

    def test_limit_enforced(self):
        with pytest.raises(UnclassifiedPrimeError):
            classify_prime(101)
        with pytest.raises(UnclassifiedPrimeError):
            classify_prime(13, limit=11)
        assert classify_prime(13, limit=13) == 3

    def test_rejects_non_primes(self):
        for bad in (2, 9, 15):
            with pytest.raises(ValueError):
                classify_prime(bad)

    def test_factorization_carries_classes(self):
        fact = classified_factorization(90)  # 2 * 3^2 * 5
        assert fact.exponent_of_2 == 1
        assert fact.odd_factors == ((3, 2), (5, 1))
        assert set(fact.classification) == {3, 5}


class TestAwZn3:
    def test_examples(self):
        assert aw_zn3(3) == 3
        assert aw_zn3(6) == 4

    def test_powers_of_two_times_three(self):
        for e0 in range(0, 5):
            for j in range(0, 5):
                n = (2 ** e0) * (3 ** j)
                if n < 2:
                    continue
                expected = (2 if n % 2 else 3) + j
                assert aw_zn3(n) == expected

    def test_agrees_with_solver_small(self):
        for n in range(2, 21):
            assert aw_zn3(n) == aw(cyclic(n), 3).aw_value

    def test_unclassified_propagates(self):
        with pytest.raises(UnclassifiedPrimeError):
            aw_zn3(2 * 101)

    def test_rejects_one(self):
        with pytest.raises(ValueError):
            aw_zn3(1)

    def test_custom_classifier_hook(self):
        # injecting the classification isolates the formula from the solver
        calls = []

        def fake(p):
            calls.append(p)
            return 4

        assert aw_zn3(35, classifier=fake) == 2 + 2 + 2  # 5 and 7 both class 4
        assert sorted(calls) == [5, 7]
