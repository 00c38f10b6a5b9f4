import threading

import pytest

from blindcast.baselines import (
    PRIME_INDEX_CAP,
    AlwaysSchedule,
    PrimeSchedule,
    nth_prime,
    prime_bit,
)
from blindcast.channel import collision, simulate_mac
from blindcast.errors import SizeLimitError, ValidationError
from blindcast.instances import make_instance


def trial_division_primes(count):
    out, n = [], 2
    while len(out) < count:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out


class TestNthPrime:
    def test_examples(self):
        assert nth_prime(1) == 2
        assert nth_prime(5) == 11
        assert nth_prime(100) == 541

    def test_against_trial_division(self):
        expect = trial_division_primes(300)
        assert [nth_prime(i) for i in range(1, 301)] == expect

    def test_bad_index(self):
        with pytest.raises(ValidationError):
            nth_prime(0)

    def test_cap(self):
        with pytest.raises(SizeLimitError):
            nth_prime(PRIME_INDEX_CAP + 1)

    def test_concurrent_growth(self):
        errors = []

        def probe():
            try:
                assert nth_prime(4000) == 37813
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=probe) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors


class TestPrimeBit:
    def test_examples(self):
        assert prime_bit(1, 2) == 1
        assert prime_bit(1, 1) == 0
        assert prime_bit(1, 0) == 0

    def test_periodicity(self):
        p = nth_prime(4)
        ones = [j for j in range(1, 5 * p + 1) if prime_bit(4, j)]
        assert ones == [p, 2 * p, 3 * p, 4 * p, 5 * p]

    def test_negative(self):
        with pytest.raises(ValidationError):
            prime_bit(1, -1)


class TestPrimeOnChannel:
    def test_singleton_hits_at_period(self, seed):
        for v in (1, 5, 100):
            inst = make_instance([(v, 0)])
            res = simulate_mac(inst, seed, "prime", horizon=nth_prime(v) + 2)
            assert res.hit_step == nth_prime(v)

    def test_two_smallest_ids(self, seed):
        # periods 2 and 3: step 2 has node 1 alone
        inst = make_instance([(1, 0), (2, 0)])
        res = simulate_mac(inst, seed, "prime", horizon=10, keep_transcript=True)
        assert res.hit_step == 2
        assert res.transcript[2].node == 1

    def test_wake_offset_shifts_period(self, seed):
        inst = make_instance([(1, 7)])
        res = simulate_mac(inst, seed, "prime", horizon=20)
        assert res.hit_step == 7 + 2

    def test_budget_column_is_wakeup_budget(self, seed):
        from blindcast.schedule import WAKEUP, delay_budget

        inst = make_instance([(5, 0)])
        res = simulate_mac(inst, seed, "prime", horizon=20)
        assert res.budget == delay_budget(seed, WAKEUP, inst.r, inst.k)


class TestAlways:
    def test_never_hits_simultaneous_pairs(self, seed):
        for k in (2, 3, 5):
            inst = make_instance([(v, 0) for v in range(1, k + 1)])
            res = simulate_mac(inst, seed, "always", horizon=2000)
            assert res.hit_step is None

    def test_only_collisions(self, seed):
        inst = make_instance([(1, 0), (2, 0), (3, 0)])
        res = simulate_mac(inst, seed, "always", horizon=5, keep_transcript=True)
        assert all(out == collision(3) for out in res.transcript)

    def test_schedule_interface(self):
        import numpy as np

        bits = PrimeSchedule().bits_block([1, 2], [0, 0], 0, 7)
        assert bits.tolist() == [
            [False, False, True, False, True, False, True],
            [False, False, False, True, False, False, True],
        ]
        assert AlwaysSchedule().bits_block([5], [3], 0, 5).tolist() == [
            [False, False, False, True, True]
        ]
        assert bits.dtype == np.bool_
