import math

import numpy as np
import pytest

import oracles
from sievelab.arith import phi, prime_power_table
from sievelab.eh import (
    eh_scan,
    modulus_limit,
    normalize,
    psi_class,
    psi_class_exp,
    psi_progression,
    remainder_sum,
    remainder_terms,
    scan_moduli,
)
from sievelab.errors import ArgumentError

EH_PIN_1E5 = 11271.079165879648
REMAINDER_PIN = 5052.622153423532


class TestPsiProgression:
    def test_examples(self):
        L = math.log
        assert psi_progression(10, 1) == pytest.approx(3 * L(2) + 2 * L(3) + L(5) + L(7))
        assert psi_progression(10, 3) == pytest.approx(2 * L(2) + L(5))
        assert psi_progression(1, 5) == 0.0

    def test_even_modulus(self):
        with pytest.raises(ArgumentError):
            psi_progression(10, 4)

    def test_mod_one_is_psi(self):
        tab = prime_power_table(10**4)
        for y in (2, 3, 100, 999, 5000, 10**4):
            assert psi_progression(y, 1, tab) == pytest.approx(tab.psi(y), rel=1e-14)
        # exact in the multiplicative form: exp(ψ(y)) = lcm(1..y)
        for y in (2, 10, 97, 1000, 10**4):
            assert psi_class_exp(y, 1, 0, tab) == math.lcm(*range(1, y + 1))

    @pytest.mark.parametrize("d", [3, 5])
    def test_residue_partition_exact(self, d):
        tab = prime_power_table(10**4)
        for y in (1, 2, 7, 50, 1234, 10**4):
            prod = math.prod(psi_class_exp(y, d, a, tab) for a in range(d))
            assert prod == math.lcm(*range(1, y + 1))
            total = math.fsum(psi_class(y, d, a, tab) for a in range(d))
            assert total == pytest.approx(tab.psi(y), rel=1e-14) if y >= 2 else total == 0.0

    def test_class_oracle(self):
        tab = prime_power_table(500)
        for d in (3, 7, 9):
            for a in range(d):
                assert psi_class(500, d, a, tab) == pytest.approx(oracles.psi_class_naive(500, d, a), abs=1e-11)


class TestScan:
    def test_moduli_at_100(self):
        rep = eh_scan(100, 0.5, keep_per_modulus=True)
        assert [d for d, _, _ in rep.per_modulus] == [1, 3, 5, 7, 9]
        assert rep.moduli == 5

    def test_modulus_limit(self):
        assert modulus_limit(100, 0.5) == 10
        assert modulus_limit(10**4, 0.5) == 100
        assert modulus_limit(1000, 1 / 3) == 100

    @pytest.mark.parametrize("X", [10, 97, 500, 1000])
    def test_sweep_vs_naive(self, X):
        tab = prime_power_table(X)
        moduli = np.arange(1, 32, 2, dtype=np.int64)
        maxima, argmax = scan_moduli(X, moduli, tab)
        for d, m, y in zip(moduli.tolist(), maxima.tolist(), argmax.tolist()):
            assert abs(m - oracles.eh_max_naive(X, d)) <= 1e-12
            assert abs(psi_progression(y, d, tab) - y / phi(d)) == pytest.approx(m, abs=1e-12)

    def test_monotone_in_delta(self):
        assert eh_scan(10**4, 0.6).sum <= eh_scan(10**4, 0.4).sum

    def test_no_even_moduli(self):
        rep = eh_scan(5000, 0.3, keep_per_modulus=True)
        assert all(d % 2 == 1 for d, _, _ in rep.per_modulus)
        assert all(m >= 0 for _, m, _ in rep.per_modulus)

    def test_pinned_and_thread_invariant(self):
        a = eh_scan(10**5, 0.5, threads=1)
        b = eh_scan(10**5, 0.5, threads=4)
        assert abs(a.sum - EH_PIN_1E5) <= 1e-9 * EH_PIN_1E5
        assert a.sum == b.sum and a.digest == b.digest

    def test_normalization_monotone_in_theta(self):
        X = 10**4
        vals = [normalize(100.0, X, th) for th in (0.0, 1.0, 3.0, 23.0)]
        assert vals == sorted(vals)
        rep = eh_scan(X, 0.5, theta=2.0)
        assert rep.normalized == pytest.approx(rep.sum * (6 * math.log(X)) ** 2 / X)

    def test_argument_guards(self):
        with pytest.raises(ArgumentError):
            eh_scan(100, 1.0)
        with pytest.raises(ArgumentError):
            eh_scan(1, 0.5)


def remainder_max_naive(X, d, unit):
    lam = [0.0] * (X + 3)
    for n in range(2, X + 3):
        lam[n] = oracles.von_mangoldt(n)
    if unit:
        sigma = 1 / d
    else:
        sigma = 1 / oracles.totient(d) if d % 2 else 0.0
    best = 0.0
    for y in range(1, X + 1):
        s = sum(1.0 if unit else lam[d * n + 2] for n in range(1, y // d + 1))
        best = max(best, abs(s - sigma * y))
    return best


class TestRemainder:
    def test_unit_bound(self):
        rep = remainder_sum(100, 10, 1, "unit")
        assert rep.value <= 10
        _, maxima, _ = remainder_terms(100, 10, "unit")
        assert np.all(maxima <= 1.0)

    @pytest.mark.parametrize("kind", ["unit", "lambda_shift2"])
    def test_naive(self, kind):
        X = 200
        ds, maxima, _ = remainder_terms(X, 12, kind)
        for d, m in zip(ds.tolist(), maxima.tolist()):
            assert m == pytest.approx(remainder_max_naive(X, d, kind == "unit"), abs=1e-11)

    def test_even_modulus_full_mass(self):
        X = 1000
        tab = prime_power_table(X + 2)
        ds, maxima, _ = remainder_terms(X, 8, "lambda_shift2")
        for d in (2, 4, 6, 8):
            mass = math.fsum(tab.lam(d * n + 2) for n in range(1, X // d + 1))
            assert maxima[d - 1] == pytest.approx(mass, rel=1e-13)

    def test_pinned(self):
        rep = remainder_sum(10**4, 100, 2, "lambda_shift2")
        assert abs(rep.value - REMAINDER_PIN) <= 1e-9 * REMAINDER_PIN

    def test_guards(self):
        with pytest.raises(ArgumentError):
            remainder_sum(100, 200, 1, "unit")
        with pytest.raises(ArgumentError):
            remainder_sum(100, 10, 5, "unit")
        with pytest.raises(ArgumentError):
            remainder_sum(100, 10, 1, "nope")
