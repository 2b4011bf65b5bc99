import math

import numpy as np
import pytest

from activeinfo.dists import COIN, EventProb, UniformN, cdf_one_sided, cdf_two_sided
from activeinfo.engine import Sidedness, TestSpec
from activeinfo.errors import DomainError, PreconditionError
from activeinfo.oracle import (
    DiscreteDist,
    MCEstimate,
    conservation_bound_check,
    conservation_lhs_exact,
    empirical_cdf,
    empirical_critical,
    log_pvalue_bound_check,
    quantile_std_error,
)
from activeinfo.priors import Beta, Uniform01
from activeinfo.units import BITS, InfoValue

ONE, TWO = Sidedness.ONE_SIDED_UPPER, Sidedness.TWO_SIDED
LN2 = math.log(2)


class TestEmpiricalCdf:
    def test_coin_one_sided_median(self):
        est = empirical_cdf(InfoValue(0, BITS), ONE, COIN, Uniform01(), 42, 10**6)
        assert est.n_samples == 10**6 and est.seed == 42
        assert abs(est.estimate - 0.5) <= 4 * est.std_error
        assert 4 * est.std_error == pytest.approx(0.002, rel=1e-3)

    def test_coin_two_sided_branch_point(self):
        est = empirical_cdf(LN2, TWO, COIN, Uniform01(), 42, 10**6)
        assert abs(est.estimate - 0.75) <= 4 * est.std_error

    def test_infinite_threshold(self):
        est = empirical_cdf(math.inf, TWO, EventProb(0.2), Beta(2, 3), 1, 1000)
        assert est.estimate == 1.0 and est.std_error == 0.0

    def test_std_error_formula(self):
        est = empirical_cdf(0.3, TWO, UniformN(5), Uniform01(), 3, 5000)
        assert est.std_error == math.sqrt(est.estimate * (1 - est.estimate) / 5000)

    def test_deterministic(self):
        a = empirical_cdf(0.4, TWO, COIN, Beta(0.5, 0.5), 9, 300_000)
        b = empirical_cdf(0.4, TWO, COIN, Beta(0.5, 0.5), 9, 300_000)
        assert a == b

    def test_independent_of_workers(self):
        a = empirical_cdf(-0.2, ONE, UniformN(3), Uniform01(), 17, 700_000, workers=1)
        b = empirical_cdf(-0.2, ONE, UniformN(3), Uniform01(), 17, 700_000, workers=4)
        assert a == b

    def test_seed_changes_stream(self):
        a = empirical_cdf(0.4, TWO, COIN, Uniform01(), 1, 100_000)
        b = empirical_cdf(0.4, TWO, COIN, Uniform01(), 2, 100_000)
        assert a.estimate != b.estimate

    @pytest.mark.parametrize("prior", [Beta(0.5, 0.5), Beta(2, 5)], ids=repr)
    def test_general_prior(self, prior):
        for t in (-1.0, 0.0, 0.5):
            est = empirical_cdf(t, ONE, UniformN(4), prior, 8, 200_000)
            assert est.agrees(cdf_one_sided(t, UniformN(4), prior))
        for t in (0.3, 1.0, 2.0):
            est = empirical_cdf(t, TWO, UniformN(4), prior, 8, 200_000)
            assert est.agrees(cdf_two_sided(t, UniformN(4), prior))


class TestEmpiricalCritical:
    def test_two_sided_branch_point(self):
        got = empirical_critical(0.25, TWO, COIN, Uniform01(), 42, 10**6)
        assert got == pytest.approx(LN2, abs=0.003)

    def test_one_sided_median(self):
        got = empirical_critical(0.5, ONE, COIN, Uniform01(), 42, 10**6)
        assert abs(got / LN2) < 0.005

    def test_two_sided_exact_tail(self):
        got = empirical_critical(0.05, TWO, COIN, Uniform01(), 42, 10**6)
        # density of |I+| at ln 10 is e^-n / 2 = 0.05
        se = quantile_std_error(0.05, 0.05, 10**6)
        assert got == pytest.approx(math.log(10), abs=min(0.02, 4 * se))

    def test_needs_enough_samples(self):
        with pytest.raises(DomainError):
            empirical_critical(0.1, ONE, COIN, Uniform01(), 1, 999)


def brute_lhs(p, v, r, x):
    """Straight loop over outcomes."""
    total = 0.0
    for pi, vi in zip(p, v):
        if vi > 0 and -math.log(r * pi / vi) >= x:
            total += pi
    return total


class TestConservation:
    def test_trivial_case(self):
        rows = conservation_bound_check(DiscreteDist((0.25,) * 4), [1] * 4, 4.0, [0.0, math.log(4)])
        assert rows[0].lhs == 1.0 and rows[0].bound == 1.0 and rows[0].holds
        assert rows[1].lhs == 0.0 and rows[1].holds

    def test_r_must_cover_total_mass(self):
        with pytest.raises(PreconditionError):
            conservation_bound_check(DiscreteDist((0.25,) * 4), [1] * 4, 1.0, [0.0])

    def test_shape_and_sign_checks(self):
        d = DiscreteDist((0.5, 0.5))
        with pytest.raises(PreconditionError):
            conservation_bound_check(d, [0.1], 1.0, [0.0])
        with pytest.raises(PreconditionError):
            conservation_bound_check(d, [0.1, -0.1], 1.0, [0.0])

    def test_three_point_instance(self):
        p = DiscreteDist((0.7, 0.2, 0.1))
        exact = conservation_lhs_exact(p, p.probs, 1.0, 1.0)
        assert exact == brute_lhs(p.probs, p.probs, 1.0, 1.0) == 0.0
        rows = conservation_bound_check(p, p.probs, 1.0, [1.0], seed=3, n=10**5, method="sample")
        assert abs(rows[0].lhs - exact) <= 4 * rows[0].std_error

    def test_random_instances(self):
        rng = np.random.default_rng(2020)
        xs = [0.0, 0.5, 1.0, 2.0]
        for k in range(50):
            size = int(rng.integers(2, 9))
            p = DiscreteDist(tuple(rng.dirichlet(np.full(size, 0.5))))
            v = rng.uniform(0, 1, size)
            v[v == 0] = 1e-3
            r = float(v.sum() * rng.uniform(1.0, 1.5))
            rows = conservation_bound_check(p, v, r, xs)
            sampled = conservation_bound_check(p, v, r, xs, seed=k, n=20_000, method="sample")
            for row, srow, x in zip(rows, sampled, xs):
                assert row.lhs == pytest.approx(brute_lhs(p.probs, v, r, x), abs=1e-15)
                assert row.holds and row.lhs <= math.exp(-x)
                # binomial SE at the enumerated probability
                se = math.sqrt(row.lhs * (1 - row.lhs) / 20_000)
                assert abs(srow.lhs - row.lhs) <= 4 * se

    def test_auto_enumerates_small_spaces(self):
        p = DiscreteDist(tuple(np.full(20, 0.05)))
        rows = conservation_bound_check(p, np.full(20, 0.05), 1.0, [0.0])
        assert rows[0].std_error == 0.0
        big = DiscreteDist(tuple(np.full(21, 1 / 21)))
        rows = conservation_bound_check(big, np.full(21, 1 / 21), 1.0, [0.0], n=1000)
        assert rows[0].std_error == 0.0 and rows[0].lhs == 1.0


class TestDiscreteDist:
    def test_normalizes(self):
        d = DiscreteDist((1, 1, 2))
        assert d.probs == (0.25, 0.25, 0.5)

    @pytest.mark.parametrize("probs", [(), (0.5, 0.0, 0.5), (1.0, -0.2), (float("nan"),)])
    def test_rejects(self, probs):
        with pytest.raises(DomainError):
            DiscreteDist(probs)

    def test_from_file(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("# header\n0.2\n0.3\n\n0.5\n")
        assert DiscreteDist.from_file(f).probs == (0.2, 0.3, 0.5)


def test_log_pvalue_bound():
    # P[ln(p_val / alpha) < x] <= alpha e^x
    for sided in (ONE, Sidedness.TWO_SIDED):
        rows = log_pvalue_bound_check(TestSpec(sided, 0.05), [-2.0, -0.5, 0.0, 1.0, 2.5], 4, 200_000)
        for x, est, bound, holds in rows:
            assert holds
            assert est == pytest.approx(min(1.0, 0.05 * math.exp(x)), abs=0.003)


def test_mcestimate_agrees():
    e = MCEstimate.from_count(500, 1000, 0)
    assert e.std_error == pytest.approx(math.sqrt(0.25 / 1000))
    assert e.agrees(0.5 + 3.9 * e.std_error)
    assert not e.agrees(0.5 + 4.1 * e.std_error)
