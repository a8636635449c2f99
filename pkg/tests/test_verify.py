import numpy as np
import pytest
from scipy import stats

from fextremal.algebra import UsageError, euclidean
from fextremal.laws import FrechetLaw, discrete_kappa, frechet_sample, substream
from fextremal.measure import Cell, exp_decay, indicator, simple
from fextremal.verify import (CheckReport, SuiteSettings, check_backend_equivalence,
                              check_classical_recovery, check_convergence_theorem,
                              check_gap_lemma, check_independence, check_marginal,
                              check_max_linearity, check_monotonicity, check_remainder,
                              check_rm2, check_sandwich, chi_square_fit, chi_square_homogeneity,
                              frequency_check, gap_exact, kendall_se, ks_check, ks_statistic,
                              ks_two_sample, reports_csv)

META = 100


# ---------------------------------------------------------------- primitives


def test_ks_statistic_matches_scipy(rng):
    x = rng.normal(size=500)
    assert ks_statistic(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic,
                                                            abs=1e-14)


def test_ks_two_sample_matches_scipy(rng):
    x, y = rng.normal(size=700), rng.normal(0.1, 1, size=400)
    rep = ks_two_sample(x, y, "t")
    assert rep.statistic == pytest.approx(stats.ks_2samp(x, y).statistic, abs=1e-14)


def test_ks_check_point_mass():
    rep = ks_check(np.zeros(200), point_mass=0.0)
    assert rep.statistic == 0 and rep.passed


def test_ks_check_needs_samples():
    with pytest.raises(UsageError):
        ks_check(np.ones(50), stats.norm.cdf)


def test_ks_separation():
    x = frechet_sample(FrechetLaw(1, 1), substream(1), 10_000)
    assert not ks_check(x, FrechetLaw(1, 2).cdf).passed


def test_ks_self_calibration():
    law = FrechetLaw(1.5, 1.3)
    passes = sum(ks_check(frechet_sample(law, substream(2, i), 10_000), law.cdf).passed
                 for i in range(META))
    assert passes >= 0.95 * META


def test_ks_two_sample_self_calibration():
    law = FrechetLaw(2.0, 1.0)
    passes = 0
    for i in range(META):
        rng = substream(3, i)
        x, y = frechet_sample(law, rng, 2000), frechet_sample(law, rng, 3000)
        passes += ks_two_sample(x, y, "t").passed
    assert passes >= 0.95 * META


def test_chi_square_self_calibration():
    probs = np.array([0.5, 0.3, 0.2])
    passes = sum(chi_square_fit(substream(4, i).choice(3, 5000, p=probs), probs, "t").passed
                 for i in range(META))
    assert passes >= 0.95 * META
    homog = sum(chi_square_homogeneity(substream(5, i).choice(3, 3000, p=probs),
                                       substream(6, i).choice(3, 3000, p=probs), 3, "t").passed
                for i in range(META))
    assert homog >= 0.95 * META


def test_chi_square_separation(rng):
    labels = rng.choice(3, 5000, p=[0.4, 0.4, 0.2])
    assert not chi_square_fit(labels, [0.5, 0.3, 0.2], "t").passed
    assert not chi_square_fit(np.zeros(100, int), [0.0, 1.0], "t").passed


def test_frequency_self_calibration():
    p, n = 0.25, 20_000
    passes = sum(frequency_check(int(substream(7, i).binomial(n, p)), n, p, "t").passed
                 for i in range(META))
    assert passes >= 0.95 * META


def test_frequency_modes():
    assert frequency_check(0, 1000, 0.3, "t", "at_most").passed
    assert not frequency_check(500, 1000, 0.3, "t", "at_most").passed
    with pytest.raises(UsageError):
        frequency_check(1, 10, 0.5, "t", "sideways")


def test_kendall_se_self_calibration():
    n = 2000
    se = kendall_se(n)
    inside = 0
    for i in range(META):
        rng = substream(8, i)
        tau = stats.kendalltau(rng.random(n), rng.random(n)).statistic
        inside += abs(tau) <= 3 * se
    assert inside >= 0.95 * META


# -------------------------------------------------------------- named checks


@pytest.fixture
def kappa(loss2):
    return discrete_kappa(loss2, [[1, 0], [0, 1], [1, 1]], [0.5, 0.3, 0.2])


def test_check_marginal_and_negative_control(spec2):
    g = exp_decay(1.0, 0.0, 20.0)
    good = check_marginal(spec2, g, n=5000, seed=1)
    assert all(r.passed for r in good)
    bad = check_marginal(spec2, g, n=5000, seed=1, scale_factor=2.0)
    assert not bad[0].passed


def test_check_backend_equivalence(spec2):
    reps = check_backend_equivalence(spec2, simple((0, 1, 2.0), (1, 3, 1.0), (3, 3.5, 1.5)),
                                     n=4000, seed=2)
    assert [r.name for r in reps] == ["backend_equivalence_ks", "backend_equivalence_angular"]
    assert all(r.passed for r in reps)


def test_gap_exact_values():
    assert gap_exact(1.0, [1, 1], 1.0) == pytest.approx(1 / 3)
    # the event for one leader is the sandwich probability with the other weights combined
    assert gap_exact(2.0, [1, 1, 1], 0.5) <= 1 - 1.5 ** -2


def test_check_gap_lemma(loss2, kappa):
    assert check_gap_lemma(loss2, kappa, 1.0, 5, None, 0.5, 20_000, seed=3).passed
    rep = check_gap_lemma(loss2, kappa, 1.0, 2, None, 1.0, 20_000, seed=3, exact=True)
    assert rep.passed and rep.reference == pytest.approx(1 / 3)
    # large alpha, gamma near 1: the bound is close to 1
    assert check_gap_lemma(loss2, kappa, 20.0, 3, None, 0.99, 2000, seed=3).passed
    with pytest.raises(UsageError):
        check_gap_lemma(loss2, kappa, 1.0, 1, None, 0.5)


def test_check_sandwich():
    rep = check_sandwich(1.0, 1.0, 1.0, 1.0, 50_000, seed=4)
    assert rep.reference == pytest.approx(1 / 6) and rep.passed


def test_pathwise_checks(spec2):
    for rep in (check_max_linearity(spec2, 200, 5), check_monotonicity(spec2, 200, 5),
                check_rm2(spec2, 200, 5), check_classical_recovery(200, 5)):
        assert rep.passed, rep.summary()


def test_check_remainder_cases(spec1):
    g = indicator(0.0, 4.0)
    assert check_remainder(spec1, g, Cell.interval(0, 3), 5000, seed=6).passed
    full = check_remainder(spec1, g, Cell.interval(0, 4), 2000, seed=6)
    assert full.statistic == 0 and full.reference == 0
    half = check_remainder(spec1, g, Cell.interval(0, 2), 5000, seed=6)
    assert half.reference == pytest.approx(0.5) and half.passed


def test_check_independence_cases(spec1):
    assert check_independence(spec1, indicator(0, 1), indicator(1, 2), 3000, 7).passed
    same = check_independence(spec1, indicator(0, 1), indicator(0, 1), 500, 7)
    assert same.passed and same.statistic == pytest.approx(1.0)
    assert check_independence(spec1, indicator(0, 2), indicator(1, 3), 3000, 7).passed


def test_check_convergence_cases(spec1, spec2):
    fwd = check_convergence_theorem(spec2, exp_decay(1.0), "dyadic", n=300, seed=8)
    assert fwd.passed, fwd.detail
    neg = check_convergence_theorem(spec1, simple((0, 1, 1.0)), "translates", n=300, seed=8)
    assert neg.passed
    assert "gaps=2;2;2" in neg.detail
    with pytest.raises(UsageError):
        check_convergence_theorem(spec1, simple((0, 1, 1.0)), "sideways", n=10)


# ------------------------------------------------------------- determinism


def test_reports_are_deterministic(spec2):
    a = check_marginal(spec2, exp_decay(1.0, 0, 5), n=500, seed=9)
    b = check_marginal(spec2, exp_decay(1.0, 0, 5), n=500, seed=9)
    assert reports_csv(a) == reports_csv(b)


def test_report_format():
    r = CheckReport("x", 10, 0.5, 0.25, 0.1, 0.05, False, 3, "note")
    assert r.verdict == "fail"
    assert r.summary().startswith("FAIL x:")
    lines = reports_csv([r]).splitlines()
    assert lines[0] == "name,n,statistic,reference,threshold,standard_error,verdict,seed,detail"
    assert lines[1] == "x,10,0.5,0.25,0.1,0.05,fail,3,note"


def test_suite_settings_default_kappa():
    s = SuiteSettings(loss=euclidean(3))
    assert s.kappa.atoms.shape == (4, 3)
    np.testing.assert_allclose(euclidean(3)(s.kappa.atoms), 1.0)
