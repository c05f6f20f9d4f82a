"""Smoke tests for the compiled extension module."""

import cmath
import math
import os

import pytest

import _core as ap

DATA = os.environ.get("APSTAT_DATA_DIR", "data")
ZEROS = os.path.join(DATA, "zeta_zeros.txt")
ZPRIME = os.path.join(DATA, "zeta_zeros_zprime.csv")


def test_parseval_and_covariance():
    m = ap.FourierModel([(-1.0, 2 + 0j), (1.0, 2 + 0j)], "pair")
    assert ap.parseval_norm(m) == pytest.approx(math.sqrt(8))
    assert ap.exact_covariance(m, 0.0).real == pytest.approx(8.0)
    assert ap.exact_covariance(m, 1.3).real == pytest.approx(8.0 * math.cos(1.3))


def test_translate_and_inner_product():
    m = ap.FourierModel([(1.0, 1 + 0j)], "e")
    t = ap.translate(m, math.pi)
    assert t.terms()[0][1] == pytest.approx(-1 + 0j)
    f = ap.FourierModel([(1.0, 1 + 0j), (2.0, 2 + 0j)], "f")
    g = ap.FourierModel([(2.0, 3 + 0j)], "g")
    assert ap.inner_product(f, g) == pytest.approx(6 + 0j)


def test_sampling_is_deterministic_and_real_for_symmetric_models():
    m = ap.generate_example_spectrum(ap.ExampleSpectrumSpec(n_terms=50, seed=3))
    grid = [0.1 * j for j in range(20)]
    a = ap.sample_path(m, grid, seed=9, replica=2)
    b = ap.sample_path(m, grid, seed=9, replica=2)
    assert a == b
    assert max(abs(v.imag) for v in a) < 1e-10
    poly = ap.deterministic_path(m, grid)
    direct = [m(t) for t in grid]
    assert all(abs(p - d) < 1e-10 for p, d in zip(poly, direct))


def test_example_spectrum_and_tangent_constants():
    m = ap.generate_example_spectrum(ap.ExampleSpectrumSpec(a=1, b=1, A=1, n_terms=2000, seed=5))
    assert ap.parseval_norm(m) == pytest.approx(1.0)
    assert ap.c_constant(m, 1.0) == pytest.approx(math.pi / 2)
    alpha, beta, theta = ap.fit_scaling_exponents(m, [10.0, 30.0, 100.0, 300.0, 1000.0])
    assert theta == pytest.approx(1.0, abs=0.15)
    assert ap.fbm_covariance(1.0, 0.5, 1.0, 2.0) == pytest.approx(1.0)


def test_sieve_and_zeta():
    psi, = ap.sieve_summatory(100, "psi", [10.0])
    assert psi == pytest.approx(3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7))
    mertens = ap.sieve_summatory(100, "mertens", [10.0, 33.0])
    assert mertens == [pytest.approx(-1.0), pytest.approx(-3.0)]
    assert ap.zeta_evaluate(2.0, 0.0).real == pytest.approx(math.pi**2 / 6)
    with pytest.raises(Exception):
        ap.zeta_evaluate(1.0, 0.0)


@pytest.mark.skipif(not os.path.exists(ZEROS), reason="zero table not present")
def test_explicit_model_from_zero_table():
    m = ap.build_explicit_model("psi", ZEROS)
    assert len(m) == 200  # 100 conjugate pairs
    lam, coeff = max(m.terms(), key=lambda lc: abs(lc[1]))
    assert abs(coeff) == pytest.approx(1.0 / abs(complex(0.5, 14.134725141734694)))
    assert ap.explicit_remainder("liouville", 2.0) == pytest.approx(-0.68477, abs=1e-4)
    zp = ap.zeta_prime_on_line(14.134725141734694)
    assert 0.5 < abs(zp) < 1.5


@pytest.mark.skipif(not os.path.exists(ZEROS), reason="zero table not present")
def test_run_suite_quick():
    reports = ap.run_suite("sieve", ZEROS, ZPRIME, scale=0.05, seed=7)
    assert reports and all(r["verdict"] for r in reports)
