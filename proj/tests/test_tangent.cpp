#include <doctest.h>

#include <cmath>
#include <vector>

#include "apstat/sampler.hpp"
#include "apstat/tangent.hpp"
#include "test_helpers.hpp"

using namespace apstat;
using spectra::FourierModel;

namespace {

tangent::ExampleSpectrumSpec spec(double a, double b, std::size_t n, std::uint64_t seed = 2) {
    tangent::ExampleSpectrumSpec s;
    s.a = a;
    s.b = b;
    s.A = 1.0;
    s.n_terms = n;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("example spectrum generation") {
    CHECK_THROWS(spec(1.0, 2.5, 10).validate());   // b >= 2a
    CHECK_THROWS(spec(-1.0, 0.5, 10).validate());

    const auto one = tangent::generate_example_spectrum(spec(1.0, 1.0, 1));
    CHECK(one.size() == 2);  // one conjugate pair
    const double pn = spectra::parseval_norm(one);
    CHECK(pn * pn == doctest::Approx(1.0).epsilon(1e-12));  // sum of masses = A

    // a = b = 1: truncated second moment exponent near 1
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 10000));
    const auto meas = spectra::spectral_measure(m);
    std::vector<double> grid;
    for (int j = 0; j <= 8; ++j) grid.push_back(10.0 * std::pow(1000.0 / 10.0, j / 8.0));
    const auto fit = spectra::fit_scaling_exponents(meas, grid);
    CHECK(std::abs(fit.theta_hat - 1.0) < 0.15);

    // a = 1, b = 0.5: theta = 1.5, tail decays like x^{-1/2}
    const auto m2 = tangent::generate_example_spectrum(spec(1.0, 0.5, 10000));
    const auto fit2 = spectra::fit_scaling_exponents(spectra::spectral_measure(m2), grid);
    CHECK(std::abs(-fit2.beta_hat - (-0.5)) < 0.1);
}

TEST_CASE("nu function") {
    const FourierModel pair({{-2.0, {0.5, 0.0}}, {2.0, {0.5, 0.0}}}, "half");
    const auto meas = spectra::spectral_measure(pair);
    CHECK(tangent::nu_function(meas, 0.0) == 0.0);
    for (double t : {0.3, 1.9})
        CHECK(tangent::nu_function(meas, t) == doctest::Approx(1.0 - std::cos(2.0 * t)));

    // scaling window: v(eps t)/v(eps) near t^{2-theta} = 2 for theta = 1
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 10000));
    const auto sm = spectra::spectral_measure(m);
    const double ratio = tangent::nu_function(sm, 2e-3) / tangent::nu_function(sm, 1e-3);
    CHECK(std::abs(ratio - 2.0) < 0.2);
}

TEST_CASE("slowly varying factor") {
    tangent::SlowlyVarying ell;
    ell.c = 2.0;
    CHECK(ell(123.0) == 2.0);
    ell.kind = tangent::SlowlyVarying::Kind::log_power;
    ell.p = 1.5;
    CHECK(ell(100.0) == doctest::Approx(2.0 * std::pow(std::log(100.0), 1.5)));
}

TEST_CASE("tangent constant") {
    const auto unit = testutil::single(1.0, {1.0, 0.0});
    CHECK(tangent::c_constant(unit, 1.0) == doctest::Approx(3.14159265358979323846 / 2.0));
    CHECK_THROWS(tangent::c_constant(unit, 0.0));
    CHECK_THROWS(tangent::c_constant(unit, 2.0));

    // small-theta value against an independent evaluation of the same formula
    const double theta = 0.01;
    const double ref = 3.14159265358979323846 * theta /
                       (2.0 * std::exp(std::lgamma(3.0 - theta)) *
                        std::sin(3.14159265358979323846 * theta / 2.0));
    CHECK(tangent::c_constant(unit, theta) == doctest::Approx(ref).epsilon(1e-12));

    // scaling: ||2f|| = 2 ||f||
    const auto twice = testutil::single(1.0, {2.0, 0.0});
    CHECK(tangent::c_constant(twice, 0.7) == doctest::Approx(2.0 * tangent::c_constant(unit, 0.7)));
}

TEST_CASE("fbm covariance") {
    CHECK(tangent::fbm_covariance(1.0, 0.5, 1.0, 2.0) == doctest::Approx(1.0));
    CHECK(tangent::fbm_covariance(0.7, 1.3, 1.4, 0.0) == 0.0);
    for (double theta : {0.5, 1.0, 1.5}) {
        const double t = 0.8;
        CHECK(tangent::fbm_covariance(theta, 2.0, t, t) ==
              doctest::Approx(2.0 * 2.0 * std::pow(t, 2.0 - theta)));
        CHECK(tangent::fbm_covariance(theta, 2.0, 1.0, 2.0) ==
              doctest::Approx(tangent::fbm_covariance(theta, 2.0, 2.0, 1.0)));
    }

    // positive semidefinite on a grid: Cholesky succeeds for all three thetas
    std::vector<double> grid;
    for (int j = 1; j <= 64; ++j) grid.push_back(j / 16.0);
    for (double theta : {0.5, 1.0, 1.5}) {
        std::vector<double> k(64 * 64);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j)
                k[i * 64 + j] = tangent::fbm_covariance(theta, 1.0, grid[i], grid[j]);
        CHECK_NOTHROW(cholesky(k, 64));
    }
}

TEST_CASE("rescaled chordal process") {
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 500));
    const auto d = spectra::decompose(m);
    const auto p = sampler::sample_phases(d, 5, 0);
    tangent::SlowlyVarying ell;  // constant 1
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const auto path = tangent::rescaled_chordal(m, p, 1.0, ell, 1e-2, grid);
    CHECK(std::abs(path.values[0]) == 0.0);  // t = 0 pinned

    // linearity: scaling the coefficients by c scales the path by c
    std::vector<spectra::Term> terms = m.terms();
    for (auto& t : terms) t.coeff *= 3.0;
    const FourierModel m3(terms, "x3");
    const auto path3 = tangent::rescaled_chordal(m3, p, 1.0, ell, 1e-2, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(std::abs(path3.values[j] - 3.0 * path.values[j]) < 1e-12);
    CHECK_THROWS(tangent::rescaled_chordal(m, p, 1.0, ell, 0.0, grid));
}

TEST_CASE("preasymptotic covariance equals the nu-function identity") {
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 2000));
    const auto meas = spectra::spectral_measure(m);
    const double pn2 = std::pow(spectra::parseval_norm(m), 2);
    tangent::SlowlyVarying ell;
    ell.c = 0.61;
    const double eps = 1e-2, theta = 1.0;
    for (const auto& [t, s] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.0, 2.0}}) {
        const double direct = tangent::preasymptotic_covariance(meas, pn2, theta, ell, eps, t, s);
        const double via_nu = pn2 *
                              (tangent::nu_function(meas, eps * t) +
                               tangent::nu_function(meas, eps * s) -
                               tangent::nu_function(meas, eps * (t - s))) /
                              (std::pow(eps, 2.0 - theta) * ell(1.0 / eps));
        CHECK(direct == doctest::Approx(via_nu).epsilon(1e-10));
    }
}

TEST_CASE("covariance convergence scan") {
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 2000, 3));
    const auto meas = spectra::spectral_measure(m);
    tangent::TangentConfig cfg;
    cfg.theta = 1.0;
    cfg.ell.c = tangent::estimate_ell_constant(meas, 1.0, 10.0, 200.0);
    // lambda_max * eps * t must stay large or the truncated tail's deficit
    // dominates the gap at the small-epsilon end
    cfg.epsilon_schedule = {1e-1, 3e-2, 1e-2};

    // degenerate grid {0}: all gaps vanish
    cfg.t_grid = {0.0};
    const auto zero_scan = tangent::covariance_convergence_scan(cfg, m);
    for (const auto& [eps, gap] : zero_scan) CHECK(gap < 1e-12);

    cfg.t_grid = {4.0, 6.0, 8.0, 10.0};
    const auto scan = tangent::covariance_convergence_scan(cfg, m);
    REQUIRE(scan.size() == 3);
    CHECK(scan[1].second < scan[0].second);
    CHECK(scan[2].second < scan[1].second);
    CHECK(scan[2].second < 0.1 * tangent::c_constant(m, 1.0));

    // models with residue frequencies are refused
    const FourierModel res({{1.0, {1, 0}}, {2.0, {1, 0}}}, "res");
    CHECK_THROWS(tangent::covariance_convergence_scan(cfg, res));
    cfg.epsilon_schedule = {1e-2, 1e-1};
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("variance of the rescaled chordal process approaches the fbm value") {
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 10000, 6));
    const auto meas = spectra::spectral_measure(m);
    const double theta = 1.0;
    tangent::SlowlyVarying ell;
    ell.c = tangent::estimate_ell_constant(meas, theta, 20.0, 2000.0);
    const double C = tangent::c_constant(m, theta);
    const double eps = 1e-3, t = 6.0;  // inside the truncation's window

    const auto d = spectra::decompose(m);
    const std::size_t n = 2000;
    const std::vector<double> grid = {0.0, eps * t};
    const auto ens = sampler::evaluate_ensemble(m, d, grid, 31, n, 2);
    const double norm = std::sqrt(std::pow(eps, 2.0 - theta) * ell(1.0 / eps));
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = std::norm((ens[2 * i + 1] - ens[2 * i]).real() / norm);
    const double se = std::sqrt(variance(sq) / static_cast<double>(n));
    CHECK(std::abs(mean(sq) - tangent::fbm_covariance(theta, C, t, t)) < 3.0 * se);
}

TEST_CASE("hurst estimator calibrated on synthetic fbm") {
    std::vector<double> grid;
    for (int j = 1; j <= 64; ++j) grid.push_back(0.125 * j);
    const auto half = tangent::fbm_synthetic_paths(1.0, 0.5, grid, 256, 9);
    const auto h_half = tangent::hurst_estimate(half);
    CHECK(h_half.h_hat > 0.45);
    CHECK(h_half.h_hat < 0.55);

    const auto quarter = tangent::fbm_synthetic_paths(1.5, 0.5, grid, 256, 10);
    const auto h_quarter = tangent::hurst_estimate(quarter);
    CHECK(h_quarter.h_hat > 0.18);
    CHECK(h_quarter.h_hat < 0.32);

    CHECK_THROWS(tangent::hurst_estimate(std::vector<sampler::PathSample>(5)));
}

TEST_CASE("regular variation: tail balance and atom negligibility") {
    const double theta = 1.0;
    const auto m = tangent::generate_example_spectrum(spec(1.0, 1.0, 10000, 4));
    const auto meas = spectra::spectral_measure(m);
    std::vector<double> grid;
    for (int j = 0; j <= 6; ++j) grid.push_back(10.0 * std::pow(10.0, j / 3.0));

    // T(x)(2-theta)/(theta x^2 R(x)) -> 1 (checked at the largest grid point)
    const double x = grid.back();
    const double ratio = spectra::truncated_second_moment(meas, x) * (2.0 - theta) /
                         (theta * x * x * spectra::tail_mass(meas, x));
    CHECK(std::abs(ratio - 1.0) < 0.2);

    // largest atom beyond x over R(x) decreases along the grid
    double prev = 2.0;
    for (double xg : grid) {
        double max_atom = 0.0;
        for (const auto& a : meas.atoms)
            if (std::abs(a.lambda) > xg) max_atom = std::max(max_atom, a.mass);
        const double frac = max_atom / spectra::tail_mass(meas, xg);
        CHECK(frac <= prev * (1.0 + 1e-12));
        prev = frac;
    }
}
