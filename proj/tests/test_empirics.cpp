#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "apstat/empirics.hpp"
#include "apstat/rng.hpp"
#include "apstat/runner.hpp"
#include "test_helpers.hpp"

using namespace apstat;
using empirics::EmpiricalDistribution;
using spectra::FourierModel;

TEST_CASE("empirical distribution basics") {
    CHECK_THROWS(EmpiricalDistribution({}));
    EmpiricalDistribution d({3.0, 1.0, 2.0});
    CHECK(d.ecdf(0.5) == 0.0);
    CHECK(d.ecdf(3.0) == 1.0);
    double prev = -1;
    for (double x : {0.0, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
        CHECK(d.ecdf(x) >= prev);
        prev = d.ecdf(x);
    }
}

TEST_CASE("KS two-sample statistic") {
    std::vector<double> a, b, c;
    for (int i = 0; i < 10000; ++i) {
        a.push_back(rng::uniform01(1, 0, i, rng::Tag::misc));
        b.push_back(rng::uniform01(2, 0, i, rng::Tag::misc));
        c.push_back(0.5 + rng::uniform01(3, 0, i, rng::Tag::misc));
    }
    // identical sample sets
    const auto self = empirics::ks_two_sample(EmpiricalDistribution(a), EmpiricalDistribution(a));
    CHECK(self.statistic == 0.0);
    // same law
    const auto same = empirics::ks_two_sample(EmpiricalDistribution(a), EmpiricalDistribution(b));
    CHECK(same.verdict);
    // disjoint half-mass: statistic near 0.5, fail
    const auto shifted = empirics::ks_two_sample(EmpiricalDistribution(a), EmpiricalDistribution(c));
    CHECK(shifted.statistic == doctest::Approx(0.5).epsilon(0.05));
    CHECK(!shifted.verdict);
    // symmetry in the arguments
    const auto swapped = empirics::ks_two_sample(EmpiricalDistribution(c), EmpiricalDistribution(a));
    CHECK(swapped.statistic == doctest::Approx(shifted.statistic).epsilon(1e-12));
}

TEST_CASE("KS against a fitted gaussian accepts gaussian data") {
    std::vector<double> g;
    for (int i = 0; i < 8000; ++i) g.push_back(1.5 + 0.7 * rng::gaussian(4, 0, i));
    CHECK(empirics::ks_gaussian_fit(g).verdict);
    std::vector<double> u;
    for (int i = 0; i < 8000; ++i) u.push_back(rng::uniform01(5, 0, i, rng::Tag::misc));
    CHECK(!empirics::ks_gaussian_fit(u).verdict);
}

TEST_CASE("report CSV format and verdict invariant") {
    const auto r = empirics::make_report("demo", 0.4, 0.5, 10, "note");
    CHECK(r.verdict);
    CHECK(empirics::report_csv_row(r) == "demo,0.4,0.5,10,pass");
    const auto f = empirics::make_report("demo2", 0.6, 0.5, 10);
    CHECK(!f.verdict);
    CHECK(empirics::report_csv_row(f) == "demo2,0.6,0.5,10,fail");
    const auto lb = empirics::make_lower_bound_report("lb", 2.0, 1.0, 5);
    CHECK(lb.verdict);  // achieved 2 >= required 1
}

TEST_CASE("sample_translated") {
    // constant model: every sample equals the constant
    const FourierModel c = testutil::single(0.0, {2.5, -1.0}, "const");
    const std::vector<double> grid = {0.0, 1.0};
    const auto rows = empirics::sample_translated(c, 100.0, grid, 50, 3);
    for (const auto& row : rows)
        for (const auto& v : row) CHECK(std::abs(v - cplx{2.5, -1.0}) < 1e-12);

    // determinism
    const FourierModel m = testutil::single(1.0, {1.0, 0.0});
    const auto r1 = empirics::sample_translated(m, 10.0, grid, 4, 7);
    const auto r2 = empirics::sample_translated(m, 10.0, grid, 4, 7);
    CHECK(r1 == r2);

    // one-sided draws translate by V in [0, L] only
    const auto one_sided = empirics::sample_translated(m, 2.0, grid, 200, 9,
                                                       empirics::Side::one_sided);
    for (const auto& row : one_sided) CHECK(std::arg(row[0]) >= -1e-12);

    // law of arg f(V) is uniform on the circle for f = e^{it}
    const std::size_t n = 10000;
    const std::vector<double> zero = {0.0};
    const auto rows2 = empirics::sample_translated(m, 1e4, zero, n, 11);
    std::vector<double> args(n), uni(n);
    for (std::size_t i = 0; i < n; ++i) {
        args[i] = std::arg(rows2[i][0]);
        uni[i] = 2.0 * 3.14159265358979323846 * rng::uniform01(12, 0, i, rng::Tag::misc) -
                 3.14159265358979323846;
    }
    const auto ks = empirics::ks_two_sample(EmpiricalDistribution(args), EmpiricalDistribution(uni));
    CHECK(ks.statistic < 0.02);
}

TEST_CASE("fidi test at a single point reduces to the one-dimensional comparison") {
    const auto m = suites::random_pair_model(8, 3);
    const std::vector<double> L = {1e5};
    const std::vector<double> one_point = {0.0};
    const auto reports = empirics::fidi_convergence_test(m, L, one_point, 3000, 5);
    REQUIRE(reports.size() == 2);  // e1 and the random alpha
    for (const auto& r : reports) CHECK(r.verdict);
}

TEST_CASE("fidi panel passes for two unit vectors (stationarity of the limit)") {
    const auto m = suites::random_pair_model(8, 13);
    const std::vector<double> L = {1e6};
    const std::vector<double> pts = {0.0, 1.3};
    const auto reports = empirics::fidi_convergence_test(m, L, pts, 4000, 6);
    REQUIRE(reports.size() == 4);  // e1, e2, ones, rand
    for (const auto& r : reports) CHECK(r.verdict);
    CHECK_THROWS(empirics::fidi_convergence_test(m, L, std::vector<double>(7, 0.0), 100, 1));
}

TEST_CASE("ergodic average") {
    const auto m = suites::random_pair_model(6, 19, true);
    const auto d = spectra::decompose(m);
    const auto p = sampler::sample_phases(d, 21, 0);
    // phi = 1 integrates to 1 on any path
    CHECK(empirics::ergodic_average(m, p, 50.0, 0.01, "one") == doctest::Approx(1.0));
    CHECK_THROWS(empirics::ergodic_average(m, p, 50.0, 0.01, "nope"));

    // phi = re: time average is within the closed-form 3 sigma band around 0
    const double T = 400.0;
    const double avg = empirics::ergodic_average(m, p, T, 0.01, "re");
    CHECK(std::abs(avg) < 3.0 * empirics::time_average_sd_re(m, T) + 1e-6);

    // the closed-form sd matches a Monte Carlo over exact per-path averages
    auto g = [T](double nu) {
        const double x = nu * T;
        return std::abs(x) < 1e-9 ? cplx{1.0, 0.0}
                                  : (std::polar(1.0, x) - cplx{1.0, 0.0}) / (cplx{0.0, 1.0} * x);
    };
    const std::size_t n_mc = 20000;
    std::vector<double> avgs(n_mc);
    for (std::size_t r = 0; r < n_mc; ++r) {
        const auto pr = sampler::sample_phases(d, 77, r);
        const auto pt = sampler::per_term_phases(m, pr);
        cplx s{};
        for (std::size_t k = 0; k < m.size(); ++k)
            s += pt[k] * m.term(k).coeff * g(m.term(k).lambda);
        avgs[r] = s.real();
    }
    const double sd_mc = std::sqrt(variance(avgs));
    CHECK(empirics::time_average_sd_re(m, T) == doctest::Approx(sd_mc).epsilon(0.05));

    // phi = mod2 approaches K(0) over a long window
    const double k0 = sampler::exact_covariance(m, 0.0).real();
    const double avg2 = empirics::ergodic_average(m, p, 2000.0, 0.02, "mod2");
    CHECK(std::abs(avg2 - k0) / k0 < 0.25);
}

TEST_CASE("mixing probe") {
    const FourierModel pair({{-1.0, {1.0, 0.0}}, {1.0, {1.0, 0.0}}}, "cos");
    std::vector<double> lags;
    for (int i = 0; i <= 400; ++i) lags.push_back(50.0 + 0.01 * i);  // window length > pi
    const auto r = empirics::mixing_probe(pair, lags);
    CHECK(r.verdict);  // sup |2 cos| = 2 >= half the max atom weight
    CHECK_THROWS(empirics::mixing_probe(FourierModel{}, lags));
}

TEST_CASE("equidistribution character test examples") {
    const FourierModel m({{1.0, {0.5, 0.0}}, {2.0, {0.25, 0.0}}}, "res12");
    const std::size_t n = 100000;

    // k = 0, t -> 0: mean is 1
    const int k0[2] = {0, 0};
    const auto r0 = empirics::equidistribution_character_test(m, k0, 0.0, 1e4, n, 31);
    CHECK(r0.verdict);

    // single nonzero k at t = 0: mean modulus below 4/sqrt(n)
    const int k1[2] = {1, 0};
    const auto r1 = empirics::equidistribution_character_test(m, k1, 0.0, 1e4, n, 32);
    CHECK(r1.verdict);

    // coupled pair with lambda.k = 0 at t = 1: mean approaches sin(1)
    const int k2[2] = {2, -1};
    const auto r2 = empirics::equidistribution_character_test(m, k2, 1.0, 1e4, n, 33);
    CHECK(r2.verdict);
}

TEST_CASE("kronecker-weyl probe") {
    const double one_freq[1] = {1.0};
    const auto r_odd = empirics::kronecker_weyl_probe(one_freq, "re1", 2000.0, 41);
    CHECK(r_odd.verdict);  // both sides 0
    const auto r_one = empirics::kronecker_weyl_probe(one_freq, "one", 100.0, 42);
    CHECK(r_one.statistic < 1e-9);  // both sides exactly 1

    const double two[2] = {1.0, std::sqrt(2.0)};
    const auto r = empirics::kronecker_weyl_probe(two, "re12bar", 1e4, 43);
    CHECK(r.statistic < 0.02);  // torus integral is 0
    CHECK(r.verdict);
    CHECK_THROWS(empirics::kronecker_weyl_probe(std::vector<double>(5, 1.0), "one", 10.0, 1));
    CHECK_THROWS(empirics::kronecker_weyl_probe(two, "unknown", 10.0, 1));
}

TEST_CASE("holder diagnostic slope regimes") {
    // band-limited model: Lipschitz regime, slope 2
    const auto band = suites::random_pair_model(5, 47, true);
    std::vector<double> dts;
    for (int j = 0; j < 9; ++j) dts.push_back(1e-3 * std::pow(2.0, j * 0.5));
    const auto d = empirics::holder_diagnostic_detail(band, dts, 48);
    CHECK(std::abs(d.second_moment_slope - 2.0) < 0.05);

    const auto report = empirics::holder_diagnostic(band, std::vector<double>{0.5, 1.0}, dts);
    CHECK(report.verdict);
    std::vector<double> bad = {0.5, 2.0};
    CHECK_THROWS(empirics::holder_diagnostic(band, bad, bad));
}

TEST_CASE("trend gate allows one bad step and tolerates noise under the floor") {
    const std::vector<double> clean = {0.5, 0.3, 0.1, 0.05};
    CHECK(empirics::trend_nonincreasing(clean, 0.0));
    const std::vector<double> one_blip = {0.5, 0.6, 0.1, 0.05};
    CHECK(empirics::trend_nonincreasing(one_blip, 0.0));
    const std::vector<double> two_blips = {0.5, 0.6, 0.1, 0.2};
    CHECK(!empirics::trend_nonincreasing(two_blips, 0.0));
    // both sides under the gate: order carries no information
    CHECK(empirics::trend_nonincreasing(two_blips, 0.25));
}
