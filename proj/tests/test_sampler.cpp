#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "apstat/empirics.hpp"
#include "apstat/runner.hpp"
#include "apstat/sampler.hpp"
#include "test_helpers.hpp"

using namespace apstat;
using spectra::FourierModel;

namespace {

FourierModel symmetric_pair(double lambda, cplx f) {
    return FourierModel({{-lambda, std::conj(f)}, {lambda, f}}, "pair");
}

}  // namespace

TEST_CASE("sample_phases structure") {
    const auto empty = sampler::sample_phases(spectra::SpectrumDecomposition{}, 1, 0);
    CHECK(empty.pair_phases.empty());
    CHECK(empty.residue_phases.empty());

    const auto m = symmetric_pair(1.0, {0.5, 0.0});
    const auto d = spectra::decompose(m);
    const auto p = sampler::sample_phases(d, 7, 3);
    REQUIRE(p.pair_phases.size() == 1);
    CHECK(std::abs(std::abs(p.pair_phases[0]) - 1.0) < 1e-12);
    // conjugate symmetry: phase(-lambda) * phase(lambda) == 1
    const auto per_term = sampler::per_term_phases(m, p);
    CHECK(std::abs(per_term[0] * per_term[1] - cplx{1.0, 0.0}) < 1e-12);

    // determinism: same (seed, replica) gives bit-identical phases
    const auto q = sampler::sample_phases(d, 7, 3);
    CHECK(q.pair_phases[0] == p.pair_phases[0]);
    CHECK(sampler::sample_phases(d, 7, 4).pair_phases[0] != p.pair_phases[0]);
}

TEST_CASE("mean phase modulus over 1e5 draws is CLT-small") {
    spectra::SpectrumDecomposition d;
    std::vector<spectra::Term> terms;
    for (int k = 0; k < 3; ++k) terms.push_back({static_cast<double>(k + 1), {1, 0}});
    const FourierModel m(terms, "r3");
    const auto dec = spectra::decompose(m);
    cplx s{};
    for (int r = 0; r < 100000 / 3 + 1; ++r) {
        const auto p = sampler::sample_phases(dec, 12345, r);
        for (const auto& u : p.residue_phases) s += u;
    }
    CHECK(std::abs(s) / 100000.0 < 0.01);
}

TEST_CASE("evaluate with unit phases reproduces the deterministic polynomial") {
    const FourierModel m({{-2.2, {0.3, 0.4}}, {0.7, {1.0, -0.2}}, {3.1, {0.0, 0.9}}}, "poly");
    const auto d = spectra::decompose(m);
    const auto unit = sampler::unit_phases(d);
    const std::vector<double> grid = {-1.0, 0.0, 0.4, 2.0};
    const auto path = sampler::evaluate(m, unit, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(std::abs(path.values[j] - m(grid[j])) < 1e-12);
}

TEST_CASE("evaluate is exactly real for conjugate-symmetric models") {
    const auto table = zeta::ingest_zeros(testutil::zeros_path());
    const auto em = zeta::build_explicit_model(zeta::ExplicitKind::psi, table,
                                               zeta::midpoint_truncation(table, 50));
    const auto d = spectra::decompose(em.model);
    const auto p = sampler::sample_phases(d, 99, 0);
    std::vector<double> grid;
    for (int j = 0; j <= 100; ++j) grid.push_back(0.1 * j);
    const auto path = sampler::evaluate(em.model, p, grid);
    for (const auto& v : path.values) CHECK(std::abs(v.imag()) < 1e-10);
}

TEST_CASE("evaluate hand value for a single pair with phase i") {
    const auto m = symmetric_pair(1.0, {0.5, 0.0});
    const auto d = spectra::decompose(m);
    auto p = sampler::unit_phases(d);
    p.pair_phases[0] = {0.0, 1.0};  // u = i
    const std::vector<double> grid = {0.0, 3.14159265358979323846 / 2.0};
    const auto path = sampler::evaluate(m, p, grid);
    CHECK(std::abs(path.values[0] - cplx{0.0, 0.0}) < 1e-12);   // 2 Re(i/2) = 0
    CHECK(std::abs(path.values[1] - cplx{-1.0, 0.0}) < 1e-12);  // 2 Re(i e^{i pi/2} / 2) = -1

    // misaligned phases are rejected
    const auto other = spectra::decompose(symmetric_pair(2.0, {0.5, 0.0}));
    auto wrong = sampler::sample_phases(other, 1, 0);
    wrong.pair_phases.push_back({1.0, 0.0});
    CHECK_THROWS(sampler::evaluate(m, wrong, grid));
}

TEST_CASE("exact covariance closed forms") {
    const FourierModel m({{-1.0, {1.0, 0.0}}, {1.0, {1.0, 0.0}}}, "cospair");
    CHECK(sampler::exact_covariance(m, 0.0).real() ==
          doctest::Approx(std::pow(spectra::parseval_norm(m), 2)));
    for (double s : {0.3, 1.0, 2.7})
        CHECK(sampler::exact_covariance(m, s).real() == doctest::Approx(2.0 * std::cos(s)));

    // psi truncation vs independent loop
    const auto table = zeta::ingest_zeros(testutil::zeros_path());
    const auto em = zeta::build_explicit_model(zeta::ExplicitKind::psi, table,
                                               zeta::midpoint_truncation(table, 100));
    for (double s : {0.0, 1.0, 5.5}) {
        cplx direct{};
        for (std::size_t k = 0; k < 100; ++k) {
            const double g = table.gammas[k];
            direct += (std::polar(1.0, g * s) + std::polar(1.0, -g * s)) / (0.25 + g * g);
        }
        CHECK(std::abs(sampler::exact_covariance(em.model, s) - direct) < 1e-12);
    }
}

TEST_CASE("exact pseudocovariance") {
    const FourierModel res({{1.0, {1, 0}}, {2.0, {1, 0}}}, "residue-only");
    CHECK(std::abs(sampler::exact_pseudocovariance(res, 1.3)) == 0.0);

    const FourierModel pair({{-1.0, {0.5, 0.0}}, {1.0, {0.5, 0.0}}}, "quarter");
    for (double s : {0.0, 0.9}) {
        const cplx expect = 0.25 * std::polar(1.0, s);
        CHECK(std::abs(sampler::exact_pseudocovariance(pair, s) - expect) < 1e-14);
    }

    // conjugate-symmetric psi model: f_gamma f_{-gamma} = 1/|rho|^2
    const auto table = zeta::ingest_zeros(testutil::zeros_path());
    const auto em = zeta::build_explicit_model(zeta::ExplicitKind::psi, table,
                                               zeta::midpoint_truncation(table, 50));
    for (double s : {0.0, 2.0}) {
        cplx direct{};
        for (std::size_t k = 0; k < 50; ++k) {
            const cplx rho{0.5, table.gammas[k]};
            direct += (1.0 / rho) * (1.0 / std::conj(rho)) * std::polar(1.0, table.gammas[k] * s);
        }
        CHECK(std::abs(sampler::exact_pseudocovariance(em.model, s) - direct) < 1e-12);
    }
}

TEST_CASE("exact increment second moment") {
    const FourierModel one = testutil::single(2.0, {1.0, 0.0});
    CHECK(sampler::exact_increment_second_moment(one, 0.0) == 0.0);
    for (double t : {0.1, 1.0})
        CHECK(sampler::exact_increment_second_moment(one, t) ==
              doctest::Approx(2.0 * (1.0 - std::cos(2.0 * t))));

    // identity 2(K(0) - Re K(t)) on a random model
    const auto m = suites::random_pair_model(8, 17);
    for (double t : {0.2, 0.9, 3.3}) {
        const double lhs = sampler::exact_increment_second_moment(m, t);
        const double rhs = 2.0 * (sampler::exact_covariance(m, 0.0).real() -
                                  sampler::exact_covariance(m, t).real());
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("path sample CSV round-trips and is deterministic in (seed, replica)") {
    const auto m = suites::random_pair_model(5, 23);
    const auto d = spectra::decompose(m);
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const auto a = sampler::evaluate(m, sampler::sample_phases(d, 101, 9), grid);
    const auto b = sampler::evaluate(m, sampler::sample_phases(d, 101, 9), grid);
    CHECK(sampler::path_sample_csv(a) == sampler::path_sample_csv(b));

    const auto parsed = sampler::parse_path_sample_csv(sampler::path_sample_csv(a));
    REQUIRE(parsed.grid.size() == a.grid.size());
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(parsed.grid[i] == a.grid[i]);
        CHECK(parsed.values[i] == a.values[i]);
    }
    CHECK(parsed.seed == a.seed);
    CHECK(parsed.replica == a.replica);
}

TEST_CASE("evaluate_ensemble matches per-replica evaluate") {
    const auto m = suites::random_pair_model(6, 31);
    const auto d = spectra::decompose(m);
    const std::vector<double> grid = {0.0, 0.7, 1.9};
    const auto ens = sampler::evaluate_ensemble(m, d, grid, 55, 8, 2);
    for (std::uint64_t r = 0; r < 8; ++r) {
        const auto path = sampler::evaluate(m, sampler::sample_phases(d, 55, r), grid);
        for (std::size_t j = 0; j < grid.size(); ++j)
            CHECK(std::abs(ens[r * grid.size() + j] - path.values[j]) < 1e-12);
    }
}

TEST_CASE("ensemble is centered and stationary within Monte Carlo error") {
    const auto m = suites::random_pair_model(10, 41);
    const auto d = spectra::decompose(m);
    const std::size_t n = 10000;
    const double k0 = sampler::exact_covariance(m, 0.0).real();

    // centering at t = 0
    const std::vector<double> zero = {0.0};
    const auto ens0 = sampler::evaluate_ensemble(m, d, zero, 77, n, 2);
    cplx mean0{};
    for (const auto& v : ens0) mean0 += v;
    mean0 /= static_cast<double>(n);
    CHECK(std::abs(mean0) < 3.0 * std::sqrt(k0 / static_cast<double>(n)));

    // stationarity: marginal law and lag-covariance at a shifted grid agree
    const double s = 2.31;
    const std::vector<double> g1 = {0.0, 0.4};
    const std::vector<double> g2 = {s, s + 0.4};
    const auto e1 = sampler::evaluate_ensemble(m, d, g1, 78, n, 2);
    const auto e2 = sampler::evaluate_ensemble(m, d, g2, 79, n, 2);
    std::vector<double> re1(n), re2(n), cov1(n), cov2(n);
    for (std::size_t i = 0; i < n; ++i) {
        re1[i] = e1[2 * i].real();
        re2[i] = e2[2 * i].real();
        cov1[i] = (e1[2 * i + 1] * std::conj(e1[2 * i])).real();
        cov2[i] = (e2[2 * i + 1] * std::conj(e2[2 * i])).real();
    }
    const double se_mean = std::sqrt((variance(re1) + variance(re2)) / static_cast<double>(n));
    CHECK(std::abs(mean(re1) - mean(re2)) < 3.0 * se_mean);
    const double se_cov = std::sqrt((variance(cov1) + variance(cov2)) / static_cast<double>(n));
    CHECK(std::abs(mean(cov1) - mean(cov2)) < 3.0 * se_cov);
    const auto ks = empirics::ks_component(re1, re2, "stationarity");
    CHECK(ks.verdict);

    // empirical increment second moment matches the closed form
    std::vector<double> inc(n);
    for (std::size_t i = 0; i < n; ++i) inc[i] = std::norm(e1[2 * i + 1] - e1[2 * i]);
    const double exact = sampler::exact_increment_second_moment(m, 0.4);
    CHECK(std::abs(mean(inc) - exact) < 3.0 * std::sqrt(variance(inc) / static_cast<double>(n)));
}
