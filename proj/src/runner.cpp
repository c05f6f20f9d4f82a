#include "apstat/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "apstat/rng.hpp"
#include "apstat/tangent.hpp"

namespace apstat::suites {

namespace {

using empirics::TestReport;
using spectra::FourierModel;

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

zeta::ZeroTable load_table(const SuiteOptions& opt, bool need_zprime) {
    if (opt.zeros_path.empty())
        throw std::invalid_argument("this suite requires a zeros table (zeros_path)");
    zeta::ZeroTable table = zeta::ingest_zeros(opt.zeros_path);
    if (need_zprime) {
        if (opt.zeta_prime_path.empty())
            throw std::invalid_argument("this suite requires a zeta' companion file");
        zeta::load_zeta_prime(table, opt.zeta_prime_path);
    }
    return table;
}

std::string model_tag(const std::string& base, const FourierModel& m) {
    return base + "[" + std::to_string(m.size()) + " terms]";
}

}  // namespace

std::size_t SuiteOptions::scaled(std::size_t n, std::size_t floor_value) const {
    const auto s = static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale));
    return std::max(floor_value, std::min(n, std::max<std::size_t>(s, 1)));
}

FourierModel random_pair_model(std::size_t n_pairs, std::uint64_t seed, bool conjugate_symmetric) {
    std::vector<spectra::Term> terms;
    double lambda = 0.4 + rng::uniform01(seed, 1, 0, rng::Tag::misc);
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const double r = 0.15 + 0.85 * rng::uniform01(seed, 1, 3 * k + 1, rng::Tag::misc);
        const double arg = 2 * 3.14159265358979323846 * rng::uniform01(seed, 1, 3 * k + 2, rng::Tag::misc);
        const cplx fp = std::polar(r / std::sqrt(static_cast<double>(k + 1)), arg);
        cplx fn;
        if (conjugate_symmetric) {
            fn = std::conj(fp);
        } else {
            const double r2 = 0.15 + 0.85 * rng::uniform01(seed, 2, 3 * k + 1, rng::Tag::misc);
            const double a2 = 2 * 3.14159265358979323846 * rng::uniform01(seed, 2, 3 * k + 2, rng::Tag::misc);
            fn = std::polar(r2 / std::sqrt(static_cast<double>(k + 1)), a2);
        }
        terms.push_back({lambda, fp});
        terms.push_back({-lambda, fn});
        lambda += 0.3 + 0.7 * rng::uniform01(seed, 1, 3 * k + 3, rng::Tag::misc);
    }
    return FourierModel(std::move(terms),
                        (conjugate_symmetric ? "random-sym-" : "random-") + std::to_string(n_pairs) +
                            "-pairs seed=" + std::to_string(seed));
}

FourierModel psi_model_from_table(const zeta::ZeroTable& table, std::size_t n_zeros) {
    const double T = zeta::midpoint_truncation(table, n_zeros);
    return zeta::build_explicit_model(zeta::ExplicitKind::psi, table, T).model;
}

// ---------------------------------------------------------------------------
// parseval: Parseval identity against a direct loop, and the windowed RMS
// estimate at L = 1e4 within 5%.
std::vector<TestReport> suite_parseval(const SuiteOptions& opt) {
    const std::size_t n_models = opt.scaled(50, 8);
    const double L = 1e4;
    std::vector<TestReport> reports(2 * n_models);
    std::vector<std::size_t> sizes(n_models);
    std::vector<double> gaps(n_models);
    for (std::size_t i = 0; i < n_models; ++i) {
        if (i + 1 == n_models) { sizes[i] = 1000; gaps[i] = 0.03; }
        else if (i + 2 == n_models) { sizes[i] = 500; gaps[i] = 0.05; }
        else if (i + 6 >= n_models) { sizes[i] = 120 + 30 * (n_models - i); gaps[i] = 0.1; }
        else { sizes[i] = 5 + static_cast<std::size_t>(40 * rng::uniform01(opt.seed, 3, i, rng::Tag::misc)); gaps[i] = 0.25; }
        if (opt.scale < 1.0) sizes[i] = std::min<std::size_t>(sizes[i], 60);
    }
    parallel_for(n_models, opt.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            std::vector<spectra::Term> terms;
            double lambda = -0.5 * gaps[i] * static_cast<double>(sizes[i]);
            for (std::size_t k = 0; k < sizes[i]; ++k) {
                const double mag = (0.3 + 0.9 * rng::uniform01(opt.seed, 10 + i, 2 * k, rng::Tag::misc)) /
                                   std::pow(static_cast<double>(k + 1), 0.75);
                const double arg = 2 * 3.14159265358979323846 *
                                   rng::uniform01(opt.seed, 10 + i, 2 * k + 1, rng::Tag::misc);
                terms.push_back({lambda, std::polar(mag, arg)});
                lambda += gaps[i] * (0.8 + 0.4 * rng::uniform01(opt.seed, 11 + i, k, rng::Tag::misc));
            }
            const FourierModel m(std::move(terms), "parseval-" + std::to_string(i));

            double direct = 0.0;
            for (const auto& t : m.terms()) direct += std::norm(t.coeff);
            const double pn = spectra::parseval_norm(m);
            reports[2 * i] = empirics::make_report("parseval identity model " + std::to_string(i),
                                                   std::abs(pn * pn - direct), 1e-10,
                                                   static_cast<long long>(m.size()));
            const double num = spectra::marcinkiewicz_seminorm_numeric(
                m, L, spectra::default_quadrature_step(m));
            reports[2 * i + 1] =
                empirics::make_report("marcinkiewicz numeric model " + std::to_string(i),
                                      std::abs(num - pn), 0.05 * pn,
                                      static_cast<long long>(m.size()),
                                      "L=1e4, trapezoid at the default step");
        }
    });
    return reports;
}

// ---------------------------------------------------------------------------
// translation: recover f_lambda from the translated model at L = 1e3.
std::vector<TestReport> suite_translation(const SuiteOptions& opt) {
    const std::size_t n_cases = opt.scaled(20, 6);
    std::vector<TestReport> reports;
    for (std::size_t c = 0; c < n_cases; ++c) {
        std::vector<spectra::Term> terms;
        const std::size_t n = 8 + static_cast<std::size_t>(8 * rng::uniform01(opt.seed, 30 + c, 0, rng::Tag::misc));
        double lambda = -6.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double mag = (0.4 + 0.8 * rng::uniform01(opt.seed, 31 + c, 2 * k, rng::Tag::misc)) /
                               static_cast<double>(k + 1);
            const double arg = 2 * 3.14159265358979323846 *
                               rng::uniform01(opt.seed, 31 + c, 2 * k + 1, rng::Tag::misc);
            terms.push_back({lambda, std::polar(mag, arg)});
            lambda += 1.0 + rng::uniform01(opt.seed, 32 + c, k, rng::Tag::misc);
        }
        const FourierModel m(std::move(terms), "translation-" + std::to_string(c));
        const double v = 10.0 * rng::uniform01(opt.seed, 33 + c, 0, rng::Tag::misc) - 5.0;
        const std::size_t pick =
            static_cast<std::size_t>(static_cast<double>(m.size()) *
                                     rng::uniform01(opt.seed, 33 + c, 1, rng::Tag::misc));
        const auto& target = m.term(std::min(pick, m.size() - 1));

        const FourierModel shifted = spectra::translate(m, v);
        const cplx est = spectra::estimate_fourier_coefficient(
            shifted, target.lambda, 1e3, spectra::default_quadrature_step(shifted));
        const cplx recovered = est * std::polar(1.0, -target.lambda * v);
        reports.push_back(empirics::make_report(
            "translation recovery case " + std::to_string(c), std::abs(recovered - target.coeff),
            1e-2, static_cast<long long>(m.size()),
            "estimate_fourier_coefficient(translate(f,v), lambda) e^{-i lambda v} vs f_lambda"));
    }
    return reports;
}

namespace {

struct TrioEntry {
    std::string name;
    FourierModel model;
};

std::vector<TrioEntry> test_trio(const SuiteOptions& opt) {
    tangent::ExampleSpectrumSpec spec;
    spec.a = 1.0;
    spec.b = 1.0;
    spec.A = 1.0;
    spec.n_terms = opt.scale < 1.0 ? 200 : 1000;
    spec.seed = opt.seed + 5;
    std::vector<TrioEntry> trio;
    trio.push_back({"random20", random_pair_model(20, opt.seed + 4)});
    trio.push_back({"example-theta1", tangent::generate_example_spectrum(spec)});
    const zeta::ZeroTable table = load_table(opt, false);
    trio.push_back({"psi-100", psi_model_from_table(table, 100)});
    return trio;
}

}  // namespace

// ---------------------------------------------------------------------------
// onedim: law of f(V_{-L,L}) against simulated M_f(0), KS gate at the top L
// and a nonincreasing statistic trend across the schedule.
std::vector<TestReport> suite_onedim(const SuiteOptions& opt) {
    const std::vector<double> L_schedule = {1e3, 1e4, 1e5, 1e6};
    const std::size_t n = opt.scaled(20000, 800);
    const double zero[1] = {0.0};
    std::vector<TestReport> reports;
    for (const auto& [name, model] : test_trio(opt)) {
        const auto d = spectra::decompose(model);
        const auto ref = sampler::evaluate_ensemble(model, d, zero, opt.seed + 70, n, opt.threads);
        std::vector<double> ref_re(n), ref_im(n);
        for (std::size_t i = 0; i < n; ++i) {
            ref_re[i] = ref[i].real();
            ref_im[i] = ref[i].imag();
        }
        std::vector<double> stats;
        TestReport last_re, last_im;
        for (std::size_t li = 0; li < L_schedule.size(); ++li) {
            const auto rows = empirics::sample_translated(model, L_schedule[li], zero, n,
                                                          opt.seed + 80 + li);
            std::vector<double> re(n), im(n);
            for (std::size_t i = 0; i < n; ++i) {
                re[i] = rows[i][0].real();
                im[i] = rows[i][0].imag();
            }
            last_re = empirics::ks_component(re, ref_re, "onedim " + name + " re");
            last_im = empirics::ks_component(im, ref_im, "onedim " + name + " im");
            stats.push_back(std::max(last_re.statistic, last_im.statistic));
        }
        TestReport gate_re = last_re, gate_im = last_im;
        gate_re.test += " L=1e6";
        gate_im.test += " L=1e6";
        reports.push_back(gate_re);
        reports.push_back(gate_im);

        const bool trend = empirics::trend_nonincreasing(stats, gate_re.threshold);
        std::ostringstream desc;
        desc << "KS stats over L=1e3..1e6:";
        for (double s : stats) desc << " " << s;
        reports.push_back(empirics::make_report("onedim " + name + " trend", trend ? 0.0 : 1.0,
                                                0.5, static_cast<long long>(n), desc.str()));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// fidi: Cramer-Wold panel at the largest L.
std::vector<TestReport> suite_fidi(const SuiteOptions& opt) {
    const double L[1] = {1e6};
    const std::vector<double> t_points = {0.0, 0.7, 1.9};
    const std::size_t n = opt.scaled(20000, 800);
    std::vector<TestReport> reports;
    const zeta::ZeroTable table = load_table(opt, false);
    const std::vector<TrioEntry> models = {{"random20", random_pair_model(20, opt.seed + 4)},
                                           {"psi-100", psi_model_from_table(table, 100)}};
    for (const auto& [name, model] : models) {
        auto rs = empirics::fidi_convergence_test(model, L, t_points, n, opt.seed + 90);
        for (auto& r : rs) {
            r.test = name + " " + r.test;
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

// ---------------------------------------------------------------------------
// covariance: empirical covariance and increment second moments against the
// closed forms, normalized per lag by the Monte Carlo standard error.
std::vector<TestReport> suite_covariance(const SuiteOptions& opt) {
    const std::size_t n = opt.scaled(10000, 2000);
    const std::size_t n_lags = 50;
    std::vector<double> grid(n_lags + 1);
    for (std::size_t j = 0; j <= n_lags; ++j) grid[j] = 0.1 * static_cast<double>(j);
    std::vector<TestReport> reports;
    for (const auto& [name, model] : test_trio(opt)) {
        const auto d = spectra::decompose(model);
        const auto ens = sampler::evaluate_ensemble(model, d, grid, opt.seed + 108, n, opt.threads);
        const std::size_t g = grid.size();

        double worst_cov = 0.0, worst_inc = 0.0;
        for (std::size_t j = 1; j < g; ++j) {
            std::vector<double> pre(n), pim(n), inc(n);
            for (std::size_t i = 0; i < n; ++i) {
                const cplx prod = ens[i * g + j] * std::conj(ens[i * g]);
                pre[i] = prod.real();
                pim[i] = prod.imag();
                inc[i] = std::norm(ens[i * g + j] - ens[i * g]);
            }
            const cplx exact = sampler::exact_covariance(model, grid[j]);
            const double se_re = std::sqrt(variance(pre) / static_cast<double>(n));
            const double se_im = std::sqrt(variance(pim) / static_cast<double>(n));
            worst_cov = std::max(worst_cov, std::abs(mean(pre) - exact.real()) / std::max(se_re, 1e-300));
            if (se_im > 1e-14)
                worst_cov = std::max(worst_cov, std::abs(mean(pim) - exact.imag()) / se_im);
            const double exact_inc = sampler::exact_increment_second_moment(model, grid[j]);
            const double se_inc = std::sqrt(variance(inc) / static_cast<double>(n));
            worst_inc = std::max(worst_inc, std::abs(mean(inc) - exact_inc) / std::max(se_inc, 1e-300));
        }
        reports.push_back(empirics::make_report(
            "covariance " + name, worst_cov, 3.0, static_cast<long long>(n),
            "max over 50 lags of |empirical - exact| / SE"));
        reports.push_back(empirics::make_report(
            "increment-second-moment " + name, worst_inc, 3.0, static_cast<long long>(n),
            "max over 50 lags of |empirical - exact| / SE"));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// ergodic: single-path trapezoid time averages against ensemble means, SEs
// from closed-form per-path averages; covariance non-decay probe.
namespace {

// Exact per-path time average over [0, T]: phi = re is linear in the terms,
// phi = mod2 expands over frequency differences. g(mu) = (e^{i mu T}-1)/(i mu T).
double exact_path_average(const FourierModel& model, const sampler::PhaseAssignment& phases,
                          double T, const std::string& phi) {
    const auto per_term = sampler::per_term_phases(model, phases);
    const std::size_t n = model.size();
    auto g = [T](double mu) -> cplx {
        if (std::abs(mu * T) < 1e-9) return {1.0, 0.0};
        return (std::polar(1.0, mu * T) - cplx{1.0, 0.0}) / (cplx{0.0, 1.0} * mu * T);
    };
    if (phi == "re") {
        CascadeAccumulator<cplx> acc;
        for (std::size_t k = 0; k < n; ++k)
            acc.add(per_term[k] * model.term(k).coeff * g(model.term(k).lambda));
        return acc.total().real();
    }
    if (phi == "mod2") {
        CascadeAccumulator<double> acc;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx dj = per_term[j] * model.term(j).coeff;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx dk = per_term[k] * model.term(k).coeff;
                acc.add((dj * std::conj(dk) * g(model.term(j).lambda - model.term(k).lambda)).real());
            }
        }
        return acc.total();
    }
    throw std::invalid_argument("exact_path_average: no closed form for '" + phi + "'");
}

}  // namespace

std::vector<TestReport> suite_ergodic(const SuiteOptions& opt) {
    const zeta::ZeroTable table = load_table(opt, false);
    const FourierModel model = psi_model_from_table(table, 100);
    const auto d = spectra::decompose(model);
    const double T = opt.scale < 1.0 ? 2e3 : 1e4;
    const double step = 0.5 / model.max_abs_frequency();
    const std::size_t n_ens = opt.scaled(20000, 1000);

    // One realized path on a grid resolving the fastest oscillation.
    const auto phases0 = sampler::sample_phases(d, opt.seed + 110, 0);
    const std::size_t ng = static_cast<std::size_t>(std::ceil(T / step));
    const double h = T / static_cast<double>(ng);
    std::vector<double> grid(ng + 1);
    for (std::size_t j = 0; j <= ng; ++j) grid[j] = h * static_cast<double>(j);
    const auto path = sampler::evaluate(model, phases0, grid);

    const double zero[1] = {0.0};
    const auto ens = sampler::evaluate_ensemble(model, d, zero, opt.seed + 111, n_ens, opt.threads);

    const std::size_t n_se_paths = 64;
    std::vector<TestReport> reports;
    for (const std::string phi : {"re", "mod2", "re_clip1"}) {
        CascadeAccumulator<double> trap;
        for (std::size_t j = 0; j <= ng; ++j) {
            const double w = (j == 0 || j == ng) ? 0.5 : 1.0;
            trap.add(w * h * empirics::phi_apply(phi, path.values[j]));
        }
        const double time_avg = trap.total() / T;

        std::vector<double> ens_vals(n_ens);
        for (std::size_t i = 0; i < n_ens; ++i) ens_vals[i] = empirics::phi_apply(phi, ens[i]);
        const double ens_mean = mean(ens_vals);
        const double ens_se = std::sqrt(variance(ens_vals) / static_cast<double>(n_ens));

        // SE of a single-path average from closed-form averages across paths;
        // the clipped variant inherits the re estimate (the clip is inactive
        // at this model's amplitude).
        const std::string se_phi = phi == "mod2" ? "mod2" : "re";
        std::vector<double> path_avgs(n_se_paths);
        for (std::size_t p = 0; p < n_se_paths; ++p)
            path_avgs[p] = exact_path_average(
                model, sampler::sample_phases(d, opt.seed + 110, 1000 + p), T, se_phi);
        const double path_se = std::sqrt(variance(path_avgs));

        const double tol = 3.0 * std::sqrt(path_se * path_se + ens_se * ens_se);
        std::ostringstream desc;
        desc << "time avg " << time_avg << " vs ensemble " << ens_mean << " (path SE " << path_se
             << ", ensemble SE " << ens_se << ", T=" << T << ")";
        reports.push_back(empirics::make_report("ergodic phi=" + phi,
                                                std::abs(time_avg - ens_mean), tol,
                                                static_cast<long long>(n_ens), desc.str()));
    }

    const auto lag_grid = linspace(100.0, 200.0, 10001);
    const double k0 = sampler::exact_covariance(model, 0.0).real();
    TestReport probe = empirics::mixing_probe(model, lag_grid, 0.1 * k0);
    probe.test = "mixing-probe psi-100";
    reports.push_back(std::move(probe));
    return reports;
}

// ---------------------------------------------------------------------------
// equidist: character means against g(k) sin(t)/t under the coupled draw.
std::vector<TestReport> suite_equidist(const SuiteOptions& opt) {
    const FourierModel model({{1.0, {0.5, 0.0}}, {2.0, {0.25, 0.0}}}, "residue-12");
    const std::size_t n = opt.scaled(100000, 4000);
    const double L = 1e4;
    struct Case {
        int k1, k2;
        double t;
    };
    const std::vector<Case> cases = {{0, 0, 0.7}, {2, -1, 1.0}, {1, 0, 0.0},  {0, 1, 0.5},
                                     {1, 1, 0.0}, {-1, 1, 0.3}, {3, -2, 0.9}, {2, -1, 0.0},
                                     {-2, 1, 2.0}, {5, 1, 1.3}};
    std::vector<TestReport> reports;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const int k[2] = {cases[i].k1, cases[i].k2};
        TestReport r = empirics::equidistribution_character_test(model, k, cases[i].t, L, n,
                                                                 opt.seed + 120 + i);
        r.test = "equidist k=(" + std::to_string(k[0]) + "," + std::to_string(k[1]) +
                 ") t=" + std::to_string(cases[i].t);
        reports.push_back(std::move(r));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// holder: increment-moment slopes and the pathwise exponent estimate.
std::vector<TestReport> suite_holder(const SuiteOptions& opt) {
    std::vector<TestReport> reports;
    const std::vector<double> exps = {0.25, 0.5, 1.0};

    const zeta::ZeroTable table = load_table(opt, false);
    const std::size_t n_zeros = opt.scale < 1.0 ? 200 : 1000;
    const FourierModel psi = psi_model_from_table(table, std::min(n_zeros, table.gammas.size() - 1));
    const auto psi_dt = logspace(1e-3, 0.5, 17);
    const auto dpsi = empirics::holder_diagnostic_detail(psi, psi_dt, opt.seed + 130);
    reports.push_back(empirics::make_report(
        "holder psi second-moment slope", std::abs(dpsi.second_moment_slope - 1.0), 0.2,
        static_cast<long long>(psi.size()),
        "slope " + std::to_string(dpsi.second_moment_slope) + ", expected 1 (theta=1)"));
    reports.push_back(empirics::make_report(
        "holder psi hunt partial sums", dpsi.hunt_partial_full / dpsi.hunt_partial_half - 1.0, 1.0,
        static_cast<long long>(psi.size()),
        "full/half - 1; bounded growth of sum |f|^2 log^{1.1}|lambda|"));

    const FourierModel band = random_pair_model(6, opt.seed + 131, true);
    const auto band_dt = logspace(1e-3, 0.03, 9);
    const auto dband = empirics::holder_diagnostic_detail(band, band_dt, opt.seed + 132);
    reports.push_back(empirics::make_report(
        "holder band-limited slope", std::abs(dband.second_moment_slope - 2.0), 0.05,
        static_cast<long long>(band.size()), "finite spectrum: Lipschitz regime slope 2"));

    tangent::ExampleSpectrumSpec spec;
    spec.a = 1.0;
    spec.b = 0.5;  // theta = 1.5, pathwise exponent 1 - theta/2 = 0.25
    spec.A = 1.0;
    spec.n_terms = opt.scale < 1.0 ? 500 : 4000;
    spec.seed = opt.seed + 133;
    const FourierModel ex = tangent::generate_example_spectrum(spec);
    const auto dex = empirics::holder_diagnostic_detail(ex, logspace(1e-3, 0.2, 9), opt.seed + 134);
    reports.push_back(empirics::make_report(
        "holder example theta=1.5 pathwise exponent", std::abs(dex.pathwise_exponent - 0.25), 0.1,
        static_cast<long long>(ex.size()),
        "max-increment scaling estimate " + std::to_string(dex.pathwise_exponent)));
    return reports;
}

// ---------------------------------------------------------------------------
// tangent: preasymptotic covariance vs Monte Carlo, the fBm gap scan, the
// Gaussian marginal at small epsilon, and Hurst estimates with fBm controls.
std::vector<TestReport> suite_tangent(const SuiteOptions& opt) {
    std::vector<TestReport> reports;
    tangent::ExampleSpectrumSpec spec;
    spec.a = 1.0;
    spec.b = 1.0;
    spec.A = 1.0;
    spec.n_terms = opt.scale < 1.0 ? 1000 : 10000;
    spec.seed = opt.seed + 140;
    const FourierModel model = tangent::generate_example_spectrum(spec);
    const auto measure = spectra::spectral_measure(model);
    const double pn = spectra::parseval_norm(model);
    const double theta = 1.0;

    tangent::SlowlyVarying ell;
    ell.kind = tangent::SlowlyVarying::Kind::constant;
    ell.c = tangent::estimate_ell_constant(measure, theta,
                                           20.0, 0.2 * model.max_abs_frequency());
    const double C = tangent::c_constant(model, theta);
    const auto d = spectra::decompose(model);

    // The smallest usable epsilon is set by the truncation: the scan grid
    // starts at t = 4 and needs lambda_max * eps * t >~ 25. At the full
    // 10^4-pair scale this reproduces eps_min = 1e-3 exactly.
    const double lambda_max = model.max_abs_frequency();
    const double eps_min = std::max(1e-3, 25.0 / (4.0 * lambda_max));

    // (i) exact preasymptotic covariance vs Monte Carlo at eps = 1e-2.
    {
        const double eps = 1e-2;
        const std::vector<double> ts = {0.5, 1.0, 2.0};
        std::vector<double> grid = {0.0};
        for (double t : ts) grid.push_back(eps * t);
        const std::size_t n = opt.scaled(10000, 500);
        const auto ens = sampler::evaluate_ensemble(model, d, grid, opt.seed + 141, n, opt.threads);
        const std::size_t g = grid.size();
        const double norm = std::sqrt(std::pow(eps, 2.0 - theta) * ell(1.0 / eps));
        double worst = 0.0;
        for (std::size_t a = 0; a < ts.size(); ++a)
            for (std::size_t b = a; b < ts.size(); ++b) {
                std::vector<double> prod(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double xa = (ens[i * g + a + 1] - ens[i * g]).real() / norm;
                    const double xb = (ens[i * g + b + 1] - ens[i * g]).real() / norm;
                    prod[i] = xa * xb;
                }
                const double exact = tangent::preasymptotic_covariance(measure, pn * pn, theta,
                                                                       ell, eps, ts[a], ts[b]);
                const double se = std::sqrt(variance(prod) / static_cast<double>(n));
                worst = std::max(worst, std::abs(mean(prod) - exact) / std::max(se, 1e-300));
            }
        reports.push_back(empirics::make_report(
            "tangent preasymptotic covariance eps=1e-2", worst, 3.0, static_cast<long long>(n),
            "max over (t,s) pairs of |MC - exact| / SE"));
    }

    // (ii) gap to the fBm covariance decreasing along the epsilon schedule.
    // The grid must keep lambda_max * eps * t >> 1 at the smallest epsilon or
    // the truncated tail's deficit (~ 2A / (lambda_max eps)) dominates.
    {
        tangent::TangentConfig cfg;
        cfg.theta = theta;
        cfg.ell = ell;
        cfg.epsilon_schedule = {1e-1, std::sqrt(1e-1 * eps_min), eps_min};
        cfg.t_grid = {4.0, 6.0, 8.0, 10.0};
        const auto scan = tangent::covariance_convergence_scan(cfg, model);
        bool decreasing = true;
        std::ostringstream desc;
        desc << "gaps:";
        for (std::size_t i = 0; i < scan.size(); ++i) {
            desc << " (" << scan[i].first << ", " << scan[i].second << ")";
            if (i > 0 && !(scan[i].second < scan[i - 1].second)) decreasing = false;
        }
        reports.push_back(empirics::make_report("tangent fbm gap trend", decreasing ? 0.0 : 1.0,
                                                0.5, static_cast<long long>(scan.size()), desc.str()));
        reports.push_back(empirics::make_report("tangent fbm gap final", scan.back().second,
                                                0.1 * C, static_cast<long long>(scan.size()),
                                                "gap at eps=1e-3 vs 0.1 C_{f,theta}, C=" +
                                                    std::to_string(C)));
    }

    // (iii) marginal normality of T_eps(1) at the smallest resolved epsilon.
    {
        const double eps = eps_min;
        const std::vector<double> grid = {0.0, eps};
        const std::size_t n = opt.scaled(10000, 500);
        const auto ens = sampler::evaluate_ensemble(model, d, grid, opt.seed + 142, n, opt.threads);
        const double norm = std::sqrt(std::pow(eps, 2.0 - theta) * ell(1.0 / eps));
        std::vector<double> marg(n);
        for (std::size_t i = 0; i < n; ++i)
            marg[i] = (ens[i * 2 + 1] - ens[i * 2]).real() / norm;
        TestReport r = empirics::ks_gaussian_fit(marg, "tangent normality eps=1e-3");
        reports.push_back(std::move(r));
    }

    // (iv) Hurst estimates: tangent paths plus synthetic fBm controls. The
    // lag window keeps lambda_max * eps * tau >= 20 so the increment variance
    // sits in the regularly varying regime, not the quadratic one.
    {
        const double eps = eps_min;
        const std::size_t n_paths = opt.scaled(512, 128);
        const std::size_t m = 64;
        const double dt = 20.0 / (lambda_max * eps);
        std::vector<double> tgrid(m), sgrid(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            tgrid[j] = dt * static_cast<double>(j + 1);
            sgrid[j + 1] = eps * tgrid[j];
        }
        const auto ens = sampler::evaluate_ensemble(model, d, sgrid, opt.seed + 143, n_paths,
                                                    opt.threads);
        const double norm = std::sqrt(std::pow(eps, 2.0 - theta) * ell(1.0 / eps));
        std::vector<sampler::PathSample> paths(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            paths[p].grid = tgrid;
            paths[p].values.resize(m);
            for (std::size_t j = 0; j < m; ++j)
                paths[p].values[j] = (ens[p * (m + 1) + j + 1] - ens[p * (m + 1)]).real() / norm;
        }
        const auto h = tangent::hurst_estimate(paths);
        reports.push_back(empirics::make_report(
            "tangent hurst", std::abs(h.h_hat - 0.5), 0.1, static_cast<long long>(n_paths),
            "H_hat = " + std::to_string(h.h_hat) + ", expected 1/2 for theta=1"));

        const auto ctrl_half = tangent::fbm_synthetic_paths(1.0, 0.5, tgrid, n_paths, opt.seed + 144);
        const auto h_half = tangent::hurst_estimate(ctrl_half);
        reports.push_back(empirics::make_report(
            "fbm control H=0.5", std::abs(h_half.h_hat - 0.5), 0.05,
            static_cast<long long>(n_paths), "H_hat = " + std::to_string(h_half.h_hat)));
        const auto ctrl_q = tangent::fbm_synthetic_paths(1.5, 0.5, tgrid, n_paths, opt.seed + 145);
        const auto h_q = tangent::hurst_estimate(ctrl_q);
        reports.push_back(empirics::make_report(
            "fbm control H=0.25", std::abs(h_q.h_hat - 0.25), 0.07,
            static_cast<long long>(n_paths), "H_hat = " + std::to_string(h_q.h_hat)));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// explicit: RMS gap of the truncated explicit formulas, decreasing in the
// truncation, absolute gate for psi at the deepest truncation.
std::vector<TestReport> suite_explicit(const SuiteOptions& opt) {
    const zeta::ZeroTable table = load_table(opt, true);
    const std::size_t N = opt.scale < 1.0 ? 100000 : 1000000;
    const auto tables = zeta::sieve(N);
    const auto t_grid = linspace(1.0, std::log(1e3), 400);
    std::vector<std::size_t> truncs = {25, 100, 1000};
    if (opt.scale < 1.0) truncs = {25, 100, 300};

    std::vector<TestReport> reports;
    for (const auto kind : {zeta::ExplicitKind::psi, zeta::ExplicitKind::mertens,
                            zeta::ExplicitKind::liouville}) {
        const char* kname = kind == zeta::ExplicitKind::psi      ? "psi"
                            : kind == zeta::ExplicitKind::mertens ? "mertens"
                                                                   : "liouville";
        std::vector<double> rms;
        for (std::size_t k : truncs) {
            const auto em = zeta::build_explicit_model(kind, table, zeta::midpoint_truncation(table, k));
            rms.push_back(zeta::explicit_formula_gap(kind, tables, em, t_grid).rms);
        }
        std::size_t bad = 0;
        for (std::size_t i = 1; i < rms.size(); ++i)
            if (!(rms[i] < rms[i - 1])) ++bad;
        std::ostringstream desc;
        desc << "RMS over T indices {25, 100, " << truncs.back() << "}:";
        for (double r : rms) desc << " " << r;
        reports.push_back(empirics::make_report(std::string("explicit ") + kname + " trend",
                                                static_cast<double>(bad), 0.0,
                                                static_cast<long long>(t_grid.size()), desc.str()));
        if (kind == zeta::ExplicitKind::psi)
            reports.push_back(empirics::make_report(
                "explicit psi rms at deepest T", rms.back(), 0.5,
                static_cast<long long>(t_grid.size()), desc.str()));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// zerocount: counting/growth ratio trends, the 0.25 gate at the table top,
// and the Gonek stability diagnostic on the upper half.
std::vector<TestReport> suite_zerocount(const SuiteOptions& opt) {
    const zeta::ZeroTable table = load_table(opt, true);
    const double top = table.gammas.back() * 0.9999;
    const auto x_grid = logspace(100.0, top, 8);
    const auto za = zeta::zero_counting_check(table, x_grid);

    std::vector<double> cdev, gdev;
    for (std::size_t i = 0; i < za.x.size(); ++i) {
        cdev.push_back(std::abs(za.counting_ratio[i] - 1.0));
        gdev.push_back(std::abs(za.growth_ratio[i] - 1.0));
    }
    std::size_t bad = 0;
    for (std::size_t i = 1; i < cdev.size(); ++i) {
        if (!(cdev[i] <= cdev[i - 1])) ++bad;
        if (!(gdev[i] <= gdev[i - 1])) ++bad;
    }
    std::ostringstream trend_desc;
    trend_desc << "counting deviations:";
    for (double v : cdev) trend_desc << " " << v;
    trend_desc << "; growth deviations:";
    for (double v : gdev) trend_desc << " " << v;
    std::vector<TestReport> reports;
    reports.push_back(empirics::make_report("zerocount ratio trend", static_cast<double>(bad), 0.0,
                                            static_cast<long long>(table.gammas.size()),
                                            trend_desc.str()));
    reports.push_back(empirics::make_report(
        "zerocount within 0.25 at top", std::max(cdev.back(), gdev.back()), 0.25,
        static_cast<long long>(table.gammas.size()),
        "counting ratio " + std::to_string(za.counting_ratio.back()) + ", growth ratio " +
            std::to_string(za.growth_ratio.back())));

    const auto t_grid = linspace(0.5 * table.gammas.back(), table.gammas.back(), 11);
    double lo = 1e300, hi = 0.0;
    for (double T : t_grid) {
        const double v = zeta::gonek_sum(table, T) / T;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    reports.push_back(empirics::make_report("gonek J/T stability", hi / lo, 3.0,
                                            static_cast<long long>(table.gammas.size()),
                                            "max/min of J_{-1}(T)/T over the top half"));
    return reports;
}

// ---------------------------------------------------------------------------
// sieve: trial-division oracle, divisor-sum identities, and psi(N)/N.
std::vector<TestReport> suite_sieve(const SuiteOptions& opt) {
    const std::size_t n_check = 10000;
    const std::size_t N = opt.scale < 1.0 ? 100000 : 1000000;
    const auto tables = zeta::sieve(N);

    std::size_t mismatches = 0;
    for (std::size_t n = 1; n <= n_check; ++n) {
        // trial-division factorization
        std::size_t m = n, omega = 0, distinct = 0;
        bool squarefree = true;
        std::size_t last = 0, prime_base = 0, prime_power_count = 0;
        for (std::size_t p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                ++distinct;
                std::size_t e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                omega += e;
                if (e > 1) squarefree = false;
                last = p;
                prime_base = p;
                prime_power_count += e;
            }
        }
        if (m > 1) {
            ++distinct;
            ++omega;
            last = m;
            if (prime_base == 0) prime_base = m;
            ++prime_power_count;
        }
        (void)last;
        const bool is_prime_power = distinct == 1;
        const double lam_expected = is_prime_power ? std::log(static_cast<double>(prime_base)) : 0.0;
        const int mu_expected = n == 1 ? 1 : (!squarefree ? 0 : (distinct % 2 == 0 ? 1 : -1));
        const int liou_expected = n == 1 ? 1 : (omega % 2 == 0 ? 1 : -1);
        if (std::abs(tables.vonmangoldt[n] - (n == 1 ? 0.0 : lam_expected)) > 1e-12) ++mismatches;
        if (tables.moebius[n] != mu_expected) ++mismatches;
        if (tables.liouville[n] != liou_expected) ++mismatches;
    }
    std::vector<TestReport> reports;
    reports.push_back(empirics::make_report("sieve trial-division oracle",
                                            static_cast<double>(mismatches), 0.0,
                                            static_cast<long long>(n_check)));

    // sum_{d|n} mu(d) = 1{n=1} and sum_{d|n} Lambda(d) = log n.
    std::size_t moebius_bad = 0;
    double chebyshev_worst = 0.0;
    for (std::size_t n = 1; n <= n_check; ++n) {
        int msum = 0;
        double lsum = 0.0;
        for (std::size_t dd = 1; dd * dd <= n; ++dd) {
            if (n % dd) continue;
            msum += tables.moebius[dd];
            lsum += tables.vonmangoldt[dd];
            const std::size_t q = n / dd;
            if (q != dd) {
                msum += tables.moebius[q];
                lsum += tables.vonmangoldt[q];
            }
        }
        if (msum != (n == 1 ? 1 : 0)) ++moebius_bad;
        chebyshev_worst = std::max(chebyshev_worst, std::abs(lsum - std::log(static_cast<double>(n))));
    }
    reports.push_back(empirics::make_report("moebius divisor identity",
                                            static_cast<double>(moebius_bad), 0.0,
                                            static_cast<long long>(n_check)));
    reports.push_back(empirics::make_report("chebyshev divisor identity", chebyshev_worst, 1e-10,
                                            static_cast<long long>(n_check)));

    const double ratio = zeta::summatory(tables, zeta::ExplicitKind::psi,
                                         static_cast<double>(N), zeta::Convention::left) /
                         static_cast<double>(N);
    reports.push_back(empirics::make_report("psi(N)/N", std::abs(ratio - 1.0), 0.1,
                                            static_cast<long long>(N),
                                            "psi(" + std::to_string(N) + ")/" + std::to_string(N) +
                                                " = " + std::to_string(ratio)));
    return reports;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "parseval", "translation", "onedim",  "fidi",     "covariance", "ergodic",
        "equidist", "holder",      "tangent", "explicit", "zerocount",  "sieve"};
    return names;
}

std::vector<TestReport> run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "parseval") return suite_parseval(opt);
    if (name == "translation") return suite_translation(opt);
    if (name == "onedim") return suite_onedim(opt);
    if (name == "fidi") return suite_fidi(opt);
    if (name == "covariance") return suite_covariance(opt);
    if (name == "ergodic") return suite_ergodic(opt);
    if (name == "equidist") return suite_equidist(opt);
    if (name == "holder") return suite_holder(opt);
    if (name == "tangent") return suite_tangent(opt);
    if (name == "explicit") return suite_explicit(opt);
    if (name == "zerocount") return suite_zerocount(opt);
    if (name == "sieve") return suite_sieve(opt);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace apstat::suites

// ===========================================================================

namespace apstat::cli {

namespace fs = std::filesystem;

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key=value at line " + std::to_string(lineno));
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
        if (cfg.kv_.count(key))
            throw std::runtime_error("config: duplicate key '" + key + "'");
        cfg.kv_[key] = value;
    }
    return cfg;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

void RunConfig::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_num(const std::string& key, double fallback, double lo, double hi) const {
    const auto it = kv_.find(key);
    double v = fallback;
    if (it != kv_.end()) {
        char* end = nullptr;
        v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw std::runtime_error("config: key '" + key + "' is not numeric");
    }
    if (v < lo || v > hi)
        throw std::runtime_error("config: key '" + key + "' out of range [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return std::stoull(it->second);
}

std::vector<double> RunConfig::get_list(const std::string& key, std::vector<double> fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> v;
    std::istringstream in(it->second);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        v.push_back(std::stod(tok));
    }
    if (v.empty()) throw std::runtime_error("config: key '" + key + "' is an empty list");
    return v;
}

void RunConfig::require_known_keys(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : kv_) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw std::runtime_error("config: unknown key '" + k + "'");
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

const std::vector<std::string> kModelKeys = {
    "model_file",   "example_a",    "example_b",    "example_A",
    "example_n",    "example_seed", "explicit_kind", "zeros",
    "zeta_prime",   "truncation",   "truncation_index"};

zeta::ExplicitKind parse_kind(const std::string& s) {
    if (s == "psi") return zeta::ExplicitKind::psi;
    if (s == "mertens") return zeta::ExplicitKind::mertens;
    if (s == "liouville") return zeta::ExplicitKind::liouville;
    throw std::runtime_error("config: explicit_kind must be psi|mertens|liouville");
}

void check_path_exists(const std::string& path, const std::string& key) {
    if (!fs::exists(path))
        throw std::runtime_error("config: path for '" + key + "' does not exist: " + path);
}

}  // namespace

spectra::FourierModel model_from_config(const RunConfig& cfg) {
    if (cfg.has("model_file")) {
        check_path_exists(cfg.get("model_file"), "model_file");
        return spectra::load_text(cfg.get("model_file"));
    }
    if (cfg.has("explicit_kind")) {
        const auto kind = parse_kind(cfg.get("explicit_kind"));
        check_path_exists(cfg.get("zeros"), "zeros");
        zeta::ZeroTable table = zeta::ingest_zeros(cfg.get("zeros"));
        if (cfg.has("zeta_prime")) {
            check_path_exists(cfg.get("zeta_prime"), "zeta_prime");
            zeta::load_zeta_prime(table, cfg.get("zeta_prime"));
        }
        double T;
        if (cfg.has("truncation_index")) {
            T = zeta::midpoint_truncation(
                table, static_cast<std::size_t>(cfg.get_num("truncation_index", 100, 1,
                                                            static_cast<double>(table.gammas.size()))));
        } else {
            T = cfg.get_num("truncation", zeta::midpoint_truncation(table, std::min<std::size_t>(
                                              100, table.gammas.size() - 1)),
                            0.0, table.gammas.back());
        }
        return zeta::build_explicit_model(kind, table, T).model;
    }
    if (cfg.has("example_a") || cfg.has("example_n")) {
        tangent::ExampleSpectrumSpec spec;
        spec.a = cfg.get_num("example_a", 1.0, 1e-6, 100.0);
        spec.b = cfg.get_num("example_b", 1.0, 1e-6, 200.0);
        spec.A = cfg.get_num("example_A", 1.0, 1e-12, 1e12);
        spec.n_terms = static_cast<std::size_t>(cfg.get_num("example_n", 1000, 1, 1e7));
        spec.seed = cfg.get_u64("example_seed", 1);
        return tangent::generate_example_spectrum(spec);
    }
    throw std::runtime_error(
        "config: no model source (model_file=, explicit_kind=, or example_* keys)");
}

namespace {

std::string gnuplot_script(const std::string& data_glob, const std::string& title,
                           const std::string& ylabel) {
    std::ostringstream s;
    s << "# gnuplot script\n";
    s << "set datafile separator ','\n";
    s << "set xlabel 't'\n";
    s << "set ylabel '" << ylabel << "'\n";
    s << "set title '" << title << "'\n";
    s << "set key off\n";
    s << "plot " << data_glob << "\n";
    return s.str();
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream s;
    for (const auto& [k, v] : cfg.entries()) s << "# config " << k << " = " << v << "\n";
    return s.str();
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    std::vector<std::string> allowed = kModelKeys;
    for (const char* k : {"seed", "replicas", "t0", "t1", "step", "prefix", "threads"})
        allowed.push_back(k);
    cfg.require_known_keys(allowed);

    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::size_t replicas = static_cast<std::size_t>(cfg.get_num("replicas", 1, 1, 1e6));
    const double t0 = cfg.get_num("t0", 0.0, -1e9, 1e9);
    const double t1 = cfg.get_num("t1", 10.0, -1e9, 1e9);
    const double step = cfg.get_num("step", 0.01, 1e-9, 1e9);
    if (!(t1 > t0)) throw std::runtime_error("config: need t1 > t0");
    const std::string prefix = cfg.get("prefix", "simulate");

    const auto model = model_from_config(cfg);
    const auto d = spectra::decompose(model);
    const std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / step + 0.5));
    std::vector<double> grid(n + 1);
    for (std::size_t j = 0; j <= n; ++j) grid[j] = t0 + step * static_cast<double>(j);

    for (std::size_t r = 0; r < replicas; ++r) {
        const auto phases = sampler::sample_phases(d, seed, r);
        const auto path = sampler::evaluate(model, phases, grid);
        const std::string file =
            paths.out_dir + "/" + prefix + "_r" + std::to_string(r) + ".csv";
        write_file_atomic(file, config_echo(cfg) + sampler::path_sample_csv(path));
        log << "wrote " << file << " (" << grid.size() << " rows)\n";
    }
    write_file_atomic(paths.out_dir + "/" + prefix + ".gnuplot",
                      gnuplot_script("'" + prefix + "_r0.csv' every ::1 using 1:2 with lines",
                                     "realization of M_f", "Re M_f(t)"));
    return 0;
}

int cmd_covariance(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    std::vector<std::string> allowed = kModelKeys;
    for (const char* k : {"seed", "replicas", "s0", "s1", "step", "prefix", "threads"})
        allowed.push_back(k);
    cfg.require_known_keys(allowed);

    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::size_t replicas = static_cast<std::size_t>(cfg.get_num("replicas", 2000, 2, 1e6));
    const double s0 = cfg.get_num("s0", 0.0, -1e9, 1e9);
    const double s1 = cfg.get_num("s1", 10.0, -1e9, 1e9);
    const double step = cfg.get_num("step", 0.05, 1e-9, 1e9);
    const int threads = static_cast<int>(cfg.get_num("threads", 0, 0, 256));
    const std::string prefix = cfg.get("prefix", "covariance");

    const auto model = model_from_config(cfg);
    const auto d = spectra::decompose(model);
    const std::size_t n = static_cast<std::size_t>(std::floor((s1 - s0) / step + 0.5));
    std::vector<double> grid;
    if (s0 != 0.0) grid.push_back(0.0);
    for (std::size_t j = 0; j <= n; ++j) grid.push_back(s0 + step * static_cast<double>(j));
    const std::size_t base = s0 != 0.0 ? 1 : 0;

    const auto ens = sampler::evaluate_ensemble(model, d, grid, seed, replicas, threads);
    std::ostringstream out;
    out << config_echo(cfg) << "# model: " << model.label() << "\n";
    out << "s,exact_re,exact_im,emp_re,emp_im,se\n";
    char buf[200];
    const std::size_t g = grid.size();
    for (std::size_t j = base; j < g; ++j) {
        const cplx exact = sampler::exact_covariance(model, grid[j]);
        std::vector<double> re(replicas), im(replicas);
        for (std::size_t i = 0; i < replicas; ++i) {
            const cplx prod = ens[i * g + j] * std::conj(ens[i * g]);
            re[i] = prod.real();
            im[i] = prod.imag();
        }
        const double se = std::sqrt((variance(re) + variance(im)) / static_cast<double>(replicas));
        std::snprintf(buf, sizeof(buf), "%.10g,%.17g,%.17g,%.17g,%.17g,%.10g\n", grid[j],
                      exact.real(), exact.imag(), mean(re), mean(im), se);
        out << buf;
    }
    const std::string file = paths.out_dir + "/" + prefix + ".csv";
    write_file_atomic(file, out.str());
    write_file_atomic(paths.out_dir + "/" + prefix + ".gnuplot",
                      gnuplot_script("'" + prefix + ".csv' every ::1 using 1:2 with lines, '" +
                                         prefix + ".csv' every ::1 using 1:4 with points",
                                     "covariance of M_f: exact vs empirical", "K(s)"));
    log << "wrote " << file << " (" << g - base << " lags, " << replicas << " replicas)\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    cfg.require_known_keys({"suite", "seed", "scale", "threads", "zeros", "zeta_prime", "prefix"});
    const std::string suite = cfg.get("suite");
    if (suite.empty()) throw std::runtime_error("config: verify needs suite=<name>|all");

    suites::SuiteOptions opt;
    opt.seed = cfg.get_u64("seed", opt.seed);
    opt.scale = cfg.get_num("scale", 1.0, 1e-4, 1.0);
    opt.threads = static_cast<int>(cfg.get_num("threads", 0, 0, 256));
    opt.zeros_path = cfg.get("zeros");
    opt.zeta_prime_path = cfg.get("zeta_prime");
    if (!opt.zeros_path.empty()) check_path_exists(opt.zeros_path, "zeros");
    if (!opt.zeta_prime_path.empty()) check_path_exists(opt.zeta_prime_path, "zeta_prime");

    std::vector<std::string> names;
    if (suite == "all") names = suites::suite_names();
    else names.push_back(suite);

    int failures = 0;
    std::ostringstream csv;
    csv << config_echo(cfg) << empirics::report_csv_header() << "\n";
    for (const auto& name : names) {
        const auto reports = suites::run_suite(name, opt);
        for (const auto& r : reports) {
            csv << empirics::report_csv_row(r) << "\n";
            log << (r.verdict ? "PASS " : "FAIL ") << r.test << " (stat " << r.statistic
                << ", threshold " << r.threshold << ")\n";
            if (!r.verdict) ++failures;
        }
    }
    const std::string file =
        paths.out_dir + "/" + cfg.get("prefix", "verify_" + suite) + ".csv";
    write_file_atomic(file, csv.str());
    log << "wrote " << file << "; " << failures << " failing verdict(s)\n";
    return failures == 0 ? 0 : 1;
}

int cmd_ingest(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    cfg.require_known_keys({"zeros", "zeta_prime", "prefix", "seed", "threads"});
    const std::string zeros = cfg.get("zeros");
    if (zeros.empty()) throw std::runtime_error("config: ingest needs zeros=<path>");
    check_path_exists(zeros, "zeros");
    zeta::ZeroTable table = zeta::ingest_zeros(zeros);
    if (cfg.has("zeta_prime")) {
        check_path_exists(cfg.get("zeta_prime"), "zeta_prime");
        zeta::load_zeta_prime(table, cfg.get("zeta_prime"));
    }
    const std::string canon = zeta::canonical_zero_text(table);
    const std::string prefix = cfg.get("prefix", "zeros_canonical");
    write_file_atomic(paths.out_dir + "/" + prefix + ".txt",
                      "# canonicalized zero table from " + zeros + "\n" + canon);
    std::ostringstream summary;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    summary << "count = " << table.gammas.size() << "\n";
    summary << "max_gamma = " << table.gammas.back() << "\n";
    summary << "checksum_fnv1a64 = " << buf << "\n";
    summary << "zeta_prime = " << (table.has_zeta_prime() ? "present" : "absent") << "\n";
    write_file_atomic(paths.out_dir + "/" + prefix + "_summary.txt", summary.str());
    log << "ingested " << table.gammas.size() << " zeros, max gamma " << table.gammas.back()
        << ", checksum " << buf << "\n";
    return 0;
}

int cmd_tangent(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    std::vector<std::string> allowed = kModelKeys;
    for (const char* k : {"seed", "theta", "ell_c", "epsilons", "t_grid", "replicas", "prefix",
                          "threads"})
        allowed.push_back(k);
    cfg.require_known_keys(allowed);

    const auto model = model_from_config(cfg);
    const auto measure = spectra::spectral_measure(model);
    const double theta = cfg.get_num("theta", 1.0, 1e-9, 2.0 - 1e-9);
    tangent::TangentConfig tcfg;
    tcfg.theta = theta;
    tcfg.ell.kind = tangent::SlowlyVarying::Kind::constant;
    tcfg.ell.c = cfg.has("ell_c")
                     ? cfg.get_num("ell_c", 1.0, 1e-12, 1e12)
                     : tangent::estimate_ell_constant(measure, theta, 20.0,
                                                      0.2 * model.max_abs_frequency());
    tcfg.epsilon_schedule = cfg.get_list("epsilons", {1e-1, 1e-2, 1e-3});
    tcfg.t_grid = cfg.get_list("t_grid", {4.0, 6.0, 8.0, 10.0});

    const auto scan = tangent::covariance_convergence_scan(tcfg, model);
    std::ostringstream out;
    out << config_echo(cfg) << "epsilon,max_gap\n";
    for (const auto& [eps, gap] : scan) out << eps << "," << gap << "\n";
    const std::string prefix = cfg.get("prefix", "tangent");
    write_file_atomic(paths.out_dir + "/" + prefix + "_scan.csv", out.str());

    // Hurst from tangent paths at the smallest epsilon plus fBm controls.
    // Grid spacing keeps lambda_max * eps * dt >= 25, the truncation's
    // resolution of the scaling window.
    const double eps = tcfg.epsilon_schedule.back();
    const std::size_t n_paths = static_cast<std::size_t>(cfg.get_num("replicas", 512, 100, 1e5));
    const std::size_t m = 64;
    const double dt = 25.0 / std::max(1.0, model.max_abs_frequency() * eps);
    std::vector<double> tgrid(m), sgrid(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        tgrid[j] = dt * static_cast<double>(j + 1);
        sgrid[j + 1] = eps * tgrid[j];
    }
    const auto d = spectra::decompose(model);
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const int threads = static_cast<int>(cfg.get_num("threads", 0, 0, 256));
    const auto ens = sampler::evaluate_ensemble(model, d, sgrid, seed, n_paths, threads);
    const double norm = std::sqrt(std::pow(eps, 2.0 - theta) * tcfg.ell(1.0 / eps));
    std::vector<sampler::PathSample> tpaths(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        tpaths[p].grid = tgrid;
        tpaths[p].values.resize(m);
        for (std::size_t j = 0; j < m; ++j)
            tpaths[p].values[j] = (ens[p * (m + 1) + j + 1] - ens[p * (m + 1)]).real() / norm;
    }
    std::ostringstream hout;
    hout << config_echo(cfg) << "source,H_hat,ci_low,ci_high\n";
    const auto ht = tangent::hurst_estimate(tpaths);
    hout << "tangent-paths," << ht.h_hat << "," << ht.ci_low << "," << ht.ci_high << "\n";
    for (const double th : {1.0, 1.5}) {
        const auto ctrl = tangent::fbm_synthetic_paths(th, 0.5, tgrid, n_paths, seed + 9);
        const auto hc = tangent::hurst_estimate(ctrl);
        hout << "fbm-control-H=" << 1.0 - th / 2.0 << "," << hc.h_hat << "," << hc.ci_low << ","
             << hc.ci_high << "\n";
    }
    write_file_atomic(paths.out_dir + "/" + prefix + "_hurst.csv", hout.str());
    log << "wrote " << prefix << "_scan.csv and " << prefix << "_hurst.csv (ell_c = " << tcfg.ell.c
        << ")\n";
    return 0;
}

int cmd_explicit(const RunConfig& cfg, const Paths& paths, std::ostream& log) {
    cfg.require_known_keys({"explicit_kind", "zeros", "zeta_prime", "sieve_limit", "t0", "t1",
                            "points", "truncation_indices", "truncation", "prefix", "seed",
                            "threads"});
    const auto kind = parse_kind(cfg.get("explicit_kind", "psi"));
    const std::string zeros = cfg.get("zeros");
    if (zeros.empty()) throw std::runtime_error("config: explicit needs zeros=<path>");
    check_path_exists(zeros, "zeros");
    zeta::ZeroTable table = zeta::ingest_zeros(zeros);
    if (cfg.has("zeta_prime")) {
        check_path_exists(cfg.get("zeta_prime"), "zeta_prime");
        zeta::load_zeta_prime(table, cfg.get("zeta_prime"));
    }
    const std::size_t N = static_cast<std::size_t>(cfg.get_num("sieve_limit", 1e6, 10, 2e8));
    const double t0 = cfg.get_num("t0", 1.0, 1e-6, 25.0);
    const double t1 = cfg.get_num("t1", std::log(1e3), 1e-6, 25.0);
    const std::size_t points = static_cast<std::size_t>(cfg.get_num("points", 400, 2, 1e6));
    if (std::exp(t1) > static_cast<double>(N))
        throw std::runtime_error("config: e^{t1} exceeds sieve_limit");

    const auto tables = zeta::sieve(N);
    std::vector<double> t_grid(points);
    for (std::size_t i = 0; i < points; ++i)
        t_grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(points - 1);

    auto indices = cfg.get_list("truncation_indices", {25, 100, 1000});
    if (cfg.has("truncation")) {
        const double T = cfg.get_num("truncation", 0.0, 0.0, table.gammas.back());
        indices = {static_cast<double>(table.count_below(T))};
    }
    std::ostringstream trend;
    trend << config_echo(cfg) << "T,rms,max\n";
    const std::string prefix = cfg.get("prefix", "explicit");
    for (double raw : indices) {
        const std::size_t k =
            std::min(static_cast<std::size_t>(raw), table.gammas.size() - 1);
        const double T = zeta::midpoint_truncation(table, k);
        const auto em = zeta::build_explicit_model(kind, table, T);
        const auto gap = zeta::explicit_formula_gap(kind, tables, em, t_grid);
        trend << T << "," << gap.rms << "," << gap.max_abs << "\n";

        std::ostringstream detail;
        detail << config_echo(cfg) << "# T = " << T << "\n" << "t,lhs,rhs,gap\n";
        for (double t : t_grid) {
            const double lhs = zeta::normalized_summatory(tables, kind, t);
            const double rhs = zeta::explicit_rhs(em, t);
            detail << t << "," << lhs << "," << rhs << "," << lhs - rhs << "\n";
        }
        write_file_atomic(paths.out_dir + "/" + prefix + "_T" + std::to_string(k) + ".csv",
                          detail.str());
        log << "T index " << k << ": rms " << gap.rms << ", max " << gap.max_abs << "\n";
    }
    write_file_atomic(paths.out_dir + "/" + prefix + "_trend.csv", trend.str());
    return 0;
}

}  // namespace apstat::cli
