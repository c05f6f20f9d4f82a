#include "apstat/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "apstat/rng.hpp"

namespace apstat::tangent {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double SlowlyVarying::operator()(double x) const {
    switch (kind) {
        case Kind::constant: return c;
        case Kind::log_power: return c * std::pow(std::log(std::max(x, 2.0)), p);
    }
    return c;
}

void TangentConfig::validate() const {
    if (!(theta > 0.0 && theta < 2.0)) throw std::invalid_argument("TangentConfig: theta not in (0,2)");
    if (epsilon_schedule.empty()) throw std::invalid_argument("TangentConfig: empty epsilon schedule");
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
        if (!(epsilon_schedule[i] > 0.0))
            throw std::invalid_argument("TangentConfig: epsilons must be positive");
        if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw std::invalid_argument("TangentConfig: epsilon schedule must decrease");
    }
}

void ExampleSpectrumSpec::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("ExampleSpectrumSpec: a must be positive");
    if (!(b > 0.0 && b < 2.0 * a)) throw std::invalid_argument("ExampleSpectrumSpec: need 0 < b < 2a");
    if (!(A > 0.0)) throw std::invalid_argument("ExampleSpectrumSpec: A must be positive");
    if (n_terms < 1) throw std::invalid_argument("ExampleSpectrumSpec: n_terms must be >= 1");
}

FourierModel generate_example_spectrum(const ExampleSpectrumSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_terms;

    // Exact powers k^a with integer a are rationally dependent; the seeded
    // perturbations break that in spirit (independence stays an assertion).
    std::vector<double> lambda(n), mass(n);
    CascadeAccumulator<double> z;
    for (std::size_t k = 0; k < n; ++k) {
        const double delta = 1e-3 * rng::uniform01(spec.seed, 0, k, rng::Tag::perturb);
        lambda[k] = std::pow(static_cast<double>(k + 1), spec.a) * (1.0 + delta);
        mass[k] = std::pow(static_cast<double>(k + 1), -(spec.b + 1.0));
        z.add(mass[k]);
    }
    const double norm = spec.A / (2.0 * z.total());  // sum over both signs = A

    std::vector<spectra::Term> terms;
    terms.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const double arg = 2.0 * kPi * rng::uniform01(spec.seed, 0, k, rng::Tag::argument);
        const cplx f = std::polar(std::sqrt(mass[k] * norm), arg);
        terms.push_back({lambda[k], f});
        terms.push_back({-lambda[k], std::conj(f)});
    }
    char label[128];
    std::snprintf(label, sizeof(label), "example-spectrum a=%g b=%g A=%g N=%zu seed=%llu", spec.a,
                  spec.b, spec.A, n, static_cast<unsigned long long>(spec.seed));
    return FourierModel(std::move(terms), label);
}

double nu_function(const SpectralMeasure& measure, double t) {
    CascadeAccumulator<double> acc;
    for (const auto& a : measure.atoms) acc.add(a.mass * (1.0 - std::cos(a.lambda * t)));
    return acc.total();
}

double c_constant_from_norm(double parseval, double theta) {
    if (!(theta > 0.0 && theta < 2.0)) throw std::invalid_argument("c_constant: theta not in (0,2)");
    return kPi * theta * parseval / (2.0 * std::tgamma(3.0 - theta) * std::sin(kPi * theta / 2.0));
}

double c_constant(const FourierModel& model, double theta) {
    return c_constant_from_norm(spectra::parseval_norm(model), theta);
}

double fbm_covariance(double theta, double c, double t, double s) {
    if (!(theta > 0.0 && theta < 2.0)) throw std::invalid_argument("fbm_covariance: theta not in (0,2)");
    const double e = 2.0 - theta;
    return c * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

sampler::PathSample rescaled_chordal(const FourierModel& model,
                                     const sampler::PhaseAssignment& phases, double theta,
                                     const SlowlyVarying& ell, double epsilon,
                                     std::span<const double> t_grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("rescaled_chordal: epsilon must be positive");
    const double norm = std::sqrt(std::pow(epsilon, 2.0 - theta) * ell(1.0 / epsilon));

    // Evaluate M_f on the scaled grid and at 0 with the same phases. Scaled
    // points may collide or land out of order for arbitrary grids, so they
    // are evaluated one at a time.
    sampler::PathSample out;
    out.grid.assign(t_grid.begin(), t_grid.end());
    out.values.reserve(t_grid.size());
    const double zero_grid[1] = {0.0};
    const cplx m0 = sampler::evaluate(model, phases, zero_grid).values[0];
    for (double t : t_grid) {
        const double pt[1] = {epsilon * t};
        const cplx mt = sampler::evaluate(model, phases, pt).values[0];
        out.values.push_back((mt - m0) / norm);
    }
    out.model_label = model.label();
    out.seed = phases.seed;
    out.replica = phases.replica;
    out.truncation = "N=" + std::to_string(model.size());
    return out;
}

double preasymptotic_covariance(const SpectralMeasure& measure, double parseval_sq, double theta,
                                const SlowlyVarying& ell, double epsilon, double t, double s) {
    CascadeAccumulator<double> acc;
    for (const auto& a : measure.atoms) {
        const double l = a.lambda;
        acc.add(a.mass * (std::cos(l * epsilon * (t - s)) - std::cos(l * epsilon * t) -
                          std::cos(l * epsilon * s) + 1.0));
    }
    return parseval_sq * acc.total() / (std::pow(epsilon, 2.0 - theta) * ell(1.0 / epsilon));
}

double estimate_ell_constant(const SpectralMeasure& measure, double theta, double x_lo,
                             double x_hi) {
    if (!(x_lo > 0.0 && x_hi > x_lo)) throw std::invalid_argument("estimate_ell_constant: bad range");
    const int n = 16;
    CascadeAccumulator<double> acc;
    for (int i = 0; i < n; ++i) {
        const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n - 1));
        const double t = spectra::truncated_second_moment(measure, x);
        if (!(t > 0.0)) throw std::invalid_argument("estimate_ell_constant: T(x) vanishes on range");
        acc.add(std::log(t) - theta * std::log(x));
    }
    return std::exp(acc.total() / n);
}

std::vector<std::pair<double, double>> covariance_convergence_scan(const TangentConfig& config,
                                                                   const FourierModel& model) {
    config.validate();
    const auto d = spectra::decompose(model);
    if (!d.residue.empty() || d.zero_index)
        throw std::invalid_argument(
            "covariance_convergence_scan: model must have a purely paired spectrum");
    for (const auto& [ip, in] : d.paired) {
        const cplx fp = model.term(ip).coeff, fn = model.term(in).coeff;
        if (std::abs(fn - std::conj(fp)) > 1e-9 * (std::abs(fp) + std::abs(fn)))
            throw std::invalid_argument(
                "covariance_convergence_scan: coefficients must be conjugate-symmetric");
    }

    const auto measure = spectra::spectral_measure(model);
    const double pn = spectra::parseval_norm(model);
    const double c = c_constant_from_norm(pn, config.theta);

    std::vector<std::pair<double, double>> result;
    for (double eps : config.epsilon_schedule) {
        double gap = 0.0;
        for (double t : config.t_grid)
            for (double s : config.t_grid) {
                const double pre = preasymptotic_covariance(measure, pn * pn, config.theta,
                                                            config.ell, eps, t, s);
                gap = std::max(gap, std::abs(pre - fbm_covariance(config.theta, c, t, s)));
            }
        result.emplace_back(eps, gap);
    }
    return result;
}

HurstEstimate hurst_estimate(const std::vector<sampler::PathSample>& paths) {
    if (paths.size() < 100) throw std::invalid_argument("hurst_estimate: need >= 100 paths");
    const auto& grid = paths.front().grid;
    const std::size_t m = grid.size();
    if (m < 5) throw std::invalid_argument("hurst_estimate: grid too short");
    for (const auto& p : paths)
        if (p.grid != grid) throw std::invalid_argument("hurst_estimate: paths must share a grid");
    const double dt = grid[1] - grid[0];

    std::vector<double> log_lag, log_msq;
    for (std::size_t lag = 1; lag <= (m - 1) / 4 || (lag == 1 && m >= 3); lag *= 2) {
        CascadeAccumulator<double> acc;
        std::size_t count = 0;
        for (const auto& p : paths)
            for (std::size_t i = 0; i + lag < m; ++i) {
                acc.add(std::norm(p.values[i + lag] - p.values[i]));
                ++count;
            }
        log_lag.push_back(std::log(dt * static_cast<double>(lag)));
        log_msq.push_back(std::log(acc.total() / static_cast<double>(count)));
    }
    const LinearFit fit = linear_fit(log_lag, log_msq);
    HurstEstimate h;
    h.h_hat = fit.slope / 2.0;
    const double half_width = std::max(fit.slope_se, fit.residual_rms / 2.0);
    h.ci_low = h.h_hat - half_width;
    h.ci_high = h.h_hat + half_width;
    return h;
}

std::vector<sampler::PathSample> fbm_synthetic_paths(double theta, double c,
                                                     std::span<const double> grid,
                                                     std::size_t n_paths, std::uint64_t seed) {
    const std::size_t m = grid.size();
    if (m == 0 || m > 512) throw std::invalid_argument("fbm_synthetic_paths: grid size must be in [1, 512]");
    for (double t : grid)
        if (t == 0.0) throw std::invalid_argument("fbm_synthetic_paths: grid must exclude 0");
    std::vector<double> k(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) k[i * m + j] = fbm_covariance(theta, c, grid[i], grid[j]);
    cholesky(k, m);

    std::vector<sampler::PathSample> paths(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        std::vector<double> z(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = rng::gaussian(seed, p, i);
        sampler::PathSample& ps = paths[p];
        ps.grid.assign(grid.begin(), grid.end());
        ps.values.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += k[i * m + j] * z[j];
            ps.values[i] = {s, 0.0};
        }
        ps.model_label = "fbm-control";
        ps.seed = seed;
        ps.replica = p;
    }
    return paths;
}

}  // namespace apstat::tangent
