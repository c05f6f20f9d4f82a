#ifndef APSTAT_TANGENT_HPP
#define APSTAT_TANGENT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "apstat/fourier_model.hpp"
#include "apstat/sampler.hpp"

// Tangent-process machinery: the rescaled chordal process, its exact
// preasymptotic covariance, the fractional-Brownian-motion target, and the
// power-law example spectrum generator.

namespace apstat::tangent {

using spectra::FourierModel;
using spectra::SpectralMeasure;

// Slowly varying factor l(x) in T(x) ~ x^theta l(x).
struct SlowlyVarying {
    enum class Kind { constant, log_power };
    Kind kind = Kind::constant;
    double c = 1.0;
    double p = 0.0;  // exponent of log x for Kind::log_power
    double operator()(double x) const;
};

struct TangentConfig {
    double theta = 1.0;  // in (0, 2)
    SlowlyVarying ell;
    std::vector<double> epsilon_schedule;  // strictly decreasing, positive
    std::vector<double> t_grid;
    void validate() const;
};

// Power-law spectrum: lambda_k ~ k^a with seeded perturbations standing in
// for rational independence; pair masses |f_k|^2 proportional to k^{-(b+1)},
// normalized so that the squared seminorm equals A. Regular variation index
// theta = 2 - b/a.
struct ExampleSpectrumSpec {
    double a = 1.0;          // frequency growth index, > 0
    double b = 1.0;          // weight index, in (0, 2a)
    double A = 1.0;          // total squared seminorm
    std::size_t n_terms = 1; // number of conjugate pairs
    std::uint64_t seed = 1;
    void validate() const;
};

FourierModel generate_example_spectrum(const ExampleSpectrumSpec& spec);

// v(t) = E(1 - cos(xi_f t)), exact atom sum.
double nu_function(const SpectralMeasure& measure, double t);

// C_{f,theta} = pi theta ||f||_{M2} / (2 Gamma(3-theta) sin(pi theta/2)).
double c_constant(const FourierModel& model, double theta);
double c_constant_from_norm(double parseval, double theta);

// c (|t|^{2-theta} + |s|^{2-theta} - |t-s|^{2-theta})
double fbm_covariance(double theta, double c, double t, double s);

// T_eps(t) = (M_f(eps t) - M_f(0)) / sqrt(eps^{2-theta} l(1/eps)).
sampler::PathSample rescaled_chordal(const FourierModel& model,
                                     const sampler::PhaseAssignment& phases, double theta,
                                     const SlowlyVarying& ell, double epsilon,
                                     std::span<const double> t_grid);

// Exact E[T_eps(t) T_eps(s)] for a symmetric-coefficient model:
// sum_lambda |f_lambda|^2 (cos(lam eps (t-s)) - cos(lam eps t) - cos(lam eps s) + 1)
// divided by eps^{2-theta} l(1/eps). Equals ||f||^2 (v(eps t)+v(eps s)-v(eps(t-s)))
// over the same normalization.
double preasymptotic_covariance(const SpectralMeasure& measure, double parseval_sq, double theta,
                                const SlowlyVarying& ell, double epsilon, double t, double s);

// Measured constant of the slowly varying factor: geometric mean of
// T(x)/x^theta over a log grid in [x_lo, x_hi].
double estimate_ell_constant(const SpectralMeasure& measure, double theta, double x_lo,
                             double x_hi);

// Per epsilon: max over the (t,s) grid of |preasymptotic - fbm target|.
// Refuses models with residue frequencies or asymmetric coefficients.
std::vector<std::pair<double, double>> covariance_convergence_scan(const TangentConfig& config,
                                                                   const FourierModel& model);

struct HurstEstimate {
    double h_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Aggregated log-log regression of mean squared increments against the lag;
// needs >= 100 paths on a common uniform grid.
HurstEstimate hurst_estimate(const std::vector<sampler::PathSample>& paths);

// Synthetic fBm control paths from a Cholesky factor of fbm_covariance on
// the given grid (grid must exclude 0; the process is pinned to X(0) = 0).
std::vector<sampler::PathSample> fbm_synthetic_paths(double theta, double c,
                                                     std::span<const double> grid,
                                                     std::size_t n_paths, std::uint64_t seed);

}  // namespace apstat::tangent

#endif
