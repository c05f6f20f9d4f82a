#ifndef APSTAT_EMPIRICS_HPP
#define APSTAT_EMPIRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apstat/fourier_model.hpp"
#include "apstat/sampler.hpp"

// Monte Carlo verification layer: distributional convergence of randomly
// translated functions to the limit process, ergodic averages,
// equidistribution characters and continuity diagnostics.

namespace apstat::empirics {

using spectra::FourierModel;

class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);
    double ecdf(double x) const;
    const std::vector<double>& sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

struct TestReport {
    std::string test;
    double statistic = 0.0;
    double threshold = 0.0;
    long long n = 0;
    bool verdict = false;  // statistic <= threshold
    std::string description;
};

TestReport make_report(std::string test, double statistic, double threshold, long long n,
                       std::string description = {});
// Lower-bound checks (achieved >= required) recast into the report's
// statistic <= threshold contract: statistic = required - achieved.
TestReport make_lower_bound_report(std::string test, double achieved, double required,
                                   long long n, std::string description = {});

std::string report_csv_header();
std::string report_csv_row(const TestReport& r);

// Two-sample Kolmogorov-Smirnov with threshold c(alpha) sqrt((n+m)/(nm)),
// c(0.01) = 1.628.
TestReport ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                         std::string name = "ks");
// One-sample KS against a Gaussian with moment-fitted parameters.
TestReport ks_gaussian_fit(std::span<const double> samples, std::string name = "ks-normal");

// KS on one real component; near-constant marginals (e.g. the Im part of a
// real-valued model, which carries only rounding noise) are compared by
// value instead of by ECDF.
TestReport ks_component(std::vector<double> a, std::vector<double> b, std::string name);

double ks_critical(double alpha);  // c(alpha) for alpha in {0.1, 0.05, 0.01}

enum class Side { two_sided, one_sided };

// n rows; row i is (f(V_i + t_j))_j with V_i uniform on [-L, L] or [0, L].
std::vector<std::vector<cplx>> sample_translated(const FourierModel& model, double L,
                                                 std::span<const double> t_grid, std::size_t n,
                                                 std::uint64_t seed, Side side = Side::two_sided);

// Cramer-Wold panel: for each L and each coefficient vector alpha (unit
// vectors, all-ones and one seeded random vector) compare the law of
// sum_i alpha_i f(V + t_i) with sum_i alpha_i M_f(t_i); the report statistic
// is the larger of the Re/Im KS statistics.
std::vector<TestReport> fidi_convergence_test(const FourierModel& model,
                                              std::span<const double> L_schedule,
                                              std::span<const double> t_points, std::size_t n,
                                              std::uint64_t seed);

// Bounded test functions for ergodic averages:
// one, re, im, mod, mod2, re_clip1, mod2_clip4, sin_re.
double phi_apply(const std::string& id, cplx z);
const std::vector<std::string>& phi_registry();

// Trapezoid time average of phi along one realization on [0, T].
double ergodic_average(const FourierModel& model, const sampler::PhaseAssignment& phases,
                       double T, double step, const std::string& phi);

// Closed-form standard deviation of the time average of Re M over [0, T]
// (the exact double integral of the covariance over the window).
double time_average_sd_re(const FourierModel& model, double T);

// Covariance non-decay: sup over the lag grid of |K(s)| must stay above the
// required level (default: half the largest atom weight max |f_lambda|^2).
TestReport mixing_probe(const FourierModel& model, std::span<const double> lag_grid,
                        double required_level = -1.0);

// Empirical mean of e^{i t V_{-1,1}} prod e^{i lambda k_lambda V_{-L,L}}
// with the coupled draw V_{-L,L} = L V_{-1,1}, against g(k) sin(t)/t.
// k has one entry per conjugate pair (lambda > 0) followed by one per
// residue frequency, in decomposition order.
TestReport equidistribution_character_test(const FourierModel& model, std::span<const int> k,
                                           double t, double L, std::size_t n,
                                           std::uint64_t seed = 1);

// Orbit average of a finite-character test function along t -> (U_j e^{i
// lambda_j t}) against the torus-product quadrature. Registry: one, re1,
// im1, re12bar (Re z1 conj(z2)), re_prod12 (Re z1 z2). n <= 4 frequencies.
TestReport kronecker_weyl_probe(std::span<const double> frequencies, const std::string& h,
                                double T, std::uint64_t seed = 1);

// Continuity diagnostics: partial sums of sum |f|^2 log_+^{1.1}|lambda|
// across truncations, the log-log slope of the exact increment second
// moment, and a pathwise max-increment Holder estimate.
struct HolderDiagnostic {
    double hunt_partial_full = 0.0;   // full-model partial sum, eps = 0.1
    double hunt_partial_half = 0.0;   // half-truncation partial sum
    double second_moment_slope = 0.0; // estimates min(2 - alpha, beta)
    double pathwise_exponent = 0.0;
};
TestReport holder_diagnostic(const FourierModel& model, std::span<const double> exponent_grid,
                             std::span<const double> dt_grid);
HolderDiagnostic holder_diagnostic_detail(const FourierModel& model,
                                          std::span<const double> dt_grid, std::uint64_t seed = 7);

// Trend gate for Monte Carlo statistics over a decreasing schedule: a step
// counts as nonincreasing when the statistic decreases or both sides are
// already below the floor gate; at most one bad step is allowed.
bool trend_nonincreasing(std::span<const double> stats, double floor_gate);

}  // namespace apstat::empirics

#endif
