#ifndef APSTAT_ZETA_HPP
#define APSTAT_ZETA_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apstat/fourier_model.hpp"

// Analytic-number-theory layer: arithmetic sieves, summatory functions,
// Riemann zeta evaluation on and near the critical strip, ingestion of zero
// tables, and the truncated explicit-formula models for the Chebyshev,
// Mertens and Liouville remainders.

namespace apstat::zeta {

struct ZeroTable {
    std::vector<double> gammas;       // strictly increasing positive ordinates
    std::vector<cplx> zeta_prime;     // aligned zeta'(1/2 + i gamma_k); may be empty
    std::string source;
    bool has_zeta_prime() const { return !zeta_prime.empty(); }
    std::size_t count_below(double x) const;  // #{gamma_k <= x}
};

// One ordinate per line, '#' comments allowed. Rejects non-monotone,
// nonpositive or unparsable entries with the offending line number.
ZeroTable ingest_zeros(const std::string& path);
// Companion CSV "gamma,re,im" (header optional), ordinates matched within 1e-6.
void load_zeta_prime(ZeroTable& table, const std::string& path);
std::string canonical_zero_text(const ZeroTable& table);

struct ArithmeticTables {
    std::size_t limit = 0;                 // N
    std::vector<double> vonmangoldt;       // Lambda(1..N), index 0 unused
    std::vector<signed char> moebius;      // mu(1..N)
    std::vector<signed char> liouville;    // lambda(1..N)
    // prefix sums for the summatory functions
    std::vector<double> psi_prefix;
    std::vector<int> mertens_prefix;
    std::vector<int> liouville_prefix;
};

enum class Convention { midpoint, left };
enum class ExplicitKind { psi, mertens, liouville };

ArithmeticTables sieve(std::size_t N);
// Summatory function of Lambda/mu/lambda up to x; midpoint convention
// averages the one-sided limits at integer jump points.
double summatory(const ArithmeticTables& tables, ExplicitKind kind, double x,
                 Convention convention = Convention::midpoint);

// Euler-Maclaurin zeta with `terms` nodes and Bernoulli corrections up to
// B_30. Validated for Re(s) > -1, |Im(s)| <= 1e4; the node count grows with
// |Im(s)| so the asymptotic tail stays convergent.
cplx zeta_evaluate(double s_re, double s_im, int terms = 64);
// zeta'(1/2 + i gamma) by central differencing along the imaginary
// direction; rejects |result| < 1e-6 (possibly multiple zero).
cplx zeta_prime_on_line(double gamma, double h = 1e-5, int terms = 64);

struct ExplicitModel {
    ExplicitKind kind = ExplicitKind::psi;
    spectra::FourierModel model;  // frequencies +-gamma_k <= T, conjugate-symmetric
    double truncation = 0.0;
};

ExplicitModel build_explicit_model(ExplicitKind kind, const ZeroTable& table, double T,
                                   int zeta_terms = 64);
// Elementary remainders of the normalized explicit formulas (x = e^t).
double explicit_remainder(ExplicitKind kind, double t);
// Left-hand side of the normalized explicit formula from sieved data:
// psi_hat, M_hat or L_hat at t.
double normalized_summatory(const ArithmeticTables& tables, ExplicitKind kind, double t);
// Truncated right-hand side: sign * (deterministic model value) + remainder.
double explicit_rhs(const ExplicitModel& em, double t);

struct FormulaGap {
    double rms = 0.0;
    double max_abs = 0.0;
    std::size_t n_points = 0;
};
FormulaGap explicit_formula_gap(ExplicitKind kind, const ArithmeticTables& tables,
                                const ExplicitModel& em, std::span<const double> t_grid);

struct ZeroAsymptotics {
    std::vector<double> x;
    std::vector<double> counting_ratio;  // N(x) / (x log x / 2pi)
    std::vector<double> growth_ratio;    // gamma_n log n / (2 pi n), n = N(x)
    std::vector<double> tail_ratio;      // s=1 tail sum / (x^{-1} log x / 2pi)
};
ZeroAsymptotics zero_counting_check(const ZeroTable& table, std::span<const double> x_grid);

// J_{-1}(T) = sum over |gamma_k| <= T of 1/|zeta'(rho_k)|^2 (both signs).
double gonek_sum(const ZeroTable& table, double T);

// Truncation midway between consecutive ordinates, so a cut never lands
// inside a near-degenerate pair: (gamma_k + gamma_{k+1}) / 2.
double midpoint_truncation(const ZeroTable& table, std::size_t k);

}  // namespace apstat::zeta

#endif
