#ifndef APSTAT_FOURIER_MODEL_HPP
#define APSTAT_FOURIER_MODEL_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apstat/numeric.hpp"

// Finite Fourier data of a Besicovitch almost periodic function: the
// computational stand-in for f, its spectrum and its Fourier coefficients.
// Models are always truncations; the provenance of the truncation is part
// of the label.

namespace apstat::spectra {

struct Term {
    double lambda = 0.0;  // frequency, radians per unit t
    cplx coeff;           // complex amplitude
};

class FourierModel {
public:
    FourierModel() = default;
    // Sorts by frequency, drops zero coefficients, rejects duplicate or
    // non-finite frequencies.
    FourierModel(std::vector<Term> terms, std::string label);

    const std::vector<Term>& terms() const { return terms_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const Term& term(std::size_t i) const { return terms_[i]; }
    double max_abs_frequency() const;

    // f(t) = sum_k c_k e^{i lambda_k t}, cascade-summed.
    cplx operator()(double t) const;

private:
    std::vector<Term> terms_;
    std::string label_;
};

// Partition of the spectrum into conjugate pairs (C, -C), unpaired residue R
// and an optional zero frequency. Rational independence of C u R cannot be
// certified numerically; it is carried as an asserted attribute only.
struct SpectrumDecomposition {
    // (index of +lambda, index of -lambda), lambda > 0
    std::vector<std::pair<std::size_t, std::size_t>> paired;
    std::vector<std::size_t> residue;
    std::optional<std::size_t> zero_index;
    bool rationally_independent_asserted = true;

    std::size_t covered_terms() const {
        return 2 * paired.size() + residue.size() + (zero_index ? 1 : 0);
    }
};

// Probability measure putting mass |f_lambda|^2 / ||f||^2 at each frequency.
struct SpectralMeasure {
    struct Atom {
        double lambda = 0.0;
        double mass = 0.0;
    };
    std::vector<Atom> atoms;  // sorted by lambda
    double total_mass() const;
};

struct ScalingFit {
    double alpha_hat = 0.0;  // log-log slope of the truncated second moment
    double beta_hat = 0.0;   // decay exponent of the tail mass (so R ~ x^-beta)
    double theta_hat = 0.0;  // == alpha_hat, the regular-variation index
    double t_residual_rms = 0.0;
    double r_residual_rms = 0.0;
    std::size_t n_tail_points = 0;
};

double parseval_norm(const FourierModel& model);
double marcinkiewicz_seminorm_numeric(const FourierModel& model, double L, double quadrature_step);
cplx estimate_fourier_coefficient(const FourierModel& model, double a, double L, double quadrature_step);
cplx inner_product(const FourierModel& a, const FourierModel& b);
FourierModel translate(const FourierModel& model, double v);
SpectrumDecomposition decompose(const FourierModel& model, double pair_tolerance = 1e-9);
SpectralMeasure spectral_measure(const FourierModel& model);
double truncated_second_moment(const SpectralMeasure& measure, double x);
double tail_mass(const SpectralMeasure& measure, double x);
ScalingFit fit_scaling_exponents(const SpectralMeasure& measure, std::span<const double> x_grid);

// Step resolving the fastest oscillation: min(0.01, 0.1 / max |lambda|).
double default_quadrature_step(const FourierModel& model);

// Text format: header "# apstat-fourier v1", one term per line
// "lambda re_coeff im_coeff", sorted by lambda.
std::string to_text(const FourierModel& model);
FourierModel from_text(const std::string& text, const std::string& fallback_label = "model");
void save_text(const FourierModel& model, const std::string& path);
FourierModel load_text(const std::string& path);

}  // namespace apstat::spectra

#endif
