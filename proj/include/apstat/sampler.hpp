#ifndef APSTAT_SAMPLER_HPP
#define APSTAT_SAMPLER_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apstat/fourier_model.hpp"

// Sampling of the stationary limit process: independent uniform phases on
// the torus, one per conjugate pair and per residue frequency, with
// phase(-lambda) = conj(phase(lambda)) and phase(0) = 1.

namespace apstat::sampler {

using spectra::FourierModel;
using spectra::SpectrumDecomposition;

struct PhaseAssignment {
    SpectrumDecomposition decomposition;
    std::vector<cplx> pair_phases;     // aligned with decomposition.paired
    std::vector<cplx> residue_phases;  // aligned with decomposition.residue
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

struct PathSample {
    std::vector<double> grid;  // strictly increasing
    std::vector<cplx> values;
    std::string model_label;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::string truncation;
};

PhaseAssignment sample_phases(const SpectrumDecomposition& decomposition, std::uint64_t seed,
                              std::uint64_t replica);
// All phases forced to 1: evaluate() then reproduces the deterministic
// polynomial, the degenerate check path.
PhaseAssignment unit_phases(const SpectrumDecomposition& decomposition);

// Expand the pair/residue phases to one factor per model term:
// phase(-lambda) = conj(phase(lambda)), phase(0) = 1.
std::vector<cplx> per_term_phases(const FourierModel& model, const PhaseAssignment& phases);

PathSample evaluate(const FourierModel& model, const PhaseAssignment& phases,
                    std::span<const double> grid);

// K(s) = sum |f_lambda|^2 e^{i lambda s}; K(0) is the squared seminorm.
cplx exact_covariance(const FourierModel& model, double s);
// Pseudo-covariance: sum over the pair set C of f_lambda f_{-lambda} e^{i lambda s}.
cplx exact_pseudocovariance(const FourierModel& model, double s);
// E|M(t) - M(0)|^2 = sum |f_lambda|^2 |e^{i lambda t} - 1|^2.
double exact_increment_second_moment(const FourierModel& model, double t);

// Batch kernel: replica r evaluated with sample_phases(decomposition, seed, r).
// Result is row-major [replica][grid point], independent of thread count.
std::vector<cplx> evaluate_ensemble(const FourierModel& model,
                                    const SpectrumDecomposition& decomposition,
                                    std::span<const double> grid, std::uint64_t seed,
                                    std::size_t n_replicas, int threads = 0);

// CSV: header "t,re,im" preceded by '#' provenance comments.
std::string path_sample_csv(const PathSample& path);
PathSample parse_path_sample_csv(const std::string& text);

}  // namespace apstat::sampler

#endif
