#include "apstat/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "apstat/rng.hpp"

namespace apstat::sampler {

namespace {

void check_alignment(const FourierModel& model, const PhaseAssignment& p) {
    if (p.decomposition.covered_terms() != model.size() ||
        p.pair_phases.size() != p.decomposition.paired.size() ||
        p.residue_phases.size() != p.decomposition.residue.size())
        throw std::invalid_argument("evaluate: phases not aligned with the model's decomposition");
    for (const auto& [ip, in] : p.decomposition.paired)
        if (ip >= model.size() || in >= model.size())
            throw std::invalid_argument("evaluate: decomposition index out of range");
}

// Per-pair data for fast repeated evaluation. For conjugate-symmetric
// coefficients the pair contributes 2 Re(u a e^{i lambda t}), exactly real;
// otherwise the two sides are kept separate.
struct PairKernel {
    double lambda;
    cplx sym;        // (f_+ + conj(f_-)) / 2
    cplx asym_pos;   // f_+ - sym
    cplx asym_neg;   // f_- - conj(sym)
    bool symmetric;
};

std::vector<PairKernel> pair_kernels(const FourierModel& model, const SpectrumDecomposition& d) {
    std::vector<PairKernel> ks;
    ks.reserve(d.paired.size());
    for (const auto& [ip, in] : d.paired) {
        PairKernel k;
        k.lambda = model.term(ip).lambda;
        const cplx fp = model.term(ip).coeff, fn = model.term(in).coeff;
        k.sym = 0.5 * (fp + std::conj(fn));
        k.asym_pos = fp - k.sym;
        k.asym_neg = fn - std::conj(k.sym);
        const double scale = std::abs(fp) + std::abs(fn);
        k.symmetric = std::abs(fn - std::conj(fp)) <= 1e-12 * scale;
        ks.push_back(k);
    }
    return ks;
}

cplx eval_one(const FourierModel& model, const SpectrumDecomposition& d,
              const std::vector<PairKernel>& ks, std::span<const cplx> pair_phases,
              std::span<const cplx> residue_phases, double t) {
    CascadeAccumulator<cplx> acc;
    for (std::size_t k = 0; k < ks.size(); ++k) {
        const cplx e = std::polar(1.0, ks[k].lambda * t);
        const cplx u = pair_phases[k];
        if (ks[k].symmetric) {
            acc.add(cplx(2.0 * (u * ks[k].sym * e).real(), 0.0));
        } else {
            acc.add(cplx(2.0 * (u * ks[k].sym * e).real(), 0.0));
            acc.add(u * ks[k].asym_pos * e + std::conj(u) * ks[k].asym_neg * std::conj(e));
        }
    }
    for (std::size_t r = 0; r < d.residue.size(); ++r) {
        const auto& term = model.term(d.residue[r]);
        acc.add(residue_phases[r] * term.coeff * std::polar(1.0, term.lambda * t));
    }
    if (d.zero_index) acc.add(model.term(*d.zero_index).coeff);
    return acc.total();
}

}  // namespace

PhaseAssignment sample_phases(const SpectrumDecomposition& decomposition, std::uint64_t seed,
                              std::uint64_t replica) {
    PhaseAssignment p;
    p.decomposition = decomposition;
    p.seed = seed;
    p.replica = replica;
    const std::size_t np = decomposition.paired.size();
    p.pair_phases.reserve(np);
    p.residue_phases.reserve(decomposition.residue.size());
    for (std::size_t k = 0; k < np; ++k) p.pair_phases.push_back(rng::circle_phase(seed, replica, k));
    for (std::size_t k = 0; k < decomposition.residue.size(); ++k)
        p.residue_phases.push_back(rng::circle_phase(seed, replica, np + k));
    return p;
}

PhaseAssignment unit_phases(const SpectrumDecomposition& decomposition) {
    PhaseAssignment p;
    p.decomposition = decomposition;
    p.pair_phases.assign(decomposition.paired.size(), cplx{1.0, 0.0});
    p.residue_phases.assign(decomposition.residue.size(), cplx{1.0, 0.0});
    return p;
}

std::vector<cplx> per_term_phases(const FourierModel& model, const PhaseAssignment& phases) {
    check_alignment(model, phases);
    std::vector<cplx> out(model.size(), cplx{1.0, 0.0});
    const auto& d = phases.decomposition;
    for (std::size_t k = 0; k < d.paired.size(); ++k) {
        out[d.paired[k].first] = phases.pair_phases[k];
        out[d.paired[k].second] = std::conj(phases.pair_phases[k]);
    }
    for (std::size_t k = 0; k < d.residue.size(); ++k)
        out[d.residue[k]] = phases.residue_phases[k];
    return out;
}

PathSample evaluate(const FourierModel& model, const PhaseAssignment& phases,
                    std::span<const double> grid) {
    check_alignment(model, phases);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("evaluate: grid must be strictly increasing");
    const auto ks = pair_kernels(model, phases.decomposition);
    PathSample out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());
    for (double t : grid)
        out.values.push_back(eval_one(model, phases.decomposition, ks, phases.pair_phases,
                                      phases.residue_phases, t));
    out.model_label = model.label();
    out.seed = phases.seed;
    out.replica = phases.replica;
    out.truncation = "N=" + std::to_string(model.size());
    return out;
}

cplx exact_covariance(const FourierModel& model, double s) {
    CascadeAccumulator<cplx> acc;
    for (const auto& t : model.terms()) acc.add(std::norm(t.coeff) * std::polar(1.0, t.lambda * s));
    return acc.total();
}

cplx exact_pseudocovariance(const FourierModel& model, double s) {
    const auto d = spectra::decompose(model);
    CascadeAccumulator<cplx> acc;
    for (const auto& [ip, in] : d.paired)
        acc.add(model.term(ip).coeff * model.term(in).coeff *
                std::polar(1.0, model.term(ip).lambda * s));
    return acc.total();
}

double exact_increment_second_moment(const FourierModel& model, double t) {
    CascadeAccumulator<double> acc;
    for (const auto& term : model.terms())
        acc.add(std::norm(term.coeff) * 2.0 * (1.0 - std::cos(term.lambda * t)));
    return acc.total();
}

std::vector<cplx> evaluate_ensemble(const FourierModel& model,
                                    const SpectrumDecomposition& decomposition,
                                    std::span<const double> grid, std::uint64_t seed,
                                    std::size_t n_replicas, int threads) {
    const auto ks = pair_kernels(model, decomposition);
    const std::size_t np = ks.size(), nr = decomposition.residue.size(), g = grid.size();

    // e^{i lambda t_j} does not depend on the replica; precompute per (term, point).
    std::vector<cplx> pair_exp(np * g), res_term(nr * g);
    for (std::size_t k = 0; k < np; ++k)
        for (std::size_t j = 0; j < g; ++j) pair_exp[k * g + j] = std::polar(1.0, ks[k].lambda * grid[j]);
    for (std::size_t r = 0; r < nr; ++r) {
        const auto& term = model.term(decomposition.residue[r]);
        for (std::size_t j = 0; j < g; ++j)
            res_term[r * g + j] = term.coeff * std::polar(1.0, term.lambda * grid[j]);
    }
    const cplx zero_part =
        decomposition.zero_index ? model.term(*decomposition.zero_index).coeff : cplx{};

    std::vector<cplx> out(n_replicas * g);
    parallel_for(n_replicas, threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<CascadeAccumulator<cplx>> acc(g);
        for (std::size_t rep = lo; rep < hi; ++rep) {
            for (auto& a : acc) a = {};
            for (std::size_t k = 0; k < np; ++k) {
                const cplx u = rng::circle_phase(seed, rep, k);
                const cplx us = u * ks[k].sym;
                if (ks[k].symmetric) {
                    for (std::size_t j = 0; j < g; ++j)
                        acc[j].add(cplx(2.0 * (us * pair_exp[k * g + j]).real(), 0.0));
                } else {
                    const cplx up = u * ks[k].asym_pos, un = std::conj(u) * ks[k].asym_neg;
                    for (std::size_t j = 0; j < g; ++j) {
                        const cplx e = pair_exp[k * g + j];
                        acc[j].add(cplx(2.0 * (us * e).real(), 0.0));
                        acc[j].add(up * e + un * std::conj(e));
                    }
                }
            }
            for (std::size_t r = 0; r < nr; ++r) {
                const cplx u = rng::circle_phase(seed, rep, np + r);
                for (std::size_t j = 0; j < g; ++j) acc[j].add(u * res_term[r * g + j]);
            }
            for (std::size_t j = 0; j < g; ++j) out[rep * g + j] = acc[j].total() + zero_part;
        }
    });
    return out;
}

std::string path_sample_csv(const PathSample& path) {
    std::ostringstream out;
    out << "# model: " << path.model_label << "\n";
    out << "# seed: " << path.seed << "\n";
    out << "# replica: " << path.replica << "\n";
    out << "# truncation: " << path.truncation << "\n";
    out << "t,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < path.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", path.grid[i],
                      path.values[i].real(), path.values[i].imag());
        out << buf;
    }
    return out.str();
}

PathSample parse_path_sample_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    PathSample p;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto grab = [&](const char* key) -> bool {
                const std::string k = std::string("# ") + key + ": ";
                if (line.rfind(k, 0) == 0) return true;
                return false;
            };
            if (grab("model")) p.model_label = line.substr(9);
            else if (grab("seed")) p.seed = std::stoull(line.substr(8));
            else if (grab("replica")) p.replica = std::stoull(line.substr(11));
            else if (grab("truncation")) p.truncation = line.substr(14);
            continue;
        }
        if (!header_seen) {
            if (line != "t,re,im") throw std::runtime_error("path csv: bad header");
            header_seen = true;
            continue;
        }
        double t, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &re, &im) != 3)
            throw std::runtime_error("path csv: bad row: " + line);
        p.grid.push_back(t);
        p.values.emplace_back(re, im);
    }
    if (!header_seen) throw std::runtime_error("path csv: empty");
    return p;
}

}  // namespace apstat::sampler
