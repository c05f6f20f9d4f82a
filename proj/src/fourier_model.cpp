#include "apstat/fourier_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apstat::spectra {

FourierModel::FourierModel(std::vector<Term> terms, std::string label)
    : label_(std::move(label)) {
    std::erase_if(terms, [](const Term& t) { return t.coeff == cplx{0.0, 0.0}; });
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.lambda < b.lambda; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!std::isfinite(terms[i].lambda) || !std::isfinite(terms[i].coeff.real()) ||
            !std::isfinite(terms[i].coeff.imag()))
            throw std::invalid_argument("FourierModel: non-finite term");
        if (i > 0 && !(terms[i - 1].lambda < terms[i].lambda))
            throw std::invalid_argument("FourierModel: duplicate frequency " +
                                        std::to_string(terms[i].lambda));
    }
    terms_ = std::move(terms);
}

double FourierModel::max_abs_frequency() const {
    double m = 0.0;
    for (const Term& t : terms_) m = std::max(m, std::abs(t.lambda));
    return m;
}

cplx FourierModel::operator()(double t) const {
    CascadeAccumulator<cplx> acc;
    for (const Term& term : terms_) acc.add(term.coeff * std::polar(1.0, term.lambda * t));
    return acc.total();
}

double SpectralMeasure::total_mass() const {
    CascadeAccumulator<double> acc;
    for (const Atom& a : atoms) acc.add(a.mass);
    return acc.total();
}

double parseval_norm(const FourierModel& model) {
    CascadeAccumulator<double> acc;
    for (const Term& t : model.terms()) acc.add(std::norm(t.coeff));
    return std::sqrt(acc.total());
}

namespace {

// Trapezoid mean of g over [-L, L] where g is evaluated through per-term
// incremental rotations: rot_k = e^{i lambda_k h}. Rotations are re-synced
// from std::polar every 4096 steps to cap drift.
template <typename PerPoint>
void windowed_scan(const FourierModel& model, double L, double step, PerPoint&& per_point) {
    if (!(L > 0.0)) throw std::invalid_argument("quadrature: L must be positive");
    if (!(step > 0.0) || step >= L) throw std::invalid_argument("quadrature: invalid step");
    const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * L / step));
    const double h = 2.0 * L / static_cast<double>(n);
    const std::size_t m = model.size();
    std::vector<cplx> cur(m), rot(m);
    for (std::size_t k = 0; k < m; ++k) {
        cur[k] = std::polar(1.0, -model.term(k).lambda * L);
        rot[k] = std::polar(1.0, model.term(k).lambda * h);
    }
    for (std::size_t j = 0; j <= n; ++j) {
        cplx f{};
        for (std::size_t k = 0; k < m; ++k) f += model.term(k).coeff * cur[k];
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        per_point(j, -L + h * static_cast<double>(j), f, w * h / (2.0 * L));
        if ((j & 0xFFF) == 0xFFF) {
            const double t = -L + h * static_cast<double>(j + 1);
            for (std::size_t k = 0; k < m; ++k) cur[k] = std::polar(1.0, model.term(k).lambda * t);
        } else {
            for (std::size_t k = 0; k < m; ++k) cur[k] *= rot[k];
        }
    }
}

}  // namespace

double marcinkiewicz_seminorm_numeric(const FourierModel& model, double L, double quadrature_step) {
    CascadeAccumulator<double> acc;
    windowed_scan(model, L, quadrature_step,
                  [&](std::size_t, double, cplx f, double w) { acc.add(std::norm(f) * w); });
    return std::sqrt(acc.total());
}

cplx estimate_fourier_coefficient(const FourierModel& model, double a, double L,
                                  double quadrature_step) {
    CascadeAccumulator<cplx> acc;
    windowed_scan(model, L, quadrature_step, [&](std::size_t, double t, cplx f, double w) {
        acc.add(f * std::polar(1.0, -a * t) * w);
    });
    return acc.total();
}

cplx inner_product(const FourierModel& a, const FourierModel& b) {
    // <f,g>_2 = sum over shared frequencies of F_f(lambda) conj(F_g(lambda)).
    CascadeAccumulator<cplx> acc;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.term(i).lambda < b.term(j).lambda) {
            ++i;
        } else if (b.term(j).lambda < a.term(i).lambda) {
            ++j;
        } else {
            acc.add(a.term(i).coeff * std::conj(b.term(j).coeff));
            ++i;
            ++j;
        }
    }
    return acc.total();
}

FourierModel translate(const FourierModel& model, double v) {
    // F_{f(v + .)}(lambda) = e^{i lambda v} F_f(lambda); spectrum unchanged.
    std::vector<Term> terms = model.terms();
    for (Term& t : terms) t.coeff *= std::polar(1.0, t.lambda * v);
    return FourierModel(std::move(terms), model.label());
}

SpectrumDecomposition decompose(const FourierModel& model, double pair_tolerance) {
    SpectrumDecomposition d;
    const auto& terms = model.terms();
    const std::size_t n = terms.size();
    std::vector<bool> used(n, false);
    auto tol_at = [&](double lambda) { return pair_tolerance * std::max(1.0, std::abs(lambda)); };

    for (std::size_t i = 0; i < n; ++i) {
        if (terms[i].lambda == 0.0) {
            d.zero_index = i;
            used[i] = true;
            break;
        }
    }
    // Greedy exact-negative matching, smallest positive frequency first.
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i] || terms[i].lambda <= 0.0) continue;
        const double target = -terms[i].lambda;
        const double tol = tol_at(terms[i].lambda);
        std::size_t found = n;
        for (std::size_t j = 0; j < n && terms[j].lambda < 0.0; ++j) {
            if (used[j]) continue;
            if (std::abs(terms[j].lambda - target) <= tol) {
                if (found != n)
                    throw std::invalid_argument(
                        "decompose: ambiguous pair matching near lambda = " +
                        std::to_string(terms[i].lambda));
                found = j;
            }
        }
        if (found != n) {
            d.paired.emplace_back(i, found);
            used[i] = used[found] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) d.residue.push_back(i);
    return d;
}

SpectralMeasure spectral_measure(const FourierModel& model) {
    if (model.empty()) throw std::invalid_argument("spectral_measure: empty model");
    const double norm2 = parseval_norm(model) * parseval_norm(model);
    SpectralMeasure m;
    m.atoms.reserve(model.size());
    for (const Term& t : model.terms()) m.atoms.push_back({t.lambda, std::norm(t.coeff) / norm2});
    return m;
}

double truncated_second_moment(const SpectralMeasure& measure, double x) {
    if (x < 0.0) throw std::invalid_argument("truncated_second_moment: x must be >= 0");
    CascadeAccumulator<double> acc;
    for (const auto& a : measure.atoms)
        if (std::abs(a.lambda) <= x) acc.add(a.lambda * a.lambda * a.mass);
    return acc.total();
}

double tail_mass(const SpectralMeasure& measure, double x) {
    if (x < 0.0) throw std::invalid_argument("tail_mass: x must be >= 0");
    CascadeAccumulator<double> acc;
    for (const auto& a : measure.atoms)
        if (std::abs(a.lambda) > x) acc.add(a.mass);
    return acc.total();
}

ScalingFit fit_scaling_exponents(const SpectralMeasure& measure, std::span<const double> x_grid) {
    if (x_grid.size() < 4) throw std::invalid_argument("fit_scaling_exponents: need >= 4 grid points");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (!(x_grid[i] > x_grid[i - 1]))
            throw std::invalid_argument("fit_scaling_exponents: grid must be increasing");

    std::vector<double> lx, lt, lrx, lr;
    for (double x : x_grid) {
        const double t = truncated_second_moment(measure, x);
        if (t > 0.0) {
            lx.push_back(std::log(x));
            lt.push_back(std::log(t));
        }
        const double r = tail_mass(measure, x);
        if (r > 0.0) {
            lrx.push_back(std::log(x));
            lr.push_back(std::log(r));
        }
    }
    if (lt.size() < 2 ||
        *std::max_element(lt.begin(), lt.end()) - *std::min_element(lt.begin(), lt.end()) < 1e-12)
        throw std::invalid_argument("fit_scaling_exponents: degenerate grid (T(x) constant)");

    ScalingFit fit;
    const LinearFit ft = linear_fit(lx, lt);
    fit.alpha_hat = fit.theta_hat = ft.slope;
    fit.t_residual_rms = ft.residual_rms;
    if (lr.size() >= 2) {
        const LinearFit fr = linear_fit(lrx, lr);
        fit.beta_hat = -fr.slope;
        fit.r_residual_rms = fr.residual_rms;
        fit.n_tail_points = lr.size();
    }
    return fit;
}

double default_quadrature_step(const FourierModel& model) {
    const double m = model.max_abs_frequency();
    return m > 0.0 ? std::min(0.01, 0.1 / m) : 0.01;
}

std::string to_text(const FourierModel& model) {
    std::ostringstream out;
    out << "# apstat-fourier v1\n";
    if (!model.label().empty()) out << "# label: " << model.label() << "\n";
    char buf[96];
    for (const Term& t : model.terms()) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", t.lambda, t.coeff.real(),
                      t.coeff.imag());
        out << buf;
    }
    return out.str();
}

FourierModel from_text(const std::string& text, const std::string& fallback_label) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# apstat-fourier v1", 0) != 0)
        throw std::runtime_error("model text: missing '# apstat-fourier v1' header");
    std::string label = fallback_label;
    std::vector<Term> terms;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# label: ", 0) == 0) label = line.substr(9);
            continue;
        }
        Term t;
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lg %lg %lg", &t.lambda, &re, &im) != 3)
            throw std::runtime_error("model text: unparsable line " + std::to_string(lineno));
        t.coeff = {re, im};
        if (!terms.empty() && !(t.lambda > terms.back().lambda))
            throw std::runtime_error("model text: frequencies not increasing at line " +
                                     std::to_string(lineno));
        terms.push_back(t);
    }
    return FourierModel(std::move(terms), label);
}

void save_text(const FourierModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_text(model);
}

FourierModel load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
}

}  // namespace apstat::spectra
