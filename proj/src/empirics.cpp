#include "apstat/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "apstat/rng.hpp"
#include "apstat/tangent.hpp"

namespace apstat::empirics {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample set");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

TestReport make_report(std::string test, double statistic, double threshold, long long n,
                       std::string description) {
    TestReport r;
    r.test = std::move(test);
    r.statistic = statistic;
    r.threshold = threshold;
    r.n = n;
    r.verdict = statistic <= threshold;
    r.description = std::move(description);
    return r;
}

TestReport make_lower_bound_report(std::string test, double achieved, double required,
                                   long long n, std::string description) {
    std::ostringstream d;
    d << "achieved=" << achieved << " required>=" << required;
    if (!description.empty()) d << "; " << description;
    return make_report(std::move(test), required - achieved, 0.0, n, d.str());
}

std::string report_csv_header() { return "test,statistic,threshold,n,verdict"; }

std::string report_csv_row(const TestReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,%lld,%s", r.statistic, r.threshold, r.n,
                  r.verdict ? "pass" : "fail");
    return r.test + buf;
}

double ks_critical(double alpha) {
    if (alpha == 0.10) return 1.224;
    if (alpha == 0.05) return 1.358;
    if (alpha == 0.01) return 1.628;
    throw std::invalid_argument("ks_critical: tabulated alphas are 0.1, 0.05, 0.01");
}

TestReport ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                         std::string name) {
    const auto& xa = a.sorted();
    const auto& xb = b.sorted();
    const double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    // Tied values must advance both ECDFs together before the gap is taken.
    while (i < xa.size() && j < xb.size()) {
        const double x = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] <= x) ++i;
        while (j < xb.size() && xb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double threshold = ks_critical(0.01) * std::sqrt((na + nb) / (na * nb));
    std::ostringstream desc;
    desc << "two-sample KS, n=" << xa.size() << " m=" << xb.size() << ", alpha=0.01";
    return make_report(std::move(name), d, threshold, static_cast<long long>(xa.size() + xb.size()),
                       desc.str());
}

TestReport ks_gaussian_fit(std::span<const double> samples, std::string name) {
    if (samples.size() < 8) throw std::invalid_argument("ks_gaussian_fit: too few samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double mu = mean(x);
    const double sd = std::sqrt(variance(x));
    if (!(sd > 0.0)) throw std::invalid_argument("ks_gaussian_fit: degenerate sample");
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf((x[i] - mu) / sd);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double threshold = ks_critical(0.01) / std::sqrt(n);
    std::ostringstream desc;
    desc << "KS vs fitted Gaussian(mu=" << mu << ", sd=" << sd << "), alpha=0.01";
    return make_report(std::move(name), d, threshold, static_cast<long long>(x.size()), desc.str());
}

std::vector<std::vector<cplx>> sample_translated(const FourierModel& model, double L,
                                                 std::span<const double> t_grid, std::size_t n,
                                                 std::uint64_t seed, Side side) {
    if (!(L > 0.0)) throw std::invalid_argument("sample_translated: L must be positive");
    if (n < 1) throw std::invalid_argument("sample_translated: n must be >= 1");
    std::vector<std::vector<cplx>> rows(n);
    parallel_for(n, 0, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = rng::uniform01(seed, i, 0, rng::Tag::translate);
            const double v = side == Side::two_sided ? L * (2.0 * u - 1.0) : L * u;
            rows[i].reserve(t_grid.size());
            for (double t : t_grid) rows[i].push_back(model(v + t));
        }
    });
    return rows;
}

TestReport ks_component(std::vector<double> a, std::vector<double> b, std::string name) {
    const auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    if (spread(a) < 1e-10 && spread(b) < 1e-10) {
        const double gap = std::abs(a.front() - b.front());
        return make_report(std::move(name), gap, 1e-9,
                           static_cast<long long>(a.size() + b.size()), "degenerate marginals");
    }
    return ks_two_sample(EmpiricalDistribution(std::move(a)), EmpiricalDistribution(std::move(b)),
                         std::move(name));
}

namespace {

std::vector<double> re_parts(const std::vector<cplx>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
}

std::vector<double> im_parts(const std::vector<cplx>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].imag();
    return out;
}

}  // namespace

std::vector<TestReport> fidi_convergence_test(const FourierModel& model,
                                              std::span<const double> L_schedule,
                                              std::span<const double> t_points, std::size_t n,
                                              std::uint64_t seed) {
    if (t_points.empty() || t_points.size() > 6)
        throw std::invalid_argument("fidi_convergence_test: need 1..6 time points");
    const std::size_t m = t_points.size();

    // Panel: unit vectors, all-ones, one seeded random complex vector.
    std::vector<std::pair<std::string, std::vector<cplx>>> panel;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<cplx> alpha(m, cplx{0.0, 0.0});
        alpha[i] = 1.0;
        panel.emplace_back("e" + std::to_string(i + 1), std::move(alpha));
    }
    if (m > 1) panel.emplace_back("ones", std::vector<cplx>(m, cplx{1.0, 0.0}));
    {
        std::vector<cplx> alpha(m);
        for (std::size_t i = 0; i < m; ++i)
            alpha[i] = cplx{2.0 * rng::uniform01(seed, 99, 2 * i, rng::Tag::misc) - 1.0,
                            2.0 * rng::uniform01(seed, 99, 2 * i + 1, rng::Tag::misc) - 1.0};
        panel.emplace_back("rand", std::move(alpha));
    }

    // Reference ensemble of the limit process at the fixed time points.
    const auto d = spectra::decompose(model);
    const auto ref = sampler::evaluate_ensemble(model, d, t_points, seed + 1, n);

    std::vector<TestReport> reports;
    for (std::size_t li = 0; li < L_schedule.size(); ++li) {
        const double L = L_schedule[li];
        const auto rows = sample_translated(model, L, t_points, n, seed + 2 + li);
        for (const auto& [aname, alpha] : panel) {
            std::vector<cplx> lhs(n), rhs(n);
            for (std::size_t i = 0; i < n; ++i) {
                cplx sl{}, sr{};
                for (std::size_t j = 0; j < m; ++j) {
                    sl += alpha[j] * rows[i][j];
                    sr += alpha[j] * ref[i * m + j];
                }
                lhs[i] = sl;
                rhs[i] = sr;
            }
            char name[128];
            std::snprintf(name, sizeof(name), "fidi L=%g alpha=%s", L, aname.c_str());
            const TestReport rre = ks_component(re_parts(lhs), re_parts(rhs), "re");
            const TestReport rim = ks_component(im_parts(lhs), im_parts(rhs), "im");
            TestReport combined = make_report(
                name, std::max(rre.statistic, rim.statistic), std::max(rre.threshold, rim.threshold),
                static_cast<long long>(n), "max of Re/Im KS statistics");
            reports.push_back(std::move(combined));
        }
    }
    return reports;
}

double phi_apply(const std::string& id, cplx z) {
    if (id == "one") return 1.0;
    if (id == "re") return z.real();
    if (id == "im") return z.imag();
    if (id == "mod") return std::abs(z);
    if (id == "mod2") return std::norm(z);
    if (id == "re_clip1") return std::clamp(z.real(), -1.0, 1.0);
    if (id == "mod2_clip4") return std::min(std::norm(z), 4.0);
    if (id == "sin_re") return std::sin(z.real());
    throw std::invalid_argument("phi_apply: unknown test function '" + id + "'");
}

const std::vector<std::string>& phi_registry() {
    static const std::vector<std::string> reg = {"one",      "re",        "im",     "mod",
                                                 "mod2",     "re_clip1",  "mod2_clip4", "sin_re"};
    return reg;
}

double ergodic_average(const FourierModel& model, const sampler::PhaseAssignment& phases,
                       double T, double step, const std::string& phi) {
    if (!(T > 0.0) || !(step > 0.0) || step >= T)
        throw std::invalid_argument("ergodic_average: need 0 < step < T");
    phi_apply(phi, cplx{});  // validate the id before computing
    const std::size_t n = static_cast<std::size_t>(std::ceil(T / step));
    const double h = T / static_cast<double>(n);
    std::vector<double> grid(n + 1);
    for (std::size_t j = 0; j <= n; ++j) grid[j] = h * static_cast<double>(j);
    const auto path = sampler::evaluate(model, phases, grid);
    CascadeAccumulator<double> acc;
    for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc.add(w * h * phi_apply(phi, path.values[j]));
    }
    return acc.total() / T;
}

double time_average_sd_re(const FourierModel& model, double T) {
    // (1/T) int_0^T Re M = Re sum_nu d_nu g(nu) with g(nu) = (e^{i nu T}-1)/(i nu T).
    // A pair contributes Re(u w) with w = f_+ g(lambda) + conj(f_- g(-lambda)),
    // a residue term Re(u f g); each has variance |.|^2 / 2 over the uniform
    // phase, and the zero frequency is deterministic.
    const auto d = spectra::decompose(model);
    auto g = [T](double nu) -> cplx {
        const double x = nu * T;
        if (std::abs(x) < 1e-9) return {1.0, 0.0};
        return (std::polar(1.0, x) - cplx{1.0, 0.0}) / (cplx{0.0, 1.0} * x);
    };
    CascadeAccumulator<double> acc;
    for (const auto& [ip, in] : d.paired) {
        const cplx w = model.term(ip).coeff * g(model.term(ip).lambda) +
                       std::conj(model.term(in).coeff * g(model.term(in).lambda));
        acc.add(0.5 * std::norm(w));
    }
    for (std::size_t r : d.residue) {
        const auto& term = model.term(r);
        acc.add(0.5 * std::norm(term.coeff * g(term.lambda)));
    }
    return std::sqrt(acc.total());
}

TestReport mixing_probe(const FourierModel& model, std::span<const double> lag_grid,
                        double required_level) {
    if (model.empty()) throw std::invalid_argument("mixing_probe: empty model");
    if (lag_grid.empty()) throw std::invalid_argument("mixing_probe: empty lag grid");
    double max_atom = 0.0;
    for (const auto& t : model.terms()) max_atom = std::max(max_atom, std::norm(t.coeff));
    if (required_level < 0.0) required_level = 0.5 * max_atom;
    double sup = 0.0;
    for (double s : lag_grid) sup = std::max(sup, std::abs(sampler::exact_covariance(model, s)));
    std::ostringstream desc;
    desc << "sup|K| over " << lag_grid.size() << " lags in [" << lag_grid.front() << ", "
         << lag_grid.back() << "]";
    return make_lower_bound_report("mixing-probe", sup, required_level,
                                   static_cast<long long>(lag_grid.size()), desc.str());
}

TestReport equidistribution_character_test(const FourierModel& model, std::span<const int> k,
                                           double t, double L, std::size_t n,
                                           std::uint64_t seed) {
    const auto d = spectra::decompose(model);
    const std::size_t dim = d.paired.size() + d.residue.size();
    if (k.size() != dim)
        throw std::invalid_argument("equidistribution_character_test: k must index C u R");

    // sum over C u R of lambda k_lambda
    CascadeAccumulator<double> lk;
    for (std::size_t i = 0; i < d.paired.size(); ++i)
        lk.add(model.term(d.paired[i].first).lambda * k[i]);
    for (std::size_t i = 0; i < d.residue.size(); ++i)
        lk.add(model.term(d.residue[i]).lambda * k[d.paired.size() + i]);
    const double sum_lk = lk.total();

    // Coupled draw: V_{-L,L} = L V_{-1,1}, so the character mean is the mean
    // of e^{i V1 (t + L sum_lk)}.
    std::vector<cplx> vals(n);
    parallel_for(n, 0, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double v1 = 2.0 * rng::uniform01(seed, i, 1, rng::Tag::translate) - 1.0;
            vals[i] = std::polar(1.0, v1 * (t + L * sum_lk));
        }
    });
    const cplx mean_val = cascade_sum(vals) / static_cast<double>(n);
    const double g = sum_lk == 0.0 ? 1.0 : 0.0;
    const cplx target = g * sinc(t);
    const double threshold = 4.0 / std::sqrt(static_cast<double>(n));
    std::ostringstream desc;
    desc << "sum lambda k = " << sum_lk << ", target " << target.real() << ", mean ("
         << mean_val.real() << ", " << mean_val.imag() << ")";
    return make_report("equidistribution", std::abs(mean_val - target), threshold,
                       static_cast<long long>(n), desc.str());
}

namespace {

// Finite-character test functions on the n-torus: value plus the character
// list (m-vector, coefficient) that powers both the exact integral and the
// orbit-average error bound 2 sum |c_m| / (T |<m, lambda>|).
struct TorusFunction {
    std::vector<std::pair<std::vector<int>, cplx>> characters;  // excludes m = 0
    cplx constant;                                              // the m = 0 coefficient

    cplx eval(std::span<const cplx> z) const {
        cplx s = constant;
        for (const auto& [m, c] : characters) {
            cplx prod{1.0, 0.0};
            for (std::size_t j = 0; j < m.size(); ++j) {
                for (int p = 0; p < std::abs(m[j]); ++p)
                    prod *= (m[j] > 0 ? z[j] : std::conj(z[j]));
            }
            s += c * prod;
        }
        return s;
    }
};

TorusFunction torus_function(const std::string& id, std::size_t dim) {
    auto mv = [&](std::initializer_list<int> v) {
        std::vector<int> m(v);
        m.resize(dim, 0);
        return m;
    };
    TorusFunction f;
    if (id == "one") {
        f.constant = 1.0;
    } else if (id == "re1") {
        f.characters = {{mv({1}), 0.5}, {mv({-1}), 0.5}};
    } else if (id == "im1") {
        f.characters = {{mv({1}), cplx{0.0, -0.5}}, {mv({-1}), cplx{0.0, 0.5}}};
    } else if (id == "re12bar") {
        if (dim < 2) throw std::invalid_argument("kronecker_weyl_probe: re12bar needs >= 2 dims");
        f.characters = {{mv({1, -1}), 0.5}, {mv({-1, 1}), 0.5}};
    } else if (id == "re_prod12") {
        if (dim < 2) throw std::invalid_argument("kronecker_weyl_probe: re_prod12 needs >= 2 dims");
        f.characters = {{mv({1, 1}), 0.5}, {mv({-1, -1}), 0.5}};
    } else {
        throw std::invalid_argument("kronecker_weyl_probe: unknown test function '" + id + "'");
    }
    return f;
}

}  // namespace

TestReport kronecker_weyl_probe(std::span<const double> frequencies, const std::string& h,
                                double T, std::uint64_t seed) {
    const std::size_t dim = frequencies.size();
    if (dim == 0 || dim > 4) throw std::invalid_argument("kronecker_weyl_probe: 1..4 frequencies");
    if (!(T > 0.0)) throw std::invalid_argument("kronecker_weyl_probe: T must be positive");
    const TorusFunction f = torus_function(h, dim);

    std::vector<cplx> u(dim);
    for (std::size_t j = 0; j < dim; ++j) u[j] = rng::circle_phase(seed, 0, j);

    // Orbit average by trapezoid with a step resolving the fastest character.
    double max_freq = 0.0;
    for (const auto& [m, c] : f.characters) {
        double w = 0.0;
        for (std::size_t j = 0; j < dim; ++j) w += m[j] * frequencies[j];
        max_freq = std::max(max_freq, std::abs(w));
    }
    const double step = max_freq > 0.0 ? std::min(0.05, 0.2 / max_freq) : 0.05;
    const std::size_t n = static_cast<std::size_t>(std::ceil(T / step));
    const double hh = T / static_cast<double>(n);
    CascadeAccumulator<cplx> acc;
    std::vector<cplx> z(dim), rot(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        z[j] = u[j];
        rot[j] = std::polar(1.0, frequencies[j] * hh);
    }
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc.add(w * hh * f.eval(z));
        if ((i & 0xFFF) == 0xFFF) {
            const double t = hh * static_cast<double>(i + 1);
            for (std::size_t j = 0; j < dim; ++j)
                z[j] = u[j] * std::polar(1.0, frequencies[j] * t);
        } else {
            for (std::size_t j = 0; j < dim; ++j) z[j] *= rot[j];
        }
    }
    const cplx orbit = acc.total() / T;

    // Product trapezoid quadrature over the torus; exact for characters with
    // |m_j| below the per-dimension node count.
    const std::size_t nodes = 16;
    std::vector<cplx> ring(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        ring[i] = std::polar(1.0, 2.0 * kPi * static_cast<double>(i) / nodes);
    std::vector<std::size_t> idx(dim, 0);
    CascadeAccumulator<cplx> quad;
    std::vector<cplx> point(dim);
    while (true) {
        for (std::size_t j = 0; j < dim; ++j) point[j] = ring[idx[j]];
        quad.add(f.eval(point));
        std::size_t j = 0;
        while (j < dim && ++idx[j] == nodes) idx[j++] = 0;
        if (j == dim) break;
    }
    const cplx integral = quad.total() / std::pow(static_cast<double>(nodes), dim);

    // Character-wise error bound for the orbit average plus quadrature slack.
    double tol = 1e-6;
    for (const auto& [m, c] : f.characters) {
        double w = 0.0;
        for (std::size_t j = 0; j < dim; ++j) w += m[j] * frequencies[j];
        if (w == 0.0) continue;
        tol += 2.0 * std::abs(c) / (T * std::abs(w));
    }
    tol *= 1.5;
    std::ostringstream desc;
    desc << "orbit (" << orbit.real() << ", " << orbit.imag() << "), torus integral ("
         << integral.real() << ", " << integral.imag() << "), T=" << T;
    return make_report("kronecker-weyl " + h, std::abs(orbit - integral), tol,
                       static_cast<long long>(n), desc.str());
}

HolderDiagnostic holder_diagnostic_detail(const FourierModel& model,
                                          std::span<const double> dt_grid, std::uint64_t seed) {
    HolderDiagnostic out;

    // (i) partial sums of sum |f|^2 log_+^{1+eps}|lambda|, eps = 0.1, at the
    // half and full truncations (frequencies ranked by modulus).
    std::vector<std::size_t> order(model.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(model.term(a).lambda) < std::abs(model.term(b).lambda);
    });
    CascadeAccumulator<double> hunt;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& term = model.term(order[r]);
        const double lg = std::max(0.0, std::log(std::abs(term.lambda)));
        hunt.add(std::norm(term.coeff) * std::pow(lg, 1.1));
        if (r + 1 == order.size() / 2) out.hunt_partial_half = hunt.total();
    }
    out.hunt_partial_full = hunt.total();

    // (ii) log-log slope of the exact increment second moment.
    std::vector<double> lx, ly;
    for (double dt : dt_grid) {
        if (!(dt > 0.0 && dt <= 1.0))
            throw std::invalid_argument("holder_diagnostic: dt grid must lie in (0, 1]");
        const double m2 = sampler::exact_increment_second_moment(model, dt);
        if (m2 > 0.0) {
            lx.push_back(std::log(dt));
            ly.push_back(std::log(m2));
        }
    }
    out.second_moment_slope = linear_fit(lx, ly).slope;

    // (iii) pathwise max-increment scaling on simulated paths.
    const auto d = spectra::decompose(model);
    const std::size_t n_paths = 48, m = 257;
    const double span = 4.0;
    std::vector<double> grid(m);
    for (std::size_t j = 0; j < m; ++j) grid[j] = span * static_cast<double>(j) / (m - 1);
    const auto ens = sampler::evaluate_ensemble(model, d, grid, seed, n_paths);
    std::vector<double> llag, lmax;
    for (std::size_t lag = 1; lag <= (m - 1) / 8; lag *= 2) {
        CascadeAccumulator<double> acc;
        for (std::size_t p = 0; p < n_paths; ++p) {
            double mx = 0.0;
            for (std::size_t j = 0; j + lag < m; ++j)
                mx = std::max(mx, std::abs(ens[p * m + j + lag] - ens[p * m + j]));
            acc.add(std::log(std::max(mx, 1e-300)));
        }
        llag.push_back(std::log(span * static_cast<double>(lag) / (m - 1)));
        lmax.push_back(acc.total() / n_paths);
    }
    out.pathwise_exponent = linear_fit(llag, lmax).slope;
    return out;
}

TestReport holder_diagnostic(const FourierModel& model, std::span<const double> exponent_grid,
                             std::span<const double> dt_grid) {
    const HolderDiagnostic d = holder_diagnostic_detail(model, dt_grid);
    std::ostringstream desc;
    desc << "hunt partial sums (half/full) " << d.hunt_partial_half << "/" << d.hunt_partial_full
         << ", second-moment slope " << d.second_moment_slope << ", pathwise exponent "
         << d.pathwise_exponent << ", candidate exponents";
    for (double g : exponent_grid) desc << " " << g;
    // The slope of E|M(t) - M(0)|^2 must land in (0, 2]: 2 is the band-limited
    // Lipschitz regime, values near min(2 - alpha, beta) otherwise.
    TestReport r = make_report("holder-diagnostic", d.second_moment_slope, 2.0 + 1e-9,
                               static_cast<long long>(dt_grid.size()), desc.str());
    r.verdict = r.verdict && d.second_moment_slope > 0.0;
    return r;
}

bool trend_nonincreasing(std::span<const double> stats, double floor_gate) {
    if (stats.size() < 2) return true;
    std::size_t bad = 0;
    for (std::size_t i = 1; i < stats.size(); ++i) {
        const bool below_gate = stats[i] <= floor_gate && stats[i - 1] <= floor_gate;
        if (!(stats[i] <= stats[i - 1] || below_gate)) ++bad;
    }
    return bad <= 1;
}

}  // namespace apstat::empirics
