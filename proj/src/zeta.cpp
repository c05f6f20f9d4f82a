#include "apstat/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace apstat::zeta {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;  // zeta'(0)/zeta(0)
}

std::size_t ZeroTable::count_below(double x) const {
    return static_cast<std::size_t>(std::upper_bound(gammas.begin(), gammas.end(), x) -
                                    gammas.begin());
}

ZeroTable ingest_zeros(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_zeros: cannot read " + path);
    ZeroTable table;
    table.source = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        char* end = nullptr;
        const double g = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || !std::isfinite(g))
            throw std::runtime_error("ingest_zeros: unparsable entry at line " +
                                     std::to_string(lineno));
        if (g <= 0.0)
            throw std::runtime_error("ingest_zeros: nonpositive ordinate at line " +
                                     std::to_string(lineno));
        if (!table.gammas.empty() && g <= table.gammas.back())
            throw std::runtime_error("ingest_zeros: non-monotone ordinate at line " +
                                     std::to_string(lineno));
        table.gammas.push_back(g);
    }
    if (table.gammas.empty()) throw std::runtime_error("ingest_zeros: empty table " + path);
    return table;
}

void load_zeta_prime(ZeroTable& table, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_zeta_prime: cannot read " + path);
    std::vector<cplx> zp;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        double g, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &g, &re, &im) != 3) {
            if (lineno == 1) continue;  // header row
            throw std::runtime_error("load_zeta_prime: bad row at line " + std::to_string(lineno));
        }
        const std::size_t k = zp.size();
        if (k >= table.gammas.size())
            throw std::runtime_error("load_zeta_prime: more rows than table ordinates");
        if (std::abs(g - table.gammas[k]) > 1e-6)
            throw std::runtime_error("load_zeta_prime: ordinate mismatch at line " +
                                     std::to_string(lineno));
        if (re == 0.0 && im == 0.0)
            throw std::runtime_error("load_zeta_prime: zero entry at line " + std::to_string(lineno));
        zp.emplace_back(re, im);
    }
    if (zp.size() != table.gammas.size())
        throw std::runtime_error("load_zeta_prime: row count does not match table");
    table.zeta_prime = std::move(zp);
}

std::string canonical_zero_text(const ZeroTable& table) {
    std::ostringstream out;
    char buf[64];
    for (double g : table.gammas) {
        std::snprintf(buf, sizeof(buf), "%.15g\n", g);
        out << buf;
    }
    return out.str();
}

ArithmeticTables sieve(std::size_t N) {
    if (N == 0) throw std::invalid_argument("sieve: N must be >= 1");
    ArithmeticTables t;
    t.limit = N;
    t.vonmangoldt.assign(N + 1, 0.0);
    t.moebius.assign(N + 1, 0);
    t.liouville.assign(N + 1, 0);

    // Linear sieve carrying the least prime factor; mu and lambda follow from
    // the usual multiplicative recursions.
    std::vector<std::uint32_t> lp(N + 1, 0);
    std::vector<std::uint32_t> primes;
    t.moebius[1] = 1;
    t.liouville[1] = 1;
    for (std::size_t i = 2; i <= N; ++i) {
        if (lp[i] == 0) {
            lp[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
            t.moebius[i] = -1;
            t.liouville[i] = -1;
        }
        for (std::uint32_t p : primes) {
            if (p > lp[i] || i * p > N) break;
            lp[i * p] = p;
            t.liouville[i * p] = static_cast<signed char>(-t.liouville[i]);
            t.moebius[i * p] = (i % p == 0) ? 0 : static_cast<signed char>(-t.moebius[i]);
        }
    }
    // Lambda(p^j) = log p.
    for (std::uint32_t p : primes) {
        const double logp = std::log(static_cast<double>(p));
        for (std::size_t q = p; q <= N; q *= p) {
            t.vonmangoldt[q] = logp;
            if (q > N / p) break;
        }
    }

    t.psi_prefix.assign(N + 1, 0.0);
    t.mertens_prefix.assign(N + 1, 0);
    t.liouville_prefix.assign(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) {
        t.psi_prefix[n] = t.psi_prefix[n - 1] + t.vonmangoldt[n];
        t.mertens_prefix[n] = t.mertens_prefix[n - 1] + t.moebius[n];
        t.liouville_prefix[n] = t.liouville_prefix[n - 1] + t.liouville[n];
    }
    return t;
}

double summatory(const ArithmeticTables& tables, ExplicitKind kind, double x,
                 Convention convention) {
    if (x > static_cast<double>(tables.limit))
        throw std::invalid_argument("summatory: x exceeds the sieve limit");
    if (x < 1.0) return 0.0;
    const std::size_t nx = static_cast<std::size_t>(std::floor(x));
    auto value = [&](std::size_t n) -> double {
        switch (kind) {
            case ExplicitKind::psi: return tables.psi_prefix[n];
            case ExplicitKind::mertens: return tables.mertens_prefix[n];
            default: return tables.liouville_prefix[n];
        }
    };
    auto jump = [&](std::size_t n) -> double {
        switch (kind) {
            case ExplicitKind::psi: return tables.vonmangoldt[n];
            case ExplicitKind::mertens: return tables.moebius[n];
            default: return tables.liouville[n];
        }
    };
    double s = value(nx);
    if (convention == Convention::midpoint && x == std::floor(x)) s -= 0.5 * jump(nx);
    return s;
}

cplx zeta_evaluate(double s_re, double s_im, int terms) {
    if (s_re <= -1.0 || std::abs(s_im) > 1e4)
        throw std::domain_error("zeta_evaluate: outside the validated domain");
    const cplx s{s_re, s_im};
    if (std::abs(s - cplx{1.0, 0.0}) < 1e-12) throw std::domain_error("zeta_evaluate: pole at s = 1");

    // Node count must grow with the height or the Bernoulli tail diverges.
    const int n_req = static_cast<int>(std::ceil(0.8 * std::abs(s_im))) + 16;
    const int N = std::max(std::max(terms, 16), n_req);

    std::vector<cplx> head(static_cast<std::size_t>(N) - 1);
    for (int n = 1; n < N; ++n)
        head[static_cast<std::size_t>(n) - 1] =
            std::exp(-s * std::log(static_cast<double>(n)));
    cplx acc = cascade_sum(head);

    const double logN = std::log(static_cast<double>(N));
    const cplx Nms = std::exp(-s * logN);              // N^{-s}
    acc += Nms * static_cast<double>(N) / (s - 1.0);   // N^{1-s}/(s-1)
    acc += 0.5 * Nms;

    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}, via the term recurrence.
    static const double B[] = {1.0 / 6,      -1.0 / 30,    1.0 / 42,      -1.0 / 30,
                               5.0 / 66,     -691.0 / 2730, 7.0 / 6,      -3617.0 / 510,
                               43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
                               -236364091.0 / 2730, 8553103.0 / 6, -23749461029.0 / 870,
                               8615841276005.0 / 14322};
    cplx term = (B[0] / 2.0) * s * Nms / static_cast<double>(N);  // k = 1
    acc += term;
    for (int k = 2; k <= 15; ++k) {
        term *= (B[k - 1] / B[k - 2]) * (s + cplx(2.0 * k - 3.0)) * (s + cplx(2.0 * k - 2.0)) /
                ((2.0 * k - 1.0) * (2.0 * k) * static_cast<double>(N) * static_cast<double>(N));
        acc += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(acc))) break;
    }
    return acc;
}

cplx zeta_prime_on_line(double gamma, double h, int terms) {
    if (h == 0.0) throw std::invalid_argument("zeta_prime_on_line: h must be nonzero");
    const cplx up = zeta_evaluate(0.5, gamma + h, terms);
    const cplx dn = zeta_evaluate(0.5, gamma - h, terms);
    const cplx d = (up - dn) / (cplx{0.0, 2.0} * h);
    if (std::abs(d) < 1e-6)
        throw std::runtime_error("zeta_prime_on_line: |zeta'| < 1e-6, possibly multiple zero");
    return d;
}

ExplicitModel build_explicit_model(ExplicitKind kind, const ZeroTable& table, double T,
                                   int zeta_terms) {
    if (table.gammas.empty()) throw std::invalid_argument("build_explicit_model: empty table");
    if (T > table.gammas.back())
        throw std::invalid_argument("build_explicit_model: T exceeds the table height");
    const bool needs_zp = kind != ExplicitKind::psi;
    if (needs_zp && !table.has_zeta_prime())
        throw std::invalid_argument("build_explicit_model: zeta' values required for this kind");

    std::vector<spectra::Term> terms;
    for (std::size_t k = 0; k < table.gammas.size() && table.gammas[k] <= T; ++k) {
        const double g = table.gammas[k];
        const cplx rho{0.5, g};
        cplx coeff;
        switch (kind) {
            case ExplicitKind::psi:
                coeff = 1.0 / rho;
                break;
            case ExplicitKind::mertens: {
                const cplx zp = table.zeta_prime[k];
                if (std::abs(zp) < 1e-6)
                    throw std::runtime_error(
                        "build_explicit_model: zeta' flagged near-zero at gamma = " +
                        std::to_string(g));
                coeff = 1.0 / (rho * zp);
                break;
            }
            case ExplicitKind::liouville: {
                const cplx zp = table.zeta_prime[k];
                if (std::abs(zp) < 1e-6)
                    throw std::runtime_error(
                        "build_explicit_model: zeta' flagged near-zero at gamma = " +
                        std::to_string(g));
                coeff = zeta_evaluate(1.0, 2.0 * g, zeta_terms) / (rho * zp);
                break;
            }
        }
        terms.push_back({g, coeff});
        terms.push_back({-g, std::conj(coeff)});
    }
    const char* name = kind == ExplicitKind::psi      ? "psi_ap"
                       : kind == ExplicitKind::mertens ? "mertens_ap"
                                                        : "liouville_ap";
    char label[96];
    std::snprintf(label, sizeof(label), "%s T=%.6f (%zu zeros)", name, T, terms.size() / 2);
    ExplicitModel em;
    em.kind = kind;
    em.model = spectra::FourierModel(std::move(terms), label);
    em.truncation = T;
    return em;
}

double explicit_remainder(ExplicitKind kind, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("explicit_remainder: t must be positive");
    const double emt2 = std::exp(-t / 2.0);
    switch (kind) {
        case ExplicitKind::psi:
            // -log(2 pi) e^{-t/2} - (e^{-t/2}/2) log(1 - e^{-2t})
            return -kLog2Pi * emt2 - 0.5 * emt2 * std::log1p(-std::exp(-2.0 * t));
        case ExplicitKind::mertens: {
            // -2/sqrt(x) + trivial-zero series, x = e^t; terms decay factorially.
            double acc = -2.0 * emt2;
            double log_pow = 0.0;  // log((2 pi)^{2n} / (2n)!)
            for (int n = 1; n <= 40; ++n) {
                log_pow += 2.0 * std::log(2.0 * kPi) - std::log(2.0 * n - 1.0) -
                           std::log(2.0 * n);
                const double z = zeta_evaluate(2.0 * n + 1.0, 0.0).real();
                const double term = ((n % 2 == 1) ? 1.0 : -1.0) *
                                    std::exp(log_pow - (2.0 * n + 0.5) * t) / (n * z);
                acc += term;
                if (std::abs(term) < 1e-14) break;
            }
            return acc;
        }
        case ExplicitKind::liouville:
            // The constant 1/zeta(1/2); the decaying remainder is modeled as 0.
            return 1.0 / zeta_evaluate(0.5, 0.0).real();
    }
    return 0.0;
}

double normalized_summatory(const ArithmeticTables& tables, ExplicitKind kind, double t) {
    const double x = std::exp(t);
    const double s = summatory(tables, kind, x, Convention::midpoint);
    switch (kind) {
        case ExplicitKind::psi: return (s - x) / std::sqrt(x);
        default: return s / std::sqrt(x);
    }
}

double explicit_rhs(const ExplicitModel& em, double t) {
    // Deterministic polynomial value (all phases equal to 1); real by
    // conjugate symmetry.
    const double p = em.model(t).real();
    const double sign = em.kind == ExplicitKind::psi ? -1.0 : 1.0;
    return sign * p + explicit_remainder(em.kind, t);
}

FormulaGap explicit_formula_gap(ExplicitKind kind, const ArithmeticTables& tables,
                                const ExplicitModel& em, std::span<const double> t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("explicit_formula_gap: empty grid");
    for (double t : t_grid)
        if (std::exp(t) > static_cast<double>(tables.limit))
            throw std::invalid_argument("explicit_formula_gap: e^t exceeds the sieve limit");
    FormulaGap gap;
    CascadeAccumulator<double> sq;
    for (double t : t_grid) {
        const double d = normalized_summatory(tables, kind, t) - explicit_rhs(em, t);
        sq.add(d * d);
        gap.max_abs = std::max(gap.max_abs, std::abs(d));
    }
    gap.n_points = t_grid.size();
    gap.rms = std::sqrt(sq.total() / static_cast<double>(t_grid.size()));
    return gap;
}

ZeroAsymptotics zero_counting_check(const ZeroTable& table, std::span<const double> x_grid) {
    ZeroAsymptotics za;
    for (double x : x_grid) {
        if (x <= 1.0 || x > table.gammas.back())
            throw std::invalid_argument("zero_counting_check: x outside the table range");
        const std::size_t n = table.count_below(x);
        za.x.push_back(x);
        za.counting_ratio.push_back(static_cast<double>(n) / (x * std::log(x) / (2.0 * kPi)));
        if (n >= 2) {
            const double gn = table.gammas[n - 1];
            za.growth_ratio.push_back(gn * std::log(static_cast<double>(n)) /
                                      (2.0 * kPi * static_cast<double>(n)));
        } else {
            za.growth_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        CascadeAccumulator<double> tail;
        for (std::size_t k = table.count_below(x); k < table.gammas.size(); ++k)
            tail.add(1.0 / (0.25 + table.gammas[k] * table.gammas[k]));
        za.tail_ratio.push_back(tail.total() / (std::log(x) / (2.0 * kPi * x)));
    }
    return za;
}

double gonek_sum(const ZeroTable& table, double T) {
    if (!table.has_zeta_prime()) throw std::invalid_argument("gonek_sum: zeta' values required");
    CascadeAccumulator<double> acc;
    for (std::size_t k = 0; k < table.gammas.size() && table.gammas[k] <= T; ++k)
        acc.add(2.0 / std::norm(table.zeta_prime[k]));  // both +-gamma_k
    return acc.total();
}

double midpoint_truncation(const ZeroTable& table, std::size_t k) {
    if (k == 0 || k > table.gammas.size())
        throw std::invalid_argument("midpoint_truncation: index out of range");
    if (k == table.gammas.size()) return table.gammas.back();
    return 0.5 * (table.gammas[k - 1] + table.gammas[k]);
}

}  // namespace apstat::zeta
