#ifndef APSTAT_NUMERIC_HPP
#define APSTAT_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace apstat {

using cplx = std::complex<double>;

// Pairwise (cascade) summation. Sums of up to ~1e5 mixed-sign terms appear
// all over the covariance/Parseval paths; plain left-to-right accumulation
// loses digits there.
template <typename T>
T cascade_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return cascade_sum(v.subspan(0, half)) + cascade_sum(v.subspan(half));
}

template <typename T>
T cascade_sum(const std::vector<T>& v) {
    return cascade_sum(std::span<const T>(v));
}

// Streaming variant: binary-counter merging, O(1) amortized per push,
// same rounding behavior as the recursive form.
template <typename T>
class CascadeAccumulator {
public:
    void add(T x) {
        for (std::size_t level = 0;; ++level) {
            if (level == levels_.size()) {
                levels_.push_back(x);
                occupied_.push_back(true);
                return;
            }
            if (!occupied_[level]) {
                levels_[level] = x;
                occupied_[level] = true;
                return;
            }
            x += levels_[level];
            occupied_[level] = false;
        }
    }
    T total() const {
        T s{};
        for (std::size_t i = 0; i < levels_.size(); ++i)
            if (occupied_[i]) s += levels_[i];
        return s;
    }

private:
    std::vector<T> levels_;
    std::vector<bool> occupied_;
};

inline double sinc(double x) {
    return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_rms = 0.0;
    double slope_se = 0.0;
};

// Ordinary least squares y = a + b x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("linear_fit: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    if (x.size() > 2) f.slope_se = std::sqrt(ss / (n - 2.0) / sxx);
    return f;
}

// In-place lower Cholesky; throws if the matrix is not positive definite.
inline void cholesky(std::vector<double>& a, std::size_t n) {
    if (a.size() != n * n) throw std::invalid_argument("cholesky: bad dimensions");
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        const double lj = std::sqrt(d);
        a[j * n + j] = lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / lj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    return cascade_sum(v) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

// Static partition of [0, n) over worker threads. Work items must be
// independent; reductions happen afterwards in index order so results do
// not depend on the thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace apstat

#endif
