#ifndef APSTAT_RNG_HPP
#define APSTAT_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

// Counter-based randomness (Philox 4x32-10, Salmon et al. 2011). Every draw
// is a pure function of (seed, stream, index, tag), so replica loops can run
// in any order or on any thread count and still reproduce bit-identical
// results.

namespace apstat::rng {

enum class Tag : std::uint32_t {
    phase = 1,       // torus phases of the limit process
    translate = 2,   // uniform translation draws V
    perturb = 3,     // frequency perturbations of generated spectra
    argument = 4,    // random coefficient arguments
    gauss = 5,       // Box-Muller inputs
    misc = 6,
};

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(M0, ctr[0], lo0, hi0);
        mulhilo(M1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

}  // namespace detail

inline std::uint64_t bits64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, Tag tag) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32) ^ (static_cast<std::uint32_t>(tag) << 24)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = detail::philox4x32_10(ctr, key);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Uniform in [0, 1) from a 53-bit mantissa.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, Tag tag) {
    return static_cast<double>(bits64(seed, stream, index, tag) >> 11) * 0x1.0p-53;
}

// Uniform on the unit circle as e^{2 pi i W}; unit modulus by construction.
inline std::complex<double> circle_phase(std::uint64_t seed, std::uint64_t replica, std::uint64_t ordinal) {
    const double w = uniform01(seed, replica, ordinal, Tag::phase);
    return std::polar(1.0, 2.0 * 3.14159265358979323846 * w);
}

// Standard normal via Box-Muller on two counter draws.
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u1 = uniform01(seed, stream, 2 * index, Tag::gauss);
    const double u2 = uniform01(seed, stream, 2 * index + 1, Tag::gauss);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace apstat::rng

#endif
