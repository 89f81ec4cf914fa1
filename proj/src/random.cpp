#include "obsec/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obsec {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 64-bit finalizer (splitmix64 style), used to whiten seed and label hash.
inline std::uint64_t fmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline double bits_to_unit(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t w = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

}  // namespace

SubStream::SubStream(const SeedSpec& seed) {
    const std::uint64_t k = fmix64(seed.master_seed);
    key_[0] = static_cast<std::uint32_t>(k);
    key_[1] = static_cast<std::uint32_t>(k >> 32);
    const std::uint64_t lh = fmix64(fnv1a64(seed.stream_label));
    stream_[0] = static_cast<std::uint32_t>(seed.trial_index);
    stream_[1] = static_cast<std::uint32_t>(lh) ^ static_cast<std::uint32_t>(lh >> 32) ^
                 static_cast<std::uint32_t>(seed.trial_index >> 32);
}

SubStream::Block SubStream::next_block() {
    std::uint32_t c0 = static_cast<std::uint32_t>(draw_);
    std::uint32_t c1 = static_cast<std::uint32_t>(draw_ >> 32);
    std::uint32_t c2 = stream_[0];
    std::uint32_t c3 = stream_[1];
    ++draw_;

    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c0, hi0, lo0);
        mulhilo(kPhiloxM1, c2, hi1, lo1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return Block{{c0, c1, c2, c3}};
}

double SubStream::uniform() {
    const Block b = next_block();
    return bits_to_unit(b.x[0], b.x[1]);
}

std::complex<double> SubStream::cnormal(double variance) {
    // One block yields two uniforms, Box-Muller yields the two Gaussian
    // coordinates of a single complex sample.
    const Block b = next_block();
    const double u1 = bits_to_unit(b.x[0], b.x[1]) + 0x1.0p-54;  // keep log() finite
    const double u2 = bits_to_unit(b.x[2], b.x[3]);
    const double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(variance / 2.0);
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

double SubStream::normal() {
    const Block b = next_block();
    const double u1 = bits_to_unit(b.x[0], b.x[1]) + 0x1.0p-54;
    const double u2 = bits_to_unit(b.x[2], b.x[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMatrix gen_complex_gaussian(int rows, int cols, double variance, const SeedSpec& seed) {
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("gen_complex_gaussian: dimensions must be positive");
    }
    if (!(variance > 0.0)) {
        throw std::invalid_argument("gen_complex_gaussian: variance must be positive");
    }
    SubStream stream(seed);
    CMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            m(r, c) = stream.cnormal(variance);
        }
    }
    return m;
}

PilotMatrix gen_pilot_matrix(int tau, int num_users) {
    if (tau <= 0 || num_users <= 0) {
        throw std::invalid_argument("gen_pilot_matrix: dimensions must be positive");
    }
    if (tau < num_users) {
        throw std::invalid_argument("gen_pilot_matrix: tau must be >= num_users");
    }
    PilotMatrix p;
    p.tau = tau;
    p.num_users = num_users;
    p.entries.resize(num_users, tau);
    for (int j = 0; j < num_users; ++j) {
        for (int t = 0; t < tau; ++t) {
            // reduce j*t mod tau exactly so the phase stays in [0, 2 pi)
            const long long m = (static_cast<long long>(j) * t) % tau;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(m) / tau;
            p.entries(j, t) = std::polar(1.0, phase);
        }
    }
    return p;
}

}  // namespace obsec
