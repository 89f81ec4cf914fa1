#include "obsec/quantizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obsec {

namespace {
inline double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }
}  // namespace

CMatrix one_bit_quantize(const CMatrix& x, bool unit_modulus) {
    const double scale = unit_modulus ? 1.0 / std::numbers::sqrt2 : 1.0;
    CMatrix out(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const std::complex<double> v = x(r, c);
            out(r, c) = {scale * sgn(v.real()), scale * sgn(v.imag())};
        }
    }
    return out;
}

BussgangFactors uplink_bussgang(std::span<const double> p_primes, double p_e_prime) {
    double sigma_y_sq = 1.0 + p_e_prime;
    for (double p : p_primes) {
        if (p < 0.0) throw std::invalid_argument("uplink_bussgang: negative power");
        sigma_y_sq += p;
    }
    if (p_e_prime < 0.0) throw std::invalid_argument("uplink_bussgang: negative power");
    BussgangFactors f;
    f.input_variance = sigma_y_sq;
    f.gamma = std::sqrt(2.0 / (std::numbers::pi * sigma_y_sq));
    f.sigma_q_sq = kQuantNoiseVariance;
    return f;
}

BussgangFactors downlink_bussgang(int n_antennas) {
    if (n_antennas < 1) throw std::invalid_argument("downlink_bussgang: need n_antennas >= 1");
    BussgangFactors f;
    f.input_variance = 1.0 / n_antennas;
    f.gamma = std::sqrt(2.0 * n_antennas / std::numbers::pi);
    f.sigma_q_sq = kQuantNoiseVariance;
    return f;
}

CMatrix extract_quantization_noise(const CMatrix& y, double gamma) {
    return one_bit_quantize(y, /*unit_modulus=*/true) - gamma * y;
}

}  // namespace obsec
