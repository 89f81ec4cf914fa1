#pragma once

#include <span>

#include "obsec/random.hpp"

namespace obsec {

// Bussgang linearization of the one-bit quantizer: v = gamma * y + q with
// q uncorrelated to y. gamma = sqrt(2 / (pi * input_variance)) and the
// quantization-noise variance is 1 - 2/pi when the quantizer input has the
// variance used to compute gamma.
struct BussgangFactors {
    double gamma = 1.0;
    double sigma_q_sq = 0.0;
    double input_variance = 1.0;
};

inline constexpr double kQuantNoiseVariance = 1.0 - 2.0 / 3.14159265358979323846;

// Pointwise sign of real and imaginary parts. Raw output is in {+-1 +-i};
// with unit_modulus the output is scaled by 1/sqrt(2) onto the QPSK
// constellation. Zero real or imaginary parts map to +1 (deterministic tie
// rule; probability-zero event for continuous inputs).
CMatrix one_bit_quantize(const CMatrix& x, bool unit_modulus = false);

// Uplink factors: input variance sum(p_j') + p_e' + 1.
BussgangFactors uplink_bussgang(std::span<const double> p_primes, double p_e_prime);

// Downlink factors: the precoded vector has per-entry variance 1/N, so
// gamma = sqrt(2 N / pi).
BussgangFactors downlink_bussgang(int n_antennas);

// q = Q(y) - gamma * y with Q the unit-modulus quantizer (the convention
// under which gamma and sigma_q_sq above are exact).
CMatrix extract_quantization_noise(const CMatrix& y, double gamma);

}  // namespace obsec
