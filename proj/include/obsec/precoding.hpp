#pragma once

#include "obsec/uplink.hpp"

namespace obsec {

// Beamformer, artificial-noise shaping and the long-term constants tied to
// one channel estimate. The normalization constants eta, zeta and the power
// coefficients c1..c3 are the closed forms, not per-realization norms.
struct PrecoderSet {
    CMatrix w;        // N x K beamforming matrix
    CMatrix shaping;  // N x N; identity for R-AN, projector complement for NS-AN
    double eta = 1.0;
    double zeta = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

// Long-term normalization constants and power coefficients; deterministic
// given the closed-form estimate variances, no channel draw needed.
struct PowerCoefficients {
    double eta = 1.0;
    double zeta = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

PowerCoefficients power_coefficients(const SystemConfig& cfg, const ChannelEstimate& est);

// Builds W (MRT: conj(H_hat); ZF: conj(H_hat) (H_hat^T conj(H_hat))^-1), the
// shaping matrix S, and eta/zeta/c1..c3. Requires est.h_hat. Throws when
// H_hat is rank deficient or has condition number above 1e12 (the ZF
// formulas assume an exact inverse; no silent regularization).
PrecoderSet build_precoder(const SystemConfig& cfg, const ChannelEstimate& est);

struct TransmitSignal {
    CVector x_tilde;      // precoded signal before the DACs
    CVector x;            // transmitted signal
    CVector beamformed;   // W s
    CVector shaped_noise; // n = S n~
};

// x~ = sqrt(theta/eta) W s + sqrt((1-theta)/zeta) S n~. The quantized path
// emits x = sqrt(p_d/N) Q(x~) on the unit-modulus constellation so that
// ||x||^2 = p_d for every realization; the unquantized path emits
// x = sqrt(p_d) x~.
TransmitSignal synthesize_transmit(const SystemConfig& cfg, const PrecoderSet& pre,
                                   const CVector& symbols, const CVector& an_draw);

struct TransmitDecomposition {
    CVector signal_part;  // c1 W s
    CVector an_part;      // c2 n
    CVector q_bar;        // distortion such that x = c1 W s + c2 n + c3 q_bar
};

// Exact Bussgang residual of the transmitted vector; identically zero on the
// unquantized path.
TransmitDecomposition linearized_transmit_decomposition(const SystemConfig& cfg,
                                                        const PrecoderSet& pre,
                                                        const TransmitSignal& sig);

}  // namespace obsec
