#pragma once

#include "obsec/quantizer.hpp"
#include "obsec/random.hpp"
#include "obsec/system.hpp"

namespace obsec {

// One realization of the small-scale fading channels and uplink noise.
struct ChannelSet {
    CMatrix h;             // N x K, i.i.d. CN(0,1)
    CVector g;             // N, eavesdropper channel, i.i.d. CN(0,1)
    CMatrix uplink_noise;  // N x tau, i.i.d. CN(0,1)
};

// Draws a full ChannelSet from per-purpose substreams ("H", "g", "Z"
// appended to the seed's label).
ChannelSet draw_channels(const SystemConfig& cfg, const SeedSpec& seed);

// Per-user LMMSE factors and (optionally) the estimated channel matrix.
// lambdas and sigma_hat_sq follow the linearized observation model; the
// intercepted user's entry carries the pilot-attack term.
struct ChannelEstimate {
    CMatrix h_hat;                 // N x K; empty when only factors were computed
    RVector lambdas;               // K
    RVector sigma_hat_sq;          // K, diagonal of Sigma
    double kappa_r = 0.0;          // beta_e p_e / (beta_k p_k)
    BussgangFactors bussgang;      // uplink gamma, sigma_q^2 (gamma=1, 0 when unquantized)
    int intercepted_user = 0;

    double sigma_hat_sq_k() const { return sigma_hat_sq(intercepted_user); }
    double tr_sigma() const { return sigma_hat_sq.sum(); }
    double tr_sigma_inv() const { return sigma_hat_sq.cwiseInverse().sum(); }
    Eigen::MatrixXd sigma_matrix() const {
        return sigma_hat_sq.asDiagonal().toDenseMatrix();
    }
};

// Closed-form estimation factors only (no matrix): gamma/sigma_q^2 from the
// uplink Bussgang decomposition, per-user lambda_l and sigma_hat_l^2, and
// kappa_R. This is the deterministic input the rate expressions consume.
ChannelEstimate estimation_factors(const SystemConfig& cfg);

// Received pilot block: Y = sum_j sqrt(p_j') h_j psi_j^T + sqrt(p_e') g
// psi_k^T + Z, sign-quantized to {+-1 +-i} entries when cfg.quantized.
CMatrix simulate_training(const SystemConfig& cfg, const ChannelSet& channels,
                          const PilotMatrix& pilots);

// LMMSE estimate H_hat = V~ Psi^H Lambda / sqrt(tau), where V~ is the
// received block mapped onto the unit-modulus constellation (raw sign input
// is rescaled by 1/sqrt(2); unquantized input is used as-is).
ChannelEstimate lmmse_estimate(const SystemConfig& cfg, const CMatrix& v,
                               const PilotMatrix& pilots);

// Pilot attack ties the eavesdropper channel to the intercepted user's
// estimate: g = sqrt(kappa_R) h_hat_k + eps with C_eps = error_variance * I.
struct EveDecomposition {
    double kappa_r = 0.0;
    double error_variance = 1.0;  // 1 - kappa_R * sigma_hat_k^2
};

EveDecomposition eve_decomposition(const ChannelEstimate& est);

// I(g; h_hat_k) = N log2(1 / (1 - kappa_R sigma_hat_k^2)) in bits.
double channel_mutual_info(const ChannelEstimate& est, int n_antennas);

}  // namespace obsec
