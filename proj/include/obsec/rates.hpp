#pragma once

#include "obsec/uplink.hpp"

namespace obsec {

// Analytical rate triple plus the artificial-noise leakage powers that
// enter the bounds. r_s = [r_k - r_e]^+ in bits/s/Hz.
struct RateBundle {
    double r_k = 0.0;        // lower bound on the intercepted user's rate
    double r_e = 0.0;        // upper bound on the leaked rate
    double r_s = 0.0;        // secrecy rate
    double p_an_user = 0.0;  // AN leakage power at the user
    double p_an_eve = 0.0;   // AN leakage power at the eavesdropper
    double theta_used = 0.0;
};

enum class ScalingRegime { NO_PS, PS1, PS2 };

// Power-scaling regime: p_d = rho (NO_PS), rho/sqrt(N) (PS1), rho/N (PS2).
struct AsymptoteSpec {
    ScalingRegime regime = ScalingRegime::NO_PS;
    double rho = 10.0;  // linear scale
};

// Applies the regime's substitution for p_d at a given antenna count.
double scaled_p_down(const AsymptoteSpec& spec, double n_antennas);

// Lower bound on the intercepted user's achievable rate (branch on
// cfg.beamformer / cfg.an_scheme). On the unquantized path the standard
// substitutions p_d -> p_d pi/2, sigma_q^2 -> 0 are applied internally and
// est is expected to carry the unquantized factors.
double rate_user_theorem1(const SystemConfig& cfg, const ChannelEstimate& est);

// Upper bound on the ergodic information rate leaked to the eavesdropper
// (large-N approximation).
double rate_eve_theorem2(const SystemConfig& cfg, const ChannelEstimate& est);

RateBundle secrecy_rate(const SystemConfig& cfg, const ChannelEstimate& est);

// Convenience: factors computed from cfg.
RateBundle secrecy_rate(const SystemConfig& cfg);

// Passive eavesdropping (requires cfg.p_eve == 0). With perfect_csi the
// estimate variances are replaced by 1 (Sigma = I).
RateBundle secrecy_passive(const SystemConfig& cfg, bool perfect_csi);

// Infinite-resolution system with the same configuration.
RateBundle secrecy_unquantized(const SystemConfig& cfg);

// N -> infinity limit of the maximum secrecy rate for the given regime.
// NO_PS depends on the AN scheme only, PS1 on nothing, PS2 on the
// beamformer only. Honors cfg.quantized via the substitution rules.
double asymptotic_secrecy(const SystemConfig& cfg, const AsymptoteSpec& spec);

// Threshold on the transmit power ratio kappa_T = p_e/p_k below which a
// positive asymptotic secrecy rate is possible.
double positivity_threshold(const SystemConfig& cfg, const AsymptoteSpec& spec);

struct ThetaOpt {
    double theta_star = 0.0;
    double r_s_max = 0.0;
};

// Maximizes the secrecy rate over theta: 2000-point grid on
// [1e-4, 1 - 1e-4] followed by golden-section refinement to |dtheta| < 1e-6.
ThetaOpt optimize_theta(const SystemConfig& cfg, const ChannelEstimate& est);
ThetaOpt optimize_theta(const SystemConfig& cfg);

}  // namespace obsec
