#pragma once

#include "obsec/precoding.hpp"
#include "obsec/rates.hpp"

namespace obsec {

// One Monte Carlo campaign. Results are bit-identical for any `workers`
// value: each trial owns the substream keyed by (master_seed,
// seed.trial_index + t, label) and the reduction runs in trial order.
struct TrialPlan {
    int num_trials = 2000;
    SeedSpec seed;
    double confidence = 0.95;
    int workers = 1;
    int downlink_draws = 8;  // symbol intervals sampled per channel realization
};

struct EmpiricalRate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
    int num_trials = 0;
};

// Empirical version of the user's rate lower bound: the moments entering
// the effective-noise variance are estimated across trials from the exact
// quantized pipeline, with the quantization term taken from the extracted
// distortion power c3^2 beta_k E|h_k^T q_bar|^2 (not the sigma_q^2 p_d
// shorthand). CI by jackknife at plan.confidence.
EmpiricalRate simulate_legit_rate(const SystemConfig& cfg, const TrialPlan& plan);

// Exact ergodic leakage: per trial log2(1 + c1^2 beta_e |w_k^H g*|^2 /
// sigma_e^2) with the per-realization effective noise at the eavesdropper.
// The quantization part of sigma_e^2 uses the extracted q_bar by default.
EmpiricalRate simulate_eve_rate(const SystemConfig& cfg, const TrialPlan& plan);

// Both accountings of the eavesdropper's quantization noise: the extracted
// per-realization q_bar power and the sigma_q^2 ||g||^2 abstraction. Their
// difference measures the uncorrelated-distortion assumption.
struct EveRateVariants {
    EmpiricalRate empirical_qn;
    EmpiricalRate abstract_qn;
};

EveRateVariants simulate_eve_rate_variants(const SystemConfig& cfg, const TrialPlan& plan);

// [legit - eve]^+ from one common-random-numbers pass; CI by propagation.
EmpiricalRate simulate_secrecy(const SystemConfig& cfg, const TrialPlan& plan);

// All three estimates from a single pass over the trials.
struct SimulationSummary {
    EmpiricalRate user_rate;
    EmpiricalRate eve_rate;
    EmpiricalRate eve_rate_abstract_qn;
    EmpiricalRate secrecy;
};

SimulationSummary simulate_rates(const SystemConfig& cfg, const TrialPlan& plan);

// Two-sided standard normal quantile for a confidence level in (0, 1).
double normal_quantile_two_sided(double confidence);

}  // namespace obsec
