#include "obsec/uplink.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obsec {

ChannelSet draw_channels(const SystemConfig& cfg, const SeedSpec& seed) {
    ChannelSet ch;
    ch.h = gen_complex_gaussian(cfg.n_antennas, cfg.num_users, 1.0, seed.with_label(seed.stream_label + "/H"));
    ch.g = gen_complex_gaussian(cfg.n_antennas, 1, 1.0, seed.with_label(seed.stream_label + "/g"));
    ch.uplink_noise =
        gen_complex_gaussian(cfg.n_antennas, cfg.tau, 1.0, seed.with_label(seed.stream_label + "/Z"));
    return ch;
}

ChannelEstimate estimation_factors(const SystemConfig& cfg) {
    cfg.validate();
    const int K = cfg.num_users;
    ChannelEstimate est;
    est.intercepted_user = cfg.intercepted_user;

    std::vector<double> p_primes(K);
    for (int j = 0; j < K; ++j) p_primes[j] = cfg.received_power(j);
    const double p_e_prime = cfg.received_power_eve();

    if (cfg.quantized) {
        est.bussgang = uplink_bussgang(p_primes, p_e_prime);
    } else {
        // Infinite resolution: the linearization is the identity.
        est.bussgang = uplink_bussgang(p_primes, p_e_prime);
        est.bussgang.gamma = 1.0;
        est.bussgang.sigma_q_sq = 0.0;
    }
    const double g2 = est.bussgang.gamma * est.bussgang.gamma;
    const double sq2 = est.bussgang.sigma_q_sq;
    const double tau = cfg.tau;

    est.lambdas.resize(K);
    est.sigma_hat_sq.resize(K);
    for (int l = 0; l < K; ++l) {
        const double attack = (l == cfg.intercepted_user) ? g2 * p_e_prime * tau : 0.0;
        const double den = g2 * p_primes[l] * tau + attack + g2 + sq2;
        est.lambdas(l) = est.bussgang.gamma * std::sqrt(p_primes[l] * tau) / den;
        est.sigma_hat_sq(l) = g2 * p_primes[l] * tau / den;
    }
    est.kappa_r = cfg.kappa_r();
    return est;
}

CMatrix simulate_training(const SystemConfig& cfg, const ChannelSet& channels,
                          const PilotMatrix& pilots) {
    cfg.validate();
    const int N = cfg.n_antennas;
    const int K = cfg.num_users;
    if (pilots.num_users != K || pilots.tau != cfg.tau)
        throw std::invalid_argument("simulate_training: pilot matrix inconsistent with config");
    if (channels.h.rows() != N || channels.h.cols() != K || channels.g.size() != N ||
        channels.uplink_noise.rows() != N || channels.uplink_noise.cols() != cfg.tau)
        throw std::invalid_argument("simulate_training: channel dimensions inconsistent");

    CMatrix amplified = channels.h;
    for (int j = 0; j < K; ++j) amplified.col(j) *= std::sqrt(cfg.received_power(j));
    CMatrix y = amplified * pilots.entries;
    y.noalias() += std::sqrt(cfg.received_power_eve()) * channels.g *
                   pilots.entries.row(cfg.intercepted_user);
    y += channels.uplink_noise;
    return cfg.quantized ? one_bit_quantize(y) : y;
}

ChannelEstimate lmmse_estimate(const SystemConfig& cfg, const CMatrix& v,
                               const PilotMatrix& pilots) {
    ChannelEstimate est = estimation_factors(cfg);
    if (v.rows() != cfg.n_antennas || v.cols() != cfg.tau)
        throw std::invalid_argument("lmmse_estimate: received block has wrong dimensions");
    if (pilots.num_users != cfg.num_users || pilots.tau != cfg.tau)
        throw std::invalid_argument("lmmse_estimate: pilot matrix inconsistent with config");

    // Raw sign output carries |entry|^2 = 2; the Bussgang factors are exact
    // for the unit-modulus constellation.
    const double scale = cfg.quantized ? 1.0 / std::numbers::sqrt2 : 1.0;
    est.h_hat.noalias() = (scale / std::sqrt(static_cast<double>(cfg.tau))) * v *
                          pilots.entries.adjoint();
    est.h_hat *= est.lambdas.asDiagonal();
    return est;
}

EveDecomposition eve_decomposition(const ChannelEstimate& est) {
    EveDecomposition dec;
    dec.kappa_r = est.kappa_r;
    dec.error_variance = 1.0 - est.kappa_r * est.sigma_hat_sq_k();
    return dec;
}

double channel_mutual_info(const ChannelEstimate& est, int n_antennas) {
    const double prod = est.kappa_r * est.sigma_hat_sq_k();
    if (prod >= 1.0) throw std::invalid_argument("channel_mutual_info: kappa_R sigma^2 >= 1");
    return n_antennas * std::log2(1.0 / (1.0 - prod));
}

}  // namespace obsec
