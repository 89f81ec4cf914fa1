#include "obsec/precoding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

namespace obsec {

// Quantized: c1 = sqrt(2 theta p_d / (pi eta)); unquantized the 2/pi factor
// drops (equivalently p_d -> p_d pi/2).
PowerCoefficients power_coefficients(const SystemConfig& cfg, const ChannelEstimate& est) {
    const int N = cfg.n_antennas;
    const int K = cfg.num_users;
    PowerCoefficients pc;
    pc.eta = cfg.beamformer == Beamformer::MRT ? N * est.tr_sigma()
                                               : est.tr_sigma_inv() / (N - K);
    pc.zeta = cfg.an_scheme == AnScheme::RAN ? N : N - K;
    const double lin = cfg.quantized ? 2.0 / std::numbers::pi : 1.0;
    pc.c1 = std::sqrt(lin * cfg.theta * cfg.p_down / pc.eta);
    pc.c2 = std::sqrt(lin * (1.0 - cfg.theta) * cfg.p_down / pc.zeta);
    pc.c3 = std::sqrt(cfg.p_down / N);
    return pc;
}

PrecoderSet build_precoder(const SystemConfig& cfg, const ChannelEstimate& est) {
    cfg.validate();
    const int N = cfg.n_antennas;
    const int K = cfg.num_users;
    if (est.h_hat.rows() != N || est.h_hat.cols() != K)
        throw std::invalid_argument("build_precoder: estimate carries no N x K matrix");

    const Eigen::JacobiSVD<CMatrix> svd(est.h_hat);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw std::runtime_error("build_precoder: channel estimate is rank deficient");
    const CMatrix gram = est.h_hat.transpose() * est.h_hat.conjugate();  // Hermitian PD here

    PrecoderSet pre;
    const PowerCoefficients pc = power_coefficients(cfg, est);
    pre.eta = pc.eta;
    pre.zeta = pc.zeta;
    pre.c1 = pc.c1;
    pre.c2 = pc.c2;
    pre.c3 = pc.c3;

    const CMatrix gram_inv = gram.llt().solve(CMatrix::Identity(K, K));
    if (cfg.beamformer == Beamformer::MRT) {
        pre.w = est.h_hat.conjugate();
    } else {
        pre.w.noalias() = est.h_hat.conjugate() * gram_inv;
    }
    if (cfg.an_scheme == AnScheme::RAN) {
        pre.shaping = CMatrix::Identity(N, N);
    } else {
        pre.shaping = CMatrix::Identity(N, N);
        pre.shaping.noalias() -= est.h_hat.conjugate() * gram_inv * est.h_hat.transpose();
    }
    return pre;
}

TransmitSignal synthesize_transmit(const SystemConfig& cfg, const PrecoderSet& pre,
                                   const CVector& symbols, const CVector& an_draw) {
    const int N = cfg.n_antennas;
    if (symbols.size() != cfg.num_users || an_draw.size() != N)
        throw std::invalid_argument("synthesize_transmit: bad vector dimensions");

    TransmitSignal sig;
    sig.beamformed.noalias() = pre.w * symbols;
    sig.shaped_noise = cfg.an_scheme == AnScheme::RAN ? an_draw : CVector(pre.shaping * an_draw);
    sig.x_tilde = std::sqrt(cfg.theta / pre.eta) * sig.beamformed +
                  std::sqrt((1.0 - cfg.theta) / pre.zeta) * sig.shaped_noise;
    if (cfg.quantized) {
        sig.x = std::sqrt(cfg.p_down / N) *
                one_bit_quantize(sig.x_tilde, /*unit_modulus=*/true);
    } else {
        sig.x = std::sqrt(cfg.p_down) * sig.x_tilde;
    }
    return sig;
}

TransmitDecomposition linearized_transmit_decomposition(const SystemConfig& cfg,
                                                        const PrecoderSet& pre,
                                                        const TransmitSignal& sig) {
    TransmitDecomposition dec;
    dec.signal_part = pre.c1 * sig.beamformed;
    dec.an_part = pre.c2 * sig.shaped_noise;
    if (cfg.quantized) {
        dec.q_bar = (sig.x - dec.signal_part - dec.an_part) / pre.c3;
    } else {
        dec.q_bar = CVector::Zero(sig.x.size());
    }
    return dec;
}

}  // namespace obsec
