#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "obsec/precoding.hpp"
#include "support/test_helpers.hpp"

using namespace obsec;
using obsec::testing::consistent_user_channel;
using obsec::testing::synthetic_estimate;

namespace {

constexpr double kPi = std::numbers::pi;

SystemConfig base_cfg(Beamformer bf, AnScheme an, int n = 64) {
    SystemConfig cfg = SystemConfig::symmetric(n, 10, 10, 10.0, std::pow(10.0, 0.7), 10.0);
    cfg.beamformer = bf;
    cfg.an_scheme = an;
    return cfg;
}

}  // namespace

TEST_CASE("zero forcing inverts the estimated channel") {
    const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::NSAN);
    const ChannelEstimate est = synthetic_estimate(cfg, {31, 0, "zf"});
    const PrecoderSet pre = build_precoder(cfg, est);
    const CMatrix should_be_i = est.h_hat.transpose() * pre.w;
    CHECK((should_be_i - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("nullspace shaping annihilates the estimated channel rowspace") {
    const SystemConfig cfg = base_cfg(Beamformer::MRT, AnScheme::NSAN);
    const ChannelEstimate est = synthetic_estimate(cfg, {32, 0, "ns"});
    const PrecoderSet pre = build_precoder(cfg, est);
    CHECK((est.h_hat.transpose() * pre.shaping).cwiseAbs().maxCoeff() < 1e-9);

    SUBCASE("projector complement is Hermitian idempotent with trace N-K") {
        CHECK((pre.shaping * pre.shaping - pre.shaping).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((pre.shaping - pre.shaping.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(pre.shaping.trace().real() == doctest::Approx(64 - 10).epsilon(1e-9));
        CHECK((pre.shaping * pre.shaping.adjoint() - pre.shaping).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("R-AN shaping is the identity") {
    const SystemConfig cfg = base_cfg(Beamformer::MRT, AnScheme::RAN);
    const ChannelEstimate est = synthetic_estimate(cfg, {33, 0, "ran"});
    const PrecoderSet pre = build_precoder(cfg, est);
    CHECK((pre.shaping - CMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(pre.zeta == 64.0);
}

TEST_CASE("long-term constants") {
    SUBCASE("MRT normalization at the worked config") {
        SystemConfig cfg = base_cfg(Beamformer::MRT, AnScheme::RAN, 128);
        ChannelEstimate est = estimation_factors(cfg);
        est.sigma_hat_sq.setConstant(0.4725);
        const PowerCoefficients pc = power_coefficients(cfg, est);
        CHECK(pc.eta == doctest::Approx(128 * 10 * 0.4725).epsilon(1e-12));
        CHECK(pc.eta == doctest::Approx(604.8).epsilon(1e-12));
    }
    SUBCASE("ZF normalization and power coefficients") {
        const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::NSAN);
        const ChannelEstimate est = estimation_factors(cfg);
        const PowerCoefficients pc = power_coefficients(cfg, est);
        CHECK(pc.eta == doctest::Approx(est.tr_sigma_inv() / (64 - 10)).epsilon(1e-12));
        CHECK(pc.zeta == 64.0 - 10.0);
        CHECK(pc.c1 ==
              doctest::Approx(std::sqrt(2.0 * cfg.theta * cfg.p_down / (kPi * pc.eta)))
                  .epsilon(1e-12));
        CHECK(pc.c2 == doctest::Approx(std::sqrt(2.0 * (1 - cfg.theta) * cfg.p_down /
                                                 (kPi * pc.zeta)))
                           .epsilon(1e-12));
        CHECK(pc.c3 == doctest::Approx(std::sqrt(cfg.p_down / 64)).epsilon(1e-12));
    }
}

TEST_CASE("mean squared norm of the ZF columns") {
    const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::RAN);
    const ChannelEstimate factors = estimation_factors(cfg);
    RVector acc = RVector::Zero(10);
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const ChannelEstimate est =
            synthetic_estimate(cfg, {34, static_cast<std::uint64_t>(t), "wnorm"});
        const PrecoderSet pre = build_precoder(cfg, est);
        for (int j = 0; j < 10; ++j) acc(j) += pre.w.col(j).squaredNorm();
    }
    for (int j = 0; j < 10; ++j) {
        const double expected = 1.0 / factors.sigma_hat_sq(j) / (64 - 10);
        CHECK(acc(j) / trials == doctest::Approx(expected).epsilon(0.02));
    }
}

TEST_CASE("inverse Wishart expectation") {
    // E[(H~^T H~*)^-1] = I_K / (N - K) for N x K i.i.d. CN(0,1) H~.
    const int N = 64, K = 10, draws = 10000;
    CMatrix acc = CMatrix::Zero(K, K);
    for (int t = 0; t < draws; ++t) {
        const CMatrix h =
            gen_complex_gaussian(N, K, 1.0, {35, static_cast<std::uint64_t>(t), "wishart"});
        const CMatrix gram = h.transpose() * h.conjugate();
        acc += gram.llt().solve(CMatrix::Identity(K, K));
    }
    acc /= static_cast<double>(draws);
    const CMatrix target = CMatrix::Identity(K, K) / (N - K);
    CHECK((acc - target).cwiseAbs().maxCoeff() * (N - K) < 0.03);
}

TEST_CASE("artificial-noise leakage at the legitimate user") {
    const int trials = 10000;
    SUBCASE("NS-AN leaves (N-K)(1-sigma^2)") {
        const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::NSAN);
        const double s2 = estimation_factors(cfg).sigma_hat_sq_k();
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            const SeedSpec seed{36, static_cast<std::uint64_t>(t), "leak"};
            const ChannelEstimate est = synthetic_estimate(cfg, seed);
            const PrecoderSet pre = build_precoder(cfg, est);
            const CVector h_k = consistent_user_channel(cfg, est, seed.with_label("err"));
            acc += (h_k.transpose() * (pre.shaping * h_k.conjugate())).value().real();
        }
        CHECK(acc / trials == doctest::Approx((64 - 10) * (1.0 - s2)).epsilon(0.02));
    }
    SUBCASE("R-AN sees the full channel norm N") {
        const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::RAN);
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            const SeedSpec seed{37, static_cast<std::uint64_t>(t), "leak"};
            const ChannelEstimate est = synthetic_estimate(cfg, seed);
            const CVector h_k = consistent_user_channel(cfg, est, seed.with_label("err"));
            acc += h_k.squaredNorm();
        }
        CHECK(acc / trials == doctest::Approx(64.0).epsilon(0.02));
    }
}

TEST_CASE("rank-deficient estimate is rejected") {
    const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::NSAN);
    ChannelEstimate est = synthetic_estimate(cfg, {38, 0, "rank"});
    est.h_hat.col(3) = est.h_hat.col(7);  // exact collision
    CHECK_THROWS(build_precoder(cfg, est));
}

TEST_CASE("transmit synthesis") {
    const SystemConfig cfg = base_cfg(Beamformer::ZF, AnScheme::NSAN, 128);
    const ChannelEstimate est = synthetic_estimate(cfg, {39, 0, "tx"});
    const PrecoderSet pre = build_precoder(cfg, est);

    SUBCASE("unit average power before the DACs") {
        double acc = 0.0;
        const int trials = 10000;
        SubStream sym({40, 0, "sym"});
        SubStream an({40, 0, "an"});
        CVector s(10), n(128);
        for (int t = 0; t < trials; ++t) {
            for (int j = 0; j < 10; ++j) s(j) = sym.cnormal();
            for (int i = 0; i < 128; ++i) n(i) = an.cnormal();
            acc += synthesize_transmit(cfg, pre, s, n).x_tilde.squaredNorm();
        }
        CHECK(acc / trials == doctest::Approx(1.0).epsilon(0.01));
    }

    SUBCASE("constant envelope carries exactly p_d") {
        SubStream sym({41, 0, "sym"});
        SubStream an({41, 0, "an"});
        CVector s(10), n(128);
        for (int t = 0; t < 20; ++t) {
            for (int j = 0; j < 10; ++j) s(j) = sym.cnormal();
            for (int i = 0; i < 128; ++i) n(i) = an.cnormal();
            const TransmitSignal sig = synthesize_transmit(cfg, pre, s, n);
            CHECK(sig.x.squaredNorm() == doctest::Approx(cfg.p_down).epsilon(1e-12));
        }
    }

    SUBCASE("theta = 1 removes the artificial noise") {
        SystemConfig all_signal = cfg;
        all_signal.theta = 1.0;
        const PrecoderSet pre1 = build_precoder(all_signal, est);
        CVector s = CVector::Ones(10);
        CVector n = CVector::Ones(128);
        const TransmitSignal sig = synthesize_transmit(all_signal, pre1, s, n);
        const CVector expected = std::sqrt(1.0 / pre1.eta) * (pre1.w * s);
        CHECK((sig.x_tilde - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("linearized transmit decomposition") {
    const SystemConfig cfg = base_cfg(Beamformer::MRT, AnScheme::RAN, 128);
    const ChannelEstimate est = synthetic_estimate(cfg, {42, 0, "lin"});
    const PrecoderSet pre = build_precoder(cfg, est);

    SUBCASE("distortion variance and orthogonality") {
        SubStream sym({43, 0, "sym"});
        SubStream an({43, 0, "an"});
        CVector s(10), n(128);
        double var_acc = 0.0;
        std::complex<double> corr = 0.0;
        double xt_var = 0.0;
        int count = 0;
        for (int t = 0; t < 1000; ++t) {  // 128k extracted entries
            for (int j = 0; j < 10; ++j) s(j) = sym.cnormal();
            for (int i = 0; i < 128; ++i) n(i) = an.cnormal();
            const TransmitSignal sig = synthesize_transmit(cfg, pre, s, n);
            const TransmitDecomposition dec = linearized_transmit_decomposition(cfg, pre, sig);
            var_acc += dec.q_bar.squaredNorm();
            corr += (sig.x_tilde.conjugate().cwiseProduct(dec.q_bar)).sum();
            xt_var += sig.x_tilde.squaredNorm();
            count += 128;
            // reconstruction is exact
            const CVector rebuilt = dec.signal_part + dec.an_part + pre.c3 * dec.q_bar;
            CHECK((rebuilt - sig.x).cwiseAbs().maxCoeff() < 1e-12);
        }
        const double var_q = var_acc / count;
        CHECK(var_q > 0.345);
        CHECK(var_q < 0.382);
        CHECK(std::abs(corr) / std::sqrt(var_acc * xt_var) < 0.01);
    }

    SUBCASE("unquantized path has zero distortion") {
        SystemConfig uq = cfg;
        uq.quantized = false;
        const PrecoderSet pre_uq = build_precoder(uq, est);
        CVector s = CVector::Ones(10);
        CVector n = CVector::Ones(128);
        const TransmitSignal sig = synthesize_transmit(uq, pre_uq, s, n);
        const TransmitDecomposition dec = linearized_transmit_decomposition(uq, pre_uq, sig);
        CHECK(dec.q_bar.cwiseAbs().maxCoeff() == 0.0);
        const CVector rebuilt = dec.signal_part + dec.an_part;
        CHECK((rebuilt - sig.x).cwiseAbs().maxCoeff() < 1e-12);
    }
}
