#include "obsec/rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obsec {

namespace {

constexpr double kPi = std::numbers::pi;

inline double log2_1p(double x) { return std::log2(1.0 + x); }
inline double clamp_pos(double x) { return x > 0.0 ? x : 0.0; }

// Shared ingredients of the rate bounds after the quantized/unquantized
// substitution (p_d is already the effective one).
struct RateTerms {
    double p_d;       // effective downlink power
    double sq2;       // quantization-noise variance
    double s2;        // sigma_hat_k^2
    double kappa_r;
    double beta_k;
    double beta_e;
    double theta;
};

RateTerms make_terms(const SystemConfig& cfg, const ChannelEstimate& est) {
    RateTerms t;
    t.p_d = cfg.quantized ? cfg.p_down : cfg.p_down * kPi / 2.0;
    t.sq2 = est.bussgang.sigma_q_sq;
    t.s2 = est.sigma_hat_sq_k();
    t.kappa_r = est.kappa_r;
    t.beta_k = cfg.beta_k();
    t.beta_e = cfg.beta_e;
    t.theta = cfg.theta;
    return t;
}

double an_leakage_user(const RateTerms& t, AnScheme an) {
    const double base = 2.0 * (1.0 - t.theta) * t.beta_k * t.p_d / kPi;
    return an == AnScheme::RAN ? base : base * (1.0 - t.s2);
}

double an_leakage_eve(const RateTerms& t, AnScheme an) {
    const double base = 2.0 * (1.0 - t.theta) * t.beta_e * t.p_d / kPi;
    return an == AnScheme::RAN ? base : base * (1.0 - t.kappa_r * t.s2);
}

double user_sinr(const SystemConfig& cfg, const ChannelEstimate& est, const RateTerms& t,
                 double p_an) {
    const int N = cfg.n_antennas;
    const int K = cfg.num_users;
    if (cfg.beamformer == Beamformer::MRT) {
        const double num = 2.0 * t.theta * t.beta_k * t.s2 * t.s2 * t.p_d * N /
                           (kPi * est.tr_sigma());
        const double den = 2.0 * t.theta * t.beta_k * t.p_d / kPi + p_an +
                           t.beta_k * t.sq2 * t.p_d + 1.0;
        return num / den;
    }
    const double num =
        2.0 * t.theta * t.beta_k * t.p_d * (N - K) / (kPi * est.tr_sigma_inv());
    const double den = 2.0 * t.theta * t.beta_k * t.p_d * (1.0 - t.s2) / kPi + p_an +
                       t.beta_k * t.sq2 * t.p_d + 1.0;
    return num / den;
}

double eve_sinr(const SystemConfig& cfg, const ChannelEstimate& est, const RateTerms& t,
                double p_an) {
    const int N = cfg.n_antennas;
    const int K = cfg.num_users;
    const double den_common = p_an + t.beta_e * t.p_d * t.sq2 + 1.0;
    if (cfg.beamformer == Beamformer::MRT) {
        const double num =
            2.0 * t.theta * t.beta_e * t.p_d * t.s2 * (t.kappa_r * t.s2 * N + 1.0);
        return num / (kPi * est.tr_sigma() * den_common);
    }
    const double num = 2.0 * t.theta * t.beta_e * t.p_d *
                       (t.kappa_r * (N - K - 1.0) + 1.0 / t.s2);
    return num / (kPi * est.tr_sigma_inv() * den_common);
}

RateBundle assemble(const SystemConfig& cfg, const ChannelEstimate& est) {
    const RateTerms t = make_terms(cfg, est);
    RateBundle rb;
    rb.theta_used = cfg.theta;
    rb.p_an_user = an_leakage_user(t, cfg.an_scheme);
    rb.p_an_eve = an_leakage_eve(t, cfg.an_scheme);
    const double pre = cfg.rate_prefactor();
    rb.r_k = pre * log2_1p(user_sinr(cfg, est, t, rb.p_an_user));
    rb.r_e = pre * log2_1p(eve_sinr(cfg, est, t, rb.p_an_eve));
    rb.r_s = clamp_pos(rb.r_k - rb.r_e);
    return rb;
}

}  // namespace

double scaled_p_down(const AsymptoteSpec& spec, double n_antennas) {
    switch (spec.regime) {
        case ScalingRegime::NO_PS: return spec.rho;
        case ScalingRegime::PS1: return spec.rho / std::sqrt(n_antennas);
        case ScalingRegime::PS2: return spec.rho / n_antennas;
    }
    return spec.rho;
}

double rate_user_theorem1(const SystemConfig& cfg, const ChannelEstimate& est) {
    const RateTerms t = make_terms(cfg, est);
    return cfg.rate_prefactor() *
           log2_1p(user_sinr(cfg, est, t, an_leakage_user(t, cfg.an_scheme)));
}

double rate_eve_theorem2(const SystemConfig& cfg, const ChannelEstimate& est) {
    const RateTerms t = make_terms(cfg, est);
    return cfg.rate_prefactor() *
           log2_1p(eve_sinr(cfg, est, t, an_leakage_eve(t, cfg.an_scheme)));
}

RateBundle secrecy_rate(const SystemConfig& cfg, const ChannelEstimate& est) {
    return assemble(cfg, est);
}

RateBundle secrecy_rate(const SystemConfig& cfg) {
    return assemble(cfg, estimation_factors(cfg));
}

RateBundle secrecy_passive(const SystemConfig& cfg, bool perfect_csi) {
    if (cfg.p_eve != 0.0)
        throw std::invalid_argument("secrecy_passive: requires p_eve == 0");
    ChannelEstimate est = estimation_factors(cfg);
    if (perfect_csi) {
        est.sigma_hat_sq.setOnes();
    }
    return assemble(cfg, est);
}

RateBundle secrecy_unquantized(const SystemConfig& cfg) {
    SystemConfig uq = cfg;
    uq.quantized = false;
    return assemble(uq, estimation_factors(uq));
}

double asymptotic_secrecy(const SystemConfig& cfg, const AsymptoteSpec& spec) {
    const ChannelEstimate est = estimation_factors(cfg);
    const double s2 = est.sigma_hat_sq_k();
    const double sq2 = est.bussgang.sigma_q_sq;
    const double beta_k = cfg.beta_k();
    const double beta_e = cfg.beta_e;
    const double kappa_r = est.kappa_r;
    const double rho = cfg.quantized ? spec.rho : spec.rho * kPi / 2.0;
    const double pre = cfg.rate_prefactor();

    switch (spec.regime) {
        case ScalingRegime::NO_PS: {
            // Maximizer theta -> 0; limit depends on the AN scheme only.
            double num, den;
            if (cfg.an_scheme == AnScheme::RAN) {
                num = beta_k * (rho * beta_e * (kPi * sq2 + 2.0) + kPi);
                den = kappa_r * beta_e * (rho * beta_k * (kPi * sq2 + 2.0) + kPi);
            } else {
                num = beta_k * (rho * beta_e * (kPi * sq2 + 2.0 - 2.0 * kappa_r * s2) + kPi);
                den = kappa_r * beta_e * (rho * beta_k * (kPi * sq2 + 2.0 - 2.0 * s2) + kPi);
            }
            return clamp_pos(pre * std::log2(num / den));
        }
        case ScalingRegime::PS1:
            return clamp_pos(pre * std::log2(beta_k / (kappa_r * beta_e)));
        case ScalingRegime::PS2: {
            if (cfg.beamformer == Beamformer::MRT) {
                const double tr = est.tr_sigma();
                return clamp_pos(pre * std::log2((kPi * tr + 2.0 * beta_k * s2 * s2 * rho) /
                                                 (kPi * tr + 2.0 * beta_e * s2 * s2 * kappa_r * rho)));
            }
            const double tri = est.tr_sigma_inv();
            return clamp_pos(pre * std::log2((kPi * tri + 2.0 * beta_k * rho) /
                                             (kPi * tri + 2.0 * beta_e * kappa_r * rho)));
        }
    }
    return 0.0;
}

double positivity_threshold(const SystemConfig& cfg, const AsymptoteSpec& spec) {
    const double beta_k = cfg.beta_k();
    const double beta_e = cfg.beta_e;
    if (spec.regime != ScalingRegime::NO_PS) {
        const double r = beta_k / beta_e;
        return r * r;
    }
    const double sq2 = cfg.quantized ? kQuantNoiseVariance : 0.0;
    const double rho = cfg.quantized ? spec.rho : spec.rho * kPi / 2.0;
    return 1.0 + kPi * beta_k * (beta_k - beta_e) /
                     ((rho * beta_k * (kPi * sq2 + 2.0) + kPi) * beta_e * beta_e);
}

ThetaOpt optimize_theta(const SystemConfig& cfg, const ChannelEstimate& est) {
    constexpr double kLo = 1e-4;
    constexpr double kHi = 1.0 - 1e-4;
    constexpr int kGridPoints = 2000;

    auto value = [&](double theta) {
        SystemConfig c = cfg;
        c.theta = theta;
        return assemble(c, est).r_s;
    };

    int best = 0;
    double best_val = -1.0;
    const double step = (kHi - kLo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
        const double v = value(kLo + i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = kLo + std::max(best - 1, 0) * step;
    double b = kLo + std::min(best + 1, kGridPoints - 1) * step;

    constexpr double kGolden = 0.6180339887498949;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = value(c);
    double fd = value(d);
    while (b - a > 1e-6) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = value(d);
        }
    }
    ThetaOpt opt;
    opt.theta_star = 0.5 * (a + b);
    opt.r_s_max = value(opt.theta_star);
    if (best_val > opt.r_s_max) {  // grid point can beat the refined midpoint
        opt.theta_star = kLo + best * step;
        opt.r_s_max = best_val;
    }
    return opt;
}

ThetaOpt optimize_theta(const SystemConfig& cfg) {
    return optimize_theta(cfg, estimation_factors(cfg));
}

}  // namespace obsec
