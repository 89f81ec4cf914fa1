#include "obsec/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace obsec {

namespace {

// Inverse standard normal CDF (Acklam approximation, ~1e-9 absolute error).
double inv_norm_cdf(double p) {
    if (p <= 0.0 || p >= 1.0) return std::numeric_limits<double>::quiet_NaN();
    static const double a1 = -39.69683028665376, a2 = 220.9460984245205,
                        a3 = -275.9285104469687, a4 = 138.3577518672690,
                        a5 = -30.66479806614716, a6 = 2.506628277459239;
    static const double b1 = -54.47609879822406, b2 = 161.5858368580409,
                        b3 = -155.6989798598866, b4 = 66.80131188771972,
                        b5 = -13.28068155288572;
    static const double c1 = -7.784894002430293e-03, c2 = -3.223964580411365e-01,
                        c3 = -2.400758277161838, c4 = -2.549732539343734,
                        c5 = 4.374664141464968, c6 = 2.938163982698783;
    static const double d1 = 7.784695709041462e-03, d2 = 3.224671290700398e-01,
                        d3 = 2.445134137142996, d4 = 3.754408661907416;
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a1 * r + a2) * r + a3) * r + a4) * r + a5) * r + a6) * q /
           (((((b1 * r + b2) * r + b3) * r + b4) * r + b5) * r + 1);
}

struct TrialStats {
    std::complex<double> hw_k{0.0, 0.0};
    double abs2_hw_k = 0.0;
    double interference = 0.0;  // sum_{j != k} |h_k^T w_j|^2
    double an_user = 0.0;       // h_k^T S h_k*
    double quant_user = 0.0;    // mean over draws of |h_k^T q_bar|^2
    double eve_log_emp = 0.0;
    double eve_log_abs = 0.0;
};

// Compensated (Kahan) accumulator; reduction order is fixed by trial index.
class KahanSum {
  public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

TrialStats run_trial(const SystemConfig& cfg, const TrialPlan& plan, const PilotMatrix& pilots,
                     std::uint64_t trial) {
    const int N = cfg.n_antennas;
    const int k = cfg.intercepted_user;
    SeedSpec base = plan.seed.with_trial(plan.seed.trial_index + trial);

    const ChannelSet channels = draw_channels(cfg, base);
    const CMatrix v = simulate_training(cfg, channels, pilots);
    const ChannelEstimate est = lmmse_estimate(cfg, v, pilots);
    const PrecoderSet pre = build_precoder(cfg, est);

    const CVector& h_k = channels.h.col(k);
    const CVector& g = channels.g;

    TrialStats st;
    const Eigen::RowVectorXcd hw = h_k.transpose() * pre.w;
    st.hw_k = hw(k);
    st.abs2_hw_k = std::norm(hw(k));
    for (int j = 0; j < cfg.num_users; ++j) {
        if (j != k) st.interference += std::norm(hw(j));
    }
    const CVector s_hk_conj = pre.shaping * h_k.conjugate();
    st.an_user = (h_k.transpose() * s_hk_conj).value().real();
    const double g_s_g = (g.transpose() * (pre.shaping * g.conjugate())).value().real();
    const std::complex<double> gw = (g.transpose() * pre.w.col(k)).value();

    double quant_eve = 0.0;
    if (cfg.quantized) {
        SubStream sym(base.with_label(base.stream_label + "/s"));
        SubStream an(base.with_label(base.stream_label + "/an"));
        CVector s(cfg.num_users), n_tilde(N);
        for (int d = 0; d < plan.downlink_draws; ++d) {
            for (int j = 0; j < cfg.num_users; ++j) s(j) = sym.cnormal();
            for (int i = 0; i < N; ++i) n_tilde(i) = an.cnormal();
            const TransmitSignal sig = synthesize_transmit(cfg, pre, s, n_tilde);
            const TransmitDecomposition dec = linearized_transmit_decomposition(cfg, pre, sig);
            st.quant_user += std::norm((h_k.transpose() * dec.q_bar).value());
            quant_eve += std::norm((g.transpose() * dec.q_bar).value());
        }
        st.quant_user /= plan.downlink_draws;
        quant_eve /= plan.downlink_draws;
    }

    const double c1sq = pre.c1 * pre.c1;
    const double c2sq = pre.c2 * pre.c2;
    const double c3sq = pre.c3 * pre.c3;
    const double beta_e = cfg.beta_e;
    const double num = c1sq * beta_e * std::norm(gw);
    const double sq2 = est.bussgang.sigma_q_sq;
    const double sigma_e_emp = c2sq * beta_e * g_s_g + c3sq * beta_e * quant_eve + 1.0;
    const double sigma_e_abs = c2sq * beta_e * g_s_g + c3sq * beta_e * sq2 * g.squaredNorm() + 1.0;
    const double pref = cfg.rate_prefactor();
    st.eve_log_emp = pref * std::log2(1.0 + num / sigma_e_emp);
    st.eve_log_abs = pref * std::log2(1.0 + num / sigma_e_abs);
    return st;
}

std::vector<TrialStats> run_trials(const SystemConfig& cfg, const TrialPlan& plan) {
    cfg.validate();
    if (plan.num_trials < 100)
        throw std::invalid_argument("TrialPlan: num_trials must be >= 100");
    if (plan.downlink_draws < 1)
        throw std::invalid_argument("TrialPlan: downlink_draws must be >= 1");
    const PilotMatrix pilots = gen_pilot_matrix(cfg.tau, cfg.num_users);

    std::vector<TrialStats> stats(plan.num_trials);
    const int workers = std::max(plan.workers, 1);
    if (workers == 1) {
        for (int t = 0; t < plan.num_trials; ++t) stats[t] = run_trial(cfg, plan, pilots, t);
        return stats;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int t = w; t < plan.num_trials; t += workers)
                stats[t] = run_trial(cfg, plan, pilots, t);
        });
    }
    for (auto& th : pool) th.join();
    return stats;
}

struct LegitAccum {
    std::complex<double> sum_hw{0.0, 0.0};
    double sum_abs2 = 0.0;
    double sum_interf = 0.0;
    double sum_an = 0.0;
    double sum_quant = 0.0;
};

double legit_rate_from(const SystemConfig& cfg, const PowerCoefficients& pc,
                       const LegitAccum& acc, double n) {
    const double beta_k = cfg.beta_k();
    const std::complex<double> mean_hw = acc.sum_hw / n;
    const double a_sq = pc.c1 * pc.c1 * beta_k * std::norm(mean_hw);
    const double var = acc.sum_abs2 / n - std::norm(mean_hw);
    const double noise = pc.c1 * pc.c1 * beta_k * (var + acc.sum_interf / n) +
                         pc.c2 * pc.c2 * beta_k * (acc.sum_an / n) +
                         pc.c3 * pc.c3 * beta_k * (acc.sum_quant / n) + 1.0;
    return cfg.rate_prefactor() * std::log2(1.0 + a_sq / noise);
}

SimulationSummary summarize(const SystemConfig& cfg, const TrialPlan& plan,
                            const std::vector<TrialStats>& stats) {
    const int n = static_cast<int>(stats.size());
    const double z = normal_quantile_two_sided(plan.confidence);
    const PowerCoefficients pc = power_coefficients(cfg, estimation_factors(cfg));

    LegitAccum total;
    KahanSum hw_re, hw_im, abs2, interf, an, quant, eve_emp, eve_abs;
    for (const TrialStats& st : stats) {
        hw_re.add(st.hw_k.real());
        hw_im.add(st.hw_k.imag());
        abs2.add(st.abs2_hw_k);
        interf.add(st.interference);
        an.add(st.an_user);
        quant.add(st.quant_user);
        eve_emp.add(st.eve_log_emp);
        eve_abs.add(st.eve_log_abs);
    }
    total.sum_hw = {hw_re.value(), hw_im.value()};
    total.sum_abs2 = abs2.value();
    total.sum_interf = interf.value();
    total.sum_an = an.value();
    total.sum_quant = quant.value();

    SimulationSummary out;
    out.user_rate.num_trials = n;
    out.user_rate.mean = legit_rate_from(cfg, pc, total, n);

    // Jackknife over trials: leave-one-out rates from the totals.
    {
        KahanSum pv_sum, pv_sq;
        for (const TrialStats& st : stats) {
            LegitAccum loo = total;
            loo.sum_hw -= st.hw_k;
            loo.sum_abs2 -= st.abs2_hw_k;
            loo.sum_interf -= st.interference;
            loo.sum_an -= st.an_user;
            loo.sum_quant -= st.quant_user;
            const double r_i = legit_rate_from(cfg, pc, loo, n - 1.0);
            const double pseudo = n * out.user_rate.mean - (n - 1.0) * r_i;
            pv_sum.add(pseudo);
            pv_sq.add(pseudo * pseudo);
        }
        const double mean_pv = pv_sum.value() / n;
        const double var_pv = (pv_sq.value() - n * mean_pv * mean_pv) / (n - 1.0);
        out.user_rate.ci_halfwidth = z * std::sqrt(std::max(var_pv, 0.0) / n);
    }

    auto mean_ci = [&](const KahanSum& sum, auto member) {
        EmpiricalRate r;
        r.num_trials = n;
        r.mean = sum.value() / n;
        KahanSum sq;
        for (const TrialStats& st : stats) {
            const double d = st.*member - r.mean;
            sq.add(d * d);
        }
        r.ci_halfwidth = z * std::sqrt(sq.value() / (n - 1.0) / n);
        return r;
    };
    out.eve_rate = mean_ci(eve_emp, &TrialStats::eve_log_emp);
    out.eve_rate_abstract_qn = mean_ci(eve_abs, &TrialStats::eve_log_abs);

    out.secrecy.num_trials = n;
    out.secrecy.mean = std::max(out.user_rate.mean - out.eve_rate.mean, 0.0);
    out.secrecy.ci_halfwidth = std::hypot(out.user_rate.ci_halfwidth, out.eve_rate.ci_halfwidth);
    return out;
}

}  // namespace

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must be in (0, 1)");
    return inv_norm_cdf(0.5 + confidence / 2.0);
}

SimulationSummary simulate_rates(const SystemConfig& cfg, const TrialPlan& plan) {
    return summarize(cfg, plan, run_trials(cfg, plan));
}

EmpiricalRate simulate_legit_rate(const SystemConfig& cfg, const TrialPlan& plan) {
    return simulate_rates(cfg, plan).user_rate;
}

EmpiricalRate simulate_eve_rate(const SystemConfig& cfg, const TrialPlan& plan) {
    return simulate_rates(cfg, plan).eve_rate;
}

EveRateVariants simulate_eve_rate_variants(const SystemConfig& cfg, const TrialPlan& plan) {
    const SimulationSummary s = simulate_rates(cfg, plan);
    return EveRateVariants{s.eve_rate, s.eve_rate_abstract_qn};
}

EmpiricalRate simulate_secrecy(const SystemConfig& cfg, const TrialPlan& plan) {
    return simulate_rates(cfg, plan).secrecy;
}

}  // namespace obsec
