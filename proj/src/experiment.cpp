#include "obsec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace obsec {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* kCsvHeader =
    "sweep_value,beamformer,an_scheme,theta,r_k_analytic,r_e_analytic,r_s_analytic,"
    "r_s_simulated,ci_halfwidth,seed";

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        out << fmt(r.sweep_value) << ',' << to_string(r.beamformer) << ','
            << to_string(r.an_scheme) << ',' << fmt(r.theta) << ',' << fmt(r.r_k_analytic)
            << ',' << fmt(r.r_e_analytic) << ',' << fmt(r.r_s_analytic) << ',';
        if (r.r_s_simulated) out << fmt(*r.r_s_simulated);
        out << ',';
        if (r.ci_halfwidth) out << fmt(*r.ci_halfwidth);
        out << ',' << r.seed << "\n";
    }
}

bool valid_sweep_variable(const std::string& v) {
    return v == "N" || v == "K" || v == "theta" || v == "p_e_dB" || v == "kappa_T_dB" ||
           v == "regime";
}

// Applies one sweep value to a copy of the base system configuration.
SystemConfig at_sweep_point(const ExperimentConfig& exp, double value) {
    SystemConfig cfg = exp.base;
    const std::string& var = exp.sweep.variable;
    if (var == "N") {
        cfg.n_antennas = static_cast<int>(value);
    } else if (var == "K") {
        const int k = static_cast<int>(value);
        cfg.num_users = k;
        cfg.tau = k;  // tau = K throughout
        cfg.p_users.assign(k, exp.base.p_users.front());
        cfg.betas.assign(k, exp.base.betas.front());
        cfg.intercepted_user = 0;
    } else if (var == "theta") {
        cfg.theta = value;
    } else if (var == "p_e_dB") {
        cfg.p_eve = db_to_linear(value);
    } else if (var == "kappa_T_dB") {
        cfg.p_eve = db_to_linear(value) * cfg.p_users[cfg.intercepted_user];
    } else if (var != "regime") {
        throw std::invalid_argument("unknown sweep variable: " + var);
    }
    if (exp.scenario == Scenario::ASYMPTOTE && var == "N") {
        cfg.p_down = scaled_p_down({exp.regime, exp.base.p_down}, cfg.n_antennas);
    }
    return cfg;
}

RateBundle analytic_bundle(const ExperimentConfig& exp, const SystemConfig& cfg) {
    if (exp.scenario == Scenario::PASSIVE_VS_ACTIVE && cfg.p_eve == 0.0) {
        SystemConfig c = cfg;
        if (exp.optimize_power_split) {
            ChannelEstimate est = estimation_factors(c);
            if (exp.perfect_csi) est.sigma_hat_sq.setOnes();
            c.theta = optimize_theta(c, est).theta_star;
        }
        return secrecy_passive(c, exp.perfect_csi);
    }
    SystemConfig c = cfg;
    if (exp.optimize_power_split) c.theta = optimize_theta(c).theta_star;
    return secrecy_rate(c);
}

}  // namespace

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("linear_to_db: input must be positive");
    return 10.0 * std::log10(x);
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::RATE_VS_N: return "RATE_VS_N";
        case Scenario::SECRECY_VS_THETA: return "SECRECY_VS_THETA";
        case Scenario::USERS_SWEEP: return "USERS_SWEEP";
        case Scenario::KAPPA_SWEEP: return "KAPPA_SWEEP";
        case Scenario::GEOMETRY_CDF: return "GEOMETRY_CDF";
        case Scenario::PASSIVE_VS_ACTIVE: return "PASSIVE_VS_ACTIVE";
        case Scenario::UQ_COMPARE: return "UQ_COMPARE";
        case Scenario::ASYMPTOTE: return "ASYMPTOTE";
    }
    return "RATE_VS_N";
}

Scenario scenario_from_string(const std::string& s) {
    for (Scenario sc : {Scenario::RATE_VS_N, Scenario::SECRECY_VS_THETA, Scenario::USERS_SWEEP,
                        Scenario::KAPPA_SWEEP, Scenario::GEOMETRY_CDF,
                        Scenario::PASSIVE_VS_ACTIVE, Scenario::UQ_COMPARE, Scenario::ASYMPTOTE}) {
        if (to_string(sc) == s) return sc;
    }
    throw std::invalid_argument("unknown scenario: " + s);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& exp) {
    if (!valid_sweep_variable(exp.sweep.variable))
        throw std::invalid_argument("invalid sweep variable: " + exp.sweep.variable);
    if (exp.sweep.values.empty()) throw std::invalid_argument("sweep values must be non-empty");
    if (exp.schemes.empty()) throw std::invalid_argument("no scheme combinations selected");
    if (exp.scenario == Scenario::GEOMETRY_CDF)
        throw std::invalid_argument("GEOMETRY_CDF runs through run_geometry_cdf");
    if (exp.trials.num_trials > 0 && exp.trials.num_trials < 100)
        throw std::invalid_argument("TrialPlan: num_trials must be 0 (analytic) or >= 100");

    std::vector<ResultRow> rows;
    for (double value : exp.sweep.values) {
        for (const SchemePair& scheme : exp.schemes) {
            ResultRow row;
            row.sweep_value = value;
            row.beamformer = scheme.beamformer;
            row.an_scheme = scheme.an_scheme;
            row.seed = exp.trials.seed.master_seed;

            if (exp.scenario == Scenario::ASYMPTOTE && exp.sweep.variable == "regime") {
                SystemConfig cfg = exp.base;
                cfg.beamformer = scheme.beamformer;
                cfg.an_scheme = scheme.an_scheme;
                const auto regime = static_cast<ScalingRegime>(static_cast<int>(value));
                row.theta = exp.base.theta;
                row.r_s_analytic = asymptotic_secrecy(cfg, {regime, exp.base.p_down});
                rows.push_back(row);
                continue;
            }

            SystemConfig cfg = at_sweep_point(exp, value);
            cfg.beamformer = scheme.beamformer;
            cfg.an_scheme = scheme.an_scheme;
            const RateBundle rb = analytic_bundle(exp, cfg);
            row.theta = rb.theta_used;
            row.r_k_analytic = rb.r_k;
            row.r_e_analytic = rb.r_e;
            row.r_s_analytic = rb.r_s;

            const bool simulatable = !(exp.scenario == Scenario::PASSIVE_VS_ACTIVE &&
                                       exp.perfect_csi);
            if (exp.trials.num_trials > 0 && simulatable) {
                SystemConfig sim_cfg = cfg;
                sim_cfg.theta = rb.theta_used;
                const EmpiricalRate er = simulate_secrecy(sim_cfg, exp.trials);
                row.r_s_simulated = er.mean;
                row.ci_halfwidth = er.ci_halfwidth;
            }
            rows.push_back(row);
        }
    }

    if (exp.scenario == Scenario::ASYMPTOTE && exp.sweep.variable == "N") {
        // Closing rows carry the N -> infinity limits.
        for (const SchemePair& scheme : exp.schemes) {
            SystemConfig cfg = exp.base;
            cfg.beamformer = scheme.beamformer;
            cfg.an_scheme = scheme.an_scheme;
            ResultRow row;
            row.sweep_value = std::numeric_limits<double>::infinity();
            row.beamformer = scheme.beamformer;
            row.an_scheme = scheme.an_scheme;
            row.seed = exp.trials.seed.master_seed;
            row.r_s_analytic = asymptotic_secrecy(cfg, {exp.regime, exp.base.p_down});
            rows.push_back(row);
        }
    }

    if (!exp.output_path.empty()) write_rows_csv(exp.output_path, rows);
    return rows;
}

double GeometryModel::beta(double distance_m) const {
    const double d = std::max(distance_m, reference_distance_m);
    return std::pow(d / reference_distance_m, -pathloss_exponent);
}

std::vector<CdfPoint> run_geometry_cdf(const ExperimentConfig& exp, const GeometryModel& geom,
                                       int num_drops) {
    if (exp.scenario != Scenario::GEOMETRY_CDF)
        throw std::invalid_argument("run_geometry_cdf: scenario must be GEOMETRY_CDF");
    if (num_drops < 1) throw std::invalid_argument("run_geometry_cdf: num_drops must be >= 1");
    if (exp.sweep.variable != "p_e_dB")
        throw std::invalid_argument("run_geometry_cdf: sweep variable must be p_e_dB");
    if (exp.sweep.values.empty()) throw std::invalid_argument("sweep values must be non-empty");
    if (exp.schemes.size() != 1)
        throw std::invalid_argument("run_geometry_cdf: exactly one scheme combination");

    const int K = exp.base.num_users;
    std::vector<CdfPoint> points;
    points.reserve(exp.sweep.values.size() * num_drops);

    // Positions are drawn per drop index, shared across the p_e sweep.
    std::vector<std::vector<double>> betas(num_drops);
    std::vector<double> beta_eve(num_drops);
    for (int drop = 0; drop < num_drops; ++drop) {
        SubStream stream(exp.trials.seed.with_trial(drop).with_label("geo"));
        std::vector<double> b(K);
        double user_k_x = 0.0, user_k_y = 0.0;
        for (int j = 0; j < K; ++j) {
            const double r = geom.cell_radius_m * std::sqrt(stream.uniform());
            const double phi = 2.0 * std::numbers::pi * stream.uniform();
            const double x = r * std::cos(phi), y = r * std::sin(phi);
            b[j] = geom.beta(std::hypot(x, y));
            if (j == exp.base.intercepted_user) {
                user_k_x = x;
                user_k_y = y;
            }
        }
        const double re = geom.eve_radius_m * std::sqrt(stream.uniform());
        const double pe_phi = 2.0 * std::numbers::pi * stream.uniform();
        beta_eve[drop] = geom.beta(
            std::hypot(user_k_x + re * std::cos(pe_phi), user_k_y + re * std::sin(pe_phi)));
        betas[drop] = std::move(b);
    }

    for (double pe_db : exp.sweep.values) {
        std::vector<double> rs(num_drops);
        for (int drop = 0; drop < num_drops; ++drop) {
            SystemConfig cfg = exp.base;
            cfg.beamformer = exp.schemes.front().beamformer;
            cfg.an_scheme = exp.schemes.front().an_scheme;
            cfg.betas = betas[drop];
            cfg.beta_e = beta_eve[drop];
            cfg.p_eve = db_to_linear(pe_db);
            const ThetaOpt opt = optimize_theta(cfg);
            rs[drop] = opt.r_s_max;
        }
        std::sort(rs.begin(), rs.end());
        for (int i = 0; i < num_drops; ++i) {
            points.push_back({pe_db, rs[i], static_cast<double>(i + 1) / num_drops});
        }
    }

    if (!exp.output_path.empty()) {
        std::ofstream out(exp.output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + exp.output_path);
        out << "# pathloss=log-distance exponent=" << fmt(geom.pathloss_exponent)
            << " reference_m=" << fmt(geom.reference_distance_m)
            << " cell_radius_m=" << fmt(geom.cell_radius_m)
            << " eve_radius_m=" << fmt(geom.eve_radius_m) << " (artifact-defined model)\n";
        out << "sweep_value,r_s,cdf\n";
        for (const CdfPoint& p : points)
            out << fmt(p.sweep_value) << ',' << fmt(p.r_s) << ',' << fmt(p.cdf) << "\n";
    }
    return points;
}

void write_gnuplot_script(const std::string& csv_path, const std::string& script_path) {
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + script_path);
    out << "set datafile separator ','\n"
        << "set xlabel 'sweep value'\n"
        << "set ylabel 'secrecy rate [bits/s/Hz]'\n"
        << "set key outside\n"
        << "bfs = 'MRT ZF'\n"
        << "ans = 'R-AN NS-AN'\n"
        << "file = '" << csv_path << "'\n"
        << "plot for [b in bfs] for [a in ans] file \\\n"
        << "    using 1:((stringcolumn(2) eq b && stringcolumn(3) eq a) ? $7 : 1/0) \\\n"
        << "    with linespoints title b.'/'.a, \\\n"
        << "  for [b in bfs] for [a in ans] file \\\n"
        << "    using 1:((stringcolumn(2) eq b && stringcolumn(3) eq a) ? $8 : 1/0) \\\n"
        << "    with points pt 6 notitle\n";
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

ExperimentConfig preset_base() {
    ExperimentConfig exp;
    exp.base = SystemConfig::symmetric(128, 10, 10, db_to_linear(10.0), 0.0, db_to_linear(10.0));
    exp.schemes = {{Beamformer::MRT, AnScheme::RAN},
                   {Beamformer::MRT, AnScheme::NSAN},
                   {Beamformer::ZF, AnScheme::RAN},
                   {Beamformer::ZF, AnScheme::NSAN}};
    exp.trials.num_trials = 0;
    exp.trials.seed = SeedSpec{1, 0, "mc"};
    return exp;
}

std::string with_suffix(const std::string& base, const std::string& suffix) {
    const auto dot = base.rfind('.');
    if (dot == std::string::npos) return base + suffix + ".csv";
    return base.substr(0, dot) + suffix + base.substr(dot);
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

std::vector<ExperimentConfig> make_preset(const std::string& name, const std::string& out_base) {
    std::vector<ExperimentConfig> out;
    if (name == "fig3") {
        // Analytic vs simulated user/eavesdropper bounds, NS-AN, theta = 0.5.
        ExperimentConfig exp = preset_base();
        exp.scenario = Scenario::RATE_VS_N;
        exp.base.p_eve = db_to_linear(5.0);
        exp.base.theta = 0.5;
        exp.optimize_power_split = false;
        exp.schemes = {{Beamformer::MRT, AnScheme::NSAN}, {Beamformer::ZF, AnScheme::NSAN}};
        exp.sweep = {"N", {32, 64, 128, 256}};
        exp.trials.num_trials = 2000;
        exp.output_path = out_base;
        out.push_back(exp);
    } else if (name == "fig4") {
        // Secrecy rate against the power split, one file per antenna count.
        for (int n : {32, 64, 128, 256}) {
            ExperimentConfig exp = preset_base();
            exp.scenario = Scenario::SECRECY_VS_THETA;
            exp.base.n_antennas = n;
            exp.base.p_eve = db_to_linear(7.0);
            exp.optimize_power_split = false;
            exp.sweep = {"theta", linspace(0.02, 0.98, 49)};
            exp.output_path = with_suffix(out_base, "_n" + std::to_string(n));
            out.push_back(exp);
        }
    } else if (name == "fig5") {
        ExperimentConfig exp = preset_base();
        exp.scenario = Scenario::USERS_SWEEP;
        exp.base.p_eve = db_to_linear(5.0);
        exp.sweep = {"K", {5, 10, 15, 20, 25, 30, 35, 40}};
        exp.output_path = out_base;
        out.push_back(exp);
    } else if (name == "fig6") {
        ExperimentConfig exp = preset_base();
        exp.scenario = Scenario::KAPPA_SWEEP;
        exp.base.n_antennas = 64;
        exp.sweep = {"kappa_T_dB", {-10, -8, -6, -4, -3, -2, -1, 0}};
        exp.output_path = out_base;
        out.push_back(exp);
    } else if (name == "fig7") {
        ExperimentConfig exp = preset_base();
        exp.scenario = Scenario::GEOMETRY_CDF;
        exp.schemes = {{Beamformer::ZF, AnScheme::NSAN}};
        exp.sweep = {"p_e_dB", {0, 5, 10}};
        exp.num_drops = 10000;
        exp.output_path = out_base;
        out.push_back(exp);
    } else if (name == "fig8") {
        // Active vs passive eavesdropping, ZF-BF with NS-AN.
        for (const auto& [suffix, pe_db, pcsi] :
             std::vector<std::tuple<std::string, double, bool>>{
                 {"_active", 5.0, false}, {"_picsi", 0.0, false}, {"_ppcsi", 0.0, true}}) {
            ExperimentConfig exp = preset_base();
            exp.scenario = Scenario::PASSIVE_VS_ACTIVE;
            exp.base.p_eve = pe_db > 0.0 ? db_to_linear(pe_db) : 0.0;
            exp.perfect_csi = pcsi;
            exp.schemes = {{Beamformer::ZF, AnScheme::NSAN}};
            exp.sweep = {"N", {32, 64, 128, 256, 512}};
            exp.output_path = with_suffix(out_base, suffix);
            out.push_back(exp);
        }
    } else if (name == "fig9") {
        for (bool quantized : {true, false}) {
            ExperimentConfig exp = preset_base();
            exp.scenario = Scenario::UQ_COMPARE;
            exp.base.p_eve = db_to_linear(7.0);
            exp.base.quantized = quantized;
            exp.sweep = {"N", {32, 64, 128, 256, 512}};
            exp.output_path = with_suffix(out_base, quantized ? "_quantized" : "_unquantized");
            out.push_back(exp);
        }
    } else if (name == "fig10") {
        for (const auto& [suffix, regime] : std::vector<std::pair<std::string, ScalingRegime>>{
                 {"_nops", ScalingRegime::NO_PS},
                 {"_ps1", ScalingRegime::PS1},
                 {"_ps2", ScalingRegime::PS2}}) {
            ExperimentConfig exp = preset_base();
            exp.scenario = Scenario::ASYMPTOTE;
            exp.base.p_eve = db_to_linear(8.0);  // kappa_T = -2 dB
            exp.regime = regime;
            std::vector<double> ns;
            for (int p = 5; p <= 30; ++p) ns.push_back(std::pow(2.0, p));
            exp.sweep = {"N", ns};
            exp.output_path = with_suffix(out_base, suffix);
            out.push_back(exp);
        }
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return out;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;

    ExperimentConfig exp;
    exp.scenario = scenario_from_string(j.value("scenario", std::string("RATE_VS_N")));

    const int K = j.value("num_users", 10);
    exp.base = SystemConfig::symmetric(
        j.value("n_antennas", 128), K, j.value("tau", K),
        db_to_linear(j.value("p_user_db", 10.0)),
        j.contains("p_eve_db") ? db_to_linear(j["p_eve_db"].get<double>()) : 0.0,
        db_to_linear(j.value("p_down_db", 10.0)), j.value("beta_user", 1.0),
        j.value("beta_eve", 1.0));
    exp.base.theta = j.value("theta", 0.5);
    exp.base.quantized = j.value("quantized", true);
    if (j.contains("coherence_tc")) exp.base.coherence_tc = j["coherence_tc"].get<int>();

    exp.optimize_power_split = j.value("optimize_theta", true);
    exp.perfect_csi = j.value("perfect_csi", false);
    if (j.contains("regime")) {
        const std::string r = j["regime"].get<std::string>();
        if (r == "NO_PS") exp.regime = ScalingRegime::NO_PS;
        else if (r == "PS1") exp.regime = ScalingRegime::PS1;
        else if (r == "PS2") exp.regime = ScalingRegime::PS2;
        else throw std::invalid_argument("unknown regime: " + r);
    }

    exp.schemes.clear();
    const auto bfs = j.value("beamformers", std::vector<std::string>{"MRT", "ZF"});
    const auto ans = j.value("an_schemes", std::vector<std::string>{"R-AN", "NS-AN"});
    for (const auto& b : bfs)
        for (const auto& a : ans)
            exp.schemes.push_back({beamformer_from_string(b), an_scheme_from_string(a)});

    if (j.contains("sweep")) {
        exp.sweep.variable = j["sweep"].value("variable", std::string());
        exp.sweep.values = j["sweep"].value("values", std::vector<double>{});
    }
    exp.trials.num_trials = j.value("trials", 0);
    exp.trials.seed = SeedSpec{j.value("seed", std::uint64_t{1}), 0, "mc"};
    exp.trials.confidence = j.value("confidence", 0.95);
    exp.trials.workers = j.value("workers", 1);
    exp.num_drops = j.value("drops", 10000);
    exp.output_path = j.value("out", std::string());
    return exp;
}

}  // namespace obsec
