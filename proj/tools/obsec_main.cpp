// Command-line front end: analytic rate evaluation, Monte Carlo validation,
// parameter sweeps, asymptotic limits, the geometric CDF experiment and the
// canned figure presets. Powers are taken in dB here and converted once.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "obsec/experiment.hpp"

using namespace obsec;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 1;
    int trials = -1;  // -1: keep config/preset default
    int workers = 1;
    int drops = -1;
    bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_drops = false) {
    cmd->add_option("--config", flags.config_path, "JSON experiment description");
    cmd->add_option("--out", flags.out_path, "output CSV path");
    cmd->add_option("--seed", flags.seed, "master seed")->capture_default_str();
    cmd->add_option("--trials", flags.trials, "Monte Carlo channel realizations");
    cmd->add_option("--workers", flags.workers, "worker threads (output is identical for any value)")
        ->capture_default_str();
    if (with_drops) cmd->add_option("--drops", flags.drops, "geometry drops");
    cmd->add_flag("--gnuplot", flags.gnuplot, "also write a <out>.gp plotting script");
}

ExperimentConfig resolve_config(const CommonFlags& flags, Scenario fallback_scenario) {
    ExperimentConfig exp;
    if (!flags.config_path.empty()) {
        exp = load_experiment_config(flags.config_path);
    } else {
        exp.scenario = fallback_scenario;
        exp.base = SystemConfig::symmetric(128, 10, 10, db_to_linear(10.0), db_to_linear(5.0),
                                           db_to_linear(10.0));
        exp.schemes = {{Beamformer::MRT, AnScheme::RAN},
                       {Beamformer::MRT, AnScheme::NSAN},
                       {Beamformer::ZF, AnScheme::RAN},
                       {Beamformer::ZF, AnScheme::NSAN}};
        exp.sweep = {"N", {32, 64, 128, 256}};
        exp.trials.seed = SeedSpec{1, 0, "mc"};
    }
    if (flags.seed != 1 || flags.config_path.empty()) exp.trials.seed.master_seed = flags.seed;
    if (flags.trials >= 0) exp.trials.num_trials = flags.trials;
    if (flags.workers > 0) exp.trials.workers = flags.workers;
    if (flags.drops > 0) exp.num_drops = flags.drops;
    if (!flags.out_path.empty()) exp.output_path = flags.out_path;
    return exp;
}

void print_rows(const std::vector<ResultRow>& rows) {
    std::printf("%-12s %-4s %-6s %-8s %-10s %-10s %-10s %-12s %-10s\n", "sweep", "bf", "an",
                "theta", "r_k", "r_e", "r_s", "r_s_sim", "ci");
    for (const ResultRow& r : rows) {
        std::printf("%-12.6g %-4s %-6s %-8.4f %-10.6f %-10.6f %-10.6f ", r.sweep_value,
                    to_string(r.beamformer).c_str(), to_string(r.an_scheme).c_str(), r.theta,
                    r.r_k_analytic, r.r_e_analytic, r.r_s_analytic);
        if (r.r_s_simulated)
            std::printf("%-12.6f %-10.6f\n", *r.r_s_simulated, *r.ci_halfwidth);
        else
            std::printf("%-12s %-10s\n", "-", "-");
    }
}

int run_single(const CommonFlags& flags, bool simulate) {
    ExperimentConfig exp = resolve_config(flags, Scenario::RATE_VS_N);
    if (exp.sweep.variable.empty())
        exp.sweep = {"N", {static_cast<double>(exp.base.n_antennas)}};
    if (!simulate) exp.trials.num_trials = 0;
    if (simulate && exp.trials.num_trials == 0) exp.trials.num_trials = 2000;

    const auto rows = run_experiment(exp);
    print_rows(rows);

    if (simulate) {
        std::printf("\nper-quantity Monte Carlo detail (base configuration, N=%d):\n",
                    exp.base.n_antennas);
        std::printf("%-4s %-6s %-12s %-12s %-12s %-12s\n", "bf", "an", "rk_sim", "rk_ci",
                    "re_sim", "re_ci");
        for (const SchemePair& s : exp.schemes) {
            SystemConfig cfg = exp.base;
            cfg.beamformer = s.beamformer;
            cfg.an_scheme = s.an_scheme;
            const SimulationSummary sum = simulate_rates(cfg, exp.trials);
            std::printf("%-4s %-6s %-12.6f %-12.6f %-12.6f %-12.6f\n",
                        to_string(s.beamformer).c_str(), to_string(s.an_scheme).c_str(),
                        sum.user_rate.mean, sum.user_rate.ci_halfwidth, sum.eve_rate.mean,
                        sum.eve_rate.ci_halfwidth);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-bit massive MIMO downlink secrecy-rate calculator and simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string preset_name;

    CLI::App* analytic = app.add_subcommand("analytic", "closed-form rates, no simulation");
    add_common(analytic, flags);
    CLI::App* simulate = app.add_subcommand("simulate", "closed-form plus Monte Carlo rates");
    add_common(simulate, flags);
    CLI::App* sweep = app.add_subcommand("sweep", "run a sweep described by --config");
    add_common(sweep, flags);
    CLI::App* asymptote = app.add_subcommand("asymptote", "asymptotic secrecy-rate limits");
    add_common(asymptote, flags);
    CLI::App* cdf = app.add_subcommand("cdf", "geometric CDF experiment");
    add_common(cdf, flags, /*with_drops=*/true);
    CLI::App* preset = app.add_subcommand("preset", "run a canned figure scenario");
    preset->add_option("name", preset_name, "one of fig3..fig10")->required();
    add_common(preset, flags, /*with_drops=*/true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analytic->parsed()) return run_single(flags, false);
        if (simulate->parsed()) return run_single(flags, true);
        if (sweep->parsed()) {
            if (flags.config_path.empty()) throw std::invalid_argument("sweep requires --config");
            const ExperimentConfig exp = resolve_config(flags, Scenario::RATE_VS_N);
            const auto rows = run_experiment(exp);
            print_rows(rows);
            if (flags.gnuplot && !exp.output_path.empty())
                write_gnuplot_script(exp.output_path, exp.output_path + ".gp");
            return 0;
        }
        if (asymptote->parsed()) {
            ExperimentConfig exp = resolve_config(flags, Scenario::ASYMPTOTE);
            exp.scenario = Scenario::ASYMPTOTE;
            if (exp.sweep.variable.empty() || exp.sweep.variable == "N")
                exp.sweep = {"regime", {0, 1, 2}};
            const auto rows = run_experiment(exp);
            print_rows(rows);
            return 0;
        }
        if (cdf->parsed()) {
            ExperimentConfig exp = resolve_config(flags, Scenario::GEOMETRY_CDF);
            exp.scenario = Scenario::GEOMETRY_CDF;
            if (exp.schemes.size() != 1)
                exp.schemes = {{Beamformer::ZF, AnScheme::NSAN}};
            if (exp.sweep.variable != "p_e_dB") exp.sweep = {"p_e_dB", {0, 5, 10}};
            const auto pts = run_geometry_cdf(exp, GeometryModel{}, exp.num_drops);
            std::printf("%zu CDF points", pts.size());
            if (!exp.output_path.empty()) std::printf(" -> %s", exp.output_path.c_str());
            std::printf("\n");
            return 0;
        }
        if (preset->parsed()) {
            const std::string out_base =
                flags.out_path.empty() ? preset_name + ".csv" : flags.out_path;
            for (ExperimentConfig exp : make_preset(preset_name, out_base)) {
                exp.trials.seed.master_seed = flags.seed;
                if (flags.trials >= 0) exp.trials.num_trials = flags.trials;
                exp.trials.workers = flags.workers;
                if (flags.drops > 0) exp.num_drops = flags.drops;
                if (exp.scenario == Scenario::GEOMETRY_CDF) {
                    run_geometry_cdf(exp, GeometryModel{}, exp.num_drops);
                } else {
                    run_experiment(exp);
                    if (flags.gnuplot)
                        write_gnuplot_script(exp.output_path, exp.output_path + ".gp");
                }
                std::printf("wrote %s\n", exp.output_path.c_str());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
