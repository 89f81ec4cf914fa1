#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obsec/montecarlo.hpp"

namespace obsec {

// dB <-> linear conversion; the only place dB values appear inside the
// library is this boundary layer.
double db_to_linear(double x_db);
double linear_to_db(double x);  // throws on non-positive input

enum class Scenario {
    RATE_VS_N,
    SECRECY_VS_THETA,
    USERS_SWEEP,
    KAPPA_SWEEP,
    GEOMETRY_CDF,
    PASSIVE_VS_ACTIVE,
    UQ_COMPARE,
    ASYMPTOTE,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Sweep axis; variable must be one of N, K, theta, p_e_dB, kappa_T_dB,
// regime.
struct SweepAxis {
    std::string variable;
    std::vector<double> values;
};

struct SchemePair {
    Beamformer beamformer;
    AnScheme an_scheme;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::RATE_VS_N;
    SystemConfig base;  // linear-scale; loaders convert from dB
    SweepAxis sweep;
    std::vector<SchemePair> schemes;
    bool optimize_power_split = true;  // per-point theta*; otherwise base.theta
    bool perfect_csi = false;          // passive scenario variant
    ScalingRegime regime = ScalingRegime::NO_PS;  // ASYMPTOTE N-sweeps
    TrialPlan trials;                  // trials.num_trials == 0: analytic only
    int num_drops = 10000;             // geometry CDF
    std::string output_path;
};

struct ResultRow {
    double sweep_value = 0.0;
    Beamformer beamformer = Beamformer::ZF;
    AnScheme an_scheme = AnScheme::NSAN;
    double theta = 0.0;
    double r_k_analytic = 0.0;
    double r_e_analytic = 0.0;
    double r_s_analytic = 0.0;
    std::optional<double> r_s_simulated;
    std::optional<double> ci_halfwidth;
    std::uint64_t seed = 0;
};

// Runs the sweep and, when cfg.output_path is set, writes the CSV
// (header: sweep_value,beamformer,an_scheme,theta,r_k_analytic,
// r_e_analytic,r_s_analytic,r_s_simulated,ci_halfwidth,seed). Output is
// byte-stable for a fixed seed regardless of worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Large-scale fading from the log-distance path-loss law
// beta(d) = (max(d, d0)/d0)^(-exponent). The law itself is an artifact
// choice (flagged in the CSV metadata), not taken from measurements.
struct GeometryModel {
    double cell_radius_m = 1000.0;
    double eve_radius_m = 100.0;
    double pathloss_exponent = 3.8;
    double reference_distance_m = 100.0;

    double beta(double distance_m) const;
};

struct CdfPoint {
    double sweep_value = 0.0;  // eavesdropper power in dB
    double r_s = 0.0;
    double cdf = 0.0;
};

// Random user drops in the cell, eavesdropper near the intercepted user;
// analytic secrecy rate at the per-drop theta*, sorted into an empirical
// CDF per swept eavesdropper power. Writes CSV when output_path is set.
std::vector<CdfPoint> run_geometry_cdf(const ExperimentConfig& cfg, const GeometryModel& geom,
                                       int num_drops);

// Companion gnuplot script for a sweep CSV: one r_s_analytic curve per
// scheme combination, plus simulated points when the column is filled.
void write_gnuplot_script(const std::string& csv_path, const std::string& script_path);

// Canned experiment configurations reproducing the reported scenarios.
// Names: fig3..fig10. A preset may expand to several runs (suffixes on the
// output path distinguish them).
std::vector<ExperimentConfig> make_preset(const std::string& name, const std::string& out_base);
std::vector<std::string> preset_names();

// JSON experiment description (powers in dB); see README for the schema.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace obsec
