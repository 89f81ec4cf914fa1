#include "obsec/system.hpp"

#include <cmath>
#include <stdexcept>

namespace obsec {

std::string to_string(Beamformer bf) { return bf == Beamformer::MRT ? "MRT" : "ZF"; }

std::string to_string(AnScheme an) { return an == AnScheme::RAN ? "R-AN" : "NS-AN"; }

Beamformer beamformer_from_string(const std::string& s) {
    if (s == "MRT" || s == "mrt") return Beamformer::MRT;
    if (s == "ZF" || s == "zf") return Beamformer::ZF;
    throw std::invalid_argument("unknown beamformer: " + s);
}

AnScheme an_scheme_from_string(const std::string& s) {
    if (s == "R-AN" || s == "R" || s == "r-an" || s == "ran") return AnScheme::RAN;
    if (s == "NS-AN" || s == "NS" || s == "ns-an" || s == "nsan") return AnScheme::NSAN;
    throw std::invalid_argument("unknown artificial-noise scheme: " + s);
}

SystemConfig SystemConfig::symmetric(int n_antennas, int num_users, int tau, double p_user,
                                     double p_eve, double p_down, double beta, double beta_e) {
    SystemConfig cfg;
    cfg.n_antennas = n_antennas;
    cfg.num_users = num_users;
    cfg.tau = tau;
    cfg.p_users.assign(num_users, p_user);
    cfg.p_eve = p_eve;
    cfg.p_down = p_down;
    cfg.betas.assign(num_users, beta);
    cfg.beta_e = beta_e;
    return cfg;
}

void SystemConfig::validate() const {
    if (num_users < 1) throw std::invalid_argument("SystemConfig: num_users must be >= 1");
    if (tau < num_users) throw std::invalid_argument("SystemConfig: tau must be >= num_users");
    if (n_antennas <= num_users)
        throw std::invalid_argument("SystemConfig: n_antennas must exceed num_users");
    if (!(theta > 0.0) || theta > 1.0)
        throw std::invalid_argument("SystemConfig: theta must be in (0, 1]");
    if (static_cast<int>(p_users.size()) != num_users ||
        static_cast<int>(betas.size()) != num_users)
        throw std::invalid_argument("SystemConfig: p_users/betas must have num_users entries");
    if (intercepted_user < 0 || intercepted_user >= num_users)
        throw std::invalid_argument("SystemConfig: intercepted_user out of range");
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    for (double p : p_users)
        if (!finite_pos(p)) throw std::invalid_argument("SystemConfig: user powers must be > 0");
    for (double b : betas)
        if (!finite_pos(b)) throw std::invalid_argument("SystemConfig: betas must be > 0");
    if (!finite_pos(p_down)) throw std::invalid_argument("SystemConfig: p_down must be > 0");
    if (!finite_pos(beta_e)) throw std::invalid_argument("SystemConfig: beta_e must be > 0");
    if (!(std::isfinite(p_eve) && p_eve >= 0.0))
        throw std::invalid_argument("SystemConfig: p_eve must be >= 0");
    if (coherence_tc && *coherence_tc <= tau)
        throw std::invalid_argument("SystemConfig: coherence_tc must exceed tau");
}

}  // namespace obsec
