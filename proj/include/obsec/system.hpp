#pragma once

#include <optional>
#include <string>
#include <vector>

namespace obsec {

enum class Beamformer { MRT, ZF };
enum class AnScheme { RAN, NSAN };

std::string to_string(Beamformer bf);
std::string to_string(AnScheme an);
Beamformer beamformer_from_string(const std::string& s);
AnScheme an_scheme_from_string(const std::string& s);

// All scalar system parameters. Powers and large-scale fading coefficients
// are linear scale; dB conversion happens only at the CLI boundary.
struct SystemConfig {
    int n_antennas = 128;           // N
    int num_users = 10;             // K
    int tau = 10;                   // pilot length, tau >= K
    std::vector<double> p_users;    // K uplink transmit powers p_j
    double p_eve = 0.0;             // eavesdropper pilot power p_e
    double p_down = 10.0;           // BS transmit power p_d
    std::vector<double> betas;      // K large-scale coefficients beta_j
    double beta_e = 1.0;
    double theta = 0.5;             // power fraction for the beamformed signal
    int intercepted_user = 0;       // 0-based index k
    Beamformer beamformer = Beamformer::ZF;
    AnScheme an_scheme = AnScheme::NSAN;
    bool quantized = true;          // one-bit ADC/DAC vs infinite resolution
    std::optional<int> coherence_tc;  // applies the (1 - tau/T_c) rate factor when set

    // Convenience constructor for the symmetric setups used throughout:
    // equal user powers and equal large-scale fading.
    static SystemConfig symmetric(int n_antennas, int num_users, int tau, double p_user,
                                  double p_eve, double p_down, double beta = 1.0,
                                  double beta_e = 1.0);

    void validate() const;  // throws std::invalid_argument on violations

    double received_power(int j) const { return betas[j] * p_users[j]; }
    double received_power_eve() const { return beta_e * p_eve; }
    double beta_k() const { return betas[intercepted_user]; }
    // Received power ratio beta_e p_e / (beta_k p_k).
    double kappa_r() const { return received_power_eve() / received_power(intercepted_user); }
    // Transmit power ratio p_e / p_k.
    double kappa_t() const { return p_eve / p_users[intercepted_user]; }
    // Fraction of the coherence block carrying downlink data; 1 unless
    // coherence_tc is set.
    double rate_prefactor() const {
        return coherence_tc ? 1.0 - static_cast<double>(tau) / *coherence_tc : 1.0;
    }
};

}  // namespace obsec
