#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace obsec {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Identifies one reproducible random substream. The same triple always
// produces the same draws, independent of how work is split across threads.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
    std::string stream_label;

    SeedSpec with_trial(std::uint64_t t) const { return {master_seed, t, stream_label}; }
    SeedSpec with_label(const std::string& label) const {
        return {master_seed, trial_index, label};
    }
};

// Counter-based generator (Philox4x32-10). The key is derived from the
// master seed, the counter carries (draw index, trial index, label hash),
// so streams for distinct (master_seed, trial_index, stream_label) are
// independent and stateless to construct. Trial indices are separated
// structurally up to 2^32 trials per label.
class SubStream {
  public:
    explicit SubStream(const SeedSpec& seed);

    // Uniform on [0, 1) and (0, 1], 53-bit resolution.
    double uniform();

    // One CN(0, variance) draw: real/imag parts N(0, variance/2) each.
    std::complex<double> cnormal(double variance = 1.0);

    // One N(0, 1) draw.
    double normal();

  private:
    struct Block {
        std::uint32_t x[4];
    };
    Block next_block();

    std::uint32_t key_[2];
    std::uint32_t stream_[2];  // (trial lo32, label hash ^ trial hi32)
    std::uint64_t draw_ = 0;
};

// rows x cols matrix of i.i.d. circularly-symmetric complex Gaussians with
// per-entry variance `variance`. Throws std::invalid_argument on
// non-positive dimensions or variance.
CMatrix gen_complex_gaussian(int rows, int cols, double variance, const SeedSpec& seed);

// Orthogonal unit-modulus pilot set, stored as the K x tau matrix with
// rows psi_j(t) = exp(i 2 pi j t / tau). Satisfies Psi Psi^H = tau I_K.
struct PilotMatrix {
    CMatrix entries;  // K x tau
    int tau = 0;
    int num_users = 0;
};

// Throws std::invalid_argument when tau < num_users.
PilotMatrix gen_pilot_matrix(int tau, int num_users);

}  // namespace obsec
