#pragma once

#include <memory>
#include <vector>

#include "edcp/coset.hpp"

namespace edcp {

// A dihedral phase state (|0> + w_q^{<y,s>} |1>) / sqrt(2). The label y is
// public; the phase value stays behind the secret handle. Move-only, like
// every other quantum state here.
class PhaseState {
  public:
    PhaseState(const PhaseState&) = delete;
    PhaseState& operator=(const PhaseState&) = delete;
    PhaseState(PhaseState&& o) noexcept;
    PhaseState& operator=(PhaseState&& o) noexcept;

    bool valid() const { return valid_; }
    u64 q() const { return core_->params.q.q; }
    const ZqVector& label() const { return label_; }

    StateVector to_dense() const;

  private:
    friend struct PhaseOps;
    PhaseState() = default;
    std::shared_ptr<const SecretCore> core_;
    ZqVector label_;
    bool valid_ = false;
};

struct PhaseSampleStats {
    PhaseState state;
    int samples_used = 0;
};

// EDCP sample -> two-term coset state -> Fourier-measured second register:
// a dihedral phase state with a uniform label.
PhaseSampleStats edcp_to_phase(Challenger& challenger);

struct CombineOutcome {
    bool success = false;   // difference branch selected
    PhaseState state;       // label a.y - b.y on success, a.y + b.y otherwise
};

// CNOT the two states and measure the target: with probability 1/2 the
// surviving state carries the label difference. Both inputs are consumed.
CombineOutcome sieve_combine(PhaseState a, PhaseState b, Rng& rng);

// ---------------------------------------------------------------------------
// Pretty good measurement
// ---------------------------------------------------------------------------

// PGM over the t-fold tensor of phase states whose labels are zero outside
// the last coordinate. Builds the joint state, forms the PGM from the q
// candidate states (uniform prior, Gram-matrix square root with eigenvalue
// floor 1e-10) and samples an outcome.
u64 pgm_recover(std::vector<PhaseState> states, Rng& rng);

// Exact outcome probabilities of the PGM given the true last-coordinate
// secret value behind the states.
std::vector<double> pgm_outcome_distribution(const std::vector<PhaseState>& states);

// Dense POVM completeness check: max |sum_v E_v + E_perp - 1| entry. Only for
// 2^t within the density cap.
double pgm_povm_completeness_error(const std::vector<ZqVector>& labels, u64 q);

// ---------------------------------------------------------------------------
// Kuperberg-style sieve
// ---------------------------------------------------------------------------

struct SieveStats {
    u64 recovered = 0;
    std::vector<std::size_t> stage_pool_sizes;  // pool entering each stage
    std::vector<std::size_t> stage_survivors;
    std::size_t samples_used = 0;
    std::size_t pgm_states = 0;
};

// Staged sieve zeroing block_size label coordinates per stage until only the
// target coordinate remains, then PGM on the survivors. Recovers s_coord.
SieveStats kuperberg_recover(Challenger& challenger, std::size_t coord, std::size_t block_size,
                             double pool_exponent, Rng& rng);

// ---------------------------------------------------------------------------
// r = q Fourier attack
// ---------------------------------------------------------------------------

struct FourierAttackResult {
    ZqVector secret;
    std::size_t samples_used = 0;
};

// With r = q every sample Fourier-reads one exact linear equation
// <u, s> mod q; 4n equations pin s with high probability.
FourierAttackResult fourier_attack_r_eq_q(Challenger& challenger, int max_rounds = 8);

}  // namespace edcp
