#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "edcp/modmath.hpp"
#include "edcp/rng.hpp"
#include "edcp/statevec.hpp"

namespace edcp {

// Problem parameters: states live on Z_r x Z_q^n and phases use the
// distinguished prime divisor p of q.
struct EdcpParams {
    std::size_t n = 1;
    Modulus q;
    u64 r = 2;
    u64 p = 2;

    EdcpParams() = default;
    EdcpParams(std::size_t n_, Modulus q_, u64 r_, u64 p_);

    void validate() const;
    bool p_divides_q() const;
};

// Immutable secret holder shared between a challenger and the states it
// issued. States keep the core alive; the challenger's RNG stays with the
// challenger (single owner).
struct SecretCore {
    EdcpParams params;
    ZqVector secret;
};

class CosetState;

// Issues coset-state samples for a hidden uniform secret and resolves
// secret-dependent measurements. Adversary-facing results never include the
// secret; the *_for_verification accessors exist for tests and experiment
// harnesses only.
class Challenger {
  public:
    Challenger(EdcpParams params, u64 seed);
    // Fixed-secret construction (deserialization, key generation, tests).
    Challenger(EdcpParams params, ZqVector secret, u64 seed);

    // Fresh sample: uniform offset, full support [0, r), phase w_p^{jt} when
    // t is given (t = 0 and absent produce the identical unphased state).
    CosetState sample(std::optional<u64> phase_t = std::nullopt);

    // Fixed-offset variant used by oracle bridges and tests.
    CosetState sample_with_offset(ZqVector x, std::optional<u64> phase_t = std::nullopt);

    const EdcpParams& params() const { return core_->params; }
    const std::shared_ptr<const SecretCore>& core() const { return core_; }
    const ZqVector& secret_for_verification() const { return core_->secret; }
    Rng& rng() { return rng_; }

  private:
    std::shared_ptr<const SecretCore> core_;
    Rng rng_;
};

// Symbolic exact representation of every structured state the procedures
// produce: an arithmetic-progression support over the first register, a
// linear phase over the support index, and a hidden-secret-dependent second
// register x + j*s. States are move-only; every operation consumes its input
// and returns the successor, so obtaining another copy requires a fresh
// challenger sample.
class CosetState {
  public:
    struct Support {
        u64 stride = 1;
        u64 base = 0;
        u64 count = 1;
    };
    // amplitude of support index i is w_M^{slope*i} / sqrt(count); the
    // intercept of every phase is canonicalized away (global phase).
    struct Phase {
        u64 modulus = 1;
        u64 slope = 0;
    };

    CosetState(const CosetState&) = delete;
    CosetState& operator=(const CosetState&) = delete;
    CosetState(CosetState&& o) noexcept;
    CosetState& operator=(CosetState&& o) noexcept;

    bool valid() const { return valid_; }
    // First-register size of this state (drops below params.r after
    // self-reduction).
    u64 register_size() const { return r_reg_; }
    const Support& support() const { return support_; }
    const Phase& phase() const { return phase_; }
    // Second register already measured away (Fourier-basis measurement).
    bool second_collapsed() const { return collapsed_; }
    const EdcpParams& params() const { return core_->params; }
    // Hidden-state descriptors (full-role serialization and introspection;
    // not observables an adversary could read off the quantum system).
    const ZqVector& offset() const { return offset_; }
    const ZqVector& secret_shift() const { return secret_shift_; }

    u64 support_j(u64 i) const { return support_.base + support_.stride * i; }

  private:
    friend class Challenger;
    friend struct CosetOps;
    CosetState() = default;

    void require_valid() const;
    ZqVector effective_secret() const;

    std::shared_ptr<const SecretCore> core_;
    u64 r_reg_ = 1;
    ZqVector offset_;        // x  (hidden from adversary view)
    ZqVector secret_shift_;  // w; the state's effective secret is s - w
    Support support_;
    Phase phase_;
    bool collapsed_ = false;
    bool valid_ = false;
};

// --- operations ------------------------------------------------------------

// Dense image over Z_r x Z_q^n (or Z_r alone once the second register has
// been measured away). The bridge to the brute-force oracle.
StateVector to_dense(const CosetState& state);

struct ReduceOutcome {
    bool success = false;
    u64 block = 0;  // which full block survived (block-measurement branch)
    CosetState state;
};
// Self-reduction r -> r_target on a full-support state. Uses the indicator
// projection when r_target > r/2 and the block measurement otherwise;
// per-attempt success probability is at least 1/2. On failure the caller
// retries with a fresh sample.
ReduceOutcome reduce_r(CosetState state, u64 r_target, Rng& rng);

struct SampleStats {
    CosetState state;
    int samples_used = 0;
};
// Draw fresh samples and self-reduce until one succeeds.
SampleStats sample_reduced(Challenger& challenger, u64 r_target,
                           std::optional<u64> phase_t = std::nullopt, int max_attempts = 64);

struct ProjectOutcome {
    u64 residue = 0;
    CosetState state;
};
// Measure j mod p^k into an auxiliary register; support collapses to the
// residue class of the measured outcome.
ProjectOutcome project_j_mod(CosetState state, u64 p, int k, Rng& rng);

// First-register phase w_M^{a*j + b}; the intercept b only shifts the global
// phase. Composed phase moduli are capped at q*r.
CosetState adversary_phase(CosetState state, u64 modulus, u64 slope, u64 intercept);

// Phase depending on a second-register coordinate:
//   |j>|a> -> w_M^{(a_coord - j*u)*c} |j>|a>.
// On a coset state this induces the j-linear phase w_M^{j*(s_coord-u)*c};
// the slope is computed through the hidden secret.
CosetState content_phase(CosetState state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 scale);

// |j>|y> -> |j>|y - j*w>: shifts the state's effective secret to s - w.
CosetState shift_secret(CosetState state, const ZqVector& w);

struct FullOutcome {
    u64 j = 0;
    ZqVector y;
};
// Computational-basis measurement of both registers.
FullOutcome measure_full(CosetState state, Rng& rng);

struct AuxOutcome {
    u64 value = 0;
    CosetState state;
};
// Compute (y_coord - j*u) mod modulus into an auxiliary register and measure
// it. On a coset state the register holds x_coord + j*(s_coord - u); support
// thins to the measured fiber.
AuxOutcome measure_linear_aux(CosetState state, std::size_t coord, u64 modulus, u64 subtract,
                              Rng& rng);

struct SecondFourierOutcome {
    ZqVector u;
    CosetState state;
};
// Apply QFT_{q^n} to the second register and measure it. The outcome is
// uniform; the surviving first register keeps the phase w_q^{j*<u, s>}.
SecondFourierOutcome measure_second_fourier(CosetState state, Rng& rng);

// Apply the inverse QFT_r to the first register (discarding the second, if
// still present) and measure. For a full-support state with pure phase
// w_r^{c*j} the outcome is c with certainty.
u64 measure_first_qft_inv(CosetState state, Rng& rng);

// --- exact outcome distributions (simulator introspection) ------------------
// These are what the measurement ops sample from; the dense-oracle test
// harness compares them against brute-force statevector runs.
namespace inspect {

std::vector<std::pair<u64, double>> project_distribution(const CosetState& state, u64 p, int k);
struct ReduceBranch {
    double probability = 0.0;
    bool success = false;
    u64 block = 0;
    CosetState state;
};
// Every measurement branch of reduce_r with its probability (the state is
// cloned per branch; cloning is simulator introspection, not an adversary
// capability).
std::vector<ReduceBranch> reduce_branches(const CosetState& state, u64 r_target);
std::vector<std::pair<u64, double>> aux_distribution(const CosetState& state, std::size_t coord,
                                                     u64 modulus, u64 subtract);
std::vector<double> first_qft_inv_distribution(const CosetState& state);
// (j, y) pairs with probabilities for a full computational-basis measurement.
std::vector<std::pair<FullOutcome, double>> full_distribution(const CosetState& state);
// Per-attempt success probability of reduce_r on this state.
double reduce_success_probability(const CosetState& state, u64 r_target);

}  // namespace inspect

// The hidden secret behind a state (full-role serialization only).
const ZqVector& challenger_secret_of(const CosetState& state);

// Rebuild a symbolic state from its serialized full-role description. The
// challenger must hold the matching secret.
CosetState restore_coset_state(const Challenger& challenger, u64 r_reg, ZqVector offset,
                               ZqVector secret_shift, CosetState::Support support,
                               CosetState::Phase phase, bool collapsed);

}  // namespace edcp
