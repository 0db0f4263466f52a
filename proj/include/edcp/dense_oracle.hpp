#pragma once

#include <optional>

#include "edcp/coset.hpp"
#include "edcp/statevec.hpp"

namespace edcp::dense_oracle {

// Brute-force statevector replicas of every symbolic coset operation, used to
// verify the symbolic engine against ground truth. Measurement mirrors force
// a given outcome and report its exact probability, so symbolic traces can be
// replayed densely step by step.

// |phi_{s,r}(x, t)> on Z_r x Z_q^n.
StateVector sample_state(const EdcpParams& params, const ZqVector& secret, const ZqVector& x,
                         std::optional<u64> phase_t = std::nullopt);

// Ensemble density operator rho_{s,r,t} = E_x |phi><phi| by exact enumeration
// over all offsets.
DensityOperator ensemble_density(const EdcpParams& params, const ZqVector& secret,
                                 std::optional<u64> phase_t = std::nullopt);

struct ForcedOutcome {
    double probability = 0.0;
};

// reduce_r mirror. success selects the indicator/full-block branch; block
// identifies which full block when the block measurement applies.
ForcedOutcome reduce_r_forced(StateVector& state, u64 r_target, bool success, u64 block);

// j mod p^k measurement, forced.
ForcedOutcome project_forced(StateVector& state, u64 p, int k, u64 outcome);

// auxiliary register (y_coord - j*subtract) mod modulus, forced. This mirror
// needs no secret: it reads the register contents.
ForcedOutcome aux_forced(StateVector& state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 outcome);

// q^n-Fourier transform of the second block, then forced measurement of all
// of it; the measured registers are dropped so the result lives on Z_r.
ForcedOutcome second_fourier_forced(StateVector& state, const ZqVector& u);

// Outcome distribution of: discard everything but the first register,
// inverse-QFT it, measure. Terminal operation.
std::vector<double> first_qft_inv_distribution(const StateVector& state);
ForcedOutcome first_qft_inv_forced(const StateVector& state, u64 outcome);

// full computational-basis measurement, forced.
ForcedOutcome full_forced(StateVector& state, u64 j, const ZqVector& y);

// phase w_M^{slope*j + intercept} on the first register.
void apply_first_register_phase(StateVector& state, u64 modulus, u64 slope, u64 intercept);

// phase w_M^{(y_coord - j*subtract)*scale} (reads register contents).
void apply_content_phase(StateVector& state, std::size_t coord, u64 modulus, u64 subtract,
                         u64 scale);

// |j>|y> -> |j>|y - j*w>.
void apply_secret_shift(StateVector& state, const ZqVector& w);

}  // namespace edcp::dense_oracle
