#pragma once

#include <optional>

#include "edcp/coset.hpp"

namespace edcp {

// Public-key encryption on coset states. Key generation publishes a fresh
// coset sample; encryption writes b*t into its phase; decryption undoes the
// secret multiply-add, Fourier-transforms the first register and reads the
// outcome. Parameters must satisfy r = p^{s'} | q.

struct KeyPair {
    ZqVector secret;
    CosetState public_state;
    EdcpParams params;
    Challenger challenger;  // the key holder; issues further public-key copies

    // A fresh public-key state for the same secret (public keys are
    // distributed by the key holder, never cloned).
    CosetState issue_public_key() { return challenger.sample(); }
};

struct Ciphertext {
    CosetState state;
    EdcpParams params;
};

// Validate the qpke parameter shape: p prime dividing q, r = p^{s'} a proper
// divisor of q. Throws BadParams.
void validate_qpke_params(const EdcpParams& params);

KeyPair keygen(const EdcpParams& params, u64 seed);

// Encrypt one bit into a public-key state. t is drawn from Z_r \ {0} and
// re-drawn until t is not divisible by p (a multiple of p would make the
// phase trivial and the ciphertext undecryptable for b = 1).
Ciphertext encrypt(CosetState pk, int bit, Rng& rng);

// Decrypt: apply S_s, discard the second register, apply the inverse QFT_r,
// measure; 0 iff the outcome is 0. For honest inputs the pre-measurement
// state is exactly |b*t*r/p>.
int decrypt(const ZqVector& sk, Ciphertext c, Rng& rng);
// The measurement outcome itself (b*t*r/p for honest inputs).
u64 decrypt_outcome(const ZqVector& sk, Ciphertext c, Rng& rng);

// keygen -> encrypt -> decrypt; true iff the bit survived.
bool roundtrip_trial(const EdcpParams& params, int bit, u64 seed);

}  // namespace edcp
