#include "edcp/qpke.hpp"

namespace edcp {

void validate_qpke_params(const EdcpParams& params) {
    params.validate();
    if (params.q.q % params.r != 0) throw BadParams("qpke: r must divide q");
    if (params.r >= params.q.q) throw BadParams("qpke: r must be a proper divisor of q");
    u64 rest = params.r;
    while (rest % params.p == 0) rest /= params.p;
    if (rest != 1) throw BadParams("qpke: r must be a power of p");
}

KeyPair keygen(const EdcpParams& params, u64 seed) {
    validate_qpke_params(params);
    Challenger challenger(params, seed);
    ZqVector secret = challenger.secret_for_verification();
    CosetState pk = challenger.sample();
    return KeyPair{std::move(secret), std::move(pk), params, std::move(challenger)};
}

Ciphertext encrypt(CosetState pk, int bit, Rng& rng) {
    if (!pk.valid()) throw StateAlreadyConsumed("encrypt: public-key state already consumed");
    if (bit != 0 && bit != 1) throw BadParams("encrypt: bit must be 0 or 1");
    const EdcpParams params = pk.params();
    u64 t;
    do {
        t = 1 + rng.uniform_below(params.r - 1);
    } while (t % params.p == 0);
    const u64 bt = bit ? t % params.p : 0;
    CosetState ct = adversary_phase(std::move(pk), params.p, bt, 0);
    return Ciphertext{std::move(ct), params};
}

u64 decrypt_outcome(const ZqVector& sk, Ciphertext c, Rng& rng) {
    if (!c.state.valid()) throw StateAlreadyConsumed("decrypt: ciphertext already consumed");
    const EdcpParams& params = c.state.params();
    if (sk.q != params.q.q || sk.dim() != params.n)
        throw ParamMismatch("decrypt: secret key shape does not match ciphertext");
    CosetState st = shift_secret(std::move(c.state), sk);
    // The second register is discarded; measuring it first would not change
    // the first-register statistics, and the measurement below accounts for
    // any residual entanglement (wrong-key decryption).
    return measure_first_qft_inv(std::move(st), rng);
}

int decrypt(const ZqVector& sk, Ciphertext c, Rng& rng) {
    return decrypt_outcome(sk, std::move(c), rng) == 0 ? 0 : 1;
}

bool roundtrip_trial(const EdcpParams& params, int bit, u64 seed) {
    Rng rng(Rng::derive_seed(seed, 1));
    KeyPair kp = keygen(params, seed);
    Ciphertext ct = encrypt(std::move(kp.public_state), bit, rng);
    return decrypt(kp.secret, std::move(ct), rng) == bit;
}

}  // namespace edcp
