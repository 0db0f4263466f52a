#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "edcp/dense_oracle.hpp"
#include "edcp/qpke.hpp"

using namespace edcp;

namespace {

EdcpParams params_of(std::size_t n, u64 q, u64 r, u64 p) {
    return EdcpParams(n, Modulus(q), r, p);
}

cd omega(u64 k, u64 m) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k % m) / static_cast<double>(m);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate_qpke_params(params_of(2, 8, 2, 2)));
    CHECK_NOTHROW(validate_qpke_params(params_of(1, 27, 9, 3)));
    CHECK_THROWS_AS(validate_qpke_params(params_of(1, 8, 6, 2)), BadParams);   // r not p-power
    CHECK_THROWS_AS(validate_qpke_params(params_of(1, 12, 8, 2)), BadParams);  // r does not divide q
    CHECK_THROWS_AS(params_of(1, 8, 16, 2), BadParams);                        // r > q
    CHECK_THROWS_AS(params_of(1, 9, 3, 2), BadParams);                         // p does not divide q
    CHECK_THROWS_AS(validate_qpke_params(params_of(1, 8, 8, 2)), BadParams);   // r must be proper
}

TEST_CASE("keygen produces fresh full-support public keys") {
    {
        KeyPair kp = keygen(params_of(2, 8, 2, 2), 31);
        CHECK(kp.public_state.support().count == 2);
        CHECK(kp.public_state.phase().modulus == 1);
        CHECK(kp.secret.dim() == 2);
    }
    {
        KeyPair kp = keygen(params_of(1, 9, 3, 3), 32);
        CHECK(kp.public_state.support().count == 3);
        // exactly r nonzero amplitudes, each of modulus 1/sqrt(r)
        StateVector dense = to_dense(kp.public_state);
        u64 nonzero = 0;
        for (u64 i = 0; i < dense.dim(); ++i) {
            if (std::abs(dense.amp(i)) > 1e-14) {
                ++nonzero;
                CHECK(std::abs(dense.amp(i)) ==
                      doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
            }
        }
        CHECK(nonzero == 3);
    }
    // the key holder can issue more copies; they differ in the offset but
    // share the secret
    KeyPair kp = keygen(params_of(2, 8, 2, 2), 33);
    CosetState another = kp.issue_public_key();
    CHECK(another.valid());
    CHECK(challenger_secret_of(another) == kp.secret);
}

TEST_CASE("generation circuit equals the symbolic sample") {
    // QFT_r (x) 1 on |0>|x>, then the multiply-add: exactly the public key
    KeyPair kp = keygen(params_of(1, 8, 4, 2), 34);
    const ZqVector x(8, {5});
    StateVector circuit = StateVector::basis(IndexSpace::coset_space(4, 8, 1), {0, 5});
    circuit.apply_qft(0, StateVector::Direction::Forward);
    circuit.apply_multiply_add(kp.secret, +1);
    StateVector symbolic = to_dense(kp.challenger.sample_with_offset(x));
    CHECK(fidelity(circuit, symbolic) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("encryption") {
    // b = 0 leaves the public-key ensemble untouched
    {
        KeyPair kp = keygen(params_of(1, 8, 2, 2), 35);
        Rng rng(100);
        DensityOperator enc0 = DensityOperator::zero(IndexSpace::coset_space(2, 8, 1));
        for (u64 x = 0; x < 8; ++x) {
            Ciphertext ct = encrypt(kp.challenger.sample_with_offset(ZqVector(8, {x})), 0, rng);
            enc0.accumulate(0.125, to_dense(ct.state));
        }
        DensityOperator pk_ensemble = dense_oracle::ensemble_density(kp.params, kp.secret);
        CHECK(trace_distance(enc0, pk_ensemble) < 1e-9);
    }

    // p = 2 forces t = 1: the ciphertext phase is (-1)^{b j}
    {
        KeyPair kp = keygen(params_of(2, 8, 2, 2), 36);
        Rng rng(101);
        Ciphertext ct = encrypt(std::move(kp.public_state), 1, rng);
        CHECK(ct.state.phase().modulus == 2);
        CHECK(ct.state.phase().slope == 1);
    }

    // p = 3: a b = 1 ciphertext carries slope t mod 3, and its dense image
    // matches the hand-applied phase
    {
        KeyPair kp = keygen(params_of(1, 27, 9, 3), 37);
        Rng rng(102);
        const ZqVector x(27, {11});
        Ciphertext ct = encrypt(kp.challenger.sample_with_offset(x), 1, rng);
        const u64 slope = ct.state.phase().slope;
        CHECK(ct.state.phase().modulus == 3);
        CHECK(slope != 0);
        StateVector dense = to_dense(ct.state);
        StateVector manual = dense_oracle::sample_state(kp.params, kp.secret, x);
        dense_oracle::apply_first_register_phase(manual, 3, slope, 0);
        CHECK(fidelity(dense, manual) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // a consumed public key cannot be encrypted again
    {
        KeyPair kp = keygen(params_of(2, 8, 2, 2), 38);
        Rng rng(103);
        Ciphertext first = encrypt(std::move(kp.public_state), 0, rng);
        CHECK_THROWS_AS(encrypt(std::move(kp.public_state), 1, rng), StateAlreadyConsumed);
    }
}

TEST_CASE("encryption circuit: ancilla version matches the phase composition") {
    // prepare |psi>|1>, QFT_p the ancilla, subtract j*b*t from it, measure it:
    // the surviving state carries w_p^{b t j}
    KeyPair kp = keygen(params_of(1, 9, 3, 3), 39);
    const ZqVector x(9, {4});
    const u64 p = 3, bt = 2;

    IndexSpace with_ancilla({3, 9, p});
    std::vector<cd> amps(with_ancilla.dim(), cd{0, 0});
    StateVector base = dense_oracle::sample_state(kp.params, kp.secret, x);
    for (u64 idx = 0; idx < base.dim(); ++idx) {
        const u64 j = base.space().digit(idx, 0);
        const u64 y = base.space().digit(idx, 1);
        amps[with_ancilla.index_of({j, y, 1})] = base.amp(idx);
    }
    StateVector circuit(with_ancilla, std::move(amps));
    circuit.apply_qft(2, StateVector::Direction::Forward);
    // T_{bt}: |j>|y>|z>  ->  |j>|y>|z - j*bt mod p>
    std::vector<cd> permuted(circuit.dim(), cd{0, 0});
    for (u64 idx = 0; idx < circuit.dim(); ++idx) {
        const u64 j = with_ancilla.digit(idx, 0);
        const u64 y = with_ancilla.digit(idx, 1);
        const u64 z = with_ancilla.digit(idx, 2);
        permuted[with_ancilla.index_of({j, y, (z + p - (j * bt) % p) % p})] = circuit.amp(idx);
    }
    circuit = StateVector(with_ancilla, std::move(permuted));
    Rng rng(104);
    circuit.measure_register(2, rng);

    // compare against the direct phase application, ancilla dropped
    StateVector direct = dense_oracle::sample_state(kp.params, kp.secret, x);
    dense_oracle::apply_first_register_phase(direct, p, bt, 0);
    std::vector<cd> restricted(direct.dim());
    double probe_norm = 0.0;
    for (u64 idx = 0; idx < direct.dim(); ++idx) {
        // find the surviving ancilla branch amplitude
        cd found{0, 0};
        for (u64 z = 0; z < p; ++z) {
            const u64 j = direct.space().digit(idx, 0);
            const u64 y = direct.space().digit(idx, 1);
            const cd a = circuit.amp(with_ancilla.index_of({j, y, z}));
            if (std::abs(a) > 1e-14) found = a;
        }
        restricted[idx] = found;
        probe_norm += std::norm(found);
    }
    for (auto& a : restricted) a /= std::sqrt(probe_norm);
    StateVector collapsed(direct.space(), std::move(restricted));
    CHECK(fidelity(collapsed, direct) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decryption outcomes") {
    // b = 0 decrypts to 0 with certainty
    {
        for (int t = 0; t < 200; ++t) {
            KeyPair kp = keygen(params_of(2, 8, 2, 2), 4000 + t);
            Rng rng(Rng::derive_seed(41, t));
            Ciphertext ct = encrypt(std::move(kp.public_state), 0, rng);
            CHECK(decrypt(kp.secret, std::move(ct), rng) == 0);
        }
    }

    // p = 3, r = 3, t = 2, b = 1: the outcome is b*t*r/p = 2
    {
        KeyPair kp = keygen(params_of(1, 9, 3, 3), 42);
        Rng rng(105);
        CosetState pk = std::move(kp.public_state);
        CosetState phased = adversary_phase(std::move(pk), 3, 2, 0);  // bt = 2
        Ciphertext ct{std::move(phased), kp.params};
        CHECK(decrypt_outcome(kp.secret, std::move(ct), rng) == 2);
    }

    // p = 2, r = 4, t odd: outcome t*r/p = 2t mod 4 = 2, so the bit reads 1;
    // cross-checked against the dense circuit
    {
        KeyPair kp = keygen(params_of(1, 8, 4, 2), 43);
        Rng rng(106);
        const ZqVector x(8, {3});
        Ciphertext ct{adversary_phase(kp.challenger.sample_with_offset(x), 2, 1, 0), kp.params};

        StateVector dense = dense_oracle::sample_state(kp.params, kp.secret, x);
        dense_oracle::apply_first_register_phase(dense, 2, 1, 0);
        dense_oracle::apply_secret_shift(dense, kp.secret);
        const auto dist = dense_oracle::first_qft_inv_distribution(dense);
        CHECK(dist[2] == doctest::Approx(1.0).epsilon(1e-9));

        CHECK(decrypt_outcome(kp.secret, std::move(ct), rng) == 2);
    }
}

TEST_CASE("roundtrip correctness and wrong-key behaviour") {
    for (const auto& [n, q, r, p] : {std::tuple<std::size_t, u64, u64, u64>{2, 8, 2, 2},
                                     std::tuple<std::size_t, u64, u64, u64>{1, 27, 9, 3}}) {
        const EdcpParams params = params_of(n, q, r, p);
        for (int t = 0; t < 1000; ++t)
            CHECK(roundtrip_trial(params, t % 2, Rng::derive_seed(4400 + q, t)));
    }

    // decrypting with a wrong key whose offset is a unit: the first register
    // becomes a uniform mixture, so for b = 1 the output is wrong only when
    // the outcome hits 0 (rate 1/r), while for b = 0 it is wrong with rate
    // 1 - 1/r
    const EdcpParams params = params_of(1, 8, 4, 2);
    int wrong_b1 = 0, wrong_b0 = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        KeyPair kp = keygen(params, 45000 + t);
        Rng rng(Rng::derive_seed(46, t));
        ZqVector bad = kp.secret;
        bad.coords[0] = (bad.coords[0] + 1 + 2 * rng.uniform_below(4)) % 8;
        {
            Ciphertext ct = encrypt(kp.issue_public_key(), 1, rng);
            if (decrypt(bad, std::move(ct), rng) != 1) ++wrong_b1;
        }
        {
            Ciphertext ct = encrypt(kp.issue_public_key(), 0, rng);
            if (decrypt(bad, std::move(ct), rng) != 0) ++wrong_b0;
        }
    }
    const double sigma = 3.0 * std::sqrt(0.25 / trials);
    CHECK(std::abs(static_cast<double>(wrong_b1) / trials - 0.25) < sigma);
    CHECK(std::abs(static_cast<double>(wrong_b0) / trials - 0.75) < sigma);
}

TEST_CASE("pre-measurement state is the exact basis state b*t*r/p") {
    KeyPair kp = keygen(params_of(1, 27, 9, 3), 47);
    const ZqVector x(27, {8});
    for (u64 t : {1, 2}) {
        StateVector dense = dense_oracle::sample_state(kp.params, kp.secret, x);
        dense_oracle::apply_first_register_phase(dense, 3, t, 0);  // b = 1
        dense_oracle::apply_secret_shift(dense, kp.secret);
        const auto dist = dense_oracle::first_qft_inv_distribution(dense);
        CHECK(dist[t * 9 / 3] >= 1.0 - 1e-9);
    }
}

TEST_CASE("ciphertext bits are invisible in the computational basis") {
    const EdcpParams params = params_of(1, 8, 4, 2);
    KeyPair kp = keygen(params, 48);
    Rng rng(107);
    std::map<std::pair<u64, u64>, double> dist0, dist1;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        Ciphertext c0 = encrypt(kp.issue_public_key(), 0, rng);
        FullOutcome f0 = measure_full(std::move(c0.state), rng);
        dist0[{f0.j, f0.y.coords[0]}] += 1.0 / trials;
        Ciphertext c1 = encrypt(kp.issue_public_key(), 1, rng);
        FullOutcome f1 = measure_full(std::move(c1.state), rng);
        dist1[{f1.j, f1.y.coords[0]}] += 1.0 / trials;
    }
    double tv = 0.0;
    for (const auto& [k, v] : dist0) tv += 0.5 * std::abs(v - dist1[k]);
    for (const auto& [k, v] : dist1)
        if (!dist0.count(k)) tv += 0.5 * v;
    CHECK(tv < 4.0 / std::sqrt(static_cast<double>(trials)));
}
