#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>

#include "edcp/coset.hpp"

namespace edcp {

// ---------------------------------------------------------------------------
// Decision oracles
// ---------------------------------------------------------------------------

// Common bookkeeping: query counting against an optional budget and the
// advantage bound used to size amplification.
class OracleBase {
  public:
    virtual ~OracleBase() = default;
    virtual bool is_perfect() const = 0;
    // denominator p_n of the assumed advantage 1/p_n
    virtual double advantage_denominator() const = 0;

    void set_query_budget(u64 budget) { budget_ = budget; }
    u64 queries_used() const { return queries_; }

  protected:
    void charge_query() {
        ++queries_;
        if (budget_ && queries_ > *budget_)
            throw SampleBudgetExhausted("oracle query budget exhausted");
    }

  private:
    std::optional<u64> budget_;
    u64 queries_ = 0;
};

// Distinguishes hybrid levels: classify_level(state, t) answers whether the
// sample looks like the level-t ensemble rather than level t-1. Consumes the
// state.
class HybridOracle : public OracleBase {
  public:
    virtual bool classify_level(CosetState state, int t, Rng& rng) = 0;
};

// Perfect oracle: reads the hybrid level off the support stride of the
// symbolic state (the simulator stands in for the assumed distinguisher).
class PerfectHybridOracle : public HybridOracle {
  public:
    bool classify_level(CosetState state, int t, Rng& rng) override;
    bool is_perfect() const override { return true; }
    double advantage_denominator() const override { return 1.0; }
};

// Measurement-based oracle for small demos: Fourier-measures both registers
// and tests whether the first-register outcome escapes the level-(t-1)
// frequency grid. Requires r to be a power of p. Advantage is q^-n (1 - 1/p).
class StatisticalHybridOracle : public HybridOracle {
  public:
    StatisticalHybridOracle(const EdcpParams& params, u64 r_reduced);
    bool classify_level(CosetState state, int t, Rng& rng) override;
    bool is_perfect() const override { return false; }
    double advantage_denominator() const override { return p_n_; }

  private:
    u64 r_;
    double p_n_;
};

// Test harness oracle: answers perfectly at exactly one level and flips a
// coin elsewhere.
class SyntheticLevelOracle : public HybridOracle {
  public:
    SyntheticLevelOracle(u64 p, int only_level) : p_(p), only_(only_level) {}
    bool classify_level(CosetState state, int t, Rng& rng) override;
    bool is_perfect() const override { return false; }
    double advantage_denominator() const override { return 4.0; }

  private:
    u64 p_;
    int only_;
};

// Distinguishes the unphased ensemble from the w_p-phased one.
class PhaseOracle : public OracleBase {
  public:
    virtual bool classify_phased(CosetState state, Rng& rng) = 0;
};

class PerfectPhaseOracle : public PhaseOracle {
  public:
    bool classify_phased(CosetState state, Rng& rng) override;
    bool is_perfect() const override { return true; }
    double advantage_denominator() const override { return 1.0; }
};

// Fourier-measures both registers; a nonzero first-register outcome at u = 0
// betrays the phase. Requires p | r. Advantage q^-n.
class StatisticalPhaseOracle : public PhaseOracle {
  public:
    explicit StatisticalPhaseOracle(const EdcpParams& params);
    bool classify_phased(CosetState state, Rng& rng) override;
    bool is_perfect() const override { return false; }
    double advantage_denominator() const override { return p_n_; }

  private:
    double p_n_;
};

// ---------------------------------------------------------------------------
// Amplification
// ---------------------------------------------------------------------------

// Majority amplifier for a calibrated distinguisher with advantage >= 1/p_n:
// draws m = ceil(2 n p_n^2) samples and decides by majority; the verdict is
// wrong with probability at most e^{-n/4}.
inline u64 amplify_sample_count(int n, double p_n) {
    return static_cast<u64>(std::ceil(2.0 * n * p_n * p_n));
}

template <typename Sample>
bool amplify(const std::function<bool(Sample)>& base, const std::function<Sample()>& source,
             int n, double p_n, u64* samples_used = nullptr) {
    const u64 m = amplify_sample_count(n, p_n);
    u64 hits = 0;
    for (u64 i = 0; i < m; ++i)
        if (base(source())) ++hits;
    if (samples_used) *samples_used = m;
    return 2 * hits >= m;
}

// Two-sided variant for uncalibrated distinguishers: compares the classifier
// rate on test samples against the rate on reference samples; a gap of at
// least m/(2 p_n) counts as distinguishable.
bool distinguishable(const std::function<bool()>& test_trial,
                     const std::function<bool()>& reference_trial, int n, double p_n);

// ---------------------------------------------------------------------------
// Search-to-decision reductions
// ---------------------------------------------------------------------------

struct LweSample {
    ZqVector a;
    u64 b = 0;
};

struct ShiftedLweSample {
    ZqVector a;
    u64 b = 0;
    // The hidden relation is b = <a, s> + e - shift_scale * t (mod q) where t
    // was the phase parameter of the input state. shift_scale is 1 for prime
    // q and q/p in the composite mode.
    u64 shift_scale = 1;
};

// Samples at hybrid level k: a reduced sample with j mod p^k measured away.
using LevelSource = std::function<CosetState(int level)>;

// Minimal level whose neighboring ensembles the oracle tells apart.
int find_critical_t(HybridOracle& oracle, const LevelSource& source, u64 p, int h, int n,
                    Rng& rng);

// One digit test: transforms a level-(t-1) sample with the candidate digit and
// classifies the result. True iff the candidate matches the secret digit.
bool hybrid_digit_test(CosetState state, std::size_t coord, int digit_pos, u64 candidate,
                       u64 known_part, int t, u64 p, int e, HybridOracle& oracle, Rng& rng);

struct SearchOptions {
    int majority_repeats = 1;   // digit-test repetitions for statistical oracles
    int equation_rounds = 8;    // retry rounds for the Fourier stage
    int verify_trials = 16;
    std::optional<u64> force_r_reduced;  // override the r' choice
};

// Digit-by-digit secret recovery through hybrid distributions, completed by
// the q^n-Fourier linear-equation stage when the hybrids do not reach all of
// q. Returns the verified secret.
ZqVector search_via_hybrid(HybridOracle& oracle, Challenger& challenger,
                           const SearchOptions& opts = {});

// Secret recovery through the phased decision problem: per prime p | q,
// digits are found by cancelling the induced phase; CRT assembles the result.
ZqVector search_via_phase(PhaseOracle& oracle, Challenger& challenger,
                          const SearchOptions& opts = {});

// Adversary-side verification of a candidate secret: shift by the candidate
// and check that the first register Fourier-measures to 0 every time.
bool verify_candidate(Challenger& challenger, const ZqVector& candidate, int trials);

// ---------------------------------------------------------------------------
// Shifted-LWE extraction
// ---------------------------------------------------------------------------

struct ExtractResult {
    bool success = false;
    ShiftedLweSample sample;
};

// Gaussian-reshape a phased sample and Fourier-read a shifted LWE pair
// (-a, <-a, s> + e - t). Requires prime q; per-attempt success probability is
// exactly the rejection-sampling acceptance ||eps||_2^2.
ExtractResult extract_shifted_lwe(CosetState state, double lambda, Rng& rng);

// Composite-q mode: same pipeline with the w_p phase embedded as w_q^{t q/p};
// the extracted shift is then (q/p) * t.
ExtractResult extract_shifted_lwe_modp(CosetState state, double lambda, Rng& rng);

// Brute-force statevector route of the same pipeline (oracle for tests).
ExtractResult extract_shifted_lwe_dense(CosetState state, double lambda, Rng& rng);

// Analytic acceptance probability ||eps||_2^2 of the Gaussian reshape.
double extract_accept_probability(u64 r, double lambda);

// Exact distribution of the extraction error e (simulator introspection).
std::vector<double> extract_error_distribution(u64 r, u64 q, double lambda);

}  // namespace edcp
