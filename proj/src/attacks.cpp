#include "edcp/attacks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "edcp/reductions.hpp"

namespace edcp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cd unit_phase(u64 num, u64 den) {
    const double ang = kTwoPi * static_cast<double>(num % den) / static_cast<double>(den);
    return {std::cos(ang), std::sin(ang)};
}
}  // namespace

// ---------------------------------------------------------------------------
// PhaseState
// ---------------------------------------------------------------------------

PhaseState::PhaseState(PhaseState&& o) noexcept
    : core_(std::move(o.core_)), label_(std::move(o.label_)), valid_(o.valid_) {
    o.valid_ = false;
}

PhaseState& PhaseState::operator=(PhaseState&& o) noexcept {
    if (this != &o) {
        core_ = std::move(o.core_);
        label_ = std::move(o.label_);
        valid_ = o.valid_;
        o.valid_ = false;
    }
    return *this;
}

struct PhaseOps {
    static PhaseState make(std::shared_ptr<const SecretCore> core, ZqVector label) {
        PhaseState ps;
        ps.core_ = std::move(core);
        ps.label_ = std::move(label);
        ps.valid_ = true;
        return ps;
    }
    static void require_valid(const PhaseState& ps) {
        if (!ps.valid_) throw StateAlreadyConsumed("phase state already consumed");
    }
    static void consume(PhaseState& ps) { ps.valid_ = false; }
    static u64 phase_value(const PhaseState& ps) {
        return inner_product(ps.label_, ps.core_->secret);
    }
    static const std::shared_ptr<const SecretCore>& core(const PhaseState& ps) { return ps.core_; }
};

StateVector PhaseState::to_dense() const {
    PhaseOps::require_valid(*this);
    const u64 q = core_->params.q.q;
    const double norm = 1.0 / std::sqrt(2.0);
    std::vector<cd> amps = {cd{norm, 0.0}, norm * unit_phase(PhaseOps::phase_value(*this), q)};
    return StateVector(IndexSpace({2}), std::move(amps));
}

PhaseSampleStats edcp_to_phase(Challenger& challenger) {
    SampleStats reduced = sample_reduced(challenger, 2);
    SecondFourierOutcome sf = measure_second_fourier(std::move(reduced.state), challenger.rng());
    // the surviving two-term register is exactly (|0> + w_q^{<u,s>} |1>)/sqrt(2)
    return {PhaseOps::make(challenger.core(), std::move(sf.u)), reduced.samples_used};
}

CombineOutcome sieve_combine(PhaseState a, PhaseState b, Rng& rng) {
    PhaseOps::require_valid(a);
    PhaseOps::require_valid(b);
    if (PhaseOps::core(a) != PhaseOps::core(b))
        throw ParamMismatch("sieve_combine: states from different challengers");
    // CNOT then measuring the target yields each branch with probability 1/2:
    // outcome 1 carries the label difference, outcome 0 the sum.
    const bool difference_branch = rng.bernoulli(0.5);
    ZqVector label = difference_branch ? sub(a.label(), b.label()) : add(a.label(), b.label());
    auto core = PhaseOps::core(a);
    PhaseOps::consume(a);
    PhaseOps::consume(b);
    return {difference_branch, PhaseOps::make(std::move(core), std::move(label))};
}

// ---------------------------------------------------------------------------
// Pretty good measurement
// ---------------------------------------------------------------------------

namespace {

struct PgmSetup {
    u64 q = 0;
    std::size_t pos = 0;       // the single nonzero label coordinate
    std::vector<u64> scalars;  // y_j per state
    u64 truth = 0;             // secret coordinate behind the states
};

PgmSetup pgm_setup(const std::vector<PhaseState>& states) {
    if (states.empty()) throw BadParams("pgm: no states");
    for (const auto& st : states) PhaseOps::require_valid(st);
    const auto& core = PhaseOps::core(states.front());
    PgmSetup setup;
    setup.q = core->params.q.q;
    const std::size_t n = core->params.n;

    std::optional<std::size_t> pos;
    for (const auto& st : states) {
        if (PhaseOps::core(st) != core) throw ParamMismatch("pgm: mixed challengers");
        for (std::size_t c = 0; c < n; ++c) {
            if (st.label().coords[c] == 0) continue;
            if (pos && *pos != c)
                throw BadParams("pgm: labels must be zero outside one shared coordinate");
            pos = c;
        }
    }
    setup.pos = pos.value_or(n - 1);
    setup.scalars.reserve(states.size());
    for (const auto& st : states) setup.scalars.push_back(st.label().coords[setup.pos]);
    setup.truth = core->secret.coords[setup.pos];

    const std::size_t t = states.size();
    std::size_t t_min = 1;
    while ((1ull << t_min) < setup.q) ++t_min;  // ceil(log2 q)
    if (t < t_min + 1) throw BadParams("pgm: needs at least ceil(log2 q) + 1 states");
    if (t > 14) throw DimensionCap("pgm: joint state exceeds the 2^14 cap");
    return setup;
}

// Gram matrix of the candidate states under the uniform prior:
// G[u][v] = (1/q) prod_j (1 + w_q^{y_j (v-u)}) / 2.
Eigen::MatrixXcd pgm_gram(const PgmSetup& setup) {
    const u64 q = setup.q;
    Eigen::MatrixXcd G(q, q);
    for (u64 u = 0; u < q; ++u)
        for (u64 v = 0; v < q; ++v) {
            cd prod{1.0, 0.0};
            for (u64 y : setup.scalars)
                prod *= (cd{1.0, 0.0} + unit_phase(mul_mod(y, (v + q - u) % q, q), q)) / 2.0;
            G(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
                prod / static_cast<double>(q);
        }
    return G;
}

Eigen::MatrixXcd matrix_sqrt_floored(const Eigen::MatrixXcd& m, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver((m + m.adjoint()) / 2.0);
    Eigen::VectorXd ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] > floor ? std::sqrt(ev[i]) : 0.0;
    return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

std::vector<double> pgm_outcome_distribution(const std::vector<PhaseState>& states) {
    const PgmSetup setup = pgm_setup(states);
    const u64 q = setup.q;
    // Pr[v | joint state = candidate w] = q |G^{1/2}[v][w]|^2: the PGM element
    // probabilities <psi| S^{-1/2} p_v sigma_v S^{-1/2} |psi> collapse to the
    // Gram square root because psi lies in the candidates' span.
    const Eigen::MatrixXcd Gh = matrix_sqrt_floored(pgm_gram(setup), 1e-10);
    std::vector<double> probs(q, 0.0);
    double total = 0.0;
    for (u64 v = 0; v < q; ++v) {
        probs[v] = static_cast<double>(q) *
                   std::norm(Gh(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(setup.truth)));
        total += probs[v];
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw ZeroProbabilityBranch("pgm: outcome probabilities sum to " + std::to_string(total));
    for (auto& p : probs) p /= total;
    return probs;
}

u64 pgm_recover(std::vector<PhaseState> states, Rng& rng) {
    const std::vector<double> probs = pgm_outcome_distribution(states);
    for (auto& st : states) PhaseOps::consume(st);
    double roll = rng.uniform_real();
    u64 outcome = probs.size() - 1;
    for (u64 v = 0; v < probs.size(); ++v) {
        if (roll < probs[v]) {
            outcome = v;
            break;
        }
        roll -= probs[v];
    }
    return outcome;
}

double pgm_povm_completeness_error(const std::vector<ZqVector>& labels, u64 q) {
    const std::size_t t = labels.size();
    if (t > 11) throw DimensionCap("povm completeness: 2^t exceeds the dense matrix cap");
    const u64 dim = 1ull << t;
    std::vector<u64> scalars;
    for (const auto& lab : labels) {
        u64 y = 0;
        for (u64 c : lab.coords)
            if (c != 0) y = c;
        scalars.push_back(y);
    }
    // candidate states c_v[x] = 2^{-t/2} w_q^{alpha(x) v}
    std::vector<Eigen::VectorXcd> cand(q, Eigen::VectorXcd(dim));
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (u64 v = 0; v < q; ++v)
        for (u64 x = 0; x < dim; ++x) {
            u64 alpha = 0;
            for (std::size_t j = 0; j < t; ++j)
                if (x >> j & 1) alpha = (alpha + scalars[j]) % q;
            cand[v][static_cast<Eigen::Index>(x)] = norm * unit_phase(mul_mod(alpha, v, q), q);
        }

    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(dim, dim);
    for (u64 v = 0; v < q; ++v) S += cand[v] * cand[v].adjoint() / static_cast<double>(q);

    constexpr double kFloor = 1e-10;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver((S + S.adjoint()) / 2.0);
    Eigen::VectorXd ev = solver.eigenvalues();
    Eigen::VectorXd inv_sqrt(ev.size()), support(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const bool in_support = ev[i] > kFloor;
        inv_sqrt[i] = in_support ? 1.0 / std::sqrt(ev[i]) : 0.0;
        support[i] = in_support ? 1.0 : 0.0;
    }
    const Eigen::MatrixXcd S_inv_sqrt =
        solver.eigenvectors() * inv_sqrt.asDiagonal() * solver.eigenvectors().adjoint();
    const Eigen::MatrixXcd P_supp =
        solver.eigenvectors() * support.asDiagonal() * solver.eigenvectors().adjoint();

    // POVM: E_v = S^{-1/2} (1/q)|c_v><c_v| S^{-1/2}, plus the complement of
    // the support so the elements resolve the identity.
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(dim, dim) - P_supp;
    for (u64 v = 0; v < q; ++v) {
        const Eigen::VectorXcd w = S_inv_sqrt * cand[v];
        total += w * w.adjoint() / static_cast<double>(q);
    }
    return (total - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Kuperberg sieve
// ---------------------------------------------------------------------------

SieveStats kuperberg_recover(Challenger& challenger, std::size_t coord, std::size_t block_size,
                             double pool_exponent, Rng& rng) {
    const EdcpParams& params = challenger.params();
    const std::size_t n = params.n;
    const u64 q = params.q.q;
    if (coord >= n) throw BadParams("kuperberg: coordinate out of range");
    if (block_size < 1) throw BadParams("kuperberg: block size must be >= 1");

    const double pool_real = std::pow(static_cast<double>(q), pool_exponent);
    if (pool_real > static_cast<double>(1ull << 20))
        throw BadParams("kuperberg: pool size exceeds 2^20");
    const std::size_t pool_size = static_cast<std::size_t>(std::ceil(pool_real));

    SieveStats stats;
    std::vector<PhaseState> pool;
    pool.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        PhaseSampleStats ps = edcp_to_phase(challenger);
        stats.samples_used += static_cast<std::size_t>(ps.samples_used);
        pool.push_back(std::move(ps.state));
    }

    // coordinates to zero, in stages of block_size; the target stays last
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < n; ++c)
        if (c != coord) order.push_back(c);

    for (std::size_t start = 0; start < order.size(); start += block_size) {
        const std::size_t end = std::min(start + block_size, order.size());
        stats.stage_pool_sizes.push_back(pool.size());

        // bucket by the coordinates being zeroed this stage
        std::map<std::vector<u64>, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::vector<u64> key;
            key.reserve(end - start);
            for (std::size_t c = start; c < end; ++c) key.push_back(pool[i].label().coords[order[c]]);
            buckets[key].push_back(i);
        }

        std::vector<PhaseState> next;
        for (auto& [key, members] : buckets) {
            const bool already_zero = std::all_of(key.begin(), key.end(), [](u64 v) { return v == 0; });
            if (already_zero) {
                for (std::size_t i : members) next.push_back(std::move(pool[i]));
                continue;
            }
            for (std::size_t m = 0; m + 1 < members.size(); m += 2) {
                CombineOutcome out =
                    sieve_combine(std::move(pool[members[m]]), std::move(pool[members[m + 1]]), rng);
                if (out.success) next.push_back(std::move(out.state));
            }
            // odd leftover is dropped
        }
        pool = std::move(next);
        stats.stage_survivors.push_back(pool.size());
        if (pool.size() < 2)
            throw PoolExhausted("kuperberg: sieve stage left fewer than 2 states");
    }

    // survivors carry labels supported on the target coordinate only
    std::size_t t_min = 1;
    while ((1ull << t_min) < q) ++t_min;
    ++t_min;  // ceil(log2 q) + 1
    std::vector<PhaseState> informative;
    for (auto& st : pool)
        if (st.label().coords[coord] != 0) informative.push_back(std::move(st));
    if (informative.size() < t_min)
        throw PoolExhausted("kuperberg: not enough informative survivors for the measurement");
    const std::size_t t_use = std::min(informative.size(), std::min<std::size_t>(t_min + 3, 14));
    informative.erase(informative.begin() + static_cast<std::ptrdiff_t>(t_use), informative.end());
    stats.pgm_states = t_use;

    stats.recovered = pgm_recover(std::move(informative), rng);
    return stats;
}

// ---------------------------------------------------------------------------
// r = q Fourier attack
// ---------------------------------------------------------------------------

FourierAttackResult fourier_attack_r_eq_q(Challenger& challenger, int max_rounds) {
    const EdcpParams& params = challenger.params();
    if (params.r != params.q.q) throw BadParams("fourier attack: requires r = q");
    Rng& rng = challenger.rng();

    FourierAttackResult result;
    std::vector<LinearEquation> equations;
    for (int round = 0; round < max_rounds; ++round) {
        for (std::size_t i = 0; i < 4 * params.n; ++i) {
            SecondFourierOutcome sf = measure_second_fourier(challenger.sample(), rng);
            const u64 w = measure_first_qft_inv(std::move(sf.state), rng);
            equations.push_back({std::move(sf.u), w});
            ++result.samples_used;
        }
        std::optional<ZqVector> s;
        try {
            s = solve_linear_mod(equations, params.q);
        } catch (const InconsistentSystem&) {
            throw ReductionFailed("fourier attack: inconsistent equations");
        }
        if (s) {
            result.secret = std::move(*s);
            return result;
        }
    }
    throw ReductionFailed("fourier attack: equations stayed underdetermined");
}

}  // namespace edcp
