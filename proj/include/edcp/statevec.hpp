#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "edcp/errors.hpp"
#include "edcp/modmath.hpp"
#include "edcp/rng.hpp"

namespace edcp {

using cd = std::complex<double>;

// Composite index space: an ordered list of register sizes. Index layout is
// mixed-radix with factor 0 most significant.
class IndexSpace {
  public:
    static constexpr u64 kDimensionCap = 1ull << 22;

    IndexSpace() = default;
    explicit IndexSpace(std::vector<u64> factors);

    // The space Z_r x Z_q^n used by coset states.
    static IndexSpace coset_space(u64 r, u64 q, std::size_t n);

    u64 dim() const { return dim_; }
    std::size_t num_registers() const { return factors_.size(); }
    u64 factor(std::size_t reg) const { return factors_[reg]; }
    u64 stride(std::size_t reg) const { return strides_[reg]; }
    const std::vector<u64>& factors() const { return factors_; }

    u64 digit(u64 index, std::size_t reg) const { return (index / strides_[reg]) % factors_[reg]; }
    u64 index_of(const std::vector<u64>& digits) const;

    bool operator==(const IndexSpace& o) const { return factors_ == o.factors_; }

  private:
    std::vector<u64> factors_;
    std::vector<u64> strides_;
    u64 dim_ = 1;
};

class DensityOperator;

// Dense unit vector over a composite index space.
class StateVector {
  public:
    StateVector() = default;
    StateVector(IndexSpace space, std::vector<cd> amps);

    // |digits...> basis state
    static StateVector basis(IndexSpace space, const std::vector<u64>& digits);

    const IndexSpace& space() const { return space_; }
    u64 dim() const { return space_.dim(); }
    const std::vector<cd>& amps() const { return amps_; }
    std::vector<cd>& amps() { return amps_; }
    cd amp(u64 index) const { return amps_[index]; }

    double norm() const;
    void renormalize();

    // Quantum Fourier transform of the given register. Forward convention is
    // |x> -> L^{-1/2} sum_y w_L^{+xy} |y>; inverse conjugates.
    enum class Direction { Forward, Inverse };
    void apply_qft(std::size_t reg, Direction dir);
    // QFT on every register except the first (the Z_q^n block of a coset space).
    void apply_qft_second_block(Direction dir);

    // |j>|x> -> |j>|x + j*s> for sign = +1, |j>|y> -> |j>|y - j*s> for -1.
    // Requires a coset-shaped space matching s.
    void apply_multiply_add(const ZqVector& s, int sign);

    // Multiply each basis amplitude by a unit phase.
    void apply_diagonal_phase(const std::function<RootOfUnity(u64)>& phase);
    void apply_diagonal_phase(const std::vector<cd>& phase);

    // Cyclic shift of one register: |v> -> |v + delta mod L>.
    void shift_register(std::size_t reg, long long delta);

    // Resize one register. Growing pads with zero amplitude; shrinking
    // requires all truncated amplitudes to be zero (within 1e-12).
    void embed_register(std::size_t reg, u64 new_size);

    // Born-rule measurement of one register; collapses and renormalizes.
    std::pair<u64, double> measure_register(std::size_t reg, Rng& rng);
    // Probability of each outcome for one register.
    std::vector<double> register_distribution(std::size_t reg) const;
    // Collapse to the given outcome; returns its probability.
    double collapse_register(std::size_t reg, u64 outcome);

    // Measurement of an arbitrary classical function of the basis index.
    u64 measure_function(const std::function<u64(u64)>& fn, Rng& rng);
    std::vector<std::pair<u64, double>> function_distribution(
        const std::function<u64(u64)>& fn) const;
    double collapse_function(const std::function<u64(u64)>& fn, u64 outcome);

    // Quantum rejection sampling on the first register: reshapes the
    // first-register amplitude profile pi to the target profile eps
    // (eps_k <= pi_k required), succeeding with probability ||eps||_2^2.
    // On failure the state becomes the complementary branch.
    bool rejection_resample(const std::vector<double>& eps, Rng& rng);
    // Acceptance probability of the above without performing it.
    double rejection_accept_probability(const std::vector<double>& eps) const;

    DensityOperator to_density() const;

  private:
    void check_norm() const;
    IndexSpace space_;
    std::vector<cd> amps_;
};

// Fidelity |<a|b>|^2; also used for global-phase-insensitive comparisons.
double fidelity(const StateVector& a, const StateVector& b);

// Dense density operator. Matrix is row-major D x D.
class DensityOperator {
  public:
    DensityOperator() = default;
    DensityOperator(IndexSpace space, std::vector<cd> matrix);
    static DensityOperator zero(IndexSpace space);

    const IndexSpace& space() const { return space_; }
    u64 dim() const { return space_.dim(); }
    const std::vector<cd>& matrix() const { return matrix_; }
    cd entry(u64 row, u64 col) const { return matrix_[row * space_.dim() + col]; }

    void accumulate(double weight, const StateVector& psi);  // += weight |psi><psi|
    double trace() const;

  private:
    IndexSpace space_;
    std::vector<cd> matrix_;
};

// rho = sum_x p_x |psi_x><psi_x|. Probabilities must sum to 1 within 1e-9.
DensityOperator density_from_ensemble(const std::vector<std::pair<double, StateVector>>& members);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

// Eigenvalues sorted descending with multiplicities, clustered at tolerance
// 1e-7. The weighted sum is checked against the trace.
std::vector<std::pair<double, u64>> eigen_spectrum(const DensityOperator& rho);

// Raw eigenvalues, descending (no clustering).
std::vector<double> eigenvalues(const DensityOperator& rho);

// Trace norm ||a - b||_1 = sum |eigenvalues(a - b)|. Note: no 1/2 factor, so
// orthogonal pure states are at distance 2.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace edcp
