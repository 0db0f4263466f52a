#pragma once

#include "edcp/coset.hpp"
#include "edcp/statevec.hpp"

namespace edcp {

// Holevo and Fano bounds for the coset-state ensemble. Logarithms are base 2
// throughout (bits).

struct EnsembleReport {
    EdcpParams params;
    u64 m = 1;
    double chi_numeric = 0.0;      // from the eigen-spectra (exact for m <= 2)
    double chi_closed_form = 0.0;  // m (1 - q^-n) log2 r
    std::vector<std::pair<double, u64>> spectrum_fixed_secret;  // rho_{s,r}
    std::vector<std::pair<double, u64>> spectrum_averaged;      // rho averaged over s
};

double von_neumann_entropy_bits(const DensityOperator& rho);

// chi = H(avg_s rho_s) - avg_s H(rho_s) for the m-fold ensemble. Secrets are
// enumerated exhaustively when q^n <= 2^12 and sampled (256 draws, fixed
// stream) otherwise. m = 1 and m = 2 are computed from the spectra; larger m
// report the subadditive bound m * chi(1), which the closed form matches.
EnsembleReport holevo_chi(const EdcpParams& params, u64 m);

double holevo_chi_closed_form(const EdcpParams& params, u64 m);

// Minimum copies needed to reach success probability success_p, from the
// Fano chain: ceil((p n log2 q - 1) / ((1 - q^-n) log2 r)), floored at 0.
u64 fano_min_samples(const EdcpParams& params, double success_p);

// Verifies both ensemble spectra against their known closed forms:
//   rho_{s,r}:   {q^-n: q^n, 0: (r-1) q^n}
//   averaged rho: {q^-n: 1, (r q^n)^-1: (q^n - 1) r, 0: r - 1}
bool spectrum_check(const EdcpParams& params);

}  // namespace edcp
