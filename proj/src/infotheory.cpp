#include "edcp/infotheory.hpp"

#include <cmath>

#include "edcp/dense_oracle.hpp"

namespace edcp {

namespace {

double qn_of(const EdcpParams& params) {
    double qn = 1.0;
    for (std::size_t i = 0; i < params.n; ++i) qn *= static_cast<double>(params.q.q);
    return qn;
}

// All secrets when q^n is small, else a fixed-seed sample. The per-secret
// spectrum is secret-independent, so sampling changes nothing measurable.
std::vector<ZqVector> secret_panel(const EdcpParams& params) {
    const u64 q = params.q.q;
    const double qn = qn_of(params);
    std::vector<ZqVector> out;
    if (qn <= 4096.0) {
        const u64 total = static_cast<u64>(qn);
        std::vector<u64> coords(params.n);
        for (u64 e = 0; e < total; ++e) {
            u64 rest = e;
            for (std::size_t c = 0; c < params.n; ++c) {
                coords[c] = rest % q;
                rest /= q;
            }
            out.emplace_back(q, coords);
        }
    } else {
        Rng rng(0x5eedu);
        std::vector<u64> coords(params.n);
        for (int i = 0; i < 256; ++i) {
            for (auto& c : coords) c = rng.uniform_below(q);
            out.emplace_back(q, coords);
        }
    }
    return out;
}

}  // namespace

double von_neumann_entropy_bits(const DensityOperator& rho) {
    double h = 0.0;
    for (double ev : eigenvalues(rho)) {
        if (ev < -1e-9) throw BadParams("entropy: negative eigenvalue");
        if (ev > 1e-12) h -= ev * std::log2(ev);
    }
    return h;
}

double holevo_chi_closed_form(const EdcpParams& params, u64 m) {
    return static_cast<double>(m) * (1.0 - 1.0 / qn_of(params)) *
           std::log2(static_cast<double>(params.r));
}

EnsembleReport holevo_chi(const EdcpParams& params, u64 m) {
    if (m < 1) throw BadParams("holevo_chi: m must be >= 1");
    EnsembleReport report;
    report.params = params;
    report.m = m;
    report.chi_closed_form = holevo_chi_closed_form(params, m);

    const std::vector<ZqVector> secrets = secret_panel(params);
    const double weight = 1.0 / static_cast<double>(secrets.size());

    DensityOperator averaged =
        DensityOperator::zero(IndexSpace::coset_space(params.r, params.q.q, params.n));
    double mean_entropy = 0.0;
    std::vector<std::pair<double, u64>> fixed_spectrum;
    for (std::size_t i = 0; i < secrets.size(); ++i) {
        DensityOperator rho_s = dense_oracle::ensemble_density(params, secrets[i]);
        if (i == 0) fixed_spectrum = eigen_spectrum(rho_s);
        mean_entropy += weight * von_neumann_entropy_bits(rho_s);
        const u64 d = rho_s.dim();
        std::vector<cd>& acc = const_cast<std::vector<cd>&>(averaged.matrix());
        for (u64 k = 0; k < d * d; ++k) acc[k] += weight * rho_s.matrix()[k];
    }
    report.spectrum_fixed_secret = std::move(fixed_spectrum);
    report.spectrum_averaged = eigen_spectrum(averaged);

    if (m == 1) {
        report.chi_numeric = von_neumann_entropy_bits(averaged) - mean_entropy;
    } else if (m == 2 && averaged.dim() * averaged.dim() <= 256) {
        // exact two-copy ensemble on the doubled space
        DensityOperator averaged2 = tensor_product(averaged, averaged);  // placeholder shape
        std::vector<cd>& acc = const_cast<std::vector<cd>&>(averaged2.matrix());
        for (auto& v : acc) v = cd{0.0, 0.0};
        double mean_entropy2 = 0.0;
        for (const auto& s : secrets) {
            DensityOperator rho_s = dense_oracle::ensemble_density(params, s);
            DensityOperator rho2 = tensor_product(rho_s, rho_s);
            mean_entropy2 += weight * von_neumann_entropy_bits(rho2);
            for (u64 k = 0; k < rho2.dim() * rho2.dim(); ++k) acc[k] += weight * rho2.matrix()[k];
        }
        report.chi_numeric = von_neumann_entropy_bits(averaged2) - mean_entropy2;
    } else {
        // subadditive bound: m copies carry at most m times the single-copy chi
        report.chi_numeric =
            static_cast<double>(m) * (von_neumann_entropy_bits(averaged) - mean_entropy);
    }
    return report;
}

u64 fano_min_samples(const EdcpParams& params, double success_p) {
    if (success_p <= 0.0 || success_p > 1.0)
        throw BadParams("fano_min_samples: success probability must be in (0, 1]");
    const double numerator =
        success_p * static_cast<double>(params.n) * std::log2(static_cast<double>(params.q.q)) - 1.0;
    if (numerator <= 0.0) return 0;
    const double denominator =
        (1.0 - 1.0 / qn_of(params)) * std::log2(static_cast<double>(params.r));
    return static_cast<u64>(std::ceil(numerator / denominator));
}

bool spectrum_check(const EdcpParams& params) {
    const double qn = qn_of(params);
    const u64 qn_int = static_cast<u64>(qn);
    const u64 r = params.r;

    const EnsembleReport report = holevo_chi(params, 1);

    auto matches = [](const std::vector<std::pair<double, u64>>& spectrum,
                      const std::vector<std::pair<double, u64>>& expected) {
        if (spectrum.size() != expected.size()) return false;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            if (spectrum[i].second != expected[i].second) return false;
            if (std::abs(spectrum[i].first - expected[i].first) > 1e-7) return false;
        }
        return true;
    };

    const std::vector<std::pair<double, u64>> expected_fixed = {{1.0 / qn, qn_int},
                                                                {0.0, (r - 1) * qn_int}};
    std::vector<std::pair<double, u64>> expected_avg = {{1.0 / qn, 1},
                                                        {1.0 / (static_cast<double>(r) * qn),
                                                         (qn_int - 1) * r}};
    if (r > 1) expected_avg.emplace_back(0.0, r - 1);

    return matches(report.spectrum_fixed_secret, expected_fixed) &&
           matches(report.spectrum_averaged, expected_avg);
}

}  // namespace edcp
