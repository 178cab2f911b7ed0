#pragma once

// Random Fourier features for the RBF kernel exp(-gamma (1 - rho)) on
// unit-norm data, X_j = sqrt(2) cos(sqrt(gamma) <u, r_j> + w_j), and the
// normalized variant (NRFF) that divides the k-vector by its l2 norm.
// r_ij and w_j come from the counter-based generator, so no projection
// matrix is ever stored.

#include "linkern/vectors.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace linkern {

struct RffConfig {
    std::uint32_t k = 256;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    bool normalize = true;

    void validate() const;
    friend bool operator==(const RffConfig&, const RffConfig&) = default;
};

struct RffFeatures {
    Eigen::VectorXd values;
    RffConfig config;
};

/// N(0, 1) entry r_ij of the implicit projection matrix.
double rff_projection_weight(std::uint64_t seed, std::uint32_t sample_index, std::uint64_t coordinate);

/// Uniform(0, 2 pi) phase w_j.
double rff_phase(std::uint64_t seed, std::uint32_t sample_index);

/// Unit-norm tolerance on rff_features inputs.
inline constexpr double kRffUnitTolerance = 1e-6;

namespace detail {
RffFeatures rff_from_nonzeros(std::span<const std::pair<std::uint64_t, double>> nonzeros,
                              double norm, const RffConfig& config);
}

/// Features of a unit-norm vector. Zero entries are skipped, so dense and
/// sparse inputs with the same nonzeros give bit-identical features.
template <VectorExpr V>
RffFeatures rff_features(const V& u, const RffConfig& config) {
    std::vector<std::pair<std::uint64_t, double>> nonzeros;
    for_each_stored(u.derived(), [&](Eigen::Index i, double x) {
        if (x != 0.0) nonzeros.emplace_back(static_cast<std::uint64_t>(i), x);
    });
    return detail::rff_from_nonzeros(nonzeros, u.derived().norm(), config);
}

/// Inner product of two feature vectors: exactly Z_k for NRFF, and
/// (1/k) sum X_j Y_j for plain RFF.
double estimate_rbf(const RffFeatures& fu, const RffFeatures& fv);

}  // namespace linkern
