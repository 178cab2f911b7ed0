#pragma once

// Exact kernels: generalized min-max (GMM) on the sign-split transform, the
// correlation-form RBF kernel exp(-gamma (1 - rho)), and full Gram matrices.

#include "linkern/parallel.hpp"
#include "linkern/vectors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkern {

class RbfParams {
public:
    explicit RbfParams(double gamma) : gamma_(gamma) {
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("RBF gamma must be positive and finite");
    }
    [[nodiscard]] double gamma() const { return gamma_; }

private:
    double gamma_;
};

/// sum min(a_i, b_i) / sum max(a_i, b_i) over two transformed vectors.
/// A zero vector against a nonzero one gives 0; two zero vectors are an error.
template <typename Scalar>
Scalar gmm(const TransformedVector<Scalar>& a, const TransformedVector<Scalar>& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("gmm: dimension mismatch (" + std::to_string(a.source_dim()) +
                                    " vs " + std::to_string(b.source_dim()) + ")");
    if (a.empty() && b.empty()) throw std::domain_error("GMM undefined for two zero vectors");

    Scalar min_sum(0), max_sum(0);
    typename SparseVectorX<Scalar>::InnerIterator ia(a.coeffs(), 0);
    typename SparseVectorX<Scalar>::InnerIterator ib(b.coeffs(), 0);
    while (ia || ib) {
        if (!ib || (ia && ia.index() < ib.index())) {
            max_sum += ia.value();
            ++ia;
        } else if (!ia || ib.index() < ia.index()) {
            max_sum += ib.value();
            ++ib;
        } else {
            min_sum += std::min(ia.value(), ib.value());
            max_sum += std::max(ia.value(), ib.value());
            ++ia;
            ++ib;
        }
    }
    return std::clamp(min_sum / max_sum, Scalar(0), Scalar(1));
}

template <VectorExpr A, VectorExpr B, typename Scalar = typename A::Scalar>
Scalar gmm(const A& u, const B& v, const CenterVector<Scalar>& mu = {}) {
    if (u.size() != v.size())
        throw std::invalid_argument("gmm: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()) + ")");
    return gmm(transform(u, mu), transform(v, mu));
}

/// exp(-gamma (1 - rho)).
template <typename Scalar>
Scalar rbf(Scalar rho, const RbfParams& params) {
    if (!(std::abs(rho) <= Scalar(1) + Scalar(kCorrelationClampTolerance)))
        throw std::domain_error("rbf: rho outside [-1, 1]: " + std::to_string(rho));
    rho = std::clamp(rho, Scalar(-1), Scalar(1));
    return std::exp(-Scalar(params.gamma()) * (Scalar(1) - rho));
}

/// RBF kernel of two vectors through their correlation.
template <VectorExpr A, VectorExpr B>
typename A::Scalar rbf(const A& u, const B& v, const RbfParams& params) {
    return rbf(correlation(u, v), params);
}

enum class KernelKind { Gmm, Rbf, Linear };

struct KernelSpec {
    KernelKind kind = KernelKind::Gmm;
    double gamma = 1.0;  // used by Rbf only
};

/// Unit-norm tolerance for inputs of the linear and RBF Gram matrices.
inline constexpr double kUnitNormTolerance = 1e-6;

/// Symmetric n x n Gram matrix. Rows are computed in parallel; every cell
/// is written by exactly one worker, so the result does not depend on
/// `threads`. Linear and RBF kinds require unit-norm rows.
template <VectorExpr Row>
Eigen::Matrix<typename Row::Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_matrix(
    std::span<const Row> data, const KernelSpec& spec, unsigned threads = 1) {
    using Scalar = typename Row::Scalar;
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n == 0) throw std::invalid_argument("kernel_matrix: empty dataset");

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> k(n, n);
    auto context = [](Eigen::Index i, Eigen::Index j, const std::exception& e) {
        return "kernel_matrix[" + std::to_string(i) + "," + std::to_string(j) + "]: " + e.what();
    };

    if (spec.kind == KernelKind::Gmm) {
        std::vector<TransformedVector<Scalar>> transformed;
        transformed.reserve(data.size());
        for (const auto& row : data) transformed.push_back(transform(row));
        parallel_for(data.size(), threads, [&](std::size_t ui) {
            const auto i = static_cast<Eigen::Index>(ui);
            for (Eigen::Index j = i; j < n; ++j) {
                try {
                    k(i, j) = gmm(transformed[ui], transformed[static_cast<std::size_t>(j)]);
                } catch (const std::exception& e) {
                    throw std::domain_error(context(i, j, e));
                }
            }
        });
    } else {
        const RbfParams params(spec.kind == KernelKind::Rbf ? spec.gamma : 1.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar norm = data[static_cast<std::size_t>(i)].norm();
            if (std::abs(norm - Scalar(1)) > Scalar(kUnitNormTolerance))
                throw std::invalid_argument("kernel_matrix: row " + std::to_string(i) +
                                            " is not unit-norm (norm " + std::to_string(norm) + ")");
        }
        parallel_for(data.size(), threads, [&](std::size_t ui) {
            const auto i = static_cast<Eigen::Index>(ui);
            for (Eigen::Index j = i; j < n; ++j) {
                const Scalar rho = std::clamp(
                    Scalar(data[ui].dot(data[static_cast<std::size_t>(j)])), Scalar(-1), Scalar(1));
                k(i, j) = spec.kind == KernelKind::Rbf ? rbf(rho, params) : rho;
            }
        });
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) k(i, j) = k(j, i);
    return k;
}

}  // namespace linkern
