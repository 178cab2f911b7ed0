#pragma once

// Vector types shared by every kernel and hash: Eigen dense vectors, Eigen
// sparse vectors (no stored zeros), the sign-split transform into a 2D-dim
// nonnegative vector, and the correlation (normalized linear kernel).

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace linkern {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using SparseVectorX = Eigen::SparseVector<Scalar>;

using SparseVector = SparseVectorX<double>;

template <typename T>
concept DenseVectorExpr = std::derived_from<T, Eigen::MatrixBase<T>>;

template <typename T>
concept SparseVectorExpr = std::derived_from<T, Eigen::SparseMatrixBase<T>>;

template <typename T>
concept VectorExpr = DenseVectorExpr<T> || SparseVectorExpr<T>;

/// Correlation values may exceed [-1, 1] by this much from round-off and
/// are clamped; anything beyond is reported as an error. Scalars coarser
/// than double use 16 machine epsilons instead.
inline constexpr double kCorrelationClampTolerance = 1e-12;

/// Calls f(index, value) for every stored entry. Dense vectors visit every
/// coordinate, sparse vectors only their stored nonzeros.
template <VectorExpr V, typename F>
void for_each_stored(const V& v, F&& f) {
    if constexpr (SparseVectorExpr<V>) {
        for (typename V::InnerIterator it(v.derived(), 0); it; ++it) f(it.index(), it.value());
    } else {
        for (Eigen::Index i = 0; i < v.size(); ++i) f(i, v.coeff(i));
    }
}

/// Builds a sparse vector from (index, value) pairs. Indices must be
/// strictly increasing and below dim; zero values are dropped.
template <typename Scalar = double>
SparseVectorX<Scalar> make_sparse(Eigen::Index dim, std::span<const Eigen::Index> indices,
                                  std::span<const Scalar> values) {
    if (dim < 1) throw std::invalid_argument("sparse vector dimension must be >= 1");
    if (indices.size() != values.size())
        throw std::invalid_argument("sparse vector: index and value counts differ");
    SparseVectorX<Scalar> out(dim);
    out.reserve(static_cast<Eigen::Index>(indices.size()));
    Eigen::Index prev = -1;
    for (std::size_t n = 0; n < indices.size(); ++n) {
        const Eigen::Index i = indices[n];
        if (i <= prev || i >= dim)
            throw std::invalid_argument("sparse vector: indices must be strictly increasing and < dim");
        if (!std::isfinite(values[n]))
            throw std::invalid_argument("sparse vector: non-finite value at index " + std::to_string(i));
        prev = i;
        if (values[n] != Scalar(0)) out.insertBack(i) = values[n];
    }
    return out;
}

/// Center vector of the sign-split transform. Default-constructed it is the
/// origin in any dimension.
template <typename Scalar = double>
class CenterVector {
public:
    CenterVector() = default;
    explicit CenterVector(VectorX<Scalar> entries) : entries_(std::move(entries)) {
        if (!entries_->allFinite()) throw std::invalid_argument("center vector must be finite");
    }

    [[nodiscard]] bool is_origin() const { return !entries_ || entries_->isZero(0); }

    [[nodiscard]] Scalar operator[](Eigen::Index i) const {
        return entries_ ? (*entries_)[i] : Scalar(0);
    }

    void check_dimension(Eigen::Index dim) const {
        if (entries_ && entries_->size() != dim)
            throw std::invalid_argument("center vector has dimension " +
                                        std::to_string(entries_->size()) + ", data has " +
                                        std::to_string(dim));
    }

private:
    std::optional<VectorX<Scalar>> entries_;
};

/// Nonnegative 2D-dim image of a D-dim vector. Position 2i holds the part of
/// u_i above the center, 2i+1 the part below; at most one of them is stored.
template <typename Scalar = double>
class TransformedVector {
public:
    [[nodiscard]] Eigen::Index dim() const { return coeffs_.size(); }
    [[nodiscard]] Eigen::Index source_dim() const { return coeffs_.size() / 2; }
    [[nodiscard]] Eigen::Index nonZeros() const { return coeffs_.nonZeros(); }
    [[nodiscard]] bool empty() const { return coeffs_.nonZeros() == 0; }
    [[nodiscard]] const SparseVectorX<Scalar>& coeffs() const { return coeffs_; }
    [[nodiscard]] Scalar sum() const { return coeffs_.sum(); }

    template <VectorExpr V, typename S>
    friend TransformedVector<S> transform(const V& u, const CenterVector<S>& mu);

private:
    explicit TransformedVector(Eigen::Index source_dim) : coeffs_(2 * source_dim) {}

    void append(Eigen::Index source_index, Scalar centered) {
        if (centered > Scalar(0))
            coeffs_.insertBack(2 * source_index) = centered;
        else if (centered < Scalar(0))
            coeffs_.insertBack(2 * source_index + 1) = -centered;
    }

    SparseVectorX<Scalar> coeffs_;
};

/// Sign-split transform about the center mu. Entries equal to the center
/// store nothing.
template <VectorExpr V, typename Scalar>
TransformedVector<Scalar> transform(const V& u, const CenterVector<Scalar>& mu) {
    static_assert(std::is_same_v<typename V::Scalar, Scalar>, "scalar types of data and center differ");
    const Eigen::Index dim = u.size();
    if (dim < 1) throw std::invalid_argument("transform: empty vector");
    mu.check_dimension(dim);

    TransformedVector<Scalar> out(dim);
    auto check = [](Eigen::Index i, Scalar x) {
        if (!std::isfinite(x))
            throw std::invalid_argument("transform: non-finite entry at index " + std::to_string(i));
    };

    if (mu.is_origin()) {
        for_each_stored(u.derived(), [&](Eigen::Index i, Scalar x) {
            check(i, x);
            out.append(i, x);
        });
        return out;
    }
    // Nonzero center: implicit zeros of a sparse input can land off-center.
    Eigen::Index next = 0;
    auto fill_gap = [&](Eigen::Index until) {
        for (; next < until; ++next) out.append(next, -mu[next]);
    };
    for_each_stored(u.derived(), [&](Eigen::Index i, Scalar x) {
        check(i, x);
        fill_gap(i);
        out.append(i, x - mu[i]);
        next = i + 1;
    });
    fill_gap(dim);
    return out;
}

template <VectorExpr V>
TransformedVector<typename V::Scalar> transform(const V& u) {
    return transform(u, CenterVector<typename V::Scalar>{});
}

/// Normalized linear kernel sum(u_i v_i) / (|u| |v|).
template <VectorExpr A, VectorExpr B>
typename A::Scalar correlation(const A& u, const B& v) {
    using Scalar = typename A::Scalar;
    if (u.size() != v.size())
        throw std::invalid_argument("correlation: dimension mismatch (" + std::to_string(u.size()) +
                                    " vs " + std::to_string(v.size()) + ")");
    const Scalar nu = u.derived().norm();
    const Scalar nv = v.derived().norm();
    if (!(nu > Scalar(0)) || !(nv > Scalar(0)))
        throw std::invalid_argument("correlation undefined for a zero-norm vector");
    if (!std::isfinite(nu) || !std::isfinite(nv))
        throw std::invalid_argument("correlation: non-finite input");
    const Scalar rho = u.derived().dot(v.derived()) / (nu * nv);
    const Scalar tolerance =
        std::max(Scalar(kCorrelationClampTolerance), Scalar(16) * std::numeric_limits<Scalar>::epsilon());
    if (std::abs(rho) > Scalar(1) + tolerance)
        throw std::domain_error("correlation out of [-1, 1] beyond round-off: " + std::to_string(rho));
    return std::clamp(rho, Scalar(-1), Scalar(1));
}

/// Unit l2-norm copy of u.
template <VectorExpr V>
auto l2_normalize(const V& u) {
    using Scalar = typename V::Scalar;
    const Scalar n = u.derived().norm();
    if (!(n > Scalar(0))) throw std::invalid_argument("l2_normalize: zero vector");
    if (!std::isfinite(n)) throw std::invalid_argument("l2_normalize: non-finite input");
    if constexpr (SparseVectorExpr<V>) {
        SparseVectorX<Scalar> out = u.derived() / n;
        return out;
    } else {
        VectorX<Scalar> out = u.derived() / n;
        return out;
    }
}

}  // namespace linkern
