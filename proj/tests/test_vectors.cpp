#include "linkern/vectors.hpp"

#include <doctest.h>

#include <Eigen/Core>

#include <random>

using namespace linkern;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
    VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

VectorXd dense_of(const TransformedVector<double>& t) { return VectorXd(t.coeffs()); }

VectorXd random_vector(std::mt19937_64& rng, Eigen::Index dim, double zero_prob = 0.3) {
    std::normal_distribution<double> normal;
    std::bernoulli_distribution zero(zero_prob);
    VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = zero(rng) ? 0.0 : normal(rng);
    return v;
}

}  // namespace

TEST_CASE("sign-split transform examples") {
    CHECK(dense_of(transform(vec({-5, 3}))) == vec({0, 5, 3, 0}));

    const auto zero = transform(vec({0, 0}));
    CHECK(zero.dim() == 4);
    CHECK(zero.empty());

    const CenterVector<double> mu(vec({1, 1}));
    CHECK(dense_of(transform(vec({2, -1}), mu)) == vec({1, 0, 0, 2}));
}

TEST_CASE("transform of sparse input with a nonzero center fills implicit zeros") {
    const SparseVector u = vec({0, 3, 0}).sparseView();
    const CenterVector<double> mu(vec({1, 1, 0}));
    // 0-1 = -1 -> pos 1; 3-1 = 2 -> pos 2; 0-0 -> nothing
    CHECK(dense_of(transform(u, mu)) == vec({0, 1, 2, 0, 0, 0}));
    CHECK(dense_of(transform(u, mu)) == dense_of(transform(VectorXd(u), mu)));
}

TEST_CASE("transform errors") {
    CHECK_THROWS_AS(transform(vec({1, 2}), CenterVector<double>(vec({0, 0, 0}))), std::invalid_argument);
    CHECK_THROWS_AS(transform(vec({1, std::nan("")})), std::invalid_argument);
    CHECK_THROWS_AS(transform(vec({1, INFINITY})), std::invalid_argument);
    CHECK_THROWS_AS(CenterVector<double>(vec({INFINITY})), std::invalid_argument);
}

TEST_CASE("transform properties on random vectors") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const VectorXd u = random_vector(rng, 17);
        const VectorXd muv = trial % 2 ? random_vector(rng, 17, 0.5) : VectorXd::Zero(17);
        const CenterVector<double> mu(muv);
        const VectorXd t = dense_of(transform(u, mu));
        REQUIRE(t.size() == 34);
        for (Eigen::Index i = 0; i < 17; ++i) {
            CHECK(t[2 * i] * t[2 * i + 1] == 0.0);
            CHECK(t[2 * i] >= 0.0);
            CHECK(t[2 * i + 1] >= 0.0);
        }
        CHECK(t.sum() == doctest::Approx((u - muv).cwiseAbs().sum()).epsilon(1e-12));

        const VectorXd tn = dense_of(transform(VectorXd(-u)));
        const VectorXd tp = dense_of(transform(u));
        for (Eigen::Index i = 0; i < 17; ++i) {
            CHECK(tn[2 * i] == tp[2 * i + 1]);
            CHECK(tn[2 * i + 1] == tp[2 * i]);
        }

        const SparseVector us = u.sparseView();
        CHECK(dense_of(transform(us, mu)) == t);
    }
}

TEST_CASE("stored values are strictly positive") {
    const auto t = transform(vec({0, -2, 0, 4, 0}));
    CHECK(t.nonZeros() == 2);
    for (SparseVector::InnerIterator it(t.coeffs(), 0); it; ++it) CHECK(it.value() > 0.0);
}

TEST_CASE("correlation examples") {
    CHECK(correlation(vec({3, 4}), vec({3, 4})) == 1.0);
    CHECK(correlation(vec({1, 1}), vec({1, -1})) == 0.0);
    CHECK(correlation(vec({3, 4}), vec({4, 3})) == doctest::Approx(0.96).epsilon(1e-15));
}

TEST_CASE("correlation errors") {
    CHECK_THROWS_AS(correlation(vec({0, 0}), vec({1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(correlation(vec({1, 0}), vec({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("correlation properties") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const VectorXd u = random_vector(rng, 9, 0.0);
        const VectorXd v = random_vector(rng, 9, 0.0);
        const double rho = correlation(u, v);
        CHECK(rho >= -1.0);
        CHECK(rho <= 1.0);
        CHECK(correlation(v, u) == doctest::Approx(rho).epsilon(1e-14));
        CHECK(correlation(VectorXd(3.5 * u), v) == doctest::Approx(rho).epsilon(1e-13));
        CHECK(correlation(u, VectorXd(0.01 * v)) == doctest::Approx(rho).epsilon(1e-13));
        CHECK(correlation(u, VectorXd(2.0 * u)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(correlation(u, VectorXd(-2.0 * u)) == doctest::Approx(-1.0).epsilon(1e-15));
        const SparseVector us = u.sparseView(), vs = v.sparseView();
        CHECK(correlation(us, vs) == doctest::Approx(rho).epsilon(1e-14));
    }
}

TEST_CASE("l2 normalization") {
    CHECK(l2_normalize(vec({3, 4})).isApprox(vec({0.6, 0.8}), 1e-15));
    CHECK(l2_normalize(vec({5, 0})) == vec({1, 0}));
    CHECK(l2_normalize(vec({1, 1, 1, 1})) == vec({0.5, 0.5, 0.5, 0.5}));
    CHECK_THROWS_AS(l2_normalize(vec({0, 0})), std::invalid_argument);

    const SparseVector s = vec({0, 3, 0, 4}).sparseView();
    const SparseVector n = l2_normalize(s);
    CHECK(n.nonZeros() == 2);
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const VectorXd u = random_vector(rng, 13, 0.2);
        if (u.norm() == 0.0) continue;
        CHECK(std::abs(l2_normalize(u).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("make_sparse validates its input") {
    const std::vector<Eigen::Index> idx{0, 2, 5};
    const std::vector<double> val{1.0, 0.0, -2.0};
    const auto s = make_sparse<double>(6, idx, val);
    CHECK(s.size() == 6);
    CHECK(s.nonZeros() == 2);
    const std::vector<Eigen::Index> bad{2, 1};
    const std::vector<double> two{1.0, 1.0};
    CHECK_THROWS_AS(make_sparse<double>(6, bad, two), std::invalid_argument);
    const std::vector<Eigen::Index> high{0, 6};
    CHECK_THROWS_AS(make_sparse<double>(6, high, two), std::invalid_argument);
    const std::vector<double> nan{1.0, std::nan("")};
    CHECK_THROWS_AS(make_sparse<double>(6, std::span<const Eigen::Index>(idx).first(2), nan), std::invalid_argument);
}

TEST_CASE("single precision instantiation") {
    Eigen::VectorXf u(2);
    u << -5.0f, 3.0f;
    const auto t = transform(u);
    CHECK(t.sum() == 8.0f);
    CHECK(correlation(u, u) == doctest::Approx(1.0f));
}
