#include "linkern/kernels.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

using namespace linkern;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
    VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Reference min-max over the sign-split coordinates, written out directly.
double gmm_oracle(const VectorXd& u, const VectorXd& v) {
    double num = 0, den = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double up = std::max(u[i], 0.0), un = std::max(-u[i], 0.0);
        const double vp = std::max(v[i], 0.0), vn = std::max(-v[i], 0.0);
        num += std::min(up, vp) + std::min(un, vn);
        den += std::max(up, vp) + std::max(un, vn);
    }
    return num / den;
}

VectorXd random_vector(std::mt19937_64& rng, Eigen::Index dim, double zero_prob = 0.3) {
    std::normal_distribution<double> normal;
    std::bernoulli_distribution zero(zero_prob);
    VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = zero(rng) ? 0.0 : normal(rng);
    return v;
}

}  // namespace

TEST_CASE("gmm examples") {
    CHECK(gmm(vec({-5, 3}), vec({-5, 3})) == 1.0);
    CHECK(gmm(vec({1, 0}), vec({0, 1})) == 0.0);
    CHECK(gmm(vec({-5, 3}), vec({2, 3})) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("gmm zero-vector handling") {
    CHECK(gmm(vec({0, 0}), vec({1, -2})) == 0.0);
    CHECK(gmm(vec({1, -2}), vec({0, 0})) == 0.0);
    try {
        (void)gmm(vec({0, 0}), vec({0, 0}));
        FAIL("expected an exception");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()) == "GMM undefined for two zero vectors");
    }
    CHECK_THROWS_AS(gmm(vec({1, 0}), vec({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("gmm properties against the direct oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 300; ++trial) {
        const VectorXd u = random_vector(rng, 12);
        const VectorXd v = random_vector(rng, 12);
        if (u.isZero() && v.isZero()) continue;
        const double g = gmm(u, v);
        CHECK(g == doctest::Approx(gmm_oracle(u, v)).epsilon(1e-12));
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
        CHECK(gmm(v, u) == g);
        const double c = scale(rng);
        CHECK(gmm(VectorXd(c * u), VectorXd(c * v)) == doctest::Approx(g).epsilon(1e-12));
        if (!u.isZero()) CHECK(gmm(u, u) == 1.0);
        const SparseVector us = u.sparseView(), vs = v.sparseView();
        CHECK(gmm(us, vs) == doctest::Approx(g).epsilon(1e-14));
    }
}

TEST_CASE("gmm reduces to min-max on nonnegative data") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const VectorXd u = random_vector(rng, 8).cwiseAbs();
        const VectorXd v = random_vector(rng, 8).cwiseAbs();
        if (u.isZero() && v.isZero()) continue;
        const double minmax = u.cwiseMin(v).sum() / u.cwiseMax(v).sum();
        CHECK(gmm(u, v) == doctest::Approx(minmax).epsilon(1e-13));
    }
}

TEST_CASE("gmm with a center vector") {
    const CenterVector<double> mu(vec({1, 1}));
    // transforms: [2,-1] -> [1,0,0,2]; [1,3] -> [0,0,2,0]
    CHECK(gmm(vec({2, -1}), vec({1, 3}), mu) == doctest::Approx(0.0));
    CHECK(gmm(vec({2, -1}), vec({3, -1}), mu) == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("rbf examples") {
    for (double g : {0.1, 1.0, 7.0}) CHECK(rbf(1.0, RbfParams(g)) == 1.0);
    CHECK(rbf(0.0, RbfParams(1.0)) == doctest::Approx(0.367879441171).epsilon(1e-11));
    CHECK(rbf(0.96, RbfParams(1.0)) == doctest::Approx(0.960789439152).epsilon(1e-11));
    CHECK(rbf(vec({3, 4}), vec({4, 3}), RbfParams(1.0)) == doctest::Approx(std::exp(-0.04)).epsilon(1e-14));
}

TEST_CASE("rbf domain") {
    CHECK_THROWS(RbfParams(0.0));
    CHECK_THROWS(RbfParams(-1.0));
    CHECK_THROWS(RbfParams(INFINITY));
    CHECK_THROWS(rbf(1.1, RbfParams(1.0)));
    CHECK_THROWS(rbf(-1.0 - 1e-9, RbfParams(1.0)));
    CHECK(rbf(1.0 + 1e-13, RbfParams(1.0)) == 1.0);
}

TEST_CASE("rbf monotonicity") {
    for (double g : {0.5, 1.0, 4.0})
        for (double r = -1.0; r < 0.99; r += 0.05) {
            CHECK(rbf(r + 0.01, RbfParams(g)) > rbf(r, RbfParams(g)));
            CHECK(rbf(r, RbfParams(g * 1.5)) < rbf(r, RbfParams(g)));
        }
}

TEST_CASE("kernel matrix examples") {
    const std::vector<VectorXd> one{vec({2, -1})};
    const auto k1 = kernel_matrix<VectorXd>(one, {KernelKind::Gmm});
    CHECK(k1.rows() == 1);
    CHECK(k1(0, 0) == 1.0);

    const std::vector<VectorXd> ortho{vec({1, 0}), vec({0, 1})};
    const auto k2 = kernel_matrix<VectorXd>(ortho, {KernelKind::Rbf, 1.0});
    CHECK(k2(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(k2(1, 0) == k2(0, 1));
    CHECK(k2(0, 0) == 1.0);

    const std::vector<VectorXd> three{vec({-5, 3}), vec({2, 3}), vec({-5, 3})};
    const auto k3 = kernel_matrix<VectorXd>(three, {KernelKind::Gmm});
    CHECK(k3(0, 1) == doctest::Approx(0.3));
    CHECK(k3(0, 2) == 1.0);
    CHECK(k3(1, 2) == doctest::Approx(0.3));
    CHECK(k3 == k3.transpose());

    const auto lin = kernel_matrix<VectorXd>(ortho, {KernelKind::Linear});
    CHECK(lin == Eigen::MatrixXd::Identity(2, 2));
}

TEST_CASE("kernel matrix errors carry the cell") {
    const std::vector<VectorXd> rows{vec({0, 0}), vec({0, 0})};
    try {
        (void)kernel_matrix<VectorXd>(rows, {KernelKind::Gmm});
        FAIL("expected an exception");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("kernel_matrix[0,0]") != std::string::npos);
    }
    const std::vector<VectorXd> not_unit{vec({1, 1})};
    CHECK_THROWS_AS(kernel_matrix<VectorXd>(not_unit, {KernelKind::Rbf, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(kernel_matrix<VectorXd>(std::span<const VectorXd>{}, {KernelKind::Gmm}), std::invalid_argument);
}

TEST_CASE("kernel matrices are positive semidefinite and thread independent") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<VectorXd> rows;
        for (int i = 0; i < 64; ++i) {
            VectorXd v = random_vector(rng, 10, 0.2);
            if (v.isZero()) v[0] = 1.0;
            rows.push_back(v.normalized());
        }
        for (const auto kind : {KernelKind::Gmm, KernelKind::Rbf, KernelKind::Linear}) {
            const auto k = kernel_matrix<VectorXd>(rows, {kind, 2.0});
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-8);
            CHECK(kernel_matrix<VectorXd>(rows, {kind, 2.0}, 4) == k);
            CHECK(k.diagonal().isOnes(1e-12));
        }
    }
}
