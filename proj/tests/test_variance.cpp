#include "linkern/variance.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace linkern::theory;

namespace {

const double kGammas[] = {0.5, 1.0, 2.0, 4.0};

}  // namespace

TEST_CASE("v_rff") {
    CHECK(v_rff(1.0, 3.0) == 0.5);
    CHECK(v_rff(0.0, 1.0) == doctest::Approx(0.873821).epsilon(1e-6));
    CHECK(v_rff(0.0, 60.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double e2 = std::exp(-2.0);
    CHECK(v_rff(0.0, 1.0) == doctest::Approx(0.5 + 0.5 * (1 - e2) * (1 - e2)).epsilon(1e-15));
    for (double g : kGammas)
        for (double r = -1.0; r <= 1.0; r += 0.1) {
            CHECK(v_rff(r, g) >= 0.5);
            CHECK(v_rff(r, g) <= 1.0);
        }
}

TEST_CASE("v_nrff") {
    CHECK(v_nrff(1.0, 0.5) == 0.0);
    CHECK(v_nrff(1.0, 4.0) == 0.0);
    const double e2 = std::exp(-2.0);
    CHECK(v_nrff(0.0, 1.0) == doctest::Approx(0.873821 - 0.25 * 0.135335 * (3 - 0.0183156)).epsilon(1e-5));
    CHECK(v_nrff(0.0, 1.0) == doctest::Approx(v_rff(0.0, 1.0) - 0.25 * e2 * (3 - e2 * e2)).epsilon(1e-15));
    // 0.772938 is a hand-rounded value; the exact one is 0.77294076...
    CHECK(std::abs(v_nrff(0.0, 1.0) - 0.772938) < 5e-6);
    CHECK(v_nrff(0.0, 1.0) == doctest::Approx(0.7729407618244615).epsilon(1e-14));
    CHECK(v_nrff(1.0, 1.0) / v_rff(1.0, 1.0) == 0.0);
}

TEST_CASE("normalization strictly reduces variance on a 100x100 grid") {
    for (int gi = 1; gi <= 100; ++gi) {
        const double g = 0.1 * gi;
        for (int ri = 0; ri < 100; ++ri) {
            const double r = -1.0 + 2.0 * ri / 100.0;  // excludes rho = 1
            CAPTURE(g);
            CAPTURE(r);
            // The gap is e^{-2g(1-r)}(3 - e^{-4g(1-r)})/4; once that drops
            // below double resolution of v_rff the two round to the same value.
            if (std::exp(-2 * g * (1 - r)) > 1e-14)
                CHECK(v_nrff(r, g) < v_rff(r, g));
            else
                CHECK(v_nrff(r, g) <= v_rff(r, g));
            CHECK(v_nrff(r, g) >= 0.0);
        }
    }
}

TEST_CASE("variance ratio falls towards zero as rho -> 1") {
    for (double g : kGammas) {
        double prev = INFINITY;
        for (double r = -0.95; r <= 1.0 + 1e-9; r += 0.05) {
            const double rr = std::min(r, 1.0);
            const double ratio = v_nrff(rr, g) / v_rff(rr, g);
            CAPTURE(g);
            CAPTURE(rr);
            CHECK(ratio < prev);
            CHECK(ratio <= 1.0);
            prev = ratio;
        }
        CHECK(prev == 0.0);
    }
}

TEST_CASE("non-shifted expectation") {
    for (double g : kGammas) CHECK(rff_nonshifted_expectation(0.0, g) == doctest::Approx(std::exp(-g)).epsilon(1e-15));
    CHECK(rff_nonshifted_expectation(1.0, 1.0) == doctest::Approx(0.567668).epsilon(1e-6));
    CHECK(rff_nonshifted_expectation(0.4, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("g and rho transforms") {
    CHECK(g_of_rho(1.0) == 1.0);
    CHECK(g_of_rho(-1.0) == 0.0);
    CHECK(g_of_rho(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(rho_of_g(g_of_rho(0.37)) - 0.37) < 1e-12);
    double prev_g = -1, prev_r = -2;
    for (int i = 0; i <= 200; ++i) {
        const double r = -1.0 + i / 100.0;
        const double g = g_of_rho(r);
        CHECK(std::abs(rho_of_g(g) - r) < 1e-12);
        CHECK(g > prev_g);
        prev_g = g;
        const double gg = i / 200.0;
        CHECK(std::abs(g_of_rho(rho_of_g(gg)) - gg) < 1e-12);
        CHECK(rho_of_g(gg) > prev_r);
        prev_r = rho_of_g(gg);
    }
}

TEST_CASE("v_gcws_rbf endpoints and spot value") {
    CHECK(v_gcws_rbf(1.0, 1.0) == 0.0);
    CHECK(v_gcws_rbf(-1.0, 1.0) == 0.0);
    const double g = 1.0 / 3.0;
    const double expected = std::exp(-1.0) * g * std::pow(1 - g, 3) / std::pow(1 + g, 6) * 64.0;
    CHECK(v_gcws_rbf(0.5, 1.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("v_gcws_rbf matches a binomial delta-method oracle") {
    // k Var of the transformed estimator from binomial(k, g) draws.
    std::mt19937_64 rng(31337);
    constexpr int k = 10000;
    constexpr int reps = 20000;
    for (double rho : {-0.8, -0.4, 0.0, 0.4, 0.8})
        for (double gamma : kGammas) {
            const double g = g_of_rho(rho);
            std::binomial_distribution<int> binom(k, g);
            double sum = 0, sq = 0;
            for (int r = 0; r < reps; ++r) {
                const double est = gcws_rbf_estimate(static_cast<double>(binom(rng)) / k, gamma);
                sum += est;
                sq += est * est;
            }
            const double mean = sum / reps;
            const double kvar = k * (sq / reps - mean * mean);
            CAPTURE(rho);
            CAPTURE(gamma);
            // reps = 2e4 gives ~1% sampling error on the variance.
            CHECK(kvar == doctest::Approx(v_gcws_rbf(rho, gamma)).epsilon(0.05));
        }
}

TEST_CASE("gcws_rbf_estimate") {
    CHECK(gcws_rbf_estimate(1.0, 2.0) == 1.0);
    CHECK(gcws_rbf_estimate(0.0, 2.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(gcws_rbf_estimate(1.0 / 3.0, 1.0) == doctest::Approx(0.606531).epsilon(1e-6));
    for (double g : kGammas)
        for (double r = -1.0; r <= 1.0; r += 0.125)
            CHECK(gcws_rbf_estimate(g_of_rho(r), g) == doctest::Approx(std::exp(-g * (1 - r))).epsilon(1e-12));
}

TEST_CASE("variance ratio against GCWS") {
    for (double g : kGammas) {
        for (double r = -0.95; r <= 0.5 + 1e-9; r += 0.05) {
            CAPTURE(g);
            CAPTURE(r);
            CHECK(v_nrff(r, g) / v_gcws_rbf(r, g) > 1.0);
        }
        // The closed forms cross below 1 in the high-similarity region.
        CHECK(v_nrff(0.9, g) / v_gcws_rbf(0.9, g) < 1.0);
    }
}

TEST_CASE("relative variance") {
    CHECK(relative_variance(Method::Gcws, 1.0, 1.0) == 0.0);
    CHECK(relative_variance(Method::Gcws, 0.5, 1.0) == 1.0);
    CHECK(relative_variance(Method::Rff, 1.0, 1.0) == 0.5);
    CHECK(relative_variance(Method::Nrff, 1.0, 1.0) == 0.0);
    for (double g : kGammas)
        for (double r = -0.9; r < 1.0; r += 0.1) {
            const double e = std::exp(-g * (1 - r));
            CHECK(relative_variance(Method::Rff, e, g) == doctest::Approx(v_rff(r, g) / (e * e)).epsilon(1e-10));
            CHECK(relative_variance(Method::Nrff, e, g) == doctest::Approx(v_nrff(r, g) / (e * e)).epsilon(1e-9));
        }
    CHECK_THROWS(relative_variance(Method::Gcws, 0.0, 1.0));
    CHECK_THROWS(relative_variance(Method::Gcws, 1.5, 1.0));
    CHECK_THROWS(relative_variance(Method::Nrff, 0.1, 1.0));  // below exp(-2)
    CHECK_THROWS(rho_of_rbf(0.01, 1.0));
    CHECK(rho_of_rbf(std::exp(-0.5), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("domain errors") {
    CHECK_THROWS(v_rff(1.5, 1.0));
    CHECK_THROWS(v_rff(0.0, 0.0));
    CHECK_THROWS(v_nrff(-1.2, 1.0));
    CHECK_THROWS(v_nrff(0.0, -1.0));
    CHECK_THROWS(g_of_rho(2.0));
    CHECK_THROWS(rho_of_g(-0.1));
    CHECK_THROWS(v_gcws_rbf(0.0, std::nan("")));
    CHECK_THROWS(gcws_rbf_estimate(1.1, 1.0));
    CHECK_THROWS(rff_nonshifted_expectation(0.0, 0.0));
}
