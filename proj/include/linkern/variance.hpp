#pragma once

// Closed-form moments of the RBF estimators.
//
//   v_rff    Var of one RFF product sqrt2 cos(sqrt(g)x+w) sqrt2 cos(sqrt(g)y+w)
//   v_nrff   asymptotic k-scaled variance of the normalized (NRFF) estimator
//   v_gcws   asymptotic k-scaled variance of exp(-2 gamma ((1-X)/(1+X))^2)
//            with X the GCWS collision rate, under GMM == g(rho)
//
// All are written with c^2 = gamma.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linkern::theory {

namespace detail {

template <typename Scalar>
Scalar checked_rho(Scalar rho) {
    if (!(std::abs(rho) <= Scalar(1) + Scalar(1e-12)))
        throw std::domain_error("rho must lie in [-1, 1], got " + std::to_string(rho));
    return std::clamp(rho, Scalar(-1), Scalar(1));
}

template <typename Scalar>
Scalar checked_gamma(Scalar gamma) {
    if (!(gamma > Scalar(0)) || !std::isfinite(gamma))
        throw std::domain_error("gamma must be positive and finite, got " + std::to_string(gamma));
    return gamma;
}

template <typename Scalar>
Scalar checked_unit(Scalar x, const char* name) {
    if (!(x >= Scalar(0) && x <= Scalar(1)))
        throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
    return x;
}

}  // namespace detail

/// 1/2 + 1/2 (1 - e^{-2 gamma (1 - rho)})^2
template <typename Scalar>
Scalar v_rff(Scalar rho, Scalar gamma) {
    rho = detail::checked_rho(rho);
    gamma = detail::checked_gamma(gamma);
    const Scalar e2 = std::exp(Scalar(-2) * gamma * (Scalar(1) - rho));
    return Scalar(0.5) + Scalar(0.5) * (Scalar(1) - e2) * (Scalar(1) - e2);
}

template <typename Scalar>
Scalar v_nrff(Scalar rho, Scalar gamma) {
    rho = detail::checked_rho(rho);
    gamma = detail::checked_gamma(gamma);
    const Scalar d = Scalar(1) - rho;
    const Scalar e2 = std::exp(Scalar(-2) * gamma * d);
    const Scalar e4 = std::exp(Scalar(-4) * gamma * d);
    // At rho = 1 the two terms cancel exactly in real arithmetic.
    const Scalar v = v_rff(rho, gamma) - Scalar(0.25) * e2 * (Scalar(3) - e4);
    return std::max(v, Scalar(0));
}

/// E[cos(sqrt(gamma) x) cos(sqrt(gamma) y)] without the random phase.
template <typename Scalar>
Scalar rff_nonshifted_expectation(Scalar rho, Scalar gamma) {
    rho = detail::checked_rho(rho);
    gamma = detail::checked_gamma(gamma);
    return Scalar(0.5) * std::exp(-gamma * (Scalar(1) - rho)) +
           Scalar(0.5) * std::exp(-gamma * (Scalar(1) + rho));
}

/// Large-D limit of GMM as a function of the correlation.
template <typename Scalar>
Scalar g_of_rho(Scalar rho) {
    rho = detail::checked_rho(rho);
    const Scalar s = std::sqrt((Scalar(1) - rho) / Scalar(2));
    return (Scalar(1) - s) / (Scalar(1) + s);
}

template <typename Scalar>
Scalar rho_of_g(Scalar g) {
    g = detail::checked_unit(g, "g");
    const Scalar m = (Scalar(1) - g) / (Scalar(1) + g);
    return Scalar(1) - Scalar(2) * m * m;
}

template <typename Scalar>
Scalar v_gcws_rbf(Scalar rho, Scalar gamma) {
    rho = detail::checked_rho(rho);
    gamma = detail::checked_gamma(gamma);
    const Scalar g = g_of_rho(rho);
    const Scalar one_minus = Scalar(1) - g;
    const Scalar one_plus3 = (Scalar(1) + g) * (Scalar(1) + g) * (Scalar(1) + g);
    return std::exp(Scalar(-2) * gamma * (Scalar(1) - rho)) * g * one_minus * one_minus *
           one_minus / (one_plus3 * one_plus3) * Scalar(64) * gamma * gamma;
}

/// RBF value implied by an estimated GMM: exp(-2 gamma ((1-g)/(1+g))^2).
template <typename Scalar>
Scalar gcws_rbf_estimate(Scalar g_hat, Scalar gamma) {
    g_hat = detail::checked_unit(g_hat, "g_hat");
    gamma = detail::checked_gamma(gamma);
    const Scalar m = (Scalar(1) - g_hat) / (Scalar(1) + g_hat);
    return std::exp(Scalar(-2) * gamma * m * m);
}

enum class Method { Gcws, Rff, Nrff };

/// Correlation implied by an RBF value: rho = 1 + ln(E) / gamma. Rejects
/// values of E that would need rho < -1.
template <typename Scalar>
Scalar rho_of_rbf(Scalar expectation, Scalar gamma) {
    gamma = detail::checked_gamma(gamma);
    if (!(expectation > Scalar(0) && expectation <= Scalar(1)))
        throw std::domain_error("E must lie in (0, 1], got " + std::to_string(expectation));
    const Scalar rho = Scalar(1) + std::log(expectation) / gamma;
    if (rho < Scalar(-1) - Scalar(1e-12))
        throw std::domain_error("E = " + std::to_string(expectation) +
                                " is below exp(-2 gamma) and implies rho < -1");
    return std::max(rho, Scalar(-1));
}

/// Var / E^2 of a single-sample estimator with expectation E.
template <typename Scalar>
Scalar relative_variance(Method method, Scalar expectation, Scalar gamma) {
    if (!(expectation > Scalar(0) && expectation <= Scalar(1)))
        throw std::domain_error("E must lie in (0, 1], got " + std::to_string(expectation));
    const Scalar e2 = expectation * expectation;
    switch (method) {
        case Method::Gcws:
            return (Scalar(1) - expectation) / expectation;
        case Method::Rff: {
            rho_of_rbf(expectation, gamma);
            const Scalar t = Scalar(1) - e2;
            return (Scalar(0.5) + Scalar(0.5) * t * t) / e2;
        }
        case Method::Nrff:
            return v_nrff(rho_of_rbf(expectation, gamma), gamma) / e2;
    }
    throw std::invalid_argument("unknown method");
}

}  // namespace linkern::theory
