#pragma once

// Synthetic two-class data whose label is the XOR of the signs of two
// informative coordinates, padded with sparse Gaussian noise coordinates.
// A linear model on raw features is near chance; the sign-split transform
// makes the four sign quadrants separable in GMM space.

#include "linkern/dataio.hpp"

#include <cstdint>

namespace linkern::testing {

struct SignedMixtureSpec {
    std::size_t rows = 500;
    Eigen::Index dim = 20;
    double noise_density = 0.3;
    double noise_scale = 0.5;
    std::uint64_t seed = 1;
};

Dataset signed_mixture(const SignedMixtureSpec& spec);

}  // namespace linkern::testing
