#pragma once

// Generalized consistent weighted sampling (GCWS) on the sign-split
// transform, collision-based GMM estimation, and b-bit one-hot encoding.
//
// For every nonzero coordinate i of the transformed vector and sample j:
//   r_i, c_i ~ Gamma(2, 1),  beta_i ~ Uniform(0, 1)
//   t_i = floor(ln(u_i) / r_i + beta_i)
//   a_i = ln(c_i) - r_i (t_i + 1 - beta_i)
// and the sample is (i*, t*) = (argmin_i a_i, t_{i*}). The draws for (j, i)
// are a pure function of (seed, j, i), which is what makes two vectors'
// samples collide with probability GMM(u, v).

#include "linkern/vectors.hpp"

#include <cstdint>
#include <vector>

namespace linkern {

struct GcwsConfig {
    std::uint32_t k = 256;
    int b = 8;
    std::uint64_t seed = 0;
    bool normalize_output = true;

    void validate() const;
    [[nodiscard]] std::int64_t block_width() const { return std::int64_t{1} << b; }
    [[nodiscard]] std::int64_t encoded_dim() const { return std::int64_t{k} * block_width(); }
};

struct GcwsSample {
    std::int64_t i_star = 0;
    std::int64_t t_star = 0;
    friend bool operator==(const GcwsSample&, const GcwsSample&) = default;
};

/// Per-(sample, coordinate) randomness of the sampler.
struct GcwsDraws {
    double r;
    double c;
    double beta;
};

GcwsDraws gcws_draws(std::uint64_t seed, std::uint32_t sample_index, std::uint64_t coordinate);

/// One consistent sample. Ties in a_i go to the smallest coordinate.
GcwsSample gcws_sample(const TransformedVector<double>& tv, std::uint32_t sample_index,
                       std::uint64_t seed);

class GcwsSketch {
public:
    GcwsSketch(std::vector<GcwsSample> samples, std::uint64_t seed)
        : samples_(std::move(samples)), seed_(seed) {}

    [[nodiscard]] std::size_t k() const { return samples_.size(); }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] const std::vector<GcwsSample>& samples() const { return samples_; }
    [[nodiscard]] const GcwsSample& operator[](std::size_t j) const { return samples_[j]; }

    /// The first k samples; identical to sketching with k directly.
    [[nodiscard]] GcwsSketch head(std::size_t k) const;

    friend bool operator==(const GcwsSketch&, const GcwsSketch&) = default;

private:
    std::vector<GcwsSample> samples_;
    std::uint64_t seed_;
};

GcwsSketch sketch(const TransformedVector<double>& tv, const GcwsConfig& config);

enum class MatchMode {
    Full,     // (i*, t*) must agree
    ZeroBit,  // only i* must agree
};

std::size_t count_matches(const GcwsSketch& a, const GcwsSketch& b, MatchMode mode);

/// Collision rate of two sketches made with the same seed and k.
double estimate_gmm(const GcwsSketch& a, const GcwsSketch& b, MatchMode mode);

struct EncodedFeatures {
    int b = 0;
    SparseVector values;  // length k * 2^b, exactly one nonzero per block
};

/// b-bit one-hot code: sample j with v = i* mod 2^b sets position
/// j * 2^b + (2^b - 1 - v). Values are 1, or 1/sqrt(k) when normalized.
EncodedFeatures encode(const GcwsSketch& sk, const GcwsConfig& config);

}  // namespace linkern
