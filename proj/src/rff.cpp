#include "linkern/rff.hpp"

#include "linkern/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linkern {

void RffConfig::validate() const {
    if (k < 1) throw std::invalid_argument("rff: k must be >= 1");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("rff: gamma must be positive and finite");
}

double rff_projection_weight(std::uint64_t seed, std::uint32_t sample_index, std::uint64_t coordinate) {
    return normal_quantile(uniform_pair(seed, coordinate, sample_index, Stream::RffProjection)[0]);
}

double rff_phase(std::uint64_t seed, std::uint32_t sample_index) {
    return 2.0 * std::numbers::pi *
           uniform_pair(seed, kSampleSentinel, sample_index, Stream::RffPhase)[0];
}

namespace detail {

RffFeatures rff_from_nonzeros(std::span<const std::pair<std::uint64_t, double>> nonzeros,
                              double norm, const RffConfig& config) {
    config.validate();
    if (!(std::abs(norm - 1.0) <= kRffUnitTolerance))
        throw std::invalid_argument("rff: input must have unit l2 norm (got " + std::to_string(norm) +
                                    "); normalize the data first");
    const double scale = std::sqrt(config.gamma);
    Eigen::VectorXd x(config.k);
    for (std::uint32_t j = 0; j < config.k; ++j) {
        double projection = 0.0;
        for (const auto& [i, value] : nonzeros)
            projection += value * rff_projection_weight(config.seed, j, i);
        x[j] = std::numbers::sqrt2 * std::cos(scale * projection + rff_phase(config.seed, j));
    }
    if (config.normalize) {
        const double n = x.norm();
        if (!(n > 0.0)) throw std::domain_error("rff: all-zero feature vector cannot be normalized");
        x /= n;
    }
    return {std::move(x), config};
}

}  // namespace detail

double estimate_rbf(const RffFeatures& fu, const RffFeatures& fv) {
    if (!(fu.config == fv.config))
        throw std::invalid_argument("estimate_rbf: features were made with different configurations");
    const double dot = fu.values.dot(fv.values);
    return fu.config.normalize ? dot : dot / static_cast<double>(fu.config.k);
}

}  // namespace linkern
