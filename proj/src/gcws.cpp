#include "linkern/gcws.hpp"

#include "linkern/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace linkern {

void GcwsConfig::validate() const {
    if (k < 1) throw std::invalid_argument("gcws: k must be >= 1");
    if (b < 1 || b > 16) throw std::invalid_argument("gcws: b must lie in [1, 16]");
    if (encoded_dim() > std::numeric_limits<int>::max())
        throw std::invalid_argument("gcws: k * 2^b = " + std::to_string(encoded_dim()) +
                                    " exceeds the supported feature dimension");
}

GcwsDraws gcws_draws(std::uint64_t seed, std::uint32_t sample_index, std::uint64_t coordinate) {
    const auto r = uniform_pair(seed, coordinate, sample_index, Stream::GcwsR);
    const auto c = uniform_pair(seed, coordinate, sample_index, Stream::GcwsC);
    const auto beta = uniform_pair(seed, coordinate, sample_index, Stream::GcwsBeta);
    return {gamma2_from_uniforms(r[0], r[1]), gamma2_from_uniforms(c[0], c[1]), beta[0]};
}

namespace {

struct Candidate {
    double a;
    std::int64_t t;
};

Candidate evaluate(double log_weight, const GcwsDraws& d) {
    const double t = std::floor(log_weight / d.r + d.beta);
    return {std::log(d.c) - d.r * (t + 1.0 - d.beta), static_cast<std::int64_t>(t)};
}

void require_nonempty(const TransformedVector<double>& tv) {
    if (tv.empty()) throw std::invalid_argument("cannot hash zero vector");
}

}  // namespace

GcwsSample gcws_sample(const TransformedVector<double>& tv, std::uint32_t sample_index,
                       std::uint64_t seed) {
    require_nonempty(tv);
    GcwsSample best;
    double best_a = std::numeric_limits<double>::infinity();
    for (SparseVector::InnerIterator it(tv.coeffs(), 0); it; ++it) {
        const auto cand = evaluate(std::log(it.value()),
                                   gcws_draws(seed, sample_index, static_cast<std::uint64_t>(it.index())));
        if (cand.a < best_a) {
            best_a = cand.a;
            best = {it.index(), cand.t};
        }
    }
    return best;
}

GcwsSketch GcwsSketch::head(std::size_t k) const {
    if (k < 1 || k > samples_.size())
        throw std::invalid_argument("sketch head: k must lie in [1, " + std::to_string(samples_.size()) + "]");
    return GcwsSketch({samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(k)}, seed_);
}

GcwsSketch sketch(const TransformedVector<double>& tv, const GcwsConfig& config) {
    config.validate();
    require_nonempty(tv);

    std::vector<std::uint64_t> coords;
    std::vector<double> log_weights;
    coords.reserve(static_cast<std::size_t>(tv.nonZeros()));
    log_weights.reserve(static_cast<std::size_t>(tv.nonZeros()));
    for (SparseVector::InnerIterator it(tv.coeffs(), 0); it; ++it) {
        coords.push_back(static_cast<std::uint64_t>(it.index()));
        log_weights.push_back(std::log(it.value()));
    }

    std::vector<GcwsSample> samples(config.k);
    for (std::uint32_t j = 0; j < config.k; ++j) {
        double best_a = std::numeric_limits<double>::infinity();
        GcwsSample best;
        for (std::size_t n = 0; n < coords.size(); ++n) {
            const auto cand = evaluate(log_weights[n], gcws_draws(config.seed, j, coords[n]));
            if (cand.a < best_a) {
                best_a = cand.a;
                best = {static_cast<std::int64_t>(coords[n]), cand.t};
            }
        }
        samples[j] = best;
    }
    return GcwsSketch(std::move(samples), config.seed);
}

std::size_t count_matches(const GcwsSketch& a, const GcwsSketch& b, MatchMode mode) {
    if (a.k() != b.k())
        throw std::invalid_argument("sketches differ in k (" + std::to_string(a.k()) + " vs " +
                                    std::to_string(b.k()) + ")");
    if (a.seed() != b.seed()) throw std::invalid_argument("sketches were made with different seeds");
    std::size_t matches = 0;
    for (std::size_t j = 0; j < a.k(); ++j) {
        const bool hit = mode == MatchMode::Full ? a[j] == b[j] : a[j].i_star == b[j].i_star;
        matches += hit ? 1 : 0;
    }
    return matches;
}

double estimate_gmm(const GcwsSketch& a, const GcwsSketch& b, MatchMode mode) {
    return static_cast<double>(count_matches(a, b, mode)) / static_cast<double>(a.k());
}

EncodedFeatures encode(const GcwsSketch& sk, const GcwsConfig& config) {
    config.validate();
    if (sk.k() != config.k)
        throw std::invalid_argument("encode: sketch has k=" + std::to_string(sk.k()) +
                                    " but config has k=" + std::to_string(config.k));
    const std::int64_t width = config.block_width();
    const std::int64_t mask = width - 1;
    const double value = config.normalize_output ? 1.0 / std::sqrt(static_cast<double>(sk.k())) : 1.0;

    EncodedFeatures out{config.b, SparseVector(static_cast<Eigen::Index>(config.encoded_dim()))};
    out.values.reserve(static_cast<Eigen::Index>(sk.k()));
    for (std::size_t j = 0; j < sk.k(); ++j) {
        const std::int64_t low_bits = sk[j].i_star & mask;
        const auto pos = static_cast<std::int64_t>(j) * width + (mask - low_bits);
        out.values.insertBack(static_cast<Eigen::Index>(pos)) = value;
    }
    return out;
}

}  // namespace linkern
