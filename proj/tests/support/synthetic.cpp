#include "synthetic.hpp"

#include "linkern/rng.hpp"

#include <cmath>
#include <vector>

namespace linkern::testing {

Dataset signed_mixture(const SignedMixtureSpec& spec) {
    Dataset ds;
    ds.dim = spec.dim;
    const std::uint64_t seed = derive_seed(spec.seed, 0, Stream::SimPair);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        auto draw = [&, slot = std::uint32_t{0}]() mutable {
            return uniform_pair(seed, r, slot++, Stream::SimPair);
        };
        const auto signs = draw();
        const double s1 = signs[0] < 0.5 ? -1.0 : 1.0;
        const double s2 = signs[1] < 0.5 ? -1.0 : 1.0;
        const auto mags = draw();
        std::vector<Eigen::Index> idx{0, 1};
        std::vector<double> val{s1 * (1.0 + 0.5 * std::abs(normal_quantile(mags[0]))),
                                s2 * (1.0 + 0.5 * std::abs(normal_quantile(mags[1])))};
        for (Eigen::Index i = 2; i < spec.dim; ++i) {
            const auto u = draw();
            if (u[0] < spec.noise_density) {
                idx.push_back(i);
                val.push_back(spec.noise_scale * normal_quantile(u[1]));
            }
        }
        ds.push_back(s1 * s2, make_sparse<double>(spec.dim, idx, val));
    }
    return ds;
}

}  // namespace linkern::testing
