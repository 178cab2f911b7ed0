#include "linkern/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <limits>
#include <stdexcept>

namespace linkern {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("normal_quantile: p must lie in [0, 1]");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace linkern
