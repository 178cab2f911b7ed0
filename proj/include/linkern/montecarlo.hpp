#pragma once

// Monte Carlo studies of the RBF/GMM estimators and CSV tables for
// re-plotting the variance curves.

#include "linkern/vectors.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linkern {

enum class Estimator { Rff, Nrff, GcwsGmm, GcwsRbf };

std::string_view to_string(Estimator e);

struct SimConfig {
    double rho = 0.5;
    double gamma = 1.0;
    std::vector<std::uint32_t> k_grid{16, 128, 1024};
    std::uint32_t reps = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

struct EstimatorStats {
    Estimator estimator = Estimator::Rff;
    std::uint32_t k = 0;
    std::uint32_t reps = 0;
    double truth = 0;
    double mean = 0;
    double bias = 0;
    double variance = 0;  // population (1/n) variance across repetitions
    double mse = 0;       // mean squared error against `truth`
};

/// Welford mean/variance plus a compensated sum of squared errors. Values
/// are fed in repetition order, so results are reproducible bit-for-bit.
class MomentAccumulator {
public:
    explicit MomentAccumulator(double truth) : truth_(truth) {}

    void add(double x);

    [[nodiscard]] std::uint64_t count() const { return n_; }
    [[nodiscard]] double mean() const { return mean_; }
    [[nodiscard]] double variance() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }
    [[nodiscard]] double mse() const { return n_ ? (sq_sum_ + sq_comp_) / static_cast<double>(n_) : 0.0; }

private:
    double truth_;
    std::uint64_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
    double sq_sum_ = 0;
    double sq_comp_ = 0;
};

EstimatorStats summarize(std::span<const double> values, double truth, Estimator estimator,
                         std::uint32_t k);

/// Plain RFF and NRFF estimates of exp(-gamma (1 - rho)) from k correlated
/// normal pairs y = rho x + sqrt(1 - rho^2) z per repetition. Returns, for
/// each k in the grid, the RFF row followed by the NRFF row.
std::vector<EstimatorStats> simulate_rff(const SimConfig& config);

/// Sketches u and v with a fresh seed per repetition and records the
/// collision-rate GMM estimate and the RBF estimate derived from it.
/// Truth is the exact GMM, and exp(-2 gamma ((1-g)/(1+g))^2) at that GMM.
template <VectorExpr A, VectorExpr B>
std::vector<EstimatorStats> simulate_gcws(const A& u, const B& v, const SimConfig& config);

std::vector<EstimatorStats> simulate_gcws_transformed(const TransformedVector<double>& tu,
                                                      const TransformedVector<double>& tv,
                                                      const SimConfig& config);

/// Idealized GCWS model: the collision count is binomial(k, g(rho)). Reports
/// the RBF estimate exp(-2 gamma ((1-X)/(1+X))^2) against exp(-gamma (1-rho)).
std::vector<EstimatorStats> simulate_binomial_rbf(const SimConfig& config);

void write_stats_csv(std::ostream& out, std::span<const EstimatorStats> stats, const SimConfig& config);

struct FigureGrid {
    std::vector<double> rho;
    std::vector<double> gamma;
    std::vector<double> expectation;
    double fig3_gamma = 4.0;
    SimConfig sim;

    /// Grids used when the caller does not override them.
    static FigureGrid defaults(int which);
};

/// Writes the CSV table for figure 1 (V_n/V), 2 (MSE simulation), 3
/// (Var/E^2 per method) or 4 (V_n/V_g).
void emit_figure_data(std::ostream& out, int which, const FigureGrid& grid);

// -- template definitions

template <VectorExpr A, VectorExpr B>
std::vector<EstimatorStats> simulate_gcws(const A& u, const B& v, const SimConfig& config) {
    return simulate_gcws_transformed(transform(u), transform(v), config);
}

}  // namespace linkern
