#pragma once

// l2-regularized linear SVM trained by stochastic subgradient descent, with
// one-vs-rest for more than two classes. Stands in for LIBLINEAR in
// desk-scale hashed-feature experiments.

#include "linkern/dataio.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace linkern {

struct TrainConfig {
    double C = 1.0;             // larger C, weaker regularization
    std::uint32_t epochs = 20;
    double eta0 = 1.0;          // base of eta_t = eta0 / (1 + lambda eta0 t)
    std::uint64_t seed = 0;     // shuffling

    void validate() const;
};

class LinearModel {
public:
    LinearModel() = default;
    LinearModel(Eigen::Index dim, std::vector<double> classes, Eigen::MatrixXd weights,
                Eigen::VectorXd bias);

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] const std::vector<double>& classes() const { return classes_; }
    /// dim x classes
    [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }
    [[nodiscard]] const Eigen::VectorXd& bias() const { return bias_; }

    [[nodiscard]] Eigen::VectorXd scores(const SparseVector& x) const;
    /// Class label with the highest score; ties go to the earlier class.
    [[nodiscard]] double predict(const SparseVector& x) const;

    void save(std::ostream& out) const;
    static LinearModel load(std::istream& in);

private:
    Eigen::Index dim_ = 0;
    std::vector<double> classes_;
    Eigen::MatrixXd weights_;
    Eigen::VectorXd bias_;
};

/// Minimizes lambda/2 |w|^2 + mean hinge loss with lambda = 1 / (C n).
/// Returns the average of the iterates over the final epoch. Deterministic
/// given (data, config); one-vs-rest classes may train in parallel.
LinearModel train(const Dataset& ds, const TrainConfig& config, unsigned threads = 1);

/// Fraction of rows whose predicted class equals the label.
double evaluate(const LinearModel& model, const Dataset& ds, unsigned threads = 1);

}  // namespace linkern
