#include "linkern/linear_model.hpp"

#include "linkern/format.hpp"
#include "linkern/parallel.hpp"
#include "linkern/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace linkern {

void TrainConfig::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("train: C must be positive");
    if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw std::invalid_argument("train: eta0 must be positive");
}

LinearModel::LinearModel(Eigen::Index dim, std::vector<double> classes, Eigen::MatrixXd weights,
                         Eigen::VectorXd bias)
    : dim_(dim), classes_(std::move(classes)), weights_(std::move(weights)), bias_(std::move(bias)) {
    const auto k = static_cast<Eigen::Index>(classes_.size());
    if (weights_.rows() != dim_ || weights_.cols() != k || bias_.size() != k)
        throw std::invalid_argument("linear model: inconsistent shapes");
}

Eigen::VectorXd LinearModel::scores(const SparseVector& x) const {
    if (x.size() > dim_)
        throw std::invalid_argument("feature dimension " + std::to_string(x.size()) +
                                    " exceeds model dimension " + std::to_string(dim_));
    Eigen::VectorXd s = bias_;
    for (SparseVector::InnerIterator it(x, 0); it; ++it) s += it.value() * weights_.row(it.index()).transpose();
    return s;
}

double LinearModel::predict(const SparseVector& x) const {
    const Eigen::VectorXd s = scores(x);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.size(); ++c)
        if (s[c] > s[best]) best = c;
    return classes_[static_cast<std::size_t>(best)];
}

namespace {

constexpr std::string_view kMagic = "linkern-linear-model";
constexpr int kFormatVersion = 1;

struct BinaryResult {
    Eigen::VectorXd w;
    double b;
};

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const double u = uniform_pair(seed, i, 0, Stream::Shuffle)[0];
        const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(i)), i - 1);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

// w = scale * v is kept implicitly so the l2 shrink costs O(1) per step.
// The final-epoch average of w is accumulated lazily per coordinate:
// between two touches of coordinate i, v_i is constant and the sum of w_i
// over those steps is v_i times the sum of the scales.
BinaryResult train_binary(const Dataset& ds, const std::vector<double>& y, const TrainConfig& config) {
    const std::size_t n = ds.size();
    const auto dim = ds.dim;
    const double lambda = 1.0 / (config.C * static_cast<double>(n));
    // Keeps eta_t lambda <= 1/2 so the shrink factor stays positive.
    const double eta0 = std::min(config.eta0, 0.5 / lambda);

    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    double scale = 1.0;
    double bias = 0.0;
    std::uint64_t t = 0;

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd last = Eigen::VectorXd::Zero(dim);
    double scale_sum = 0.0;
    double bias_sum = 0.0;
    bool averaging = false;

    auto flush = [&](Eigen::Index i) {
        acc[i] += v[i] * (scale_sum - last[i]);
        last[i] = scale_sum;
    };
    auto renormalize = [&] {
        if (averaging)
            for (Eigen::Index i = 0; i < dim; ++i) flush(i);
        // acc holds sums of w, so it is unaffected; only the lazy state moves.
        v *= scale;
        if (averaging) {
            last.setZero();
            scale_sum = 0.0;
        }
        scale = 1.0;
    };

    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
        averaging = epoch + 1 == config.epochs;
        const auto order = shuffled_order(n, derive_seed(config.seed, epoch, Stream::Shuffle));
        for (const std::size_t r : order) {
            const SparseVector& x = ds.rows[r];
            const double eta = eta0 / (1.0 + lambda * eta0 * static_cast<double>(t));
            double dot = 0.0;
            for (SparseVector::InnerIterator it(x, 0); it; ++it) dot += it.value() * v[it.index()];
            const double margin = y[r] * (scale * dot + bias);

            scale *= 1.0 - eta * lambda;
            if (margin < 1.0) {
                const double step = eta * y[r] / scale;
                for (SparseVector::InnerIterator it(x, 0); it; ++it) {
                    if (averaging) flush(it.index());
                    v[it.index()] += step * it.value();
                }
                bias += eta * y[r];
            }
            if (averaging) {
                scale_sum += scale;
                bias_sum += bias;
            }
            ++t;
            if (scale < 1e-9) renormalize();
        }
    }

    for (Eigen::Index i = 0; i < dim; ++i) flush(i);
    const double steps = static_cast<double>(n);
    return {acc / steps, bias_sum / steps};
}

}  // namespace

LinearModel train(const Dataset& ds, const TrainConfig& config, unsigned threads) {
    config.validate();
    if (ds.empty()) throw std::invalid_argument("train: empty dataset");
    std::vector<double> classes = ds.labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() < 2) throw std::invalid_argument("train: need at least two distinct labels");

    const auto k = static_cast<Eigen::Index>(classes.size());
    Eigen::MatrixXd weights(ds.dim, k);
    Eigen::VectorXd bias(k);

    auto targets = [&](double positive) {
        std::vector<double> y(ds.size());
        for (std::size_t r = 0; r < ds.size(); ++r) y[r] = ds.labels[r] == positive ? 1.0 : -1.0;
        return y;
    };

    if (classes.size() == 2) {
        // One binary machine, as LIBLINEAR does; class 0 scores are negated.
        const auto res = train_binary(ds, targets(classes[1]), config);
        weights.col(1) = res.w;
        weights.col(0) = -res.w;
        bias[1] = res.b;
        bias[0] = -res.b;
    } else {
        parallel_for(classes.size(), threads, [&](std::size_t c) {
            const auto res = train_binary(ds, targets(classes[c]), config);
            weights.col(static_cast<Eigen::Index>(c)) = res.w;
            bias[static_cast<Eigen::Index>(c)] = res.b;
        });
    }
    return {ds.dim, std::move(classes), std::move(weights), std::move(bias)};
}

double evaluate(const LinearModel& model, const Dataset& ds, unsigned threads) {
    if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
    std::vector<unsigned char> correct(ds.size());
    parallel_for(ds.size(), threads, [&](std::size_t r) {
        correct[r] = model.predict(ds.rows[r]) == ds.labels[r] ? 1 : 0;
    });
    const auto hits = std::accumulate(correct.begin(), correct.end(), std::size_t{0});
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

void LinearModel::save(std::ostream& out) const {
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "dim " << dim_ << '\n';
    out << "classes " << classes_.size();
    for (double c : classes_) out << ' ' << format_double(c);
    out << '\n';
    for (Eigen::Index c = 0; c < weights_.cols(); ++c) {
        Eigen::Index nnz = 0;
        for (Eigen::Index i = 0; i < dim_; ++i) nnz += weights_(i, c) != 0.0 ? 1 : 0;
        out << "class " << c << " bias " << format_double(bias_[c]) << " nnz " << nnz << '\n';
        bool first = true;
        for (Eigen::Index i = 0; i < dim_; ++i) {
            if (weights_(i, c) == 0.0) continue;
            out << (first ? "" : " ") << (i + 1) << ':' << format_double(weights_(i, c));
            first = false;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("model write failed");
}

LinearModel LinearModel::load(std::istream& in) {
    auto fail = [](const std::string& what) -> LinearModel {
        throw std::runtime_error("model file: " + what);
    };
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMagic) return fail("not a linkern linear model");
    if (version != kFormatVersion) return fail("unsupported format version " + std::to_string(version));

    std::string key;
    Eigen::Index dim = 0;
    std::size_t k = 0;
    if (!(in >> key >> dim) || key != "dim" || dim < 0) return fail("bad dim line");
    if (!(in >> key >> k) || key != "classes" || k < 2) return fail("bad classes line");
    std::vector<double> classes(k);
    for (auto& c : classes)
        if (!(in >> c)) return fail("bad class label");

    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(k));
    Eigen::VectorXd bias(static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t idx = 0;
        Eigen::Index nnz = 0;
        std::string bias_key, nnz_key;
        if (!(in >> key >> idx >> bias_key >> bias[static_cast<Eigen::Index>(c)] >> nnz_key >> nnz) ||
            key != "class" || idx != c || bias_key != "bias" || nnz_key != "nnz")
            return fail("bad header for class " + std::to_string(c));
        for (Eigen::Index n = 0; n < nnz; ++n) {
            std::string tok;
            if (!(in >> tok)) return fail("truncated weights for class " + std::to_string(c));
            const auto colon = tok.find(':');
            if (colon == std::string::npos) return fail("bad weight entry '" + tok + "'");
            const long long i = std::stoll(tok.substr(0, colon));
            if (i < 1 || i > dim) return fail("weight index out of range: " + tok);
            weights(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(c)) =
                std::stod(tok.substr(colon + 1));
        }
    }
    return {dim, std::move(classes), std::move(weights), std::move(bias)};
}

}  // namespace linkern
