#include "linkern/montecarlo.hpp"

#include "linkern/format.hpp"
#include "linkern/gcws.hpp"
#include "linkern/kernels.hpp"
#include "linkern/parallel.hpp"
#include "linkern/rng.hpp"
#include "linkern/variance.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace linkern {

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::Rff: return "rff";
        case Estimator::Nrff: return "nrff";
        case Estimator::GcwsGmm: return "gcws_gmm";
        case Estimator::GcwsRbf: return "gcws_rbf";
    }
    return "unknown";
}

void SimConfig::validate() const {
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("simulation: rho must lie in [-1, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("simulation: gamma must be positive");
    if (reps < 100) throw std::invalid_argument("simulation: reps must be >= 100");
    if (k_grid.empty()) throw std::invalid_argument("simulation: k grid is empty");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (k_grid[i] < 1) throw std::invalid_argument("simulation: k must be >= 1");
        if (i > 0 && k_grid[i] <= k_grid[i - 1])
            throw std::invalid_argument("simulation: k grid must be strictly ascending");
    }
}

void MomentAccumulator::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);

    // Neumaier summation of squared errors.
    const double e = (x - truth_) * (x - truth_);
    const double t = sq_sum_ + e;
    if (std::abs(sq_sum_) >= std::abs(e))
        sq_comp_ += (sq_sum_ - t) + e;
    else
        sq_comp_ += (e - t) + sq_sum_;
    sq_sum_ = t;
}

EstimatorStats summarize(std::span<const double> values, double truth, Estimator estimator,
                         std::uint32_t k) {
    MomentAccumulator acc(truth);
    for (double x : values) acc.add(x);
    EstimatorStats s;
    s.estimator = estimator;
    s.k = k;
    s.reps = static_cast<std::uint32_t>(values.size());
    s.truth = truth;
    s.mean = acc.mean();
    s.bias = acc.mean() - truth;
    s.variance = acc.variance();
    s.mse = acc.mse();
    return s;
}

namespace {

// values[estimator][k index][rep]
using Table = std::vector<std::vector<std::vector<double>>>;

Table make_table(std::size_t estimators, std::size_t ks, std::size_t reps) {
    return Table(estimators, std::vector<std::vector<double>>(ks, std::vector<double>(reps)));
}

}  // namespace

std::vector<EstimatorStats> simulate_rff(const SimConfig& config) {
    config.validate();
    const double rho = config.rho;
    const double cross = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const double scale = std::sqrt(config.gamma);
    const std::uint32_t k_max = config.k_grid.back();
    Table table = make_table(2, config.k_grid.size(), config.reps);

    parallel_for(config.reps, config.threads, [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(config.seed, rep);
        double sxy = 0, sxx = 0, syy = 0;
        std::size_t next = 0;
        for (std::uint32_t j = 0; j < k_max; ++j) {
            const auto u = uniform_pair(seed, j, 0, Stream::SimPair);
            const double x = normal_quantile(u[0]);
            const double y = rho * x + cross * normal_quantile(u[1]);
            const double w = 2.0 * std::numbers::pi * uniform_pair(seed, j, 0, Stream::SimPhase)[0];
            const double fx = std::numbers::sqrt2 * std::cos(scale * x + w);
            const double fy = std::numbers::sqrt2 * std::cos(scale * y + w);
            sxy += fx * fy;
            sxx += fx * fx;
            syy += fy * fy;
            if (j + 1 == config.k_grid[next]) {
                table[0][next][rep] = sxy / static_cast<double>(j + 1);
                table[1][next][rep] = sxy / std::sqrt(sxx * syy);
                ++next;
            }
        }
    });

    const double truth = std::exp(-config.gamma * (1.0 - rho));
    std::vector<EstimatorStats> out;
    for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki) {
        out.push_back(summarize(table[0][ki], truth, Estimator::Rff, config.k_grid[ki]));
        out.push_back(summarize(table[1][ki], truth, Estimator::Nrff, config.k_grid[ki]));
    }
    return out;
}

std::vector<EstimatorStats> simulate_gcws_transformed(const TransformedVector<double>& tu,
                                                      const TransformedVector<double>& tv,
                                                      const SimConfig& config) {
    config.validate();
    const double g_exact = gmm(tu, tv);
    const std::uint32_t k_max = config.k_grid.back();
    Table table = make_table(2, config.k_grid.size(), config.reps);

    parallel_for(config.reps, config.threads, [&](std::size_t rep) {
        GcwsConfig gc;
        gc.k = k_max;
        gc.seed = derive_seed(config.seed, rep);
        const GcwsSketch su = sketch(tu, gc);
        const GcwsSketch sv = sketch(tv, gc);
        std::size_t matches = 0;
        std::size_t next = 0;
        for (std::uint32_t j = 0; j < k_max; ++j) {
            matches += su[j] == sv[j] ? 1 : 0;
            if (j + 1 == config.k_grid[next]) {
                const double g_hat = static_cast<double>(matches) / static_cast<double>(j + 1);
                table[0][next][rep] = g_hat;
                table[1][next][rep] = theory::gcws_rbf_estimate(g_hat, config.gamma);
                ++next;
            }
        }
    });

    const double rbf_truth = theory::gcws_rbf_estimate(g_exact, config.gamma);
    std::vector<EstimatorStats> out;
    for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki) {
        out.push_back(summarize(table[0][ki], g_exact, Estimator::GcwsGmm, config.k_grid[ki]));
        out.push_back(summarize(table[1][ki], rbf_truth, Estimator::GcwsRbf, config.k_grid[ki]));
    }
    return out;
}

std::vector<EstimatorStats> simulate_binomial_rbf(const SimConfig& config) {
    config.validate();
    const double g = theory::g_of_rho(config.rho);
    Table table = make_table(1, config.k_grid.size(), config.reps);

    parallel_for(config.reps, config.threads, [&](std::size_t rep) {
        std::mt19937_64 engine(derive_seed(config.seed, rep));
        for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki) {
            const std::uint32_t k = config.k_grid[ki];
            std::binomial_distribution<std::uint32_t> binomial(k, g);
            const double g_hat = static_cast<double>(binomial(engine)) / static_cast<double>(k);
            table[0][ki][rep] = theory::gcws_rbf_estimate(g_hat, config.gamma);
        }
    });

    const double truth = std::exp(-config.gamma * (1.0 - config.rho));
    std::vector<EstimatorStats> out;
    for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki)
        out.push_back(summarize(table[0][ki], truth, Estimator::GcwsRbf, config.k_grid[ki]));
    return out;
}

namespace {

double theory_variance(Estimator e, double rho, double gamma, std::uint32_t k) {
    const double kd = static_cast<double>(k);
    switch (e) {
        case Estimator::Rff: return theory::v_rff(rho, gamma) / kd;
        case Estimator::Nrff: return theory::v_nrff(rho, gamma) / kd;
        case Estimator::GcwsRbf: return theory::v_gcws_rbf(rho, gamma) / kd;
        case Estimator::GcwsGmm: {
            const double g = theory::g_of_rho(rho);
            return g * (1.0 - g) / kd;
        }
    }
    return 0.0;
}

}  // namespace

void write_stats_csv(std::ostream& out, std::span<const EstimatorStats> stats, const SimConfig& config) {
    out << "rho,gamma,k,estimator,reps,truth,mean,bias,variance,mse,theory_variance,mse_over_theory\n";
    for (const auto& s : stats) {
        const double tv = theory_variance(s.estimator, config.rho, config.gamma, s.k);
        out << format_double(config.rho) << ',' << format_double(config.gamma) << ',' << s.k << ','
            << to_string(s.estimator) << ',' << s.reps << ',' << format_double(s.truth) << ','
            << format_double(s.mean) << ',' << format_double(s.bias) << ','
            << format_double(s.variance) << ',' << format_double(s.mse) << ',' << format_double(tv)
            << ',' << (tv > 0 ? format_double(s.mse / tv) : std::string("nan")) << '\n';
    }
}

FigureGrid FigureGrid::defaults(int which) {
    FigureGrid grid;
    auto steps = [](double lo, double hi, int n) {
        std::vector<double> v;
        for (int i = 0; i <= n; ++i) v.push_back(lo + (hi - lo) * i / n);
        return v;
    };
    switch (which) {
        case 1:
            grid.rho = steps(-1.0, 1.0, 40);
            grid.gamma = {0.5, 1.0, 2.0, 4.0, 10.0};
            break;
        case 2:
            grid.sim.k_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
            grid.sim.reps = 10000;
            break;
        case 3:
            grid.expectation = steps(0.01, 1.0, 99);
            grid.fig3_gamma = 4.0;
            break;
        case 4:
            grid.rho = steps(-0.95, 0.95, 38);
            grid.rho.push_back(0.99);
            grid.gamma = {0.5, 1.0, 2.0, 4.0};
            break;
        default:
            throw std::invalid_argument("unknown figure id " + std::to_string(which) + " (expected 1-4)");
    }
    return grid;
}

void emit_figure_data(std::ostream& out, int which, const FigureGrid& grid) {
    switch (which) {
        case 1:
            out << "rho,gamma,v_rff,v_nrff,ratio\n";
            for (double g : grid.gamma)
                for (double r : grid.rho) {
                    const double v = theory::v_rff(r, g);
                    const double vn = theory::v_nrff(r, g);
                    out << format_double(r) << ',' << format_double(g) << ',' << format_double(v) << ','
                        << format_double(vn) << ',' << format_double(vn / v) << '\n';
                }
            return;
        case 2: {
            const auto stats = simulate_rff(grid.sim);
            write_stats_csv(out, stats, grid.sim);
            return;
        }
        case 3: {
            out << "E,gcws,nrff,rff\n";
            const double floor_e = std::exp(-2.0 * grid.fig3_gamma);
            for (double e : grid.expectation) {
                if (e < floor_e) continue;  // would need rho < -1
                out << format_double(e) << ','
                    << format_double(theory::relative_variance(theory::Method::Gcws, e, grid.fig3_gamma)) << ','
                    << format_double(theory::relative_variance(theory::Method::Nrff, e, grid.fig3_gamma)) << ','
                    << format_double(theory::relative_variance(theory::Method::Rff, e, grid.fig3_gamma))
                    << '\n';
            }
            return;
        }
        case 4:
            out << "rho,gamma,v_nrff,v_gcws_rbf,ratio\n";
            for (double g : grid.gamma)
                for (double r : grid.rho) {
                    if (std::abs(r) >= 1.0)
                        throw std::invalid_argument("figure 4: rho must lie strictly inside (-1, 1)");
                    const double vn = theory::v_nrff(r, g);
                    const double vg = theory::v_gcws_rbf(r, g);
                    out << format_double(r) << ',' << format_double(g) << ',' << format_double(vn) << ','
                        << format_double(vg) << ',' << format_double(vn / vg) << '\n';
                }
            return;
        default:
            throw std::invalid_argument("unknown figure id " + std::to_string(which) + " (expected 1-4)");
    }
}

}  // namespace linkern
