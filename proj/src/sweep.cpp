#include "linkern/sweep.hpp"

#include "linkern/format.hpp"
#include "linkern/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace linkern {

std::string_view to_string(SweepScheme s) {
    switch (s) {
        case SweepScheme::Gcws: return "gcws";
        case SweepScheme::Nrff: return "nrff";
        case SweepScheme::Linear: return "linear";
    }
    return "unknown";
}

SweepScheme parse_sweep_scheme(std::string_view name) {
    if (name == "gcws") return SweepScheme::Gcws;
    if (name == "nrff") return SweepScheme::Nrff;
    if (name == "linear") return SweepScheme::Linear;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected gcws, nrff, linear)");
}

void SweepConfig::validate() const {
    if (schemes.empty()) throw std::invalid_argument("sweep: no schemes");
    if (c_list.empty()) throw std::invalid_argument("sweep: empty C list");
    if (seeds.empty()) throw std::invalid_argument("sweep: no seeds");
    const bool hashed = std::any_of(schemes.begin(), schemes.end(),
                                    [](SweepScheme s) { return s != SweepScheme::Linear; });
    if (hashed && k_list.empty()) throw std::invalid_argument("sweep: empty k list");
    for (double c : c_list)
        if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("sweep: C values must be positive");
    if (epochs < 1) throw std::invalid_argument("sweep: epochs must be >= 1");
}

namespace {

Dataset normalized(const Dataset& ds) { return normalize_dataset(ds).data; }

}  // namespace

std::vector<SweepRow> run_sweep(const Dataset& train_raw, const Dataset& test_raw, const SweepConfig& config) {
    config.validate();
    if (train_raw.empty() || test_raw.empty()) throw std::invalid_argument("sweep: empty train or test set");

    Dataset train_ds = normalized(train_raw);
    Dataset test_ds = normalized(test_raw);
    const Eigen::Index dim = std::max(train_ds.dim, test_ds.dim);
    train_ds.set_dim(dim);
    test_ds.set_dim(dim);

    std::vector<SweepRow> rows;
    auto fit_all = [&](const Dataset& tr, const Dataset& te, SweepRow proto) {
        for (double c : config.c_list) {
            TrainConfig tc;
            tc.C = c;
            tc.epochs = config.epochs;
            tc.seed = proto.seed;
            const LinearModel model = train(tr, tc, config.threads);
            proto.C = c;
            proto.accuracy = evaluate(model, te, config.threads);
            rows.push_back(proto);
        }
    };

    for (const SweepScheme scheme : config.schemes) {
        if (scheme == SweepScheme::Linear) {
            for (const auto seed : config.seeds) fit_all(train_ds, test_ds, {scheme, 0, 0, 0.0, 0.0, seed, 0.0});
            continue;
        }
        for (const auto k : config.k_list) {
            if (scheme == SweepScheme::Gcws) {
                for (const int b : config.b_list)
                    for (const auto seed : config.seeds) {
                        GcwsConfig gc;
                        gc.k = k;
                        gc.b = b;
                        gc.seed = seed;
                        fit_all(hash_dataset(train_ds, gc, config.threads),
                                hash_dataset(test_ds, gc, config.threads), {scheme, k, b, 0.0, 0.0, seed, 0.0});
                    }
            } else {
                for (const double gamma : config.gamma_list)
                    for (const auto seed : config.seeds) {
                        RffConfig rc;
                        rc.k = k;
                        rc.gamma = gamma;
                        rc.seed = seed;
                        fit_all(hash_dataset(train_ds, rc, config.threads),
                                hash_dataset(test_ds, rc, config.threads), {scheme, k, 0, gamma, 0.0, seed, 0.0});
                    }
            }
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "scheme,k,b,gamma,C,seed,accuracy\n";
    for (const auto& r : rows) {
        out << to_string(r.scheme) << ',';
        if (r.scheme != SweepScheme::Linear) out << r.k;
        out << ',';
        if (r.scheme == SweepScheme::Gcws) out << r.b;
        out << ',';
        if (r.scheme == SweepScheme::Nrff) out << format_double(r.gamma);
        out << ',' << format_double(r.C) << ',' << r.seed << ',' << format_double(r.accuracy) << '\n';
    }
}

Split holdout_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("holdout fraction must lie in (0, 1)");
    const std::size_t n = ds.size();
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test >= n) throw std::invalid_argument("holdout leaves an empty train or test set");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::uint64_t split_seed = derive_seed(seed, kSampleSentinel, Stream::Shuffle);
    for (std::size_t i = n; i > 1; --i) {
        const double u = uniform_pair(split_seed, i, 0, Stream::Shuffle)[0];
        const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(i)), i - 1);
        std::swap(order[i - 1], order[j]);
    }
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());

    Split s;
    for (std::size_t p = 0; p < n; ++p) {
        Dataset& dst = p < n_test ? s.test : s.train;
        dst.push_back(ds.labels[order[p]], ds.rows[order[p]]);
    }
    s.train.set_dim(ds.dim);
    s.test.set_dim(ds.dim);
    return s;
}

}  // namespace linkern
