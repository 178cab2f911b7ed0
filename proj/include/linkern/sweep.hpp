#pragma once

// Accuracy-vs-k sweeps: hash a train/test split per seed, train the linear
// model at every C, and report test accuracy as tidy rows.

#include "linkern/dataio.hpp"
#include "linkern/linear_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace linkern {

enum class SweepScheme { Gcws, Nrff, Linear };

std::string_view to_string(SweepScheme s);
SweepScheme parse_sweep_scheme(std::string_view name);

struct SweepConfig {
    std::vector<SweepScheme> schemes{SweepScheme::Gcws, SweepScheme::Nrff, SweepScheme::Linear};
    std::vector<std::uint32_t> k_list{64, 256};
    std::vector<int> b_list{8};               // gcws only
    std::vector<double> gamma_list{1.0};      // nrff only
    std::vector<double> c_list{0.1, 1.0, 10.0};
    std::vector<std::uint64_t> seeds{0};
    std::uint32_t epochs = 20;
    unsigned threads = 1;

    void validate() const;
};

struct SweepRow {
    SweepScheme scheme;
    std::uint32_t k = 0;   // 0 for the raw linear baseline
    int b = 0;             // gcws only
    double gamma = 0.0;    // nrff only
    double C = 0.0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
};

/// Rows are l2-normalized, then each (scheme, k, b | gamma, seed) hashes
/// train and test with the same seed and trains once per C with that seed.
/// Row order is fixed by the loop order scheme, k, b | gamma, seed, C.
std::vector<SweepRow> run_sweep(const Dataset& train, const Dataset& test, const SweepConfig& config);

/// CSV header: scheme,k,b,gamma,C,seed,accuracy. Fields that do not apply
/// to a scheme are left empty.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct Split {
    Dataset train;
    Dataset test;
};

/// Deterministic shuffled split holding out `test_fraction` of the rows.
Split holdout_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace linkern
