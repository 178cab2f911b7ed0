#pragma once

// LIBSVM sparse text datasets: `label idx:val ...` with 1-based, strictly
// increasing indices on disk and 0-based indices in memory.

#include "linkern/gcws.hpp"
#include "linkern/rff.hpp"
#include "linkern/vectors.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace linkern {

struct Dataset {
    std::vector<double> labels;
    std::vector<SparseVector> rows;  // every row has size `dim`
    Eigen::Index dim = 0;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] bool empty() const { return rows.empty(); }

    /// Appends a row, growing `dim` (and resizing earlier rows) if needed.
    void push_back(double label, SparseVector row);
    /// Raises the common dimension of all rows to at least `d`.
    void set_dim(Eigen::Index d);

    friend bool operator==(const Dataset& a, const Dataset& b);
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Dataset parse_libsvm(std::istream& in);

/// Reads a file; "-" is standard input and names ending in ".gz" are
/// decompressed.
Dataset read_libsvm(const std::string& path);

/// Canonical form: label, ascending 1-based indices, shortest round-trip
/// decimals, single spaces, LF line endings.
void write_libsvm(const Dataset& ds, std::ostream& out);
void write_libsvm(const Dataset& ds, const std::string& path);

struct NormalizedDataset {
    Dataset data;
    std::size_t zero_rows = 0;  // passed through unchanged
};

/// Scales every nonzero row to unit l2 norm.
NormalizedDataset normalize_dataset(const Dataset& ds);

/// Sign-split transform of every row (dimension 2D).
Dataset transform_dataset(const Dataset& ds, const CenterVector<double>& mu = {});

using HashScheme = std::variant<GcwsConfig, RffConfig>;

/// Replaces features with GCWS one-hot codes (dimension k 2^b, k nonzeros
/// per row) or RFF features (dimension k). Plain RFF features are scaled by
/// 1/sqrt(k) so the inner product of two rows is the RBF estimate. Rows are
/// hashed in parallel; output is independent of `threads`.
Dataset hash_dataset(const Dataset& ds, const HashScheme& scheme, unsigned threads = 1);

/// LIBSVM precomputed-kernel layout: `label 0:serial 1:K_i1 ... n:K_in`.
void write_precomputed_kernel(std::ostream& out, const std::vector<double>& labels,
                              const Eigen::MatrixXd& k);

}  // namespace linkern
