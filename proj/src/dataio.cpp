#include "linkern/dataio.hpp"

#include "linkern/format.hpp"
#include "linkern/parallel.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string_view>

namespace linkern {

void Dataset::set_dim(Eigen::Index d) {
    if (d <= dim) return;
    dim = d;
    for (auto& row : rows) row.conservativeResize(dim);
}

void Dataset::push_back(double label, SparseVector row) {
    if (!std::isfinite(label)) throw std::invalid_argument("dataset labels must be finite");
    if (row.size() > dim) set_dim(row.size());
    if (row.size() < dim) row.conservativeResize(dim);
    labels.push_back(label);
    rows.push_back(std::move(row));
}

namespace {

bool same_row(const SparseVector& a, const SparseVector& b) {
    if (a.size() != b.size() || a.nonZeros() != b.nonZeros()) return false;
    for (Eigen::Index n = 0; n < a.nonZeros(); ++n)
        if (a.innerIndexPtr()[n] != b.innerIndexPtr()[n] || a.valuePtr()[n] != b.valuePtr()[n])
            return false;
    return true;
}

}  // namespace

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.dim != b.dim || a.labels != b.labels || a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (!same_row(a.rows[i], b.rows[i])) return false;
    return true;
}

namespace {

using LineSource = std::function<bool(std::string&)>;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

double parse_real(std::string_view token, std::size_t line, const char* what) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
    if (!std::isfinite(value))
        throw ParseError(line, std::string("non-finite ") + what + " '" + std::string(token) + "'");
    return value;
}

Dataset parse_lines(const LineSource& next_line) {
    Dataset ds;
    std::string line;
    std::vector<Eigen::Index> indices;
    std::vector<double> values;
    std::size_t line_no = 0;

    while (next_line(line)) {
        ++line_no;
        std::string_view rest(line);
        auto next_token = [&]() -> std::string_view {
            while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
            std::size_t n = 0;
            while (n < rest.size() && !is_space(rest[n])) ++n;
            const auto tok = rest.substr(0, n);
            rest.remove_prefix(n);
            return tok;
        };

        const std::string_view label_tok = next_token();
        if (label_tok.empty()) continue;  // blank line
        if (label_tok.front() == '#') throw ParseError(line_no, "comment lines are not part of the format");
        const double label = parse_real(label_tok, line_no, "label");

        indices.clear();
        values.clear();
        Eigen::Index prev = 0;
        for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos)
                throw ParseError(line_no, "expected idx:val, got '" + std::string(tok) + "'");
            long long idx = 0;
            const auto idx_tok = tok.substr(0, colon);
            const auto res = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
            if (res.ec != std::errc{} || res.ptr != idx_tok.data() + idx_tok.size() || idx < 1)
                throw ParseError(line_no, "malformed index '" + std::string(idx_tok) + "'");
            if (idx > std::numeric_limits<int>::max())
                throw ParseError(line_no, "index " + std::string(idx_tok) + " is too large");
            if (idx <= prev)
                throw ParseError(line_no, "indices must be strictly increasing (" + std::to_string(idx) +
                                              " after " + std::to_string(prev) + ")");
            prev = static_cast<Eigen::Index>(idx);
            const double value = parse_real(tok.substr(colon + 1), line_no, "value");
            if (value == 0.0) continue;
            indices.push_back(prev - 1);
            values.push_back(value);
        }
        const Eigen::Index row_dim = std::max<Eigen::Index>(prev, 1);
        ds.push_back(label, make_sparse<double>(row_dim, indices, values));
    }
    return ds;
}

class GzReader {
public:
    explicit GzReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw std::runtime_error("cannot open " + path);
    }
    ~GzReader() { gzclose(file_); }
    GzReader(const GzReader&) = delete;
    GzReader& operator=(const GzReader&) = delete;

    bool getline(std::string& line) {
        line.clear();
        char buf[8192];
        while (gzgets(file_, buf, sizeof(buf)) != nullptr) {
            line.append(buf);
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                return true;
            }
        }
        int err = 0;
        const char* msg = gzerror(file_, &err);
        if (err != Z_OK && err != Z_STREAM_END) throw std::runtime_error(std::string("gzip: ") + msg);
        return !line.empty();
    }

private:
    gzFile file_;
};

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
    return parse_lines([&](std::string& line) { return static_cast<bool>(std::getline(in, line)); });
}

Dataset read_libsvm(const std::string& path) {
    if (path == "-") return parse_libsvm(std::cin);
    if (ends_with(path, ".gz")) {
        GzReader reader(path);
        return parse_lines([&](std::string& line) { return reader.getline(line); });
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_libsvm(in);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
    std::string line;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        line = format_double(ds.labels[r]);
        for (SparseVector::InnerIterator it(ds.rows[r], 0); it; ++it) {
            line += ' ';
            line += std::to_string(it.index() + 1);
            line += ':';
            line += format_double(it.value());
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write failed");
}

void write_libsvm(const Dataset& ds, const std::string& path) {
    if (path == "-") {
        write_libsvm(ds, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_libsvm(ds, out);
}

NormalizedDataset normalize_dataset(const Dataset& ds) {
    NormalizedDataset out;
    out.data.dim = ds.dim;
    out.data.labels = ds.labels;
    out.data.rows.reserve(ds.size());
    for (const auto& row : ds.rows) {
        if (row.nonZeros() == 0) {
            ++out.zero_rows;
            out.data.rows.push_back(row);
        } else {
            out.data.rows.push_back(l2_normalize(row));
        }
    }
    return out;
}

Dataset transform_dataset(const Dataset& ds, const CenterVector<double>& mu) {
    Dataset out;
    out.dim = 2 * ds.dim;
    out.labels = ds.labels;
    out.rows.reserve(ds.size());
    for (const auto& row : ds.rows) out.rows.push_back(transform(row, mu).coeffs());
    return out;
}

namespace {

SparseVector dense_to_sparse(const Eigen::VectorXd& x) {
    SparseVector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) out.insertBack(i) = x[i];
    return out;
}

}  // namespace

Dataset hash_dataset(const Dataset& ds, const HashScheme& scheme, unsigned threads) {
    Dataset out;
    out.labels = ds.labels;
    out.rows.resize(ds.size());

    if (const auto* gc = std::get_if<GcwsConfig>(&scheme)) {
        gc->validate();
        std::string offending;
        std::size_t zero_count = 0;
        for (std::size_t r = 0; r < ds.size(); ++r) {
            if (ds.rows[r].nonZeros() == 0) {
                if (zero_count < 20) offending += (offending.empty() ? "" : ", ") + std::to_string(r);
                ++zero_count;
            }
        }
        if (zero_count > 0)
            throw std::invalid_argument("cannot hash zero vector: " + std::to_string(zero_count) +
                                        " all-zero row(s) at index " + offending +
                                        (zero_count > 20 ? ", ..." : ""));
        out.dim = static_cast<Eigen::Index>(gc->encoded_dim());
        parallel_for(ds.size(), threads, [&](std::size_t r) {
            out.rows[r] = encode(sketch(transform(ds.rows[r]), *gc), *gc).values;
        });
    } else {
        const auto& rc = std::get<RffConfig>(scheme);
        rc.validate();
        out.dim = static_cast<Eigen::Index>(rc.k);
        const double plain_scale = 1.0 / std::sqrt(static_cast<double>(rc.k));
        parallel_for(ds.size(), threads, [&](std::size_t r) {
            RffFeatures f;
            try {
                f = rff_features(ds.rows[r], rc);
            } catch (const std::exception& e) {
                throw std::invalid_argument("row " + std::to_string(r) + ": " + e.what());
            }
            if (!rc.normalize) f.values *= plain_scale;
            out.rows[r] = dense_to_sparse(f.values);
        });
    }
    return out;
}

void write_precomputed_kernel(std::ostream& out, const std::vector<double>& labels,
                              const Eigen::MatrixXd& k) {
    if (static_cast<Eigen::Index>(labels.size()) != k.rows() || k.rows() != k.cols())
        throw std::invalid_argument("precomputed kernel: label count does not match matrix size");
    std::string line;
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        line = format_double(labels[static_cast<std::size_t>(i)]);
        line += " 0:" + std::to_string(i + 1);
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            line += ' ';
            line += std::to_string(j + 1);
            line += ':';
            line += format_double(k(i, j));
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write failed");
}

}  // namespace linkern
