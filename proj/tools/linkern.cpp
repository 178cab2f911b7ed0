// linkern: command-line front end for the GMM/RBF hashing toolkit.
//
// Exit status: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr prefixed with "error:".

#include "linkern/dataio.hpp"
#include "linkern/format.hpp"
#include "linkern/kernels.hpp"
#include "linkern/linear_model.hpp"
#include "linkern/montecarlo.hpp"
#include "linkern/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace linkern;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw std::runtime_error("write failed");
    }

private:
    std::ofstream file_;
};

void write_dataset(const Dataset& ds, const std::string& path) {
    Output out(path);
    write_libsvm(ds, out.stream());
    out.finish();
}

Dataset read_input(const std::string& path, bool normalize) {
    Dataset ds = read_libsvm(path);
    if (!normalize) return ds;
    auto n = normalize_dataset(ds);
    if (n.zero_rows > 0) std::cerr << "warning: " << n.zero_rows << " all-zero row(s) left unnormalized\n";
    return std::move(n.data);
}

void add_threads(CLI::App* cmd, unsigned& threads) {
    cmd->add_option("--threads", threads, "Worker threads; output does not depend on this")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
}

void add_io(CLI::App* cmd, std::string& input, std::string& output) {
    cmd->add_option("-i,--input", input, "LIBSVM input file (.gz accepted, - for stdin)")->capture_default_str();
    cmd->add_option("-o,--output", output, "Output file (- for stdout)")->capture_default_str();
}

// ---- transform ----------------------------------------------------------

struct TransformArgs {
    std::string input = "-", output = "-";
    std::vector<double> center;
};

void run_transform(const TransformArgs& a) {
    const Dataset ds = read_libsvm(a.input);
    CenterVector<double> mu;
    if (!a.center.empty()) {
        if (static_cast<Eigen::Index>(a.center.size()) < ds.dim)
            throw UsageError("--center has " + std::to_string(a.center.size()) + " entries, data has dimension " +
                             std::to_string(ds.dim));
        mu = CenterVector<double>(Eigen::Map<const Eigen::VectorXd>(a.center.data(),
                                                                    static_cast<Eigen::Index>(a.center.size())));
    }
    Dataset padded = ds;
    if (!a.center.empty()) padded.set_dim(static_cast<Eigen::Index>(a.center.size()));
    write_dataset(transform_dataset(padded, mu), a.output);
}

// ---- kernel -------------------------------------------------------------

struct KernelArgs {
    std::string input = "-", output = "-";
    std::string kind = "gmm";
    double gamma = 1.0;
    bool normalize = false;
    unsigned threads = 1;
};

void run_kernel(const KernelArgs& a) {
    const Dataset ds = read_input(a.input, a.normalize);
    if (ds.empty()) throw std::runtime_error("kernel: input has no rows");
    KernelSpec spec;
    spec.kind = a.kind == "gmm" ? KernelKind::Gmm : a.kind == "rbf" ? KernelKind::Rbf : KernelKind::Linear;
    spec.gamma = a.gamma;
    const Eigen::MatrixXd k = kernel_matrix<SparseVector>(ds.rows, spec, a.threads);
    Output out(a.output);
    write_precomputed_kernel(out.stream(), ds.labels, k);
    out.finish();
}

// ---- hash ---------------------------------------------------------------

struct HashArgs {
    std::string input = "-", output = "-";
    std::string scheme = "gcws";
    std::uint32_t k = 256;
    int b = 8;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    bool no_normalize = false;
    bool normalize_input = false;
    unsigned threads = 1;
};

void run_hash(const HashArgs& a) {
    const Dataset ds = read_input(a.input, a.normalize_input);
    HashScheme scheme;
    if (a.scheme == "gcws") {
        GcwsConfig c;
        c.k = a.k;
        c.b = a.b;
        c.seed = a.seed;
        c.normalize_output = !a.no_normalize;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        scheme = c;
    } else {
        RffConfig c;
        c.k = a.k;
        c.gamma = a.gamma;
        c.seed = a.seed;
        c.normalize = !a.no_normalize;
        scheme = c;
    }
    write_dataset(hash_dataset(ds, scheme, a.threads), a.output);
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string output = "-";
    std::string estimator = "rff";
    SimConfig sim;
};

void run_simulate(const SimulateArgs& a) {
    try {
        a.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto stats = a.estimator == "rff" ? simulate_rff(a.sim) : simulate_binomial_rbf(a.sim);
    Output out(a.output);
    write_stats_csv(out.stream(), stats, a.sim);
    out.finish();
}

// ---- figure -------------------------------------------------------------

struct FigureArgs {
    std::string output = "-";
    int which = 1;
    std::vector<double> rho_list, gamma_list, e_list;
    std::optional<double> fig3_gamma;
    std::optional<double> rho, gamma;
    std::vector<std::uint32_t> k_grid;
    std::optional<std::uint32_t> reps;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

void run_figure(const FigureArgs& a) {
    FigureGrid grid = FigureGrid::defaults(a.which);
    if (!a.rho_list.empty()) grid.rho = a.rho_list;
    if (!a.gamma_list.empty()) grid.gamma = a.gamma_list;
    if (!a.e_list.empty()) grid.expectation = a.e_list;
    if (a.fig3_gamma) grid.fig3_gamma = *a.fig3_gamma;
    if (a.which == 2) {
        if (!a.seed) throw UsageError("figure 2 is a simulation and needs --seed");
        grid.sim.seed = *a.seed;
        if (a.rho) grid.sim.rho = *a.rho;
        if (a.gamma) grid.sim.gamma = *a.gamma;
        if (!a.k_grid.empty()) grid.sim.k_grid = a.k_grid;
        if (a.reps) grid.sim.reps = *a.reps;
        grid.sim.threads = a.threads;
        try {
            grid.sim.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    Output out(a.output);
    emit_figure_data(out.stream(), a.which, grid);
    out.finish();
}

// ---- train / eval -------------------------------------------------------

struct TrainArgs {
    std::string input = "-", model = "-";
    TrainConfig config;
    bool normalize_input = false;
    unsigned threads = 1;
};

void run_train(const TrainArgs& a) {
    const Dataset ds = read_input(a.input, a.normalize_input);
    const LinearModel m = train(ds, a.config, a.threads);
    Output out(a.model);
    m.save(out.stream());
    out.finish();
}

struct EvalArgs {
    std::string input = "-", model, output = "-";
    bool normalize_input = false;
    unsigned threads = 1;
};

void run_eval(const EvalArgs& a) {
    std::ifstream in(a.model);
    if (!in) throw std::runtime_error("cannot open " + a.model);
    const LinearModel m = LinearModel::load(in);
    Dataset ds = read_input(a.input, a.normalize_input);
    if (ds.dim < m.dim()) ds.set_dim(m.dim());
    const double acc = evaluate(m, ds, a.threads);
    Output out(a.output);
    out.stream() << format_double(acc) << '\n';
    out.finish();
}

// ---- sweep --------------------------------------------------------------

struct SweepArgs {
    std::string train, test, output = "-";
    std::optional<double> holdout;
    std::uint64_t split_seed = 0;
    std::vector<std::string> schemes{"gcws", "nrff", "linear"};
    SweepConfig config;
};

void run_sweep_cmd(SweepArgs a) {
    if (a.test.empty() == !a.holdout) throw UsageError("give exactly one of --test and --holdout");
    a.config.schemes.clear();
    for (const auto& s : a.schemes) a.config.schemes.push_back(parse_sweep_scheme(s));
    try {
        a.config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Dataset train_ds = read_libsvm(a.train);
    Dataset test_ds;
    if (a.holdout) {
        auto split = holdout_split(train_ds, *a.holdout, a.split_seed);
        train_ds = std::move(split.train);
        test_ds = std::move(split.test);
    } else {
        test_ds = read_libsvm(a.test);
    }
    const auto rows = run_sweep(train_ds, test_ds, a.config);
    Output out(a.output);
    write_sweep_csv(out.stream(), rows);
    out.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkern: GMM and RBF kernel linearization by hashing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "linkern 0.1.0");

    TransformArgs ta;
    auto* transform_cmd = app.add_subcommand("transform", "Sign-split transform of every row (dimension 2D)");
    add_io(transform_cmd, ta.input, ta.output);
    transform_cmd->add_option("--center", ta.center, "Center vector, comma separated (default: origin)")
        ->delimiter(',');

    KernelArgs ka;
    auto* kernel_cmd = app.add_subcommand("kernel", "Exact kernel matrix in LIBSVM precomputed layout");
    add_io(kernel_cmd, ka.input, ka.output);
    kernel_cmd->add_option("--kind", ka.kind, "gmm, rbf or linear")
        ->check(CLI::IsMember({"gmm", "rbf", "linear"}))
        ->capture_default_str();
    kernel_cmd->add_option("--gamma", ka.gamma, "RBF gamma")->check(CLI::PositiveNumber)->capture_default_str();
    kernel_cmd->add_flag("--normalize", ka.normalize, "Scale rows to unit l2 norm first");
    add_threads(kernel_cmd, ka.threads);

    HashArgs ha;
    auto* hash_cmd = app.add_subcommand("hash", "Replace features with GCWS codes or (normalized) RFF features");
    add_io(hash_cmd, ha.input, ha.output);
    hash_cmd->add_option("--scheme", ha.scheme, "gcws or nrff")
        ->check(CLI::IsMember({"gcws", "nrff"}))
        ->capture_default_str();
    hash_cmd->add_option("--k", ha.k, "Number of samples")->check(CLI::Range(1u, 1u << 24))->capture_default_str();
    hash_cmd->add_option("--b", ha.b, "Bits kept per GCWS sample")->check(CLI::Range(1, 16))->capture_default_str();
    hash_cmd->add_option("--gamma", ha.gamma, "RBF gamma (nrff)")->check(CLI::PositiveNumber)->capture_default_str();
    hash_cmd->add_option("--seed", ha.seed, "Master seed")->required();
    hash_cmd->add_flag("--no-normalize", ha.no_normalize,
                       "gcws: keep 0/1 codes instead of 1/sqrt(k); nrff: emit plain RFF scaled by 1/sqrt(k)");
    hash_cmd->add_flag("--normalize-input", ha.normalize_input, "Scale input rows to unit l2 norm first");
    add_threads(hash_cmd, ha.threads);

    SimulateArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo bias/variance/MSE of the estimators");
    sim_cmd->add_option("-o,--output", sa.output, "Output CSV (- for stdout)")->capture_default_str();
    sim_cmd->add_option("--rho", sa.sim.rho, "Correlation")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    sim_cmd->add_option("--gamma", sa.sim.gamma, "RBF gamma")->check(CLI::PositiveNumber)->capture_default_str();
    sim_cmd->add_option("--k-grid", sa.sim.k_grid, "Ascending sample counts, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sim_cmd->add_option("--reps", sa.sim.reps, "Repetitions per k (>= 100)")
        ->check(CLI::Range(100u, 100'000'000u))
        ->capture_default_str();
    sim_cmd->add_option("--seed", sa.sim.seed, "Master seed")->required();
    sim_cmd->add_option("--estimator", sa.estimator,
                        "rff: plain and normalized RFF from correlated normal pairs; "
                        "gcws-binomial: GCWS RBF estimator from binomial collision counts")
        ->check(CLI::IsMember({"rff", "gcws-binomial"}))
        ->capture_default_str();
    add_threads(sim_cmd, sa.sim.threads);

    FigureArgs fa;
    auto* fig_cmd = app.add_subcommand("figure", "CSV data behind the variance figures");
    fig_cmd->add_option("-o,--output", fa.output, "Output CSV (- for stdout)")->capture_default_str();
    fig_cmd->add_option("--which", fa.which,
                        "1: V_n/V ratio; 2: MSE simulation; 3: relative variance vs E; 4: V_n/V_g ratio")
        ->check(CLI::Range(1, 4))
        ->required();
    fig_cmd->add_option("--rho-list", fa.rho_list, "rho grid (figures 1, 4)")->delimiter(',');
    fig_cmd->add_option("--gamma-list", fa.gamma_list, "gamma grid (figures 1, 4)")->delimiter(',');
    fig_cmd->add_option("--e-list", fa.e_list, "E grid (figure 3)")->delimiter(',');
    fig_cmd->add_option("--fig3-gamma", fa.fig3_gamma, "gamma used to solve rho from E (figure 3, default 4)")
        ->check(CLI::PositiveNumber);
    fig_cmd->add_option("--rho", fa.rho, "rho (figure 2, default 0.5)")->check(CLI::Range(-1.0, 1.0));
    fig_cmd->add_option("--gamma", fa.gamma, "gamma (figure 2, default 1)")->check(CLI::PositiveNumber);
    fig_cmd->add_option("--k-grid", fa.k_grid, "k grid (figure 2, default 1,2,4,...,1024)")->delimiter(',');
    fig_cmd->add_option("--reps", fa.reps, "repetitions (figure 2, default 10000)");
    fig_cmd->add_option("--seed", fa.seed, "Master seed (required for figure 2)");
    add_threads(fig_cmd, fa.threads);

    TrainArgs tra;
    auto* train_cmd = app.add_subcommand("train", "Train the l2-regularized linear SVM");
    train_cmd->add_option("-i,--input", tra.input, "LIBSVM training data (- for stdin)")->capture_default_str();
    train_cmd->add_option("-m,--model", tra.model, "Model output (- for stdout)")->capture_default_str();
    train_cmd->add_option("--c", tra.config.C, "Regularization trade-off C")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--epochs", tra.config.epochs, "Passes over the data")
        ->check(CLI::Range(1u, 1'000'000u))
        ->capture_default_str();
    train_cmd->add_option("--eta0", tra.config.eta0, "Base learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--seed", tra.config.seed, "Shuffling seed")->capture_default_str();
    train_cmd->add_flag("--normalize-input", tra.normalize_input, "Scale rows to unit l2 norm first");
    add_threads(train_cmd, tra.threads);

    EvalArgs ea;
    auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a trained model on a dataset");
    add_io(eval_cmd, ea.input, ea.output);
    eval_cmd->add_option("-m,--model", ea.model, "Model file from `train`")->required();
    eval_cmd->add_flag("--normalize-input", ea.normalize_input, "Scale rows to unit l2 norm first");
    add_threads(eval_cmd, ea.threads);

    SweepArgs swa;
    auto* sweep_cmd = app.add_subcommand("sweep", "Test accuracy over schemes, k, b, gamma, C and seeds (tidy CSV)");
    sweep_cmd->add_option("--train", swa.train, "LIBSVM training data")->required();
    sweep_cmd->add_option("--test", swa.test, "LIBSVM test data");
    sweep_cmd->add_option("--holdout", swa.holdout, "Hold out this fraction of --train as the test set")
        ->check(CLI::Range(0.0, 1.0));
    sweep_cmd->add_option("--split-seed", swa.split_seed, "Seed of the holdout split")->capture_default_str();
    sweep_cmd->add_option("-o,--output", swa.output, "Output CSV (- for stdout)")->capture_default_str();
    sweep_cmd->add_option("--schemes", swa.schemes, "Any of gcws, nrff, linear")
        ->delimiter(',')
        ->check(CLI::IsMember({"gcws", "nrff", "linear"}))
        ->capture_default_str();
    sweep_cmd->add_option("--k-list", swa.config.k_list, "Sample counts")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--b-list", swa.config.b_list, "GCWS bit widths")
        ->delimiter(',')
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    sweep_cmd->add_option("--gamma-list", swa.config.gamma_list, "NRFF gammas")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_option("--c-list", swa.config.c_list, "C values")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_option("--seeds", swa.config.seeds, "Hashing and shuffling seeds")->delimiter(',')->required();
    sweep_cmd->add_option("--epochs", swa.config.epochs, "Training passes")
        ->check(CLI::Range(1u, 1'000'000u))
        ->capture_default_str();
    add_threads(sweep_cmd, swa.config.threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*transform_cmd) run_transform(ta);
        else if (*kernel_cmd) run_kernel(ka);
        else if (*hash_cmd) run_hash(ha);
        else if (*sim_cmd) run_simulate(sa);
        else if (*fig_cmd) run_figure(fa);
        else if (*train_cmd) run_train(tra);
        else if (*eval_cmd) run_eval(ea);
        else if (*sweep_cmd) run_sweep_cmd(swa);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}
