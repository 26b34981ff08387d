#include "cli.hpp"

#include "fastmmd/circular.hpp"
#include "fastmmd/dataset.hpp"
#include "fastmmd/error.hpp"
#include "fastmmd/estimator.hpp"
#include "fastmmd/exact.hpp"
#include "fastmmd/fastfood.hpp"
#include "fastmmd/fourier.hpp"
#include "fastmmd/hypothesis.hpp"
#include "fastmmd/random.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace fastmmd::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct DataOptions {
  std::string input;
  std::string label_column = "label";
  std::string synth;
  Index n = 1000;  ///< samples per class
  Index dim = 16;
  double epsilon = 1.0;
  double spacing = 5.0;
  std::optional<std::uint64_t> data_seed;
};

struct EstimatorOptions {
  std::string kernel = "gaussian";
  double sigma = 1.0;
  double k0 = 1.0;
  std::string method = "fourier";
  std::string estimate;  ///< empty: biased for circular, unbiased otherwise
  Index basis = 1024;
  Index block_size = 0;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::string output;
  std::string format;
  int threads = 0;  ///< 0: FASTMMD_THREADS or 1
};

void add_data_options(CLI::App& app, DataOptions& d) {
  app.add_option("--input", d.input, "CSV file with a header row")->check(CLI::ExistingFile);
  app.add_option("--label-column", d.label_column, "label column name or zero-based index")
      ->capture_default_str();
  app.add_option("--synth", d.synth, "synthetic data instead of --input")
      ->check(CLI::IsMember({"blobs", "ring", "hypercube"}));
  app.add_option("--n", d.n, "synthetic samples per class")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--dim", d.dim, "hypercube dimension")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--epsilon", d.epsilon, "blob covariance ratio for Q")->capture_default_str();
  app.add_option("--spacing", d.spacing, "blob grid spacing")->capture_default_str();
  app.add_option("--data-seed", d.data_seed, "seed for synthetic data (default: --seed)");
}

void add_estimator_options(CLI::App& app, EstimatorOptions& e) {
  app.add_option("--kernel", e.kernel)->capture_default_str()->check(CLI::IsMember({"gaussian", "laplacian"}));
  app.add_option("--sigma", e.sigma, "kernel bandwidth")->capture_default_str();
  app.add_option("--k0", e.k0, "kernel value at zero")->capture_default_str();
  app.add_option("--method", e.method)
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "linear", "btest", "fourier", "fastfood", "circular"}));
  app.add_option("--estimate", e.estimate, "biased or unbiased")->check(CLI::IsMember({"biased", "unbiased"}));
  app.add_option("--basis,-L", e.basis, "number of frequencies")->capture_default_str();
  app.add_option("--block-size", e.block_size, "B-test block size (0: round(sqrt(n)))")->capture_default_str();
}

void add_run_options(CLI::App& app, RunOptions& r, const std::string& default_format) {
  r.format = default_format;
  app.add_option("--seed", r.seed)->capture_default_str();
  app.add_option("--output,-o", r.output, "write results here instead of stdout");
  app.add_option("--format", r.format)->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", r.threads, "worker cap (default: FASTMMD_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
}

Parallelism parallelism(const RunOptions& r) {
  if (r.threads > 0) return {r.threads};
  if (const char* env = std::getenv("FASTMMD_THREADS")) {
    int v = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v < 1)
      throw InvalidArgument("FASTMMD_THREADS must be a positive integer");
    return {v};
  }
  return {1};
}

SampleSet load_data(const DataOptions& d, std::uint64_t seed) {
  if (d.input.empty() == d.synth.empty()) throw InvalidArgument("give exactly one of --input and --synth");
  if (!d.input.empty()) {
    ColumnRef column = d.label_column;
    if (!d.label_column.empty() && std::all_of(d.label_column.begin(), d.label_column.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; }))
      column = static_cast<Index>(std::stoll(d.label_column));
    return load_csv(d.input, column);
  }
  const std::uint64_t data_seed = d.data_seed.value_or(seed);
  if (d.synth == "blobs") return synth_blob_pair(BlobSpec{d.spacing, d.epsilon, d.n}, data_seed);
  if (d.synth == "ring") return synth_ring(d.n, data_seed);
  return synth_hypercube(d.n, d.dim, data_seed);
}

EstimatorConfig estimator_config(const EstimatorOptions& e, Parallelism par) {
  EstimatorConfig c;
  c.method = parse_method(e.method);
  c.kind = e.estimate.empty() ? (c.method == Method::circular ? EstimateKind::biased : EstimateKind::unbiased)
                              : parse_estimate_kind(e.estimate);
  c.kernel = ShiftInvariantKernel(parse_kernel_family(e.kernel), e.sigma, e.k0);
  c.basis = e.basis;
  c.block_size = e.block_size;
  c.par = par;
  validate(c);
  return c;
}

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

json seed_field(const std::optional<std::uint64_t>& seed) { return seed ? json(*seed) : json(nullptr); }

/// Writes `text` to the `--output` file or to `out`.
void emit(const RunOptions& r, std::ostream& out, const std::string& text) {
  if (r.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(r.output, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + r.output + "'");
  file << text;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fill) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + path + "'");
  fill(file);
}

double milliseconds_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// The frequency bank a spectral estimator draws for `seed`.
FrequencyBank bank_for(const EstimatorConfig& c, Index dim, std::uint64_t seed) {
  if (c.method == Method::fastfood)
    return materialize(make_fastfood_stack(c.kernel.sigma(), dim, c.basis, seed));
  return sample_spectral(c.kernel, c.basis, dim, seed);
}

bool spectral(Method m) { return m == Method::fourier || m == Method::fastfood || m == Method::circular; }

// ---------------------------------------------------------------- commands

struct ComputeArgs {
  DataOptions data;
  EstimatorOptions est;
  RunOptions run;
  std::string dump_bank, emit_amplitudes, emit_circle;
};

void cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const Parallelism par = parallelism(a.run);
  const EstimatorConfig config = estimator_config(a.est, par);
  const SampleSet samples = load_data(a.data, a.run.seed);

  const auto start = Clock::now();
  const MmdEstimate e = estimate(samples, config, a.run.seed);
  const double elapsed = milliseconds_since(start);

  if (!a.dump_bank.empty() || !a.emit_amplitudes.empty() || !a.emit_circle.empty()) {
    if (!spectral(config.method))
      throw InvalidArgument("--dump-bank, --emit-amplitudes and --emit-circle need a frequency-based method");
    const FrequencyBank bank = bank_for(config, samples.dim(), a.run.seed);
    if (!a.dump_bank.empty()) write_file(a.dump_bank, [&](std::ostream& f) { write_bank_csv(bank, f); });
    if (!a.emit_amplitudes.empty()) {
      const FrequencyAmplitudes amps = accumulate(samples, dense_projector(bank), par).amplitudes();
      write_file(a.emit_amplitudes, [&](std::ostream& f) { write_amplitudes_csv(amps, f); });
    }
    if (!a.emit_circle.empty())
      write_file(a.emit_circle, [&](std::ostream& f) { write_circle_csv(samples, bank, f); });
  }

  std::ostringstream text;
  if (a.run.format == "csv") {
    text << "method,estimate,value_sq,value,L,seed,n1,n2,d,wall_time_ms\n"
         << to_string(e.method) << ',' << to_string(e.kind) << ',' << number(e.value_sq) << ','
         << number(e.value()) << ',' << e.basis << ',' << (e.seed ? std::to_string(*e.seed) : "") << ','
         << samples.count(Label::first) << ',' << samples.count(Label::second) << ',' << samples.dim() << ','
         << number(elapsed) << '\n';
  } else {
    json doc;
    doc["schema"] = 1;
    doc["command"] = "compute";
    doc["method"] = to_string(e.method);
    doc["estimate"] = to_string(e.kind);
    doc["value_sq"] = e.value_sq;
    doc["value"] = e.value();
    doc["L"] = e.basis;
    doc["seed"] = seed_field(e.seed);
    doc["kernel"] = to_string(config.kernel.family());
    doc["sigma"] = config.kernel.sigma();
    doc["k0"] = config.kernel.k0();
    doc["n1"] = samples.count(Label::first);
    doc["n2"] = samples.count(Label::second);
    doc["d"] = samples.dim();
    doc["wall_time_ms"] = elapsed;
    text << doc.dump() << '\n';
  }
  emit(a.run, out, text.str());
}

struct TestArgs {
  DataOptions data;
  EstimatorOptions est;
  RunOptions run;
  double alpha = 0.05;
  Index shuffles = 1000;
};

void cmd_test(const TestArgs& a, std::ostream& out) {
  const Parallelism par = parallelism(a.run);
  EstimatorConfig config = estimator_config(a.est, Parallelism{1});
  const SampleSet samples = load_data(a.data, a.run.seed);
  const auto start = Clock::now();
  // Shuffles run in parallel; each estimate stays single-threaded.
  const TestResult r = two_sample_test(samples, make_estimator(config), a.alpha, a.shuffles, a.run.seed, par);
  const double elapsed = milliseconds_since(start);

  std::ostringstream text;
  if (a.run.format == "csv") {
    text << "method,estimate,statistic,threshold,p_value,reject,alpha,shuffles,L,seed,wall_time_ms\n"
         << to_string(r.method) << ',' << to_string(r.kind) << ',' << number(r.statistic) << ','
         << number(r.threshold) << ',' << number(r.p_value) << ',' << (r.reject ? "true" : "false") << ','
         << number(r.alpha) << ',' << r.shuffles << ',' << r.basis << ',' << a.run.seed << ',' << number(elapsed)
         << '\n';
  } else {
    json doc;
    doc["schema"] = 1;
    doc["command"] = "test";
    doc["method"] = to_string(r.method);
    doc["estimate"] = to_string(r.kind);
    doc["statistic"] = r.statistic;
    doc["threshold"] = r.threshold;
    doc["p_value"] = r.p_value;
    doc["reject"] = r.reject;
    doc["alpha"] = r.alpha;
    doc["shuffles"] = r.shuffles;
    doc["L"] = r.basis;
    doc["seed"] = a.run.seed;
    doc["n1"] = samples.count(Label::first);
    doc["n2"] = samples.count(Label::second);
    doc["d"] = samples.dim();
    doc["wall_time_ms"] = elapsed;
    text << doc.dump() << '\n';
  }
  emit(a.run, out, text.str());
}

struct SweepArgs {
  DataOptions data;
  EstimatorOptions est;
  RunOptions run;
  double sigma_min = 0.1;
  double sigma_max = 100.0;
  int steps_per_decade = 5;
  Index repeats = 10;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const Parallelism par = parallelism(a.run);
  const EstimatorConfig config = estimator_config(a.est, par);
  const SampleSet samples = load_data(a.data, a.run.seed);
  const SweepResult r = bandwidth_sweep(samples, config.kernel.family(), a.sigma_min, a.sigma_max,
                                        a.steps_per_decade, config, a.repeats, a.run.seed);
  std::ostringstream text;
  if (a.run.format == "csv") {
    write_sweep_csv(r, text);
  } else {
    json doc;
    doc["schema"] = 1;
    doc["command"] = "sweep";
    doc["method"] = to_string(config.method);
    doc["estimate"] = to_string(config.kind);
    doc["kernel"] = to_string(config.kernel.family());
    doc["L"] = spectral(config.method) ? config.basis : 0;
    doc["repeats"] = a.repeats;
    doc["seed"] = a.run.seed;
    json points = json::array();
    for (const auto& p : r.points) points.push_back({{"sigma", p.sigma}, {"mean", p.mean}, {"stddev", p.stddev}});
    doc["points"] = std::move(points);
    doc["argmax_sigma"] = r.argmax_sigma;
    text << doc.dump() << '\n';
  }
  emit(a.run, out, text.str());
}

struct SynthArgs {
  DataOptions data;
  RunOptions run;
};

void cmd_synth(SynthArgs a, std::ostream& out) {
  if (!a.data.input.empty()) throw InvalidArgument("synth takes --synth, not --input");
  if (a.data.synth.empty()) throw InvalidArgument("synth needs --synth {blobs,ring,hypercube}");
  std::ostringstream text;
  write_csv(load_data(a.data, a.run.seed), text);
  emit(a.run, out, text.str());
}

struct BenchArgs {
  EstimatorOptions est;
  RunOptions run;
  std::vector<std::string> methods{"exact", "fourier", "fastfood"};
  std::vector<Index> sizes{1000, 10000};
  std::vector<Index> dims{16};
  Index repeats = 3;
  bool force = false;
};

constexpr Index kExactLimit = 100000;

void cmd_bench(const BenchArgs& a, std::ostream& out) {
  const Parallelism par = parallelism(a.run);
  if (a.repeats < 1) throw InvalidArgument("--repeats must be >= 1");
  std::vector<EstimatorConfig> configs;
  for (const auto& m : a.methods) {
    EstimatorOptions e = a.est;
    e.method = m;
    if (e.estimate.empty()) {
      const Method method = parse_method(m);
      e.estimate = method == Method::linear || method == Method::btest ? "unbiased" : "biased";
    }
    configs.push_back(estimator_config(e, par));
  }
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (Index n : a.sizes) {
      if (n < 4) throw InvalidArgument("bench sizes must be >= 4");
      if (configs[i].method == Method::exact && n > kExactLimit && !a.force)
        throw InvalidArgument("exact MMD refuses N = " + std::to_string(n) + " > " + std::to_string(kExactLimit) +
                              " without --force");
    }

  std::ostringstream text;
  text << "method,N,d,L,wall_time_ms,value_sq\n";
  for (const auto& config : configs) {
    for (Index dim : a.dims) {
      for (Index n : a.sizes) {
        // N is the total sample count, split evenly between the classes.
        const SampleSet samples = synth_hypercube(n / 2, dim, derive_seed(a.run.seed, static_cast<std::uint64_t>(dim)));
        MmdEstimate e = estimate(samples, config, a.run.seed);  // warm-up, not timed
        std::vector<double> times;
        for (Index r = 0; r < a.repeats; ++r) {
          const auto start = Clock::now();
          e = estimate(samples, config, a.run.seed);
          times.push_back(milliseconds_since(start));
        }
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
        text << to_string(config.method) << ',' << samples.size() << ',' << dim << ','
             << (spectral(config.method) ? config.basis : 0) << ',' << number(times[times.size() / 2]) << ','
             << number(e.value_sq) << '\n';
      }
    }
  }
  emit(a.run, out, text.str());
}

struct Type2Args {
  EstimatorOptions est;
  RunOptions run;
  std::vector<double> epsilons{1.0, 2.0, 4.0};
  std::vector<Index> bases{16, 64, 256};
  Index n = 500;
  double spacing = 5.0;
  Index trials = 100;
  double alpha = 0.05;
  Index shuffles = 1000;
};

void cmd_type2(const Type2Args& a, std::ostream& out) {
  Type2Config c;
  c.epsilons = a.epsilons;
  c.bases = a.bases;
  c.samples_per_set = a.n;
  c.spacing = a.spacing;
  c.trials = a.trials;
  c.alpha = a.alpha;
  c.shuffles = a.shuffles;
  c.estimator = estimator_config(a.est, parallelism(a.run));
  std::ostringstream text;
  write_type2_csv(type2_experiment(c, a.run.seed), text);
  emit(a.run, out, text.str());
}

void report(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", message}, {"kind", kind}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel two-sample testing with exact and linear-time MMD estimators", "fastmmd"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* compute_cmd = app.add_subcommand("compute", "one MMD estimate");
  add_data_options(*compute_cmd, compute.data);
  add_estimator_options(*compute_cmd, compute.est);
  add_run_options(*compute_cmd, compute.run, "json");
  compute_cmd->add_option("--dump-bank", compute.dump_bank, "write the frequency bank as CSV");
  compute_cmd->add_option("--emit-amplitudes", compute.emit_amplitudes, "write per-frequency amplitudes as CSV");
  compute_cmd->add_option("--emit-circle", compute.emit_circle, "write wrapped samples per frequency as CSV");

  TestArgs test;
  auto* test_cmd = app.add_subcommand("test", "permutation two-sample test");
  add_data_options(*test_cmd, test.data);
  add_estimator_options(*test_cmd, test.est);
  add_run_options(*test_cmd, test.run, "json");
  test_cmd->add_option("--alpha", test.alpha)->capture_default_str();
  test_cmd->add_option("--shuffles", test.shuffles)->capture_default_str();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "repeated estimates over a geometric bandwidth grid");
  add_data_options(*sweep_cmd, sweep.data);
  add_estimator_options(*sweep_cmd, sweep.est);
  add_run_options(*sweep_cmd, sweep.run, "csv");
  sweep_cmd->add_option("--sigma-min", sweep.sigma_min)->capture_default_str();
  sweep_cmd->add_option("--sigma-max", sweep.sigma_max)->capture_default_str();
  sweep_cmd->add_option("--steps-per-decade", sweep.steps_per_decade)->capture_default_str();
  sweep_cmd->add_option("--repeats", sweep.repeats)->capture_default_str();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic data set as CSV");
  add_data_options(*synth_cmd, synth.data);
  add_run_options(*synth_cmd, synth.run, "csv");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "wall-clock timings on hypercube data");
  bench.est.basis = 128;
  add_estimator_options(*bench_cmd, bench.est);
  add_run_options(*bench_cmd, bench.run, "csv");
  bench_cmd->add_option("--methods", bench.methods)->capture_default_str()->delimiter(',');
  bench_cmd->add_option("--sizes", bench.sizes, "total sample counts N")->capture_default_str()->delimiter(',');
  bench_cmd->add_option("--dims", bench.dims)->capture_default_str()->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "timed runs per cell (median reported)")->capture_default_str();
  bench_cmd->add_flag("--force", bench.force, "allow exact MMD above 1e5 samples");

  Type2Args type2;
  auto* type2_cmd = app.add_subcommand("type2", "Type II error table over blob anisotropy and basis size");
  add_estimator_options(*type2_cmd, type2.est);
  add_run_options(*type2_cmd, type2.run, "csv");
  type2_cmd->add_option("--epsilons", type2.epsilons)->capture_default_str()->delimiter(',');
  type2_cmd->add_option("--bases", type2.bases)->capture_default_str()->delimiter(',');
  type2_cmd->add_option("--n", type2.n, "samples per class")->capture_default_str();
  type2_cmd->add_option("--spacing", type2.spacing)->capture_default_str();
  type2_cmd->add_option("--trials", type2.trials)->capture_default_str();
  type2_cmd->add_option("--alpha", type2.alpha)->capture_default_str();
  type2_cmd->add_option("--shuffles", type2.shuffles)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report(err, "usage", e.what());
    return kUsageError;
  }

  try {
    if (compute_cmd->parsed()) cmd_compute(compute, out);
    if (test_cmd->parsed()) cmd_test(test, out);
    if (sweep_cmd->parsed()) cmd_sweep(sweep, out);
    if (synth_cmd->parsed()) cmd_synth(synth, out);
    if (bench_cmd->parsed()) cmd_bench(bench, out);
    if (type2_cmd->parsed()) cmd_type2(type2, out);
  } catch (const NumericalError& e) {
    report(err, "numerical", e.what());
    return kNumericalError;
  } catch (const ParseError& e) {
    report(err, "input", e.what());
    return kUsageError;
  } catch (const InvalidArgument& e) {
    report(err, "usage", e.what());
    return kUsageError;
  }
  return kOk;
}

}  // namespace fastmmd::cli
