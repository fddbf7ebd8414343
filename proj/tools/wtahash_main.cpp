// Command-line front end: dataset generation, training, hashing, and the
// similarity-search benchmark. Exit codes: 0 success, 2 usage or
// configuration error, 3 data or file-format error, 4 internal error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "wtahash/baselines.hpp"
#include "wtahash/datagen.hpp"
#include "wtahash/eval.hpp"
#include "wtahash/io.hpp"
#include "wtahash/rng.hpp"
#include "wtahash/trainer.hpp"
#include "wtahash/wta.hpp"

namespace {

using namespace wtahash;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void set_workers(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

DenseMatrix load_dense(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return load_csv(path);
  return load_fvecs(path);
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::uint32_t d = 1000;
  std::uint32_t d_out = 2000;
  std::uint32_t k = 4;
  std::size_t n_train = 10000;
  std::size_t n_test = 10000;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  set_workers(args.workers);
  ArtfcSpec spec;
  spec.n_train = args.n_train;
  spec.n_test = args.n_test;
  spec.d = args.d;
  spec.d_out = args.d_out;
  spec.k = args.k;
  spec.seed = args.seed;
  const auto t0 = clock_type::now();
  ArtfcData data = generate_artfc(spec);
  save_fvecs(args.out + "_train.fvecs", data.train.x);
  save_fvecs(args.out + "_test.fvecs", data.test.x);
  save_codes(args.out + "_train.wtay", *data.train.y);
  save_codes(args.out + "_test.wtay", *data.test.y);
  std::cout << "generated " << data.train.name << ": d=" << spec.d << " dout=" << spec.d_out
            << " k=" << spec.k << " train=" << spec.n_train << " test=" << spec.n_test
            << " seed=" << spec.seed << " out=" << args.out << "_{train,test}.{fvecs,wtay}"
            << " seconds=" << seconds_since(t0) << "\n";
  return 0;
}

// -------------------------------------------------------------- train ----

struct TrainArgs {
  std::string mode;
  std::string x_path;
  std::string y_path;
  std::uint32_t d_out = 0;
  std::uint32_t k = 0;
  std::uint32_t c = 0;
  std::uint64_t seed = 0;
  std::uint32_t max_iterations = 100;
  std::string stop = "code";
  double epsilon = 0.0;
  bool normalize = false;
  int workers = 0;
  std::string out;
};

int run_train(const TrainArgs& args) {
  set_workers(args.workers);
  DenseMatrix x = load_dense(args.x_path);
  if (x.cols() == 0) throw std::invalid_argument("train: input has no samples");
  if (args.normalize) center_columns(x);

  const std::size_t zero_cols = count_zero_columns(x);
  if (zero_cols > 0)
    std::cerr << "warning: " << zero_cols << " all-zero input column(s)\n";

  ModelConfig cfg;
  cfg.d = static_cast<std::uint32_t>(x.rows());
  cfg.d_out = args.d_out;
  cfg.k = args.k;
  cfg.c = args.c;
  cfg.seed = args.seed;

  const auto t0 = clock_type::now();
  if (args.mode == "sup") {
    if (args.y_path.empty())
      throw std::invalid_argument("train: --mode sup requires --y with output codes");
    BinaryCodeMatrix y = load_codes(args.y_path);
    TrainedModel model = train_supervised(x, y, cfg);
    save_model(args.out, model);
    std::cout << "trained sup: objective=" << model.objective
              << " iterations=" << model.iterations << " seconds=" << seconds_since(t0)
              << " out=" << args.out << "\n";
  } else if (args.mode == "unsup") {
    TrainOptions topt;
    topt.max_iterations = args.max_iterations;
    topt.epsilon = args.epsilon;
    if (args.stop == "code")
      topt.stop = StopRule::kCodeFixedPoint;
    else if (args.stop == "objective")
      topt.stop = StopRule::kObjectiveEpsilon;
    else
      throw std::invalid_argument("train: --stop must be 'code' or 'objective'");
    UnsupervisedResult res = train_unsupervised(x, cfg, topt);
    save_model(args.out, res.model);
    const char* reason = res.stop_reason == StopReason::kCodeFixedPoint ? "code-fixed-point"
                         : res.stop_reason == StopReason::kObjectiveConverged
                             ? "objective-converged"
                             : "max-iterations";
    std::cout << "trained unsup: objective=" << res.model.objective
              << " iterations=" << res.model.iterations << " stop=" << reason
              << " seconds=" << seconds_since(t0) << " out=" << args.out << "\n";
    std::cout << "trace:";
    for (double v : res.objective_trace) std::cout << ' ' << v;
    std::cout << "\n";
  } else {
    throw std::invalid_argument("train: --mode must be 'sup' or 'unsup'");
  }
  return 0;
}

// --------------------------------------------------------------- hash ----

struct HashArgs {
  std::string model_path;
  std::string x_path;
  std::uint32_t k = 0;  // 0: use the model's hash length
  bool normalize = false;
  int workers = 0;
  std::string out;
};

int run_hash(const HashArgs& args) {
  set_workers(args.workers);
  TrainedModel model = load_model(args.model_path);
  const std::uint32_t k = args.k == 0 ? model.config.k : args.k;
  const std::uint32_t d = model.config.d;
  if (k < 1 || k > model.config.d_out)
    throw std::invalid_argument("hash: k must be in [1, d_out]");
  const auto t0 = clock_type::now();

  // Inputs are consumed in fixed-size batches so memory stays bounded by the
  // model plus one batch, whatever the corpus size.
  const bool is_csv = args.x_path.size() >= 4 &&
                      args.x_path.compare(args.x_path.size() - 4, 4, ".csv") == 0;
  std::size_t total = 0;
  if (is_csv) {
    DenseMatrix x = load_csv(args.x_path);
    if (x.cols() > 0 && x.rows() != d)
      throw std::invalid_argument("hash: input dimension " + std::to_string(x.rows()) +
                                  " does not match model dimension " + std::to_string(d));
    if (args.normalize) center_columns(x);
    BinaryCodeMatrix codes = x.cols() == 0
                                 ? BinaryCodeMatrix(model.config.d_out, 0, k,
                                                    BitAxis::kPerColumn, {})
                                 : hash_columns(model.w, x, k);
    save_codes(args.out, codes);
    total = codes.cols();
  } else {
    const std::size_t n = fvecs_record_count(args.x_path);
    CodesWriter writer(args.out, model.config.d_out, n, k);
    constexpr std::size_t kBatch = 1024;
    DenseMatrix batch(d, kBatch);
    std::size_t filled = 0;
    auto flush = [&] {
      if (filled == 0) return;
      DenseMatrix view(d, filled);
      std::copy(batch.values().begin(), batch.values().begin() + d * filled,
                view.values().begin());
      if (args.normalize) center_columns(view);
      const BinaryCodeMatrix codes = hash_columns(model.w, view, k);
      for (std::size_t m = 0; m < filled; ++m) writer.append(codes.slot_indices(m));
      total += filled;
      filled = 0;
    };
    stream_fvecs(args.x_path, [&](std::span<const float> record) {
      if (record.size() != d)
        throw std::invalid_argument("hash: input dimension " + std::to_string(record.size()) +
                                    " does not match model dimension " + std::to_string(d));
      std::copy(record.begin(), record.end(), batch.col(filled).begin());
      if (++filled == kBatch) flush();
    });
    flush();
    writer.finish();
  }
  std::cout << "hashed n=" << total << " k=" << k << " seconds=" << seconds_since(t0)
            << " out=" << args.out << "\n";
  return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string config_path;
  // artfc source
  std::uint32_t artfc_d = 0;
  std::uint32_t artfc_d_out = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  // file source
  std::string train_x, train_y, test_x;
  std::uint32_t d_out = 0;

  std::string algos = "sup,unsup,lsh,fjl,fly";
  std::vector<std::uint32_t> sweep_k;
  std::uint32_t r = 100;
  std::uint32_t repeats = 10;
  std::uint32_t c = 0;
  std::uint32_t max_iterations = 100;
  std::uint64_t seed = 0;
  bool normalize = false;
  bool no_timing = false;
  int workers = 0;
  std::string out;
};

std::vector<Algorithm> parse_algorithms(const std::string& csv) {
  std::vector<Algorithm> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    Algorithm a;
    if (!parse_algorithm(token, a))
      throw std::invalid_argument("unknown algorithm '" + token +
                                  "' (expected sup, unsup, lsh, fjl, fly, or rand)");
    out.push_back(a);
  }
  if (out.empty()) throw std::invalid_argument("no algorithms selected");
  return out;
}

// Schema validation for the JSON run configuration; errors carry the field
// path of the offending entry.
std::uint64_t config_uint(const nlohmann::json& j, const std::string& path, std::uint64_t lo,
                          std::uint64_t hi) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw std::invalid_argument("config " + path + ": expected a non-negative integer");
  const std::uint64_t v = j.get<std::uint64_t>();
  if (v < lo || v > hi)
    throw std::invalid_argument("config " + path + ": value " + std::to_string(v) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "]");
  return v;
}

void load_bench_config(const std::string& path, BenchArgs& args) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open config file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config $: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config $: expected an object");

  static const char* known[] = {"dataset",    "algorithms", "k",        "r",
                                "repeats",    "seed",       "c",        "d_out",
                                "workers",    "normalize",  "max_iterations",
                                "include_timing", "out_csv"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) throw std::invalid_argument("config $." + key + ": unknown field");
  }

  if (!j.contains("dataset") || !j["dataset"].is_object())
    throw std::invalid_argument("config $.dataset: required object");
  const auto& ds = j["dataset"];
  if (ds.contains("artfc")) {
    const auto& a = ds["artfc"];
    if (!a.is_object()) throw std::invalid_argument("config $.dataset.artfc: expected an object");
    for (const char* field : {"d", "d_out", "n_train", "n_test"})
      if (!a.contains(field))
        throw std::invalid_argument(std::string("config $.dataset.artfc.") + field +
                                    ": required");
    args.artfc_d = static_cast<std::uint32_t>(config_uint(a["d"], "$.dataset.artfc.d", 1, 1u << 20));
    args.artfc_d_out =
        static_cast<std::uint32_t>(config_uint(a["d_out"], "$.dataset.artfc.d_out", 2, 1u << 20));
    args.n_train = config_uint(a["n_train"], "$.dataset.artfc.n_train", 1, 1ull << 32);
    args.n_test = config_uint(a["n_test"], "$.dataset.artfc.n_test", 2, 1ull << 32);
  } else if (ds.contains("files")) {
    const auto& f = ds["files"];
    if (!f.is_object()) throw std::invalid_argument("config $.dataset.files: expected an object");
    for (const char* field : {"train_x", "test_x"})
      if (!f.contains(field) || !f[field].is_string())
        throw std::invalid_argument(std::string("config $.dataset.files.") + field +
                                    ": required string");
    args.train_x = f["train_x"].get<std::string>();
    args.test_x = f["test_x"].get<std::string>();
    if (f.contains("train_y")) {
      if (!f["train_y"].is_string())
        throw std::invalid_argument("config $.dataset.files.train_y: expected a string");
      args.train_y = f["train_y"].get<std::string>();
    }
  } else {
    throw std::invalid_argument("config $.dataset: must contain 'artfc' or 'files'");
  }

  if (!j.contains("k") || !j["k"].is_array() || j["k"].empty())
    throw std::invalid_argument("config $.k: required non-empty array of hash lengths");
  args.sweep_k.clear();
  for (std::size_t i = 0; i < j["k"].size(); ++i)
    args.sweep_k.push_back(static_cast<std::uint32_t>(
        config_uint(j["k"][i], "$.k[" + std::to_string(i) + "]", 1, 1u << 20)));

  if (j.contains("algorithms")) {
    if (!j["algorithms"].is_array())
      throw std::invalid_argument("config $.algorithms: expected an array");
    std::string csv;
    for (std::size_t i = 0; i < j["algorithms"].size(); ++i) {
      if (!j["algorithms"][i].is_string())
        throw std::invalid_argument("config $.algorithms[" + std::to_string(i) +
                                    "]: expected a string");
      if (i) csv += ',';
      csv += j["algorithms"][i].get<std::string>();
    }
    args.algos = csv;
  }
  if (j.contains("r")) args.r = static_cast<std::uint32_t>(config_uint(j["r"], "$.r", 1, 1u << 20));
  if (j.contains("repeats"))
    args.repeats = static_cast<std::uint32_t>(config_uint(j["repeats"], "$.repeats", 1, 50));
  if (j.contains("seed")) args.seed = config_uint(j["seed"], "$.seed", 0, ~0ull);
  if (j.contains("c")) args.c = static_cast<std::uint32_t>(config_uint(j["c"], "$.c", 0, 1u << 20));
  if (j.contains("d_out"))
    args.d_out = static_cast<std::uint32_t>(config_uint(j["d_out"], "$.d_out", 0, 1u << 20));
  if (j.contains("workers"))
    args.workers = static_cast<int>(config_uint(j["workers"], "$.workers", 0, 4096));
  if (j.contains("max_iterations"))
    args.max_iterations = static_cast<std::uint32_t>(
        config_uint(j["max_iterations"], "$.max_iterations", 1, 1u << 20));
  if (j.contains("normalize")) {
    if (!j["normalize"].is_boolean())
      throw std::invalid_argument("config $.normalize: expected a boolean");
    args.normalize = j["normalize"].get<bool>();
  }
  if (j.contains("include_timing")) {
    if (!j["include_timing"].is_boolean())
      throw std::invalid_argument("config $.include_timing: expected a boolean");
    args.no_timing = !j["include_timing"].get<bool>();
  }
  if (j.contains("out_csv")) {
    if (!j["out_csv"].is_string())
      throw std::invalid_argument("config $.out_csv: expected a string");
    args.out = j["out_csv"].get<std::string>();
  }
}

int run_bench(BenchArgs args) {
  if (!args.config_path.empty()) load_bench_config(args.config_path, args);
  set_workers(args.workers);
  if (args.sweep_k.empty())
    throw std::invalid_argument("bench: --sweep-k (or config $.k) is required");
  const std::vector<Algorithm> algorithms = parse_algorithms(args.algos);

  const bool artfc_mode = args.artfc_d > 0;
  if (artfc_mode && (args.n_train == 0 || args.n_test == 0))
    throw std::invalid_argument("bench: artfc source requires --n-train and --n-test");
  if (!artfc_mode && (args.train_x.empty() || args.test_x.empty()))
    throw std::invalid_argument(
        "bench: provide either an artfc source (--artfc-d ...) or data files (--train-x, "
        "--test-x)");

  BenchOptions options;
  options.top_r = args.r;
  options.repeats = args.repeats;
  options.seed = args.seed;
  options.c = args.c;
  options.normalize = args.normalize;
  options.max_iterations = args.max_iterations;

  std::vector<EvalReport> reports;
  if (artfc_mode) {
    // The synthetic family is generated per hash length, mirroring the
    // evaluation protocol: codes carry the k being tested.
    options.d_out = args.artfc_d_out;
    for (std::uint32_t k : args.sweep_k) {
      ArtfcSpec spec;
      spec.n_train = args.n_train;
      spec.n_test = args.n_test;
      spec.d = args.artfc_d;
      spec.d_out = args.artfc_d_out;
      spec.k = k;
      spec.seed = derive_seed(args.seed, 1000 + k);
      ArtfcData data = generate_artfc(spec);
      options.k_values = {k};
      auto part = run_benchmark(data.train, data.test, algorithms, options);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  } else {
    Dataset train, test;
    train.x = load_dense(args.train_x);
    train.name = args.train_x;
    if (!args.train_y.empty()) train.y = load_codes(args.train_y);
    test.x = load_dense(args.test_x);
    test.name = args.test_x;
    options.d_out = args.d_out;
    options.k_values = args.sweep_k;
    reports = run_benchmark(train, test, algorithms, options);
  }

  print_table(std::cout, reports);
  if (!args.out.empty()) {
    std::ofstream csv(args.out, std::ios::trunc);
    if (!csv) throw FormatError(args.out, 0, "cannot open CSV output for writing");
    write_reports_csv(csv, reports, !args.no_timing);
  } else {
    write_reports_csv(std::cout, reports, !args.no_timing);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse binary projection models and similarity-search benchmarks"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a synthetic train/test dataset");
  gen->add_option("--d", gen_args.d, "dense input dimension")->capture_default_str();
  gen->add_option("--dout", gen_args.d_out, "code dimension")->capture_default_str();
  gen->add_option("--k", gen_args.k, "ones per code")->capture_default_str();
  gen->add_option("--n-train", gen_args.n_train, "training samples")->capture_default_str();
  gen->add_option("--n-test", gen_args.n_test, "test samples")->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "random seed")->capture_default_str();
  gen->add_option("--workers", gen_args.workers, "worker threads (0 = all cores)");
  gen->add_option("--out", gen_args.out, "output path prefix")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a projection matrix");
  train->add_option("--mode", train_args.mode, "sup | unsup")->required();
  train->add_option("--x", train_args.x_path, "input samples (fvecs or csv)")->required();
  train->add_option("--y", train_args.y_path, "output codes (wtay), sup mode only");
  train->add_option("--dout", train_args.d_out, "code dimension")->required();
  train->add_option("--k", train_args.k, "ones per code")->required();
  train->add_option("--c", train_args.c, "ones per projection row (0 = d/10)");
  train->add_option("--seed", train_args.seed, "random seed");
  train->add_option("--max-iter", train_args.max_iterations, "unsup iteration cap")
      ->capture_default_str();
  train->add_option("--stop", train_args.stop, "unsup stop rule: code | objective")
      ->capture_default_str();
  train->add_option("--epsilon", train_args.epsilon, "objective stop threshold");
  train->add_flag("--normalize", train_args.normalize, "center each sample's mean first");
  train->add_option("--workers", train_args.workers, "worker threads (0 = all cores)");
  train->add_option("--out", train_args.out, "model output path")->required();

  HashArgs hash_args;
  auto* hash = app.add_subcommand("hash", "hash samples with a trained model");
  hash->add_option("--model", hash_args.model_path, "model file")->required();
  hash->add_option("--x", hash_args.x_path, "input samples (fvecs or csv)")->required();
  hash->add_option("--k", hash_args.k, "ones per code (0 = model value)");
  hash->add_flag("--normalize", hash_args.normalize, "center each sample's mean first");
  hash->add_option("--workers", hash_args.workers, "worker threads (0 = all cores)");
  hash->add_option("--out", hash_args.out, "code output path")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "similarity-search accuracy benchmark");
  bench->add_option("--config", bench_args.config_path, "JSON run configuration");
  bench->add_option("--artfc-d", bench_args.artfc_d, "synthetic source: dense dimension");
  bench->add_option("--artfc-dout", bench_args.artfc_d_out, "synthetic source: code dimension");
  bench->add_option("--n-train", bench_args.n_train, "synthetic source: training samples");
  bench->add_option("--n-test", bench_args.n_test, "synthetic source: test samples");
  bench->add_option("--train-x", bench_args.train_x, "file source: training samples");
  bench->add_option("--train-y", bench_args.train_y, "file source: training codes (wtay)");
  bench->add_option("--test-x", bench_args.test_x, "file source: test samples");
  bench->add_option("--dout", bench_args.d_out, "code dimension for file sources");
  bench->add_option("--algos", bench_args.algos, "comma list: sup,unsup,lsh,fjl,fly,rand")
      ->capture_default_str();
  bench->add_option("--sweep-k", bench_args.sweep_k, "hash lengths to evaluate")
      ->delimiter(',');
  bench->add_option("--r", bench_args.r, "neighbors per query")->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats, "runs per configuration (1-50)")
      ->capture_default_str();
  bench->add_option("--c", bench_args.c, "ones per projection row (0 = d/10)");
  bench->add_option("--max-iter", bench_args.max_iterations, "unsup iteration cap")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "random seed");
  bench->add_flag("--normalize", bench_args.normalize, "center each sample's mean first");
  bench->add_flag("--no-timing", bench_args.no_timing, "write zeros for timing columns");
  bench->add_option("--workers", bench_args.workers, "worker threads (0 = all cores)");
  bench->add_option("--out", bench_args.out, "CSV output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_gen(gen_args);
    if (*train) return run_train(train_args);
    if (*hash) return run_hash(hash_args);
    if (*bench) return run_bench(bench_args);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
