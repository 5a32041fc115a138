#include "skysample/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "skysample/approx.hpp"
#include "skysample/cli/experiment.hpp"
#include "skysample/cli/report.hpp"
#include "skysample/csv_ingest.hpp"
#include "skysample/datagen.hpp"
#include "skysample/error.hpp"
#include "skysample/rng.hpp"
#include "skysample/skyline.hpp"
#include "skysample/storage.hpp"

namespace skysample::cli {
namespace {

using Clock = std::chrono::steady_clock;
using ojson = nlohmann::ordered_json;

std::uint64_t nanos_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

/// SKYSAMPLE_PAGE_BYTES, or the built-in default.
std::uint32_t default_page_bytes() {
  const char* env = std::getenv("SKYSAMPLE_PAGE_BYTES");
  if (env == nullptr || *env == '\0') return kDefaultPageBytes;
  std::uint32_t v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
    throw ContractViolation("SKYSAMPLE_PAGE_BYTES must be a positive integer, got '" +
                            std::string(s) + "'");
  }
  return v;
}

Engine engine_arg(const std::string& name) {
  const auto e = parse_engine(name);
  if (!e) throw ContractViolation("unknown engine '" + name + "'");
  return *e;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot create " + path);
  return f;
}

void check_written(std::ostream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

const auto kEngineNames = std::vector<std::string>{"bnl", "sfs", "dc", "brute"};
const auto kFormats = std::vector<std::string>{"csv", "json"};

void emit_report(const BenchReport& report, const std::string& format, const std::string& out_path,
                 std::ostream& out) {
  auto write = [&](std::ostream& s) {
    if (format == "json") {
      s << to_json(report).dump(2) << '\n';
    } else {
      write_csv(s, report);
    }
  };
  if (out_path.empty() || out_path == "-") {
    write(out);
    return;
  }
  auto f = open_output(out_path);
  write(f);
  check_written(f, out_path);
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::uint64_t n = 0;
  std::uint32_t d = 2;
  std::string dist = "independent";
  std::optional<double> pcc;
  std::uint64_t seed = 1;
  std::string out;
  std::uint32_t bins = 0;
  std::uint32_t tuple_bytes = kDefaultTupleBytes;
  std::optional<std::uint32_t> page_bytes;
};

void add_generate(CLI::App& app, GenerateArgs& a) {
  auto* c = app.add_subcommand("generate", "Write a synthetic relation file");
  c->add_option("--n", a.n, "Number of tuples")->required();
  c->add_option("--d", a.d, "Number of attributes")->capture_default_str();
  c->add_option("--dist", a.dist, "independent | correlated | anticorrelated")
      ->capture_default_str()
      ->check(CLI::IsMember({"independent", "correlated", "anticorrelated", "anti-correlated"}));
  c->add_option("--pcc", a.pcc, "Target Pearson correlation of attributes 1 and 2");
  c->add_option("--seed", a.seed)->capture_default_str();
  c->add_option("--out", a.out, "Output relation path")->required();
  c->add_option("--bins", a.bins, "Quantize values into this many levels (0 = off)");
  c->add_option("--tuple-bytes", a.tuple_bytes)->capture_default_str();
  c->add_option("--page-bytes", a.page_bytes, "Default: $SKYSAMPLE_PAGE_BYTES or 8192");
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GenSpec spec;
  spec.n = a.n;
  spec.d = a.d;
  spec.distribution = *parse_distribution(a.dist);
  spec.target_pcc = a.pcc;
  spec.seed = a.seed;
  spec.bins = a.bins;
  spec.tuple_bytes = a.tuple_bytes;
  spec.page_bytes = a.page_bytes.value_or(default_page_bytes());
  const auto h = generate(spec, a.out);
  ojson j;
  j["out"] = a.out;
  j["n"] = h.n;
  j["d"] = h.d;
  j["distribution"] = distribution_name(spec.distribution);
  j["seed"] = spec.seed;
  j["data_pages"] = h.data_pages();
  j["file_bytes"] = h.file_bytes();
  out << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExactArgs {
  std::string relation;
  std::string engine = "sfs";
  std::size_t window = 4096;
  std::uint32_t d = 0;
  std::string dump;
};

void add_exact(CLI::App& app, ExactArgs& a) {
  auto* c = app.add_subcommand("exact", "Exact skyline of a relation");
  c->add_option("--relation,relation", a.relation)->required();
  c->add_option("--engine", a.engine)->capture_default_str()->check(CLI::IsMember(kEngineNames));
  c->add_option("--window", a.window, "BNL window capacity in tuples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--d", a.d, "Use only the first d attributes (0 = all)");
  c->add_option("--dump", a.dump, "Write skyline members as CSV to this path ('-' = stdout)");
}

void dump_members(std::ostream& s, const Records& members, std::uint32_t d) {
  s << "index";
  for (std::uint32_t k = 0; k < d; ++k) s << ",a" << k + 1;
  s << '\n';
  for (const auto& r : members) {
    s << r.index();
    for (double v : r.values()) s << ',' << format_double(v);
    s << '\n';
  }
}

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const auto rel = Relation::open(a.relation, a.d);
  const Engine engine = engine_arg(a.engine);
  IoCounter io;
  const auto start = Clock::now();
  SkylineResult sky;
  if (engine == Engine::kBnl) {
    RelationScan scan(rel, io);
    sky = bnl_skyline(scan, a.window);
  } else if (engine == Engine::kSfs) {
    RelationScan scan(rel, io);
    sky = sfs_skyline(scan);
  } else {
    const auto all = read_all(rel, io);
    sky = compute_skyline(engine, all);
  }
  const auto wall = nanos_since(start);
  std::sort(sky.members.begin(), sky.members.end(),
            [](const TupleRecord& x, const TupleRecord& y) { return x.index() < y.index(); });

  if (!a.dump.empty()) {
    if (a.dump == "-") {
      dump_members(out, sky.members, rel.dimension());
    } else {
      auto f = open_output(a.dump);
      dump_members(f, sky.members, rel.dimension());
      check_written(f, a.dump);
    }
  }
  ojson j;
  j["relation"] = a.relation;
  j["engine"] = engine_name(engine);
  j["n"] = rel.size();
  j["d"] = rel.dimension();
  j["skyline_size"] = sky.members.size();
  j["comparisons"] = sky.comparisons;
  j["pages_read"] = io.pages_read;
  j["wall_nanos"] = wall;
  (a.dump == "-" ? std::cerr : out) << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
  std::string relation;
  std::uint64_t m = 0;
  std::uint32_t trials = 20;
  std::uint64_t seed = 1;
  std::string engine = "dc";
  std::uint32_t d = 0;
  unsigned jobs = 1;
  std::string format = "csv";
  std::string out;
};

void add_baseline(CLI::App& app, BaselineArgs& a) {
  auto* c = app.add_subcommand("baseline", "Skyline of a random sample, error over trials");
  c->add_option("--relation,relation", a.relation)->required();
  c->add_option("--m", a.m, "Sample size")->required()->check(CLI::PositiveNumber);
  c->add_option("--trials", a.trials)->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--seed", a.seed)->capture_default_str();
  c->add_option("--engine", a.engine)->capture_default_str()->check(CLI::IsMember(kEngineNames));
  c->add_option("--d", a.d, "Use only the first d attributes (0 = all)");
  c->add_option("--jobs", a.jobs, "Worker threads for trials")->capture_default_str();
  c->add_option("--format", a.format)->capture_default_str()->check(CLI::IsMember(kFormats));
  c->add_option("--out", a.out, "Report path (default stdout)");
}

int cmd_baseline(const BaselineArgs& a, std::ostream& out) {
  const auto rel = Relation::open(a.relation, a.d);
  const TrueErrorOracle oracle(rel);
  BaselineConfig config{a.m, a.trials, a.seed, engine_arg(a.engine), a.jobs};
  BenchReport report;
  report.rows.push_back(baseline_row(rel, oracle, config, a.relation));
  emit_report(report, a.format, a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DoubleArgs {
  std::string relation;
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t s_initial = 0;
  std::string engine = "dc";
  std::uint64_t seed = 1;
  std::string preset;
  bool oracle = false;
  std::string trace;
  std::uint32_t d = 0;
};

void add_double(CLI::App& app, DoubleArgs& a) {
  auto* c = app.add_subcommand("double", "Sample-doubling approximate skyline with verification");
  c->add_option("--relation,relation", a.relation)->required();
  auto* eps = c->add_option("--epsilon", a.epsilon)->capture_default_str();
  c->add_option("--delta", a.delta)->capture_default_str();
  c->add_option("--s-initial", a.s_initial, "Initial sample size (0 = s_v)");
  c->add_option("--engine", a.engine)->capture_default_str()->check(CLI::IsMember(kEngineNames));
  c->add_option("--seed", a.seed)->capture_default_str();
  c->add_option("--preset", a.preset, "double1 | double2 | double3 (sets epsilon)")
      ->check(CLI::IsMember({"double1", "double2", "double3"}))
      ->excludes(eps);
  c->add_flag("--oracle", a.oracle, "Also compute the true error with a full scan");
  c->add_option("--trace", a.trace, "Write the per-round trace as JSON lines ('-' = stdout)");
  c->add_option("--d", a.d, "Use only the first d attributes (0 = all)");
}

int cmd_double(const DoubleArgs& a, std::ostream& out) {
  const auto rel = Relation::open(a.relation, a.d);
  ApproxParams params;
  params.epsilon = a.epsilon;
  for (const auto& p : kDoublePresets) {
    if (p.name == a.preset) params.epsilon = p.epsilon;
  }
  params.delta = a.delta;
  params.s_initial = a.s_initial;
  params.engine = engine_arg(a.engine);

  IoCounter io;
  const auto start = Clock::now();
  const auto result = double_skyline(rel, params, a.seed, io);
  const auto wall = nanos_since(start);

  if (a.trace == "-") {
    write_trace_jsonl(out, result.trace);
  } else if (!a.trace.empty()) {
    auto f = open_output(a.trace);
    write_trace_jsonl(f, result.trace);
    check_written(f, a.trace);
  }
  ojson j;
  j["relation"] = a.relation;
  j["n"] = rel.size();
  j["d"] = rel.dimension();
  j["epsilon"] = params.epsilon;
  j["delta"] = params.delta;
  j["seed"] = a.seed;
  j["engine"] = engine_name(params.engine);
  j["rounds"] = result.trace.rounds.size();
  j["final_m"] = result.trace.final_m;
  j["skyline_size"] = result.skyline.members.size();
  j["reason"] = termination_name(result.trace.reason);
  j["final_eps_hat"] =
      result.trace.rounds.empty() ? 0.0 : result.trace.rounds.back().eps_hat;
  j["pages_read"] = io.pages_read;
  j["full_scan_pages"] = rel.header().data_pages();
  j["wall_nanos"] = wall;
  if (a.oracle) {
    IoCounter untracked;
    j["true_error"] = streaming_true_error(rel, result.skyline.members, untracked).error;
  }
  out << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ErrorTableArgs {
  std::vector<std::string> relations;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint64_t> ms;
  std::uint32_t trials = 20;
  std::uint64_t seed = 1;
  std::string engine = "dc";
  unsigned jobs = 1;
  std::string format = "csv";
  std::string out;
};

void add_error_table(CLI::App& app, ErrorTableArgs& a) {
  auto* c = app.add_subcommand("error-table", "Baseline error over a grid of d and m");
  c->add_option("--relation,relation", a.relations)->required();
  c->add_option("--d", a.dims, "Attribute counts (prefixes of each relation); default: all")
      ->delimiter(',');
  c->add_option("--m", a.ms, "Sample sizes")->required()->delimiter(',');
  c->add_option("--trials", a.trials)->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--seed", a.seed)->capture_default_str();
  c->add_option("--engine", a.engine)->capture_default_str()->check(CLI::IsMember(kEngineNames));
  c->add_option("--jobs", a.jobs, "Worker threads for trials")->capture_default_str();
  c->add_option("--format", a.format)->capture_default_str()->check(CLI::IsMember(kFormats));
  c->add_option("--out", a.out, "Report path (default stdout)");
}

int cmd_error_table(const ErrorTableArgs& a, std::ostream& out) {
  const Engine engine = engine_arg(a.engine);
  BenchReport report;
  for (const auto& path : a.relations) {
    std::vector<std::uint32_t> dims = a.dims;
    if (dims.empty()) dims.push_back(0);
    for (std::uint32_t d : dims) {
      const auto rel = Relation::open(path, d);
      const TrueErrorOracle oracle(rel);
      for (std::uint64_t m : a.ms) {
        BaselineConfig config{m, a.trials, a.seed, engine, a.jobs};
        report.rows.push_back(baseline_row(rel, oracle, config, path));
      }
    }
  }
  emit_report(report, a.format, a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  std::uint64_t d = 2;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
};

void add_predict(CLI::App& app, PredictArgs& a) {
  auto* c = app.add_subcommand("predict", "Expected baseline error under independence");
  c->add_option("--d", a.d)->capture_default_str();
  c->add_option("--m", a.m)->required();
  c->add_option("--n", a.n)->required();
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const auto p = predict_error(a.d, a.m, a.n);
  ojson j;
  j["d"] = p.d;
  j["m"] = p.m;
  j["n"] = p.n;
  j["predicted_error"] = p.predicted_mean;
  j["bound_sum"] = p.bound_sum;
  out << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string csv;
  std::string out;
  std::vector<std::size_t> columns;
  std::vector<std::size_t> negate;
  bool header = false;
  std::uint32_t tuple_bytes = kDefaultTupleBytes;
  std::optional<std::uint32_t> page_bytes;
};

void add_ingest(CLI::App& app, IngestArgs& a) {
  auto* c = app.add_subcommand("ingest", "Convert a CSV file into a relation file");
  c->add_option("--csv,csv", a.csv)->required();
  c->add_option("--out", a.out)->required();
  c->add_option("--columns", a.columns, "0-based source columns to keep")->delimiter(',');
  c->add_option("--negate", a.negate, "0-based kept columns to negate (larger is better)")
      ->delimiter(',');
  c->add_flag("--header", a.header, "Skip the first line");
  c->add_option("--tuple-bytes", a.tuple_bytes)->capture_default_str();
  c->add_option("--page-bytes", a.page_bytes, "Default: $SKYSAMPLE_PAGE_BYTES or 8192");
}

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  CsvIngestOptions opt;
  opt.columns = a.columns;
  opt.has_header = a.header;
  opt.tuple_bytes = a.tuple_bytes;
  opt.page_bytes = a.page_bytes.value_or(default_page_bytes());
  if (!a.negate.empty()) {
    const std::size_t width =
        std::max(a.columns.size(), *std::max_element(a.negate.begin(), a.negate.end()) + 1);
    opt.negate.assign(width, false);
    for (std::size_t k : a.negate) opt.negate[k] = true;
  }
  const auto h = ingest_csv(a.csv, opt, a.out);
  ojson j;
  j["out"] = a.out;
  j["n"] = h.n;
  j["d"] = h.d;
  j["data_pages"] = h.data_pages();
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Sampling-based approximate skyline toolkit", "skysample");
  app.require_subcommand(1);
  GenerateArgs gen;
  ExactArgs exact;
  BaselineArgs base;
  DoubleArgs dbl;
  ErrorTableArgs table;
  PredictArgs pred;
  IngestArgs ingest;
  add_generate(app, gen);
  add_exact(app, exact);
  add_baseline(app, base);
  add_double(app, dbl);
  add_error_table(app, table);
  add_predict(app, pred);
  add_ingest(app, ingest);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "generate") return cmd_generate(gen, out);
    if (name == "exact") return cmd_exact(exact, out);
    if (name == "baseline") return cmd_baseline(base, out);
    if (name == "double") return cmd_double(dbl, out);
    if (name == "error-table") return cmd_error_table(table, out);
    if (name == "predict") return cmd_predict(pred, out);
    return cmd_ingest(ingest, out);
  } catch (const ContractViolation& e) {
    err << "skysample: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "skysample: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataIntegrityError& e) {
    err << "skysample: data integrity: " << e.what() << '\n';
    return kExitDataIntegrity;
  }
}

}  // namespace skysample::cli
