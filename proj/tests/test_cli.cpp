#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "skysample/cli/cli.hpp"
#include "skysample/cli/report.hpp"
#include "skysample/error.hpp"
#include "skysample/storage.hpp"
#include "test_support.hpp"

namespace skysample::cli {
namespace {

using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json last_json_line(const std::string& text) {
  std::istringstream in(text);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  return nlohmann::json::parse(last);
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string make_relation(const TempDir& dir, const std::string& name, std::uint64_t n,
                          std::uint32_t d, const std::string& dist = "independent",
                          std::uint64_t seed = 1) {
  const auto path = (dir / name).string();
  const auto r = invoke({"generate", "--n", std::to_string(n), "--d", std::to_string(d), "--dist",
                         dist, "--seed", std::to_string(seed), "--out", path});
  EXPECT_EQ(r.code, 0) << r.err;
  return path;
}

BenchReport report_of(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in);
}

TEST(CliGenerate, WritesHeaderAndIsDeterministic) {
  TempDir dir;
  const auto a = make_relation(dir, "a.skyr", 20'000, 8, "independent", 1);
  const auto rel = Relation::open(a);
  EXPECT_EQ(rel.header().n, 20'000u);
  EXPECT_EQ(rel.header().d, 8u);
  const auto b = make_relation(dir, "b.skyr", 20'000, 8, "independent", 1);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(CliGenerate, InvalidDistributionIsUsageError) {
  TempDir dir;
  const auto r = invoke({"generate", "--n", "10", "--dist", "zipf", "--out", (dir / "x").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliGenerate, PageBytesFromEnvironment) {
  TempDir dir;
  ::setenv("SKYSAMPLE_PAGE_BYTES", "4096", 1);
  const auto path = make_relation(dir, "p.skyr", 1000, 2);
  EXPECT_EQ(Relation::open(path).header().page_bytes, 4096u);
  ::setenv("SKYSAMPLE_PAGE_BYTES", "lots", 1);
  const auto bad = invoke({"generate", "--n", "10", "--out", (dir / "q").string()});
  ::unsetenv("SKYSAMPLE_PAGE_BYTES");
  EXPECT_EQ(bad.code, kExitUsage);
}

TEST(CliExact, EnginesAgreeWithBruteForce) {
  TempDir dir;
  const auto path = make_relation(dir, "e.skyr", 3000, 3, "anticorrelated");
  const auto brute = invoke({"exact", path, "--engine", "brute"});
  ASSERT_EQ(brute.code, 0) << brute.err;
  const auto expected = last_json_line(brute.out).at("skyline_size").get<std::uint64_t>();
  EXPECT_GT(expected, 1u);
  for (const std::string engine : {"dc", "sfs", "bnl"}) {
    const auto r = invoke({"exact", path, "--engine", engine, "--window", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(last_json_line(r.out).at("skyline_size").get<std::uint64_t>(), expected) << engine;
  }
  const auto scan = last_json_line(invoke({"exact", path, "--engine", "sfs"}).out);
  EXPECT_EQ(scan.at("pages_read").get<std::uint64_t>(),
            Relation::open(path).header().data_pages());
}

TEST(CliExact, DumpHasOneRowPerMember) {
  TempDir dir;
  const auto path = make_relation(dir, "d.skyr", 2000, 2, "anticorrelated");
  const auto dump = (dir / "members.csv").string();
  const auto r = invoke({"exact", path, "--engine", "dc", "--dump", dump});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto size = last_json_line(r.out).at("skyline_size").get<std::size_t>();
  std::ifstream in(dump);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "index,a1,a2");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, size);
}

TEST(CliExact, EmptyRelation) {
  TempDir dir;
  const auto path = (dir / "empty.skyr").string();
  RelationHeader h;
  h.n = 0;
  h.d = 2;
  write_relation(Records{}, h, path);
  for (const std::string engine : {"brute", "dc", "sfs", "bnl"}) {
    const auto r = invoke({"exact", path, "--engine", engine});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(last_json_line(r.out).at("skyline_size").get<std::uint64_t>(), 0u);
  }
}

TEST(CliExact, ErrorExitCodes) {
  TempDir dir;
  EXPECT_EQ(invoke({"exact", (dir / "missing.skyr").string()}).code, kExitIo);

  const auto garbage = (dir / "garbage.skyr").string();
  std::ofstream(garbage) << "this is not a relation file, not even close to one";
  EXPECT_EQ(invoke({"exact", garbage}).code, kExitDataIntegrity);

  const auto path = make_relation(dir, "p.skyr", 100, 2);
  EXPECT_EQ(invoke({"exact", path, "--d", "3"}).code, kExitUsage);
  EXPECT_EQ(invoke({"exact", path, "--engine", "less"}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(CliBaseline, FullSampleHasZeroError) {
  TempDir dir;
  const auto path = make_relation(dir, "f.skyr", 500, 3);
  const auto r = invoke({"baseline", path, "--m", "500", "--trials", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = report_of(r.out);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].mean_error, 0.0);
  EXPECT_EQ(report.rows[0].stddev_error, 0.0);
  EXPECT_EQ(invoke({"baseline", path, "--m", "501"}).code, kExitUsage);
}

TEST(CliBaseline, ReportColumnsAndDeterminism) {
  TempDir dir;
  const auto path = make_relation(dir, "r.skyr", 20'000, 2);
  const auto r1 = invoke({"baseline", path, "--m", "200", "--trials", "6", "--seed", "9"});
  const auto r2 =
      invoke({"baseline", path, "--m", "200", "--trials", "6", "--seed", "9", "--jobs", "3"});
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(r1.out.substr(0, r1.out.find("\r\n")),
            "relation,distribution,n,d,m,trials,seed,engine,mean_error,stddev_error,"
            "predicted_error,estimated_error,mean_pages_read,mean_wall_nanos");
  auto a = report_of(r1.out).rows.at(0);
  auto b = report_of(r2.out).rows.at(0);
  EXPECT_EQ(a.distribution, "independent");
  EXPECT_GT(a.predicted_error, 0.0);
  EXPECT_GT(a.estimated_error, 0.0);
  a.mean_wall_nanos = b.mean_wall_nanos = 0.0;
  EXPECT_EQ(a, b);

  const auto single = report_of(invoke({"baseline", path, "--m", "200", "--trials", "1"}).out);
  EXPECT_FALSE(single.rows.at(0).stddev_error.has_value());
}

TEST(CliDouble, TerminatesWithFewPagesAndTrace) {
  TempDir dir;
  const auto path = make_relation(dir, "big.skyr", 1'000'000, 2);
  const auto trace = (dir / "trace.jsonl").string();
  const auto r = invoke({"double", path, "--epsilon", "0.1", "--delta", "0.1", "--seed", "4",
                         "--oracle", "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = last_json_line(r.out);
  EXPECT_EQ(j.at("reason").get<std::string>(), "verified");
  EXPECT_LT(j.at("pages_read").get<double>(), 0.5 * j.at("full_scan_pages").get<double>());
  EXPECT_LE(j.at("true_error").get<double>(), 0.1);

  std::ifstream in(trace);
  std::string line;
  std::size_t rounds = 0;
  nlohmann::json last;
  while (std::getline(in, line)) {
    last = nlohmann::json::parse(line);
    ++rounds;
  }
  EXPECT_EQ(rounds, j.at("rounds").get<std::size_t>());
  EXPECT_EQ(last.at("final_m"), j.at("final_m"));

  const auto again = last_json_line(invoke({"double", path, "--seed", "4"}).out);
  EXPECT_EQ(again.at("final_m"), j.at("final_m"));
  EXPECT_EQ(again.at("pages_read"), j.at("pages_read"));
}

TEST(CliDouble, PresetsAndValidation) {
  TempDir dir;
  const auto path = make_relation(dir, "s.skyr", 5000, 2);
  const auto r = invoke({"double", path, "--preset", "double2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(last_json_line(r.out).at("epsilon").get<double>(), 0.01);
  EXPECT_EQ(invoke({"double", path, "--preset", "double2", "--epsilon", "0.1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"double", path, "--epsilon", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({"double", path, "--delta", "1.5"}).code, kExitUsage);
}

TEST(CliErrorTable, GridShapeMonotonicityAndRoundTrip) {
  TempDir dir;
  const auto path = make_relation(dir, "t.skyr", 50'000, 3);
  const auto r = invoke({"error-table", path, "--d", "2,3", "--m", "100,1000", "--trials", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = report_of(r.out);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.rows[0].d, 2u);
  EXPECT_EQ(report.rows[0].m, 100u);
  EXPECT_EQ(report.rows[3].d, 3u);
  EXPECT_EQ(report.rows[3].m, 1000u);
  for (std::size_t i = 0; i < 4; i += 2) {
    EXPECT_GT(report.rows[i].mean_error, report.rows[i + 1].mean_error)
        << "d=" << report.rows[i].d;
  }

  // CSV -> report -> JSON -> report is lossless, and so is re-emitting CSV.
  EXPECT_EQ(from_json(nlohmann::json::parse(to_json(report).dump())), report);
  std::ostringstream csv;
  write_csv(csv, report);
  EXPECT_EQ(csv.str(), r.out);

  const auto as_json =
      invoke({"error-table", path, "--m", "100", "--trials", "2", "--format", "json"});
  ASSERT_EQ(as_json.code, 0) << as_json.err;
  EXPECT_EQ(nlohmann::json::parse(as_json.out).size(), 1u);
}

TEST(ReportCsv, QuotesAndRejectsMalformed) {
  BenchReport report;
  BenchRow row;
  row.relation = "dir with, comma/\"q\".skyr";
  row.trials = 1;
  row.mean_error = 0.1;
  report.rows.push_back(row);
  std::ostringstream out;
  write_csv(out, report);
  EXPECT_EQ(report_of(out.str()), report);

  EXPECT_THROW(report_of("a,b\r\n"), DataIntegrityError);
  EXPECT_THROW(report_of(out.str() + "x,y\r\n"), DataIntegrityError);
}

TEST(CliPredict, MatchesClosedForm) {
  const auto r = invoke({"predict", "--d", "2", "--m", "1000", "--n", "1000000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(last_json_line(r.out).at("predicted_error").get<double>(), 0.0074715, 1e-6);
}

TEST(CliIngest, CsvToRelation) {
  TempDir dir;
  const auto csv = (dir / "in.csv").string();
  std::ofstream(csv) << "price,rating\n10,4\n12,5\n15,3\n";
  const auto out = (dir / "in.skyr").string();
  const auto r = invoke({"ingest", csv, "--out", out, "--header", "--negate", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ex = last_json_line(invoke({"exact", out, "--engine", "brute"}).out);
  EXPECT_EQ(ex.at("skyline_size").get<int>(), 2);

  std::ofstream(csv) << "1,2\n3,x\n";
  EXPECT_EQ(invoke({"ingest", csv, "--out", out}).code, kExitDataIntegrity);
}

TEST(CliBinary, ExitCodePropagates) {
  const std::string bin = SKYSAMPLE_BINARY;
  EXPECT_EQ(std::system((bin + " predict --m 10 --n 100 > /dev/null").c_str()), 0);
  const int status =
      std::system((bin + " generate --n 1 --dist zipf --out /dev/null 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitUsage);
}

}  // namespace
}  // namespace skysample::cli
