#include <gtest/gtest.h>

#include <fstream>

#include "skysample/csv_ingest.hpp"
#include "skysample/error.hpp"
#include "test_support.hpp"

namespace skysample {
namespace {

using testing::TempDir;

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

Records load(const std::filesystem::path& p) {
  IoCounter io;
  return read_all(Relation::open(p), io);
}

TEST(IngestCsv, BasicRows) {
  TempDir dir;
  write_text(dir / "a.csv", "1,2\n3.5,4\n-1e3,0\n");
  const auto h = ingest_csv(dir / "a.csv", {}, dir / "a.skyr");
  EXPECT_EQ(h.n, 3u);
  EXPECT_EQ(h.d, 2u);
  const auto t = load(dir / "a.skyr");
  EXPECT_EQ(t[1][0], 3.5);
  EXPECT_EQ(t[2][0], -1000.0);
}

TEST(IngestCsv, HeaderColumnsAndNegation) {
  TempDir dir;
  write_text(dir / "b.csv", "name,price,rating\nx,10,4.5\ny,20,3\n");
  CsvIngestOptions opt;
  opt.has_header = true;
  opt.columns = {1, 2};
  opt.negate = {false, true};
  const auto h = ingest_csv(dir / "b.csv", opt, dir / "b.skyr");
  EXPECT_EQ(h.n, 2u);
  EXPECT_EQ(h.d, 2u);
  const auto t = load(dir / "b.skyr");
  EXPECT_EQ(t[0][0], 10.0);
  EXPECT_EQ(t[0][1], -4.5);
  EXPECT_EQ(t[1][1], -3.0);
}

TEST(IngestCsv, HeaderRowWithoutSkipFailsToParse) {
  TempDir dir;
  write_text(dir / "c.csv", "a,b\n1,2\n");
  EXPECT_THROW(ingest_csv(dir / "c.csv", {}, dir / "c.skyr"), DataIntegrityError);
}

TEST(IngestCsv, ErrorsNameTheLine) {
  TempDir dir;
  write_text(dir / "d.csv", "1,2\n3,oops\n");
  try {
    ingest_csv(dir / "d.csv", {}, dir / "d.skyr");
    FAIL() << "expected DataIntegrityError";
  } catch (const DataIntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  write_text(dir / "e.csv", "1,2\n3,4,5\n");
  EXPECT_THROW(ingest_csv(dir / "e.csv", {}, dir / "e.skyr"), DataIntegrityError);
  write_text(dir / "f.csv", "1,nan\n");
  EXPECT_THROW(ingest_csv(dir / "f.csv", {}, dir / "f.skyr"), DataIntegrityError);
  EXPECT_THROW(ingest_csv(dir / "missing.csv", {}, dir / "g.skyr"), IoError);
}

}  // namespace
}  // namespace skysample
