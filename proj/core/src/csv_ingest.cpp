#include "skysample/csv_ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "skysample/error.hpp"

namespace skysample {

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

RelationHeader ingest_csv(const std::filesystem::path& csv, const CsvIngestOptions& options,
                          const std::filesystem::path& out) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open " + csv.string());

  std::string line;
  std::uint64_t line_no = 0;
  std::size_t width = 0;
  std::vector<std::size_t> columns = options.columns;
  std::unique_ptr<RelationWriter> writer;
  std::vector<double> row;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (width == 0) {
      width = cells.size();
      if (columns.empty()) {
        for (std::size_t c = 0; c < width; ++c) columns.push_back(c);
      }
      for (std::size_t c : columns) {
        if (c >= width) {
          throw DataIntegrityError(csv.string() + ": column " + std::to_string(c) +
                                   " does not exist (row has " + std::to_string(width) + ")");
        }
      }
      if (!options.negate.empty() && options.negate.size() != columns.size()) {
        throw ContractViolation("negate flags must match the selected column count");
      }
      RelationHeader h;
      h.d = static_cast<std::uint32_t>(columns.size());
      h.tuple_bytes = options.tuple_bytes;
      h.page_bytes = options.page_bytes;
      writer = std::make_unique<RelationWriter>(out, h);
      row.resize(columns.size());
      if (options.has_header) continue;
    } else if (cells.size() != width) {
      throw DataIntegrityError(csv.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " columns, found " +
                               std::to_string(cells.size()));
    }
    for (std::size_t k = 0; k < columns.size(); ++k) {
      const std::string_view cell = trim(cells[columns[k]]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v)) {
        throw DataIntegrityError(csv.string() + ":" + std::to_string(line_no) + ": cannot parse '" +
                                 std::string(cell) + "' in column " + std::to_string(columns[k]));
      }
      row[k] = !options.negate.empty() && options.negate[k] ? -v : v;
    }
    writer->append(row);
  }
  if (!writer) throw DataIntegrityError(csv.string() + ": no rows");
  return writer->finish();
}

}  // namespace skysample
