#include "skysample/cli/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "skysample/error.hpp"

namespace skysample::cli {
namespace {

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

// Splits one RFC-4180 record; quoted fields may span lines. Returns false at
// end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw DataIntegrityError("report CSV: unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

template <typename T>
T parse_number(const std::string& s, std::string_view column) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataIntegrityError("report CSV: bad " + std::string(column) + " value '" + s + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const BenchReport& report) {
  for (std::size_t i = 0; i < kBenchColumns.size(); ++i) {
    out << (i ? "," : "") << kBenchColumns[i];
  }
  out << "\r\n";
  for (const auto& r : report.rows) {
    write_field(out, r.relation);
    out << ',';
    write_field(out, r.distribution);
    out << ',' << r.n << ',' << r.d << ',' << r.m << ',' << r.trials << ',' << r.seed << ',';
    write_field(out, r.engine);
    out << ',' << format_double(r.mean_error) << ','
        << (r.stddev_error ? format_double(*r.stddev_error) : "") << ','
        << format_double(r.predicted_error) << ',' << format_double(r.estimated_error) << ','
        << format_double(r.mean_pages_read) << ',' << format_double(r.mean_wall_nanos) << "\r\n";
  }
}

BenchReport read_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!read_record(in, f)) throw DataIntegrityError("report CSV: empty document");
  if (f.size() != kBenchColumns.size() ||
      !std::equal(f.begin(), f.end(), kBenchColumns.begin())) {
    throw DataIntegrityError("report CSV: unexpected header");
  }
  BenchReport report;
  while (read_record(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != kBenchColumns.size()) {
      throw DataIntegrityError("report CSV: row " + std::to_string(report.rows.size() + 1) +
                               " has " + std::to_string(f.size()) + " fields");
    }
    BenchRow r;
    r.relation = f[0];
    r.distribution = f[1];
    r.n = parse_number<std::uint64_t>(f[2], kBenchColumns[2]);
    r.d = parse_number<std::uint32_t>(f[3], kBenchColumns[3]);
    r.m = parse_number<std::uint64_t>(f[4], kBenchColumns[4]);
    r.trials = parse_number<std::uint32_t>(f[5], kBenchColumns[5]);
    r.seed = parse_number<std::uint64_t>(f[6], kBenchColumns[6]);
    r.engine = f[7];
    r.mean_error = parse_number<double>(f[8], kBenchColumns[8]);
    if (!f[9].empty()) r.stddev_error = parse_number<double>(f[9], kBenchColumns[9]);
    r.predicted_error = parse_number<double>(f[10], kBenchColumns[10]);
    r.estimated_error = parse_number<double>(f[11], kBenchColumns[11]);
    r.mean_pages_read = parse_number<double>(f[12], kBenchColumns[12]);
    r.mean_wall_nanos = parse_number<double>(f[13], kBenchColumns[13]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

nlohmann::ordered_json to_json(const BenchReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["relation"] = r.relation;
    j["distribution"] = r.distribution;
    j["n"] = r.n;
    j["d"] = r.d;
    j["m"] = r.m;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["engine"] = r.engine;
    j["mean_error"] = r.mean_error;
    j["stddev_error"] = r.stddev_error ? nlohmann::ordered_json(*r.stddev_error) : nullptr;
    j["predicted_error"] = r.predicted_error;
    j["estimated_error"] = r.estimated_error;
    j["mean_pages_read"] = r.mean_pages_read;
    j["mean_wall_nanos"] = r.mean_wall_nanos;
    rows.push_back(std::move(j));
  }
  return rows;
}

BenchReport from_json(const nlohmann::json& j) {
  BenchReport report;
  try {
    for (const auto& o : j) {
      BenchRow r;
      r.relation = o.at("relation").get<std::string>();
      r.distribution = o.at("distribution").get<std::string>();
      r.n = o.at("n").get<std::uint64_t>();
      r.d = o.at("d").get<std::uint32_t>();
      r.m = o.at("m").get<std::uint64_t>();
      r.trials = o.at("trials").get<std::uint32_t>();
      r.seed = o.at("seed").get<std::uint64_t>();
      r.engine = o.at("engine").get<std::string>();
      r.mean_error = o.at("mean_error").get<double>();
      if (!o.at("stddev_error").is_null()) r.stddev_error = o["stddev_error"].get<double>();
      r.predicted_error = o.at("predicted_error").get<double>();
      r.estimated_error = o.at("estimated_error").get<double>();
      r.mean_pages_read = o.at("mean_pages_read").get<double>();
      r.mean_wall_nanos = o.at("mean_wall_nanos").get<double>();
      report.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataIntegrityError(std::string("report JSON: ") + e.what());
  }
  return report;
}

}  // namespace skysample::cli
