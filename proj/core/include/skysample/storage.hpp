#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <vector>

#include "skysample/skyline.hpp"
#include "skysample/tuple.hpp"

namespace skysample {

inline constexpr std::array<char, 4> kRelationMagic = {'S', 'K', 'Y', 'R'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kDefaultTupleBytes = 128;
inline constexpr std::uint32_t kDefaultPageBytes = 8192;
inline constexpr std::size_t kHeaderFieldBytes = 28;

/// Page 0 of a relation file. Little-endian on disk:
///
///   offset  size  field
///        0     4  magic "SKYR"
///        4     4  format_version (1)
///        8     8  n
///       16     4  d
///       20     4  tuple_bytes
///       24     4  page_bytes
///       28     -  zero to end of page
///
/// Data pages follow. Each holds floor(page_bytes / tuple_bytes) records;
/// a record is d float64 values followed by zero padding up to tuple_bytes.
/// Records never straddle pages and the last page is zero-padded.
struct RelationHeader {
  std::uint32_t format_version = kFormatVersion;
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  std::uint32_t tuple_bytes = kDefaultTupleBytes;
  std::uint32_t page_bytes = kDefaultPageBytes;

  std::uint64_t records_per_page() const noexcept { return page_bytes / tuple_bytes; }
  std::uint64_t data_pages() const noexcept {
    return n == 0 ? 0 : (n + records_per_page() - 1) / records_per_page();
  }
  std::uint64_t file_bytes() const noexcept { return (1 + data_pages()) * page_bytes; }
  std::uint64_t page_of(std::uint64_t index) const noexcept { return index / records_per_page(); }

  /// Throws ContractViolation when the geometry is inconsistent.
  void validate() const;

  friend bool operator==(const RelationHeader&, const RelationHeader&) = default;
};

/// Logical I/O accounting in pages. Each reader owns its counter.
struct IoCounter {
  std::uint64_t pages_read = 0;
  std::uint64_t pages_written = 0;
  std::uint64_t seeks = 0;

  IoCounter& operator+=(const IoCounter& o) noexcept {
    pages_read += o.pages_read;
    pages_written += o.pages_written;
    seeks += o.seeks;
    return *this;
  }
};

/// Streaming writer. Records are buffered one page at a time; the header is
/// written last so `n` may be unknown up front. Writers are exclusive.
class RelationWriter {
 public:
  /// `header.n` is checked against the appended count in finish() when
  /// `expect_n` is set; otherwise it is filled in.
  RelationWriter(const std::filesystem::path& path, RelationHeader header,
                 bool expect_n = false);
  ~RelationWriter();
  RelationWriter(const RelationWriter&) = delete;
  RelationWriter& operator=(const RelationWriter&) = delete;

  void append(std::span<const double> values);
  void append(const TupleRecord& record) { append(record.values()); }

  /// Flushes the last page and the header. Returns the final header.
  RelationHeader finish();

  std::uint64_t count() const noexcept { return count_; }
  const IoCounter& io() const noexcept { return io_; }

 private:
  void flush_page();

  std::filesystem::path path_;
  RelationHeader header_;
  bool expect_n_;
  std::ofstream out_;
  std::vector<std::byte> page_;
  std::uint64_t in_page_ = 0;
  std::uint64_t count_ = 0;
  IoCounter io_;
  bool finished_ = false;
};

/// Writes exactly header.n records drawn from `records`.
void write_relation(RecordStream& records, const RelationHeader& header,
                    const std::filesystem::path& path);
void write_relation(std::span<const TupleRecord> records, const RelationHeader& header,
                    const std::filesystem::path& path);

/// Read-only handle on a relation file. pread-based, so one handle may serve
/// any number of concurrent readers, each with its own IoCounter.
///
/// `projected_d` (0 = all) exposes only the first k attributes, which is how
/// a d-attribute file serves lower-dimensional skyline queries.
class Relation {
 public:
  static Relation open(const std::filesystem::path& path, std::uint32_t projected_d = 0);

  Relation(Relation&&) noexcept;
  Relation& operator=(Relation&&) noexcept;
  Relation(const Relation&) = delete;
  Relation& operator=(const Relation&) = delete;
  ~Relation();

  const RelationHeader& header() const noexcept { return header_; }
  std::uint64_t size() const noexcept { return header_.n; }
  std::uint32_t dimension() const noexcept { return projected_d_; }
  const std::filesystem::path& path() const noexcept { return path_; }

  /// Reads data page `page` (0-based, excluding the header page) into `buffer`.
  void read_page(std::uint64_t page, std::vector<std::byte>& buffer, IoCounter& io) const;

  /// Decodes slot `slot` of a page buffer. Throws DataIntegrityError on a
  /// non-finite value.
  TupleRecord decode(std::span<const std::byte> page, std::uint64_t slot,
                     std::uint64_t index) const;
  void decode_into(std::span<const std::byte> page, std::uint64_t slot,
                   std::span<double> out) const;

 private:
  Relation(std::filesystem::path path, int fd, RelationHeader header, std::uint32_t projected_d);

  std::filesystem::path path_;
  int fd_ = -1;
  RelationHeader header_;
  std::uint32_t projected_d_ = 0;
};

/// Sequential scan in index order. Consuming the whole relation charges
/// exactly header().data_pages() page reads.
class RelationScan final : public RecordStream {
 public:
  RelationScan(const Relation& rel, IoCounter& io);
  std::optional<TupleRecord> next() override;

 private:
  const Relation* rel_;
  IoCounter* io_;
  std::vector<std::byte> page_;
  std::uint64_t next_index_ = 0;
  std::uint64_t loaded_page_ = UINT64_MAX;
};

/// Full scan into memory.
Records read_all(const Relation& rel, IoCounter& io);

/// Full scan into a row-major n × dimension() array.
std::vector<double> read_all_flat(const Relation& rel, IoCounter& io);

}  // namespace skysample
