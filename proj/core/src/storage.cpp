#include "skysample/storage.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <string>

#include "skysample/error.hpp"

namespace skysample {

namespace {

template <typename T>
T to_little(T v) noexcept {
  if constexpr (std::endian::native == std::endian::big) {
    if constexpr (sizeof(T) == 8) {
      return std::bit_cast<T>(__builtin_bswap64(std::bit_cast<std::uint64_t>(v)));
    } else {
      return std::bit_cast<T>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    }
  }
  return v;
}

template <typename T>
void store(std::byte* dst, T v) noexcept {
  v = to_little(v);
  std::memcpy(dst, &v, sizeof v);
}

template <typename T>
T load(const std::byte* src) noexcept {
  T v;
  std::memcpy(&v, src, sizeof v);
  return to_little(v);
}

std::vector<std::byte> encode_header(const RelationHeader& h) {
  std::vector<std::byte> page(h.page_bytes, std::byte{0});
  std::memcpy(page.data(), kRelationMagic.data(), kRelationMagic.size());
  store<std::uint32_t>(page.data() + 4, h.format_version);
  store<std::uint64_t>(page.data() + 8, h.n);
  store<std::uint32_t>(page.data() + 16, h.d);
  store<std::uint32_t>(page.data() + 20, h.tuple_bytes);
  store<std::uint32_t>(page.data() + 24, h.page_bytes);
  return page;
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

void RelationHeader::validate() const {
  if (format_version != kFormatVersion) {
    throw ContractViolation("unsupported format version " + std::to_string(format_version));
  }
  if (d == 0) throw ContractViolation("relation needs at least one attribute");
  if (tuple_bytes < 8ULL * d) {
    throw ContractViolation("tuple_bytes " + std::to_string(tuple_bytes) + " < 8·d = " +
                            std::to_string(8ULL * d));
  }
  if (page_bytes < tuple_bytes || page_bytes < kHeaderFieldBytes) {
    throw ContractViolation("page_bytes " + std::to_string(page_bytes) +
                            " cannot hold a record and the header");
  }
}

// ---------------------------------------------------------------------------

RelationWriter::RelationWriter(const std::filesystem::path& path, RelationHeader header,
                               bool expect_n)
    : path_(path), header_(header), expect_n_(expect_n) {
  header_.validate();
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot create " + path_.string());
  // Placeholder; the real header goes in once the count is known.
  const std::vector<std::byte> blank(header_.page_bytes, std::byte{0});
  out_.write(reinterpret_cast<const char*>(blank.data()), static_cast<std::streamsize>(blank.size()));
  if (!out_) throw IoError("write failed: " + path_.string());
  page_.assign(header_.page_bytes, std::byte{0});
}

RelationWriter::~RelationWriter() = default;

void RelationWriter::append(std::span<const double> values) {
  if (finished_) throw ContractViolation("append after finish");
  if (values.size() != header_.d) {
    throw ContractViolation("record has " + std::to_string(values.size()) +
                            " values, relation d = " + std::to_string(header_.d));
  }
  if (expect_n_ && count_ == header_.n) {
    throw ContractViolation("stream yields more than n = " + std::to_string(header_.n) +
                            " records");
  }
  std::byte* slot = page_.data() + in_page_ * header_.tuple_bytes;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ContractViolation("non-finite value in record " + std::to_string(count_));
    }
    store<double>(slot + 8 * i, values[i]);
  }
  ++count_;
  if (++in_page_ == header_.records_per_page()) flush_page();
}

void RelationWriter::flush_page() {
  out_.write(reinterpret_cast<const char*>(page_.data()), static_cast<std::streamsize>(page_.size()));
  if (!out_) throw IoError("write failed (disk full?): " + path_.string());
  ++io_.pages_written;
  std::fill(page_.begin(), page_.end(), std::byte{0});
  in_page_ = 0;
}

RelationHeader RelationWriter::finish() {
  if (finished_) return header_;
  if (expect_n_ && count_ != header_.n) {
    throw ContractViolation("header says n = " + std::to_string(header_.n) + " but stream had " +
                            std::to_string(count_) + " records");
  }
  header_.n = count_;
  if (in_page_ > 0) flush_page();
  const auto page = encode_header(header_);
  out_.seekp(0);
  out_.write(reinterpret_cast<const char*>(page.data()), static_cast<std::streamsize>(page.size()));
  out_.close();
  if (!out_) throw IoError("write failed: " + path_.string());
  ++io_.pages_written;
  finished_ = true;
  return header_;
}

void write_relation(RecordStream& records, const RelationHeader& header,
                    const std::filesystem::path& path) {
  RelationWriter writer(path, header, /*expect_n=*/true);
  while (auto r = records.next()) writer.append(*r);
  writer.finish();
}

void write_relation(std::span<const TupleRecord> records, const RelationHeader& header,
                    const std::filesystem::path& path) {
  SpanStream stream(records);
  write_relation(stream, header, path);
}

// ---------------------------------------------------------------------------

Relation::Relation(std::filesystem::path path, int fd, RelationHeader header,
                   std::uint32_t projected_d)
    : path_(std::move(path)), fd_(fd), header_(header), projected_d_(projected_d) {}

Relation::Relation(Relation&& o) noexcept
    : path_(std::move(o.path_)), fd_(o.fd_), header_(o.header_), projected_d_(o.projected_d_) {
  o.fd_ = -1;
}

Relation& Relation::operator=(Relation&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(o.path_);
    fd_ = o.fd_;
    header_ = o.header_;
    projected_d_ = o.projected_d_;
    o.fd_ = -1;
  }
  return *this;
}

Relation::~Relation() {
  if (fd_ >= 0) ::close(fd_);
}

Relation Relation::open(const std::filesystem::path& path, std::uint32_t projected_d) {
  const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + errno_text());
  // Adopt immediately so every throw below closes the descriptor.
  Relation rel(path, fd, RelationHeader{}, 0);

  struct stat st {};
  if (::fstat(fd, &st) != 0) throw IoError("cannot stat " + path.string() + ": " + errno_text());
  const auto file_size = static_cast<std::uint64_t>(st.st_size);

  std::byte raw[kHeaderFieldBytes];
  if (file_size < kHeaderFieldBytes ||
      ::pread(fd, raw, sizeof raw, 0) != static_cast<ssize_t>(sizeof raw)) {
    throw DataIntegrityError(path.string() + ": truncated header");
  }
  if (std::memcmp(raw, kRelationMagic.data(), kRelationMagic.size()) != 0) {
    throw DataIntegrityError(path.string() + ": bad magic, not a relation file");
  }
  RelationHeader h;
  h.format_version = load<std::uint32_t>(raw + 4);
  h.n = load<std::uint64_t>(raw + 8);
  h.d = load<std::uint32_t>(raw + 16);
  h.tuple_bytes = load<std::uint32_t>(raw + 20);
  h.page_bytes = load<std::uint32_t>(raw + 24);
  try {
    h.validate();
  } catch (const ContractViolation& e) {
    throw DataIntegrityError(path.string() + ": " + e.what());
  }
  if (file_size != h.file_bytes()) {
    throw DataIntegrityError(path.string() + ": file is " + std::to_string(file_size) +
                             " bytes, header implies " + std::to_string(h.file_bytes()) +
                             " (truncated?)");
  }
  if (projected_d > h.d) {
    throw ContractViolation("cannot project " + std::to_string(projected_d) +
                            " attributes from a d = " + std::to_string(h.d) + " relation");
  }
  rel.header_ = h;
  rel.projected_d_ = projected_d == 0 ? h.d : projected_d;
  return rel;
}

void Relation::read_page(std::uint64_t page, std::vector<std::byte>& buffer, IoCounter& io) const {
  if (page >= header_.data_pages()) {
    throw ContractViolation("page " + std::to_string(page) + " out of range");
  }
  buffer.resize(header_.page_bytes);
  const auto offset = static_cast<off_t>((page + 1) * header_.page_bytes);
  std::size_t done = 0;
  while (done < buffer.size()) {
    const ssize_t got = ::pread(fd_, buffer.data() + done, buffer.size() - done,
                                offset + static_cast<off_t>(done));
    if (got < 0) {
      if (errno == EINTR) continue;
      throw IoError(path_.string() + ": read failed: " + errno_text());
    }
    if (got == 0) throw DataIntegrityError(path_.string() + ": truncated data page");
    done += static_cast<std::size_t>(got);
  }
  ++io.pages_read;
}

void Relation::decode_into(std::span<const std::byte> page, std::uint64_t slot,
                           std::span<double> out) const {
  const std::byte* src = page.data() + slot * header_.tuple_bytes;
  for (std::uint32_t i = 0; i < projected_d_; ++i) {
    out[i] = load<double>(src + 8 * i);
    if (!std::isfinite(out[i])) {
      throw DataIntegrityError(path_.string() + ": non-finite value on page slot " +
                               std::to_string(slot));
    }
  }
}

TupleRecord Relation::decode(std::span<const std::byte> page, std::uint64_t slot,
                             std::uint64_t index) const {
  std::vector<double> values(projected_d_);
  decode_into(page, slot, values);
  return TupleRecord(index, std::move(values));
}

// ---------------------------------------------------------------------------

RelationScan::RelationScan(const Relation& rel, IoCounter& io) : rel_(&rel), io_(&io) {}

std::optional<TupleRecord> RelationScan::next() {
  const auto& h = rel_->header();
  if (next_index_ >= h.n) return std::nullopt;
  const std::uint64_t page = h.page_of(next_index_);
  if (page != loaded_page_) {
    if (loaded_page_ == UINT64_MAX) ++io_->seeks;
    rel_->read_page(page, page_, *io_);
    loaded_page_ = page;
  }
  const std::uint64_t slot = next_index_ - page * h.records_per_page();
  return rel_->decode(page_, slot, next_index_++);
}

Records read_all(const Relation& rel, IoCounter& io) {
  Records out;
  out.reserve(rel.size());
  RelationScan scan(rel, io);
  while (auto r = scan.next()) out.push_back(std::move(*r));
  return out;
}

std::vector<double> read_all_flat(const Relation& rel, IoCounter& io) {
  const auto& h = rel.header();
  const std::size_t d = rel.dimension();
  std::vector<double> flat(h.n * d);
  std::vector<std::byte> page;
  if (h.n > 0) ++io.seeks;
  for (std::uint64_t p = 0; p < h.data_pages(); ++p) {
    rel.read_page(p, page, io);
    const std::uint64_t first = p * h.records_per_page();
    const std::uint64_t last = std::min<std::uint64_t>(h.n, first + h.records_per_page());
    for (std::uint64_t i = first; i < last; ++i) {
      rel.decode_into(page, i - first, std::span<double>(flat.data() + i * d, d));
    }
  }
  return flat;
}

}  // namespace skysample
