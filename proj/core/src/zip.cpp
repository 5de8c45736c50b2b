// Minimal single-member zip reader/writer for GDELT's 15-minute export files.
#include <zlib.h>

#include <fstream>
#include <iterator>

#include "xenomon/error.hpp"
#include "xenomon/formats.hpp"

namespace xenomon::formats {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::size_t kEndOfCentralDirSize = 22;
constexpr std::size_t kLocalHeaderSize = 30;
constexpr std::uint16_t kMethodStored = 0;
constexpr std::uint16_t kMethodDeflate = 8;

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t size() const { return bytes_.size(); }

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(b(at) | (b(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return static_cast<std::uint32_t>(b(at)) | (static_cast<std::uint32_t>(b(at + 1)) << 8) |
           (static_cast<std::uint32_t>(b(at + 2)) << 16) | (static_cast<std::uint32_t>(b(at + 3)) << 24);
  }
  std::span<const std::byte> slice(std::size_t at, std::size_t len) const {
    need(at, len);
    return bytes_.subspan(at, len);
  }

 private:
  unsigned b(std::size_t at) const { return std::to_integer<unsigned>(bytes_[at]); }
  void need(std::size_t at, std::size_t len) const {
    if (at > bytes_.size() || len > bytes_.size() - at) throw FormatError("corrupt zip archive: truncated");
  }

  std::span<const std::byte> bytes_;
};

std::string inflate_raw(std::span<const std::byte> data, std::size_t expected_size) {
  // One spare byte lets zlib report Z_STREAM_END for empty members.
  std::string out(expected_size + 1, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw FormatError("zlib inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected_size) {
    throw FormatError("corrupt zip archive: deflate stream invalid");
  }
  out.resize(expected_size);
  return out;
}

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xFF);
  out += static_cast<char>((v >> 8) & 0xFF);
}
void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::string deflate_raw(std::string_view input) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw FormatError("zlib deflateInit2 failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(input.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(input.data()));
  zs.avail_in = static_cast<uInt>(input.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw FormatError("zlib deflate failed");
  return out;
}

}  // namespace

std::string open_export_container(std::span<const std::byte> archive) {
  const Reader r{archive};
  if (r.size() < kEndOfCentralDirSize) throw FormatError("corrupt zip archive: too small");

  // The end-of-central-directory record sits within the last 64 KiB (comment length limit).
  std::size_t eocd = std::string::npos;
  const std::size_t lowest = r.size() > kEndOfCentralDirSize + 0xFFFF ? r.size() - kEndOfCentralDirSize - 0xFFFF : 0;
  for (std::size_t at = r.size() - kEndOfCentralDirSize + 1; at-- > lowest;) {
    if (r.u32(at) == kEndOfCentralDirSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string::npos) throw FormatError("corrupt zip archive: no end of central directory");

  const std::uint16_t entries = r.u16(eocd + 10);
  const std::uint32_t cd_offset = r.u32(eocd + 16);
  if (entries == 0) throw FormatError("zip archive is empty");
  if (entries != 1) {
    throw FormatError("zip archive holds " + std::to_string(entries) + " members; expected exactly one");
  }

  if (r.u32(cd_offset) != kCentralHeaderSig) throw FormatError("corrupt zip archive: bad central header");
  const std::uint16_t flags = r.u16(cd_offset + 8);
  const std::uint16_t method = r.u16(cd_offset + 10);
  const std::uint32_t crc = r.u32(cd_offset + 16);
  const std::uint32_t compressed_size = r.u32(cd_offset + 20);
  const std::uint32_t size = r.u32(cd_offset + 24);
  const std::uint32_t local_offset = r.u32(cd_offset + 42);
  if (flags & 0x1) throw FormatError("encrypted zip members are not supported");
  if (compressed_size == 0xFFFFFFFF || size == 0xFFFFFFFF) throw FormatError("zip64 archives are not supported");

  if (r.u32(local_offset) != kLocalHeaderSig) throw FormatError("corrupt zip archive: bad local header");
  const std::size_t data_at = local_offset + kLocalHeaderSize + r.u16(local_offset + 26) + r.u16(local_offset + 28);
  const auto data = r.slice(data_at, compressed_size);

  std::string out;
  if (method == kMethodStored) {
    if (compressed_size != size) throw FormatError("corrupt zip archive: stored size mismatch");
    out.assign(reinterpret_cast<const char*>(data.data()), data.size());
  } else if (method == kMethodDeflate) {
    out = inflate_raw(data, size);
  } else {
    throw FormatError("unsupported zip compression method " + std::to_string(method));
  }

  const auto actual_crc =
      crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
  if (actual_crc != crc) throw FormatError("corrupt zip archive: CRC mismatch");
  return out;
}

std::string open_export_container(std::string_view archive) {
  return open_export_container(std::as_bytes(std::span{archive.data(), archive.size()}));
}

std::string write_export_container(std::string_view member_name, std::string_view contents) {
  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(contents.data()), static_cast<uInt>(contents.size())));
  const std::string packed = deflate_raw(contents);
  const auto name_len = static_cast<std::uint16_t>(member_name.size());
  constexpr std::uint16_t kDosTime = 0;
  constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

  std::string out;
  put32(out, kLocalHeaderSig);
  put16(out, 20);
  put16(out, 0);
  put16(out, kMethodDeflate);
  put16(out, kDosTime);
  put16(out, kDosDate);
  put32(out, crc);
  put32(out, static_cast<std::uint32_t>(packed.size()));
  put32(out, static_cast<std::uint32_t>(contents.size()));
  put16(out, name_len);
  put16(out, 0);
  out += member_name;
  out += packed;

  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  put32(out, kCentralHeaderSig);
  put16(out, 20);
  put16(out, 20);
  put16(out, 0);
  put16(out, kMethodDeflate);
  put16(out, kDosTime);
  put16(out, kDosDate);
  put32(out, crc);
  put32(out, static_cast<std::uint32_t>(packed.size()));
  put32(out, static_cast<std::uint32_t>(contents.size()));
  put16(out, name_len);
  put16(out, 0);
  put16(out, 0);
  put16(out, 0);
  put16(out, 0);
  put32(out, 0);
  put32(out, 0);
  out += member_name;
  const auto cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;

  put32(out, kEndOfCentralDirSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, 1);
  put16(out, 1);
  put32(out, cd_size);
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

std::string read_export_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read error on " + path.string());
  if (bytes.size() >= 4 && bytes.compare(0, 4, "PK\x03\x04") == 0) return open_export_container(bytes);
  return bytes;
}

}  // namespace xenomon::formats
