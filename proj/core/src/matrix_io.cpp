#include "symk/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace symk {

namespace {

constexpr char kMagic[8] = {'S', 'Y', 'M', 'K', 'M', 'A', 'T', '1'};

void put_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.write(b, 8);
}

double get_f64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

void write_header(std::ostream& out, std::uint32_t rows, std::uint32_t cols,
                  std::uint8_t flag) {
  out.write(kMagic, 8);
  put_u32_le(out, rows);
  put_u32_le(out, cols);
  const char flag_and_pad[8] = {static_cast<char>(flag), 0, 0, 0, 0, 0, 0, 0};
  out.write(flag_and_pad, 8);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_header(out, static_cast<std::uint32_t>(m.rows()),
               static_cast<std::uint32_t>(m.cols()), 0);
  for (std::size_t i = 0; i < m.size(); ++i) put_f64_le(out, m.data()[i]);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_matrix(const std::filesystem::path& path,
                 const PackedTriangular& m) {
  auto out = open_out(path);
  write_header(out, static_cast<std::uint32_t>(m.n()),
               static_cast<std::uint32_t>(m.n()), 1);
  for (std::size_t i = 0; i < m.size(); ++i) put_f64_le(out, m.data()[i]);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

AnyMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("bad magic in " + path.string());
  const std::uint32_t rows = get_u32_le(in);
  const std::uint32_t cols = get_u32_le(in);
  char flag_and_pad[8];
  in.read(flag_and_pad, 8);
  if (!in) throw std::runtime_error("truncated header in " + path.string());
  const auto flag = static_cast<std::uint8_t>(flag_and_pad[0]);

  auto read_payload = [&](double* dst, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) dst[i] = get_f64_le(in);
    if (!in) throw std::runtime_error("truncated payload in " + path.string());
  };

  if (flag == 0) {
    Matrix m(rows, cols);
    read_payload(m.data(), m.size());
    return m;
  }
  if (flag == 1) {
    if (rows != cols)
      throw std::runtime_error("packed matrix must be square: " +
                               path.string());
    PackedTriangular m(rows);
    read_payload(m.data(), m.size());
    return m;
  }
  throw std::runtime_error("unknown storage flag in " + path.string());
}

}  // namespace symk
