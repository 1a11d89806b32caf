#include "ibnls/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ibnls/error.hpp"

namespace ibnls {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[6] = {'I', 'B', 'N', 'L', 'S', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::string& path) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw Error(ErrorKind::CorruptSnapshot, "truncated header in " + path);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(os, f.grid.dim());
  put<std::uint64_t>(os, f.grid.n());
  put<double>(os, f.grid.half_width());
  std::uint64_t flags = (f.space == Space::Spectral ? 1u : 0u) | (f.grid.offset() ? 2u : 0u);
  put<std::uint64_t>(os, flags);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(f.values.size()));
  // std::complex<double> is layout-compatible with double[2]
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

Field read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
  char magic[6];
  if (!is.read(magic, 6) || std::memcmp(magic, kMagic, 6) != 0)
    throw Error(ErrorKind::CorruptSnapshot, "bad magic in " + path);
  auto dim = get<std::uint64_t>(is, path);
  auto n = get<std::uint64_t>(is, path);
  auto L = get<double>(is, path);
  auto flags = get<std::uint64_t>(is, path);
  auto count = get<std::uint64_t>(is, path);
  if (dim < 1 || dim > 3 || n < 8 || n > (1u << 20))
    throw Error(ErrorKind::CorruptSnapshot, "implausible grid in " + path);
  Grid g;
  try {
    g = make_grid(static_cast<int>(dim), static_cast<int>(n), L, (flags & 2u) != 0);
  } catch (const Error& e) {
    throw Error(ErrorKind::CorruptSnapshot, std::string("grid header invalid: ") + e.what());
  }
  if (count != static_cast<std::uint64_t>(g.size()))
    throw Error(ErrorKind::CorruptSnapshot, "length field disagrees with grid in " + path);
  Field f{g, Eigen::ArrayXcd(g.size()), (flags & 1u) ? Space::Spectral : Space::Physical};
  if (!is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(count * sizeof(cplx))))
    throw Error(ErrorKind::CorruptSnapshot, "truncated data in " + path);
  return f;
}

}  // namespace ibnls
