#include "pmlab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace pmlab {

static_assert(std::endian::native == std::endian::little,
              "snapshot payload is little-endian");

void write_snapshot(const Field& f, double time, const std::string& name,
                    const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kSnapshotMagic, 8);
  auto put_u32 = [&](uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_u64 = [&](uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_f64 = [&](double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  put_u32(kSnapshotVersion);
  put_u32(static_cast<uint32_t>(f.grid.dim));
  for (int ax = 0; ax < f.grid.dim; ++ax) {
    put_f64(f.grid.lo[static_cast<size_t>(ax)]);
    put_f64(f.grid.hi[static_cast<size_t>(ax)]);
    put_u64(static_cast<uint64_t>(f.grid.cells[static_cast<size_t>(ax)]));
  }
  put_f64(time);
  put_u32(static_cast<uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!os) throw IoError("short write: " + path);
}

LoadedSnapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kSnapshotMagic, 8) != 0)
    throw FormatError("bad magic in " + path);
  auto get_u32 = [&]() {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw FormatError("truncated header in " + path);
    return v;
  };
  auto get_u64 = [&]() {
    uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw FormatError("truncated header in " + path);
    return v;
  };
  auto get_f64 = [&]() {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw FormatError("truncated header in " + path);
    return v;
  };
  const uint32_t version = get_u32();
  if (version != kSnapshotVersion)
    throw FormatError("snapshot version " + std::to_string(version) +
                      " unsupported; expected " +
                      std::to_string(kSnapshotVersion));
  const uint32_t dim = get_u32();
  if (dim != 1 && dim != 2) throw FormatError("bad dimension in " + path);

  double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0};
  uint64_t cells[2] = {1, 1};
  for (uint32_t ax = 0; ax < dim; ++ax) {
    lo[ax] = get_f64();
    hi[ax] = get_f64();
    cells[ax] = get_u64();
  }
  LoadedSnapshot out;
  out.time = get_f64();
  const uint32_t name_len = get_u32();
  out.name.resize(name_len);
  is.read(out.name.data(), name_len);
  if (!is) throw FormatError("truncated name in " + path);

  Grid g = (dim == 1)
               ? Grid::make_1d(lo[0], hi[0], static_cast<int>(cells[0]))
               : Grid::make_2d(lo[0], hi[0], static_cast<int>(cells[0]),
                               lo[1], hi[1], static_cast<int>(cells[1]));
  out.field = Field(g);
  is.read(reinterpret_cast<char*>(out.field.values.data()),
          static_cast<std::streamsize>(out.field.values.size() *
                                       sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(out.field.values.size() *
                                                  sizeof(double)))
    throw FormatError("truncated payload in " + path);
  return out;
}

}  // namespace pmlab
