// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/arrayio.hpp"

#include <cstring>
#include <fstream>

#include "maskaid/errors.hpp"

namespace maskaid {

namespace {
constexpr char kMagic[8] = {'M', 'K', 'A', 'R', 'R', 'A', 'Y', '1'};
}

int64_t Array::numel() const {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

void write_array(const std::string& path, const Array& a) {
  if (a.numel() != static_cast<int64_t>(a.data.size()))
    throw ShapeError("write_array: data size does not match shape");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_array: cannot open " + path);
  f.write(kMagic, 8);
  const uint8_t rank = static_cast<uint8_t>(a.shape.size());
  f.write(reinterpret_cast<const char*>(&rank), 1);
  f.write(reinterpret_cast<const char*>(a.shape.data()),
          static_cast<std::streamsize>(a.shape.size() * sizeof(int64_t)));
  f.write(reinterpret_cast<const char*>(a.data.data()),
          static_cast<std::streamsize>(a.data.size() * sizeof(double)));
  if (!f) throw IoError("write_array: write failed for " + path);
}

Array read_array(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_array: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw FormatError("read_array: bad magic in " + path);
  uint8_t rank = 0;
  f.read(reinterpret_cast<char*>(&rank), 1);
  Array a;
  a.shape.resize(rank);
  f.read(reinterpret_cast<char*>(a.shape.data()),
         static_cast<std::streamsize>(rank * sizeof(int64_t)));
  if (!f) throw FormatError("read_array: truncated header in " + path);
  const int64_t n = a.numel();
  if (n < 0) throw FormatError("read_array: negative dimension in " + path);
  a.data.resize(static_cast<std::size_t>(n));
  f.read(reinterpret_cast<char*>(a.data.data()),
         static_cast<std::streamsize>(n * sizeof(double)));
  if (!f) throw FormatError("read_array: truncated data in " + path);
  return a;
}

}  // namespace maskaid
