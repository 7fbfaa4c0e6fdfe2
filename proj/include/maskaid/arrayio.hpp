// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace maskaid {

// Little-endian binary container for double arrays with a shape header.
// Layout: magic "MKARRAY1", u8 rank, i64 dims[rank], f64 data[numel].
struct Array {
  std::vector<int64_t> shape;
  std::vector<double> data;

  int64_t numel() const;
};

void write_array(const std::string& path, const Array& a);
Array read_array(const std::string& path);

}  // namespace maskaid
