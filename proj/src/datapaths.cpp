// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/datapaths.hpp"

#include <cstdlib>
#include <filesystem>

#include "maskaid/errors.hpp"

#ifndef MASKAID_DEFAULT_DATA_DIR
#define MASKAID_DEFAULT_DATA_DIR ""
#endif

namespace maskaid {

std::string data_dir() {
  const char* env = std::getenv("MASKAID_DATA_DIR");
  std::string dir = env ? env : MASKAID_DEFAULT_DATA_DIR;
  if (dir.empty())
    throw ConfigError(
        "data directory not configured; set MASKAID_DATA_DIR or build with "
        "MASKAID_DEFAULT_DATA_DIR");
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("data directory does not exist: " + dir);
  return dir;
}

std::string data_file(const std::string& name) {
  std::string path = data_dir() + "/" + name;
  if (!std::filesystem::is_regular_file(path))
    throw ConfigError("missing data file: " + path);
  return path;
}

}  // namespace maskaid
