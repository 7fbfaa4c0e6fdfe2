// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <string>

namespace maskaid {

// Resolves the directory holding the shipped data files. The MASKAID_DATA_DIR
// environment variable overrides the compiled-in default. Throws ConfigError
// when the directory (or a requested file) does not exist.
std::string data_dir();
std::string data_file(const std::string& name);

}  // namespace maskaid
