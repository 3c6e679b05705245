#pragma once

#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
