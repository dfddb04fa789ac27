#pragma once

#include "arabdoc/error.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#define EXPECT_ERROR_CODE(stmt, ec)                                   \
  do {                                                                \
    try {                                                             \
      stmt;                                                           \
      ADD_FAILURE() << "expected " #ec " from " #stmt;                \
    } catch (const ::arabdoc::Error& e__) {                           \
      EXPECT_EQ(e__.code(), ::arabdoc::ErrorCode::ec) << e__.what(); \
    }                                                                 \
  } while (0)

namespace testutil {

inline std::filesystem::path source_dir() { return ARABDOC_SOURCE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

/// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("arabdoc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
