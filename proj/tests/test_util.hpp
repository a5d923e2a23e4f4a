// Copyright 2026 The Rhythmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RHYTHMKIT_TESTS_TEST_UTIL_HPP_
#define RHYTHMKIT_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rhythmkit/error.hpp"

namespace testutil {

// Fresh directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    root_ = std::filesystem::temp_directory_path() /
            ("rhythmkit_test_" + tag + "_" + std::to_string(++counter_));
    std::filesystem::remove_all(root_);
    std::filesystem::create_directories(root_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string Path(const std::string& name) const {
    return (root_ / name).string();
  }
  const std::filesystem::path& root() const { return root_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path root_;
};

inline std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void WriteAll(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Runs fn and returns the thrown error code; fails the caller via a bogus
// code if nothing was thrown.
template <typename Fn>
rhythmkit::ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const rhythmkit::Error& e) {
    return e.code();
  }
  return static_cast<rhythmkit::ErrorCode>(-1);
}

}  // namespace testutil

#endif  // RHYTHMKIT_TESTS_TEST_UTIL_HPP_
