// Copyright 2026 The ScionFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace scionfl {

class EnforceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
template <typename... Args>
[[noreturn]] inline void enforce_fail(const char* expr, const char* file,
                                      int line, Args&&... args) {
  std::ostringstream oss;
  oss << "enforce failed: " << expr << " at " << file << ":" << line;
  if constexpr (sizeof...(args) > 0) {
    oss << " (";
    (oss << ... << args);
    oss << ")";
  }
  throw EnforceError(oss.str());
}
}  // namespace detail

}  // namespace scionfl

#define SCIONFL_ENFORCE(expr, ...)                                       \
  do {                                                                   \
    if (!(expr)) {                                                       \
      ::scionfl::detail::enforce_fail(#expr, __FILE__,                   \
                                      __LINE__ __VA_OPT__(, ) __VA_ARGS__); \
    }                                                                    \
  } while (0)
