// Copyright 2026 The CBSE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBSE_ERROR_HPP_
#define CBSE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cbse {

// Numeric values are shared with the C API (cbse_status in cbse.h).
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIo = 2,
  kEmptyCorpus = 3,
  kConfigMismatch = 4,
  kMalformedInput = 5,
  kDegenerate = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace cbse

#endif  // CBSE_ERROR_HPP_
