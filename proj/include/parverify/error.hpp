// Copyright 2026 The parverify Authors.
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

#ifndef PARVERIFY_ERROR_HPP_
#define PARVERIFY_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace parverify {

// Failure classes. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  kConfig,       // invalid parameters or flag combinations
  kInputFormat,  // malformed text, rows, model or blob files
  kIo,           // unreadable/unwritable files
  kCorrupt,      // blob payload does not decode under the given model
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ConfigError(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error FormatError(const std::string& what) {
  return Error(ErrorKind::kInputFormat, what);
}
inline Error IoError(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error CorruptError(const std::string& what) {
  return Error(ErrorKind::kCorrupt, what);
}

}  // namespace parverify

#endif  // PARVERIFY_ERROR_HPP_
