// Copyright 2026 The xami-tools Authors. All Rights Reserved.
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

#ifndef XAMI_ERROR_HPP_
#define XAMI_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xami {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dims, out-of-range param).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class FitsErrorKind {
  kNotFits,
  kMalformedCard,
  kMissingKeyword,
  kUnsupportedBitpix,
  kUnsupportedNaxis,
  kTruncatedHeader,
  kTruncatedData,
};

class FitsError : public Error {
 public:
  FitsError(FitsErrorKind kind, std::size_t offset, const std::string& what)
      : Error(what), kind_(kind), offset_(offset) {}

  FitsErrorKind kind() const noexcept { return kind_; }
  /// Byte offset of the offending card or data position.
  std::size_t offset() const noexcept { return offset_; }

 private:
  FitsErrorKind kind_;
  std::size_t offset_;
};

class PngError : public Error {
 public:
  using Error::Error;
};

enum class CocoErrorKind {
  kMalformed,
  kDanglingImageId,
  kUnknownCategory,
  kCountsSumMismatch,
  kDuplicateId,
  kUnsupportedSegmentation,
};

class CocoError : public Error {
 public:
  CocoError(CocoErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  CocoErrorKind kind() const noexcept { return kind_; }

 private:
  CocoErrorKind kind_;
};

}  // namespace xami

#endif  // XAMI_ERROR_HPP_
