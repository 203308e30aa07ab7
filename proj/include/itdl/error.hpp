// include/itdl/error.hpp

// Copyright 2026  The ITDL Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ITDL_ERROR_HPP_
#define ITDL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace itdl {

/// Invalid argument to a library routine (bad sizes, out-of-range indices).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable input file. `row()` is 1-based, 0 when not tied
/// to a particular row.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string &what, std::size_t row = 0)
      : std::runtime_error(row ? what + " (row " + std::to_string(row) + ")"
                               : what),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Numerical failure: degenerate covariance, non-finite objective, etc.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace itdl

#endif  // ITDL_ERROR_HPP_
