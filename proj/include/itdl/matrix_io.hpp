// include/itdl/matrix_io.hpp

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

#ifndef ITDL_MATRIX_IO_HPP_
#define ITDL_MATRIX_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace itdl {

/// Writes `contents` to a temporary sibling and renames it over `path`, so
/// the target is either complete or absent.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view contents);
std::string read_file(const std::filesystem::path &path);

/*
  Binary matrix file:
    bytes 0-3   "ITDL"
    byte  4     version (0x01)
    bytes 5-8   rows, uint32 little-endian
    bytes 9-12  cols, uint32 little-endian
    then rows*cols IEEE binary64 little-endian values, column-major.
  Used for dictionaries (rows = signal dim, cols = atoms) and for the
  classifier weight matrix.
*/
std::string encode_matrix(const Eigen::MatrixXd &m);
Eigen::MatrixXd decode_matrix(std::string_view bytes);
void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &m);
Eigen::MatrixXd read_matrix(const std::filesystem::path &path);

/// Selections: one line of comma-separated atom indices in greedy order.
void write_indices_csv(const std::filesystem::path &path,
                       const std::vector<int> &indices);
std::vector<int> read_indices_csv(const std::filesystem::path &path);

/// Shortest decimal that round-trips through binary64.
std::string format_double(double v);

}  // namespace itdl

#endif  // ITDL_MATRIX_IO_HPP_
