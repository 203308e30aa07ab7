// src/matrix_io.cpp

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

#include "itdl/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "itdl/error.hpp"

namespace itdl {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path &path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

constexpr char kMagic[4] = {'I', 'T', 'D', 'L'};
constexpr unsigned char kVersion = 0x01;
constexpr std::size_t kHeaderSize = 13;

void put_u32(std::string &out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
  return v;
}

void put_f64(std::string &out, double d) {
  auto bits = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

double get_f64(std::string_view in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string encode_matrix(const Eigen::MatrixXd &m) {
  std::string out;
  out.reserve(kHeaderSize + 8 * static_cast<std::size_t>(m.size()));
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) put_f64(out, m(i, j));
  return out;
}

Eigen::MatrixXd decode_matrix(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw LoadError("not an ITDL matrix file (bad magic)");
  if (static_cast<unsigned char>(bytes[4]) != kVersion)
    throw LoadError("unsupported ITDL matrix version " +
                    std::to_string(static_cast<unsigned char>(bytes[4])));
  std::uint64_t rows = get_u32(bytes, 5), cols = get_u32(bytes, 9);
  if (bytes.size() != kHeaderSize + 8 * rows * cols)
    throw LoadError("ITDL matrix file has wrong payload size");
  Eigen::MatrixXd m(rows, cols);
  std::size_t at = kHeaderSize;
  for (std::uint64_t j = 0; j < cols; ++j)
    for (std::uint64_t i = 0; i < rows; ++i, at += 8) m(i, j) = get_f64(bytes, at);
  return m;
}

void write_matrix(const fs::path &path, const Eigen::MatrixXd &m) {
  write_file_atomic(path, encode_matrix(m));
}

Eigen::MatrixXd read_matrix(const fs::path &path) {
  return decode_matrix(read_file(path));
}

void write_indices_csv(const fs::path &path, const std::vector<int> &indices) {
  std::string s;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(indices[i]);
  }
  s += '\n';
  write_file_atomic(path, s);
}

std::vector<int> read_indices_csv(const fs::path &path) {
  std::string text = read_file(path);
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find_first_of(",\n\r", pos);
    if (end == std::string::npos) end = text.size();
    std::string_view tok(text.data() + pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) {
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw LoadError("bad index '" + std::string(tok) + "' in " + path.string());
      out.push_back(v);
    }
    pos = end + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace itdl
