// tests/matrix_io_test.cc

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

#include <cmath>
#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "itdl/error.hpp"
#include "itdl/matrix_io.hpp"
#include "support/oracles.hpp"
#include "support/scratch.hpp"

namespace itdl {
namespace {

TEST(MatrixIo, HeaderLayout) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  std::string bytes = encode_matrix(m);
  ASSERT_EQ(bytes.size(), 13u + 6 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "ITDL");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 3);
  double second;
  std::memcpy(&second, bytes.data() + 13 + 8, 8);
  EXPECT_EQ(second, 4.0);  // column-major: (1,0) follows (0,0)
}

TEST(MatrixIo, FileRoundTripIsBitExact) {
  itdl_test::ScratchDir dir;
  Eigen::MatrixXd m = itdl_test::gaussian_matrix(7, 5, 3);
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(1, 0) = -0.0;
  write_matrix(dir / "m.itdl", m);
  Eigen::MatrixXd back = read_matrix(dir / "m.itdl");
  ASSERT_EQ(back.rows(), 7);
  ASSERT_EQ(back.cols(), 5);
  EXPECT_EQ(std::memcmp(back.data(), m.data(), sizeof(double) * 35), 0);
}

TEST(MatrixIo, RejectsCorruptFiles) {
  std::string good = encode_matrix(Eigen::MatrixXd::Ones(2, 2));
  EXPECT_THROW(decode_matrix(good.substr(0, good.size() - 1)), LoadError);
  std::string magic = good;
  magic[0] = 'X';
  EXPECT_THROW(decode_matrix(magic), LoadError);
  std::string version = good;
  version[4] = 2;
  EXPECT_THROW(decode_matrix(version), LoadError);
}

TEST(MatrixIo, AtomicWriteLeavesNoTemporaries) {
  itdl_test::ScratchDir dir;
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  EXPECT_EQ(read_file(dir / "a.txt"), "second");
  int entries = 0;
  for (auto &e : std::filesystem::directory_iterator(dir.path())) {
    (void)e;
    ++entries;
  }
  EXPECT_EQ(entries, 1);
}

TEST(MatrixIo, IndicesCsvRoundTrip) {
  itdl_test::ScratchDir dir;
  write_indices_csv(dir / "s.csv", {5, 0, 12});
  EXPECT_EQ(read_file(dir / "s.csv"), "5,0,12\n");
  EXPECT_EQ(read_indices_csv(dir / "s.csv"), (std::vector<int>{5, 0, 12}));
}

TEST(MatrixIo, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125}) {
    std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
}

}  // namespace
}  // namespace itdl
