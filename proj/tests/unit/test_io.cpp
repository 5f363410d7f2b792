// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "phspec/csv.hpp"
#include "phspec/manifest.hpp"

using namespace phspec;
using namespace phspec::io;

TEST(Csv, TwelveSignificantDigits) {
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(pi), "3.14159265359");
  EXPECT_EQ(format_real(-1234567.891234567), "-1234567.89123");
  EXPECT_EQ(format_real(1.5e-20), "1.5e-20");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, ParseReal) {
  EXPECT_EQ(parse_real("2.5"), 2.5);
  EXPECT_TRUE(std::isnan(parse_real("nan")));
  EXPECT_EQ(parse_real("inf"), std::numeric_limits<double>::infinity());
  EXPECT_THROW(parse_real("1.0x"), std::invalid_argument);
  EXPECT_THROW(parse_real(""), std::invalid_argument);
}

TEST(Csv, EigenvalueRoundTrip) {
  std::vector<EigenvalueRecord> recs{
      {complex{0.0, 1.16723451354}, 0.0123, Method::shooting, 0.5, 1},
      {complex{-1e-13, 2.5}, 3e-12, Method::spectral, 0.1, 2},
      {complex{0.0, 35.6}, 0.0, Method::wkb, 0.5, 9},
  };
  std::ostringstream os;
  write_eigenvalues(os, recs);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "method,epsilon,n,re_lambda,im_lambda,residual");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  std::istringstream is(text);
  const auto back = read_eigenvalues(is);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].method, recs[i].method);
    EXPECT_EQ(back[i].index, recs[i].index);
    EXPECT_NEAR(back[i].lambda.imag(), recs[i].lambda.imag(), 1e-11 * std::abs(recs[i].lambda.imag()));
    EXPECT_DOUBLE_EQ(back[i].epsilon, recs[i].epsilon);
  }
  std::ostringstream again;
  write_eigenvalues(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream crlf("method,epsilon,n,re_lambda,im_lambda,residual\r\n");
  EXPECT_THROW(read_eigenvalues(crlf), std::invalid_argument);
  std::istringstream crlf_row("a,b\n1,2\r\n");
  EXPECT_THROW(read_table(crlf_row), std::invalid_argument);
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_table(ragged), std::invalid_argument);
  std::istringstream other("a,b\n1,2\n");
  EXPECT_THROW(read_eigenvalues(other), std::invalid_argument);
  std::istringstream bad_method("method,epsilon,n,re_lambda,im_lambda,residual\nfoo,1,1,0,1,0\n");
  EXPECT_THROW(read_eigenvalues(bad_method), std::invalid_argument);
  std::istringstream empty("");
  EXPECT_THROW(read_table(empty), std::invalid_argument);
}

TEST(Manifest, SortedKeysAndRoundTrip) {
  RunManifest m;
  m.command = "shoot";
  m.parameters["zeta"] = 1;
  m.parameters["alpha"] = 0.5;
  m.wall_time_seconds = 0.25;
  m.warnings = {"w"};
  m.outputs = {"eigenvalues.csv"};
  const std::string text = m.dump();
  EXPECT_EQ(text.back(), '\n');
  std::vector<std::size_t> pos;
  for (const char* k : {"\"command\"", "\"outputs\"", "\"parameters\"", "\"toolkit_version\"", "\"wall_time_seconds\"",
                        "\"warnings\""}) {
    pos.push_back(text.find(k));
    ASSERT_NE(pos.back(), std::string::npos) << k;
  }
  EXPECT_TRUE(std::is_sorted(pos.begin(), pos.end()));
  EXPECT_LT(text.find("\"alpha\""), text.find("\"zeta\""));
  const auto back = RunManifest::from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.command, "shoot");
  EXPECT_EQ(back.parameters["zeta"], 1);
  EXPECT_EQ(back.toolkit_version, version);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.dump(), text);
}
