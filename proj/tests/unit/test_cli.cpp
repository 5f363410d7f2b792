// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phspec/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(PHSPEC_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("phspec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out() const { return " --out-dir " + dir_.string(); }

  std::vector<phspec::EigenvalueRecord> eigenvalues(const std::string& prefix = "") const {
    std::ifstream is(dir_ / (prefix + "eigenvalues.csv"), std::ios::binary);
    return phspec::io::read_eigenvalues(is);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("shoot").code, 1);
  EXPECT_EQ(run("shoot --epsilon 0" + out()).code, 1);
  EXPECT_EQ(run("shoot --epsilon 2.5" + out()).code, 1);
  EXPECT_EQ(run("shoot --epsilon 0.5 --count 0" + out()).code, 1);
  EXPECT_EQ(run("spectral --epsilon 0.3 -N 1" + out()).code, 1);
  EXPECT_EQ(run("shoot --epsilon 0.5 --step -1" + out()).code, 1);
  // The zero eigenvalue lies on the square's left edge.
  EXPECT_EQ(run("winding --epsilon 0.5 --center-re 0.5 --center-im 0 --half-width 0.5" + out()).code, 2);
}

TEST_F(Cli, SpectralAtZeroEpsilon) {
  const auto r = run("spectral --epsilon 0 -N 16 -k 5" + out());
  ASSERT_EQ(r.code, 0);
  const auto recs = eigenvalues();
  ASSERT_EQ(recs.size(), 5u);
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(recs[n - 1].method, phspec::Method::spectral);
    EXPECT_EQ(recs[n - 1].index, n);
    EXPECT_NEAR(recs[n - 1].lambda.imag(), n, 1e-12);
    EXPECT_NEAR(recs[n - 1].lambda.real(), 0.0, 1e-12);
  }
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "spectral.manifest.json"));
  EXPECT_EQ(manifest["command"], "spectral");
  EXPECT_EQ(manifest["parameters"]["N"], 16);
}

TEST_F(Cli, ShootReproducesReferenceTable) {
  const auto r = run("shoot --epsilon 0.5 --count 4 --end-offset 1e-4" + out());
  ASSERT_EQ(r.code, 0);
  const auto recs = eigenvalues();
  ASSERT_EQ(recs.size(), 4u);
  const double expect[4] = {1.167342, 2.968852, 5.483680, 8.715534};
  for (int n = 0; n < 4; ++n) {
    EXPECT_EQ(recs[n].method, phspec::Method::shooting);
    EXPECT_NEAR(recs[n].lambda.imag(), expect[n], 1e-3);
    EXPECT_EQ(recs[n].lambda.real(), 0.0);
  }
  const std::string csv = slurp(dir_ / "eigenvalues.csv");
  EXPECT_EQ(csv.rfind("method,epsilon,n,re_lambda,im_lambda,residual\n", 0), 0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST_F(Cli, ShootingAgreesWithSpectral) {
  ASSERT_EQ(run("shoot --epsilon 0.1 --count 20 --prefix s_" + out()).code, 0);
  ASSERT_EQ(run("spectral --epsilon 0.1 -N 2048 -k 20 --prefix f_" + out()).code, 0);
  const auto s = eigenvalues("s_");
  const auto f = eigenvalues("f_");
  ASSERT_EQ(s.size(), 20u);
  ASSERT_EQ(f.size(), 20u);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(s[n].lambda.imag(), f[n].lambda.imag(), 1e-2) << n + 1;
}

TEST_F(Cli, WindingOnQuadrant) {
  const auto r = run("winding --epsilon 0.5" + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("winding=0"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "winding.csv"));
}

TEST_F(Cli, Interlace) {
  const auto r = run("interlace --e0 0.3 --e1 0.32 -m 4" + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("alternates="), std::string::npos);
  std::ifstream is(dir_ / "interlace.csv", std::ios::binary);
  const auto t = phspec::io::read_table(is);
  EXPECT_EQ(t.rows.size(), 4u);
  const auto same = run("interlace --e0 0.3 --e1 0.3 -m 2" + out());
  EXPECT_NE(same.out.find("identical=true"), std::string::npos);
}

TEST_F(Cli, WkbErrorDecreases) {
  ASSERT_EQ(run("wkb --epsilon 0.5 --n-max 8 --compare-shoot" + out()).code, 0);
  std::ifstream is(dir_ / "wkb.csv", std::ios::binary);
  const auto t = phspec::io::read_table(is);
  ASSERT_EQ(t.header.back(), "rel_error");
  ASSERT_EQ(t.rows.size(), 8u);
  for (std::size_t i = 2; i < t.rows.size(); ++i) {
    EXPECT_LT(phspec::io::parse_real(t.rows[i][3]), phspec::io::parse_real(t.rows[i - 1][3]));
  }
}

TEST_F(Cli, ProfileZeroCounts) {
  const auto r = run("profile --epsilon 0.5 --omega 1.16723451354 --grid 500" + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("zeros_re=1"), std::string::npos) << r.out;
}

TEST_F(Cli, ReRunsAreByteIdentical) {
  ASSERT_EQ(run("shoot --epsilon 0.7 --count 3 --prefix a_" + out()).code, 0);
  ASSERT_EQ(run("shoot --epsilon 0.7 --count 3 --prefix b_" + out()).code, 0);
  EXPECT_EQ(slurp(dir_ / "a_eigenvalues.csv"), slurp(dir_ / "b_eigenvalues.csv"));
  ASSERT_EQ(run("spectral --epsilon 0.7 -N 300 -k 6 --prefix c_" + out()).code, 0);
  ASSERT_EQ(run("spectral --epsilon 0.7 -N 300 -k 6 --prefix d_" + out()).code, 0);
  EXPECT_EQ(slurp(dir_ / "c_eigenvalues.csv"), slurp(dir_ / "d_eigenvalues.csv"));
}
