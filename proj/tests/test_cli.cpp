// Copyright 2026 The jnr Authors
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


#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "jnr/cli.hpp"
#include "jnr/linalg.hpp"
#include "jnr/linalg/io.hpp"

using namespace jnr;
using jnr::cli::dispatch;
using jnr::cli::parse_report;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "jnr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

cli::ParsedReport parsed(const std::string& text) {
  std::istringstream in(text);
  return parse_report(in);
}

double real_of(const cli::ParsedReport& r, const std::string& key) {
  REQUIRE(r.values.count(key));
  return std::stod(r.values.at(key));
}

fs::path fixture_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "jnr_cli_test";
    fs::create_directories(d);
    std::ofstream(d / "e12.mat") << "2 2\n0 1\n0 0\n";
    std::ofstream(d / "e12.tup") << "1 2\n2 2\n0 1\n0 0\n";
    std::ofstream(d / "z49.tup") << "1 1\n1 1\n0.49\n";
    std::ofstream(d / "pair.tup") << "2 1\n1 1\n0.1\n\n1 1\n0.2\n";
    std::ofstream(d / "gens.tup") << "2 4\n4 4\n0 1 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n\n"
                                     "4 4\n0 0 0 0\n0 0 0 0\n0 0 0 1\n0 0 0 0\n";
    std::ofstream(d / "bad.mat") << "2 2\n0 1\n0 x\n";
    return d;
  }();
  return dir;
}

std::string fx(const char* name) { return (fixture_dir() / name).string(); }

// Every non-config key lives under a prefix that names its operation.
bool claims_named(const cli::ParsedReport& r) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.values) keys.push_back(k);
  for (const auto& [k, m] : r.matrices) keys.push_back(k);
  for (const auto& k : keys) {
    if (k == "schema_version" || k == "command" || k.rfind("config.", 0) == 0) continue;
    bool found = false;
    for (std::size_t dot = k.find('.'); dot != std::string::npos && !found; dot = k.find('.', dot + 1))
      found = r.values.count(k.substr(0, dot) + ".op") && r.values.count(k.substr(0, dot) + ".tol");
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bounds report") {
  const auto r = run({"bounds", "--n", "2"});
  REQUIRE(r.code == 0);
  const auto p = parsed(r.out);
  CHECK(p.values.at("schema_version") == std::to_string(cli::kSchemaVersion));
  CHECK(std::abs(real_of(p, "bounds.d_inf_un_lower") - 2.0 / std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(real_of(p, "bounds.d_inf_un_lower") - 1.1547) < 1e-4);
  CHECK(claims_named(p));
}

TEST_CASE("group-norm reaches the Kesten value") {
  const auto r = run({"group-norm", "--group", "free:2", "--coeffs", "1,1", "--radius", "20"});
  REQUIRE(r.code == 0);
  const auto p = parsed(r.out);
  CHECK(real_of(p, "group_norm.lower") >= 1.697);
  CHECK(p.values.at("group_norm.monotone") == "true");
  CHECK(claims_named(p));
}

TEST_CASE("radius of E12") {
  const auto r = run({"radius", "--matrix", fx("e12.mat")});
  REQUIRE(r.code == 0);
  const auto p = parsed(r.out);
  CHECK(std::abs(real_of(p, "radius.lower") - 0.5) < 1e-8);
  CHECK(std::abs(real_of(p, "radius.upper") - 0.5) < 1e-8);
  REQUIRE(p.matrices.count("radius.vector"));
  CHECK(p.matrices.at("radius.vector").rows() == 2);
  CHECK(claims_named(p));
}

TEST_CASE("reports are byte stable") {
  const std::vector<std::vector<std::string>> cases = {
      {"joint", "--tuple", fx("gens.tup"), "--k", "2", "--budget", "4"},
      {"ucp", "--tuple", fx("gens.tup")},
      {"range", "--tuple", fx("z49.tup"), "--set", "w", "--system", fx("e12.tup")},
      {"refute", "--tuple", fx("pair.tup"), "--seed", "5"},
      {"amenability", "--group", "cyclic:7", "--coeffs", "1", "--radius", "8"},
      {"obstruction", "--group", "free:2", "--radius", "2", "--budget", "2000"},
      {"bounds", "--n", "3", "--budget", "2", "--threads", "1"},
  };
  for (const auto& c : cases) {
    const auto a = run(c), b = run(c);
    INFO(c.front());
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto p = parsed(a.out);
    CHECK(p.values.count("schema_version"));
    CHECK(p.values.at("command") == c.front());
    CHECK(claims_named(p));
  }
}

TEST_CASE("embedded matrices round trip") {
  linalg::Rng rng(1);
  const linalg::ComplexMatrix m = linalg::random_ginibre(3, 2, rng);
  cli::Report rep("test");
  rep.claim("x", "none", 0.0);
  rep.matrix("x.m", m);
  rep.real("x.v", 1.0 / 3.0);
  const auto p = parsed(rep.str());
  CHECK((p.matrices.at("x.m") - m).norm() == 0.0);
  CHECK(std::stod(p.values.at("x.v")) == 1.0 / 3.0);

  // A report re-emitted from its parsed matrices is identical.
  cli::Report again("test");
  again.claim("x", "none", 0.0);
  again.matrix("x.m", p.matrices.at("x.m"));
  again.real("x.v", std::stod(p.values.at("x.v")));
  CHECK(again.str() == rep.str());

  const auto u = run({"ucp", "--tuple", fx("gens.tup")});
  const auto q = parsed(u.out);
  CHECK(q.values.at("ucp.verdict") == "UCP_CERTIFIED");
}

TEST_CASE("range and refute outcomes") {
  const auto in = parsed(run({"range", "--tuple", fx("z49.tup"), "--set", "w", "--system", fx("e12.tup")}).out);
  CHECK(in.values.at("range.status") == "IN");
  CHECK(in.values.at("range.evidence_verified") == "true");
  CHECK(in.matrices.count("range.choi"));
  const auto sn = parsed(run({"range", "--tuple", fx("pair.tup"), "--set", "sn"}).out);
  CHECK(sn.values.at("range.status") == "IN");
}

TEST_CASE("out flag writes the same bytes") {
  const fs::path path = fixture_dir() / "report.txt";
  const auto a = run({"bounds", "--n", "4", "--out", path.string()});
  CHECK(a.code == 0);
  CHECK(a.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"bounds", "--n", "4"}).out);
}

TEST_CASE("thread budget from the environment") {
  ::setenv("JNR_THREADS", "1", 1);
  CHECK(parsed(run({"bounds", "--n", "2"}).out).values.at("config.threads") == "1");
  ::setenv("JNR_THREADS", "zero", 1);
  const auto bad = run({"bounds", "--n", "2"});
  CHECK(bad.code == 2);
  ::unsetenv("JNR_THREADS");
  CHECK(parsed(run({"bounds", "--n", "2", "--threads", "1"}).out).values.at("config.threads") == "1");
}

TEST_CASE("exit codes and messages") {
  const auto unknown_flag = run({"bounds", "--n", "2", "--bogus"});
  CHECK(unknown_flag.code == 2);
  const auto unknown_cmd = run({"frobnicate"});
  CHECK(unknown_cmd.code == 2);
  CHECK(unknown_cmd.err.find("unknown command") != std::string::npos);
  const auto malformed = run({"radius", "--matrix", fx("bad.mat")});
  CHECK(malformed.code == 2);
  const auto missing = run({"radius", "--matrix", fx("absent.mat")});
  CHECK(missing.code == 2);
  const auto mismatch = run({"range", "--tuple", fx("pair.tup"), "--set", "w", "--system", fx("e12.tup")});
  CHECK(mismatch.code == 2);
  const auto wrong_shape = run({"ucp", "--tuple", fx("e12.mat")});
  CHECK(wrong_shape.code == 2);
  const auto bad_coeffs = run({"group-norm", "--group", "free:2", "--coeffs", "1", "--radius", "3"});
  CHECK(bad_coeffs.code == 2);
  const auto small_n = run({"bounds", "--n", "1"});
  CHECK(small_n.code == 2);
  const auto unwritable = run({"bounds", "--n", "2", "--out", "/nonexistent/dir/report.txt"});
  CHECK(unwritable.code == 1);

  // Distinct messages for distinct input faults.
  const std::vector<std::string> messages = {unknown_flag.err, unknown_cmd.err, malformed.err,
                                             missing.err, mismatch.err, wrong_shape.err, bad_coeffs.err};
  for (std::size_t i = 0; i < messages.size(); ++i) {
    CHECK_FALSE(messages[i].empty());
    for (std::size_t j = i + 1; j < messages.size(); ++j) CHECK(messages[i] != messages[j]);
  }
  CHECK(run({"--help"}).code == 0);
}
