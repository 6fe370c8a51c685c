#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kronrank/cli.hpp"
#include "kronrank/cover.hpp"
#include "kronrank/crown.hpp"

using namespace kronrank;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("kronrank_cli_" + std::to_string(std::rand()))) { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = (path / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("sigma and crown") {
  auto r = run({"sigma", "35"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "7\n");
  CHECK(run({"sigma", "6859"}).out == "16\n");
  CHECK(run({"crown", "3"}).out == "3 3\n011\n101\n110\n");
  CHECK(run({"sigma", "0"}).code == cli::kInvalidInput);
  CHECK(run({"sigma", "x"}).code == cli::kInvalidInput);
  CHECK(run({"nonsense"}).code == cli::kInvalidInput);
  CHECK(run({}).code == cli::kInvalidInput);
}

TEST_CASE("verify cover on the composed size-12 cover of C4 (x) C4") {
  TempDir t;
  const auto c4 = t.file("c4.mat");
  REQUIRE(run({"crown", "4", "-o", c4}).code == 0);
  const auto p = t.file("c4c4.mat");
  REQUIRE(run({"kron", c4, c4, "-o", p}).code == 0);
  const auto fam = t.file("c4.fam");
  REQUIRE(run({"cover", "c4", "-o", fam}).code == 0);
  auto v = run({"verify", "kron", c4, fam, c4, fam});
  CHECK(v.code == 0);
  CHECK(v.out.find("OK selections=") == 0);
  CHECK(v.out.find("SIZE 12") != std::string::npos);

  const auto cov = t.file("watts12.cov");
  {
    std::ofstream o(cov);
    write_cover(o, compose_kron_cover(crown_matrix(4), c4_triple(), crown_matrix(4), c4_triple()));
  }
  CHECK(run({"verify", "cover", p, cov}).code == 0);
  CHECK(run({"verify", "cover", c4, cov, "--kron", c4}).code == 0);
  CHECK(run({"rank", "exact", c4}).out.find("COVER 4 4 4") == 0);
}

TEST_CASE("verify cover failure and format errors") {
  TempDir t;
  const auto c3 = t.file("c3.mat", "3 3\n011\n101\n110\n");
  const auto bad = t.file("bad.cov", "COVER 3 3 2\nR 0 C 1,2\nR 1,2 C 0,1\n");
  auto r = run({"verify", "cover", c3, bad});
  CHECK(r.code == cli::kVerificationFailed);
  CHECK(r.out.find("FAIL") == 0);
  CHECK(r.out.find("entry=1,1") != std::string::npos);

  const auto broken = t.file("broken.mat", "3 3\n011\n1x1\n110\n");
  r = run({"verify", "cover", broken, bad});
  CHECK(r.code == cli::kInvalidInput);
  CHECK(r.err.find("line 3, column 2") != std::string::npos);
  CHECK(run({"verify", "cover", t.file("missing.mat"), bad}).code == cli::kInvalidInput);
}

TEST_CASE("cover constructions round-trip through files") {
  TempDir t;
  const auto fam = t.file("c5.fam");
  REQUIRE(run({"cover", "c5", "-o", fam}).code == 0);
  std::ifstream in(fam);
  const auto f = read_family(in);
  CHECK(f.members() == c5_triple().members());
  std::ostringstream again;
  write_family(again, f);
  CHECK(again.str() == slurp(fam));

  const auto c5 = t.file("c5.mat");
  run({"crown", "5", "-o", c5});
  auto q = run({"verify", "qcover", c5, fam, "2"});
  CHECK(q.code == 0);
  CHECK(q.out == "OK exhaustive subsets=3\n");
  q = run({"verify", "qcover", c5, fam, "1"});
  CHECK(q.code == cli::kVerificationFailed);
  CHECK(q.out.find("FAIL exhaustive subsets=3 subset=0 entry=") == 0);
  CHECK(run({"verify", "qcover", c5, fam, "4"}).code == cli::kInvalidInput);

  const auto canon = t.file("c10.cov");
  REQUIRE(run({"cover", "canonical", "10", "-o", canon}).code == 0);
  const auto c10 = t.file("c10.mat");
  run({"crown", "10", "-o", c10});
  CHECK(run({"verify", "cover", c10, canon}).code == 0);

  CHECK(run({"cover", "triple", "5", "1"}).out.rfind("FAMILY", 0) == 0);
  CHECK(run({"cover", "triple", "5", "2"}).code == cli::kInvalidInput);
}

TEST_CASE("gap covers") {
  TempDir t;
  const auto cov = t.file("gap.cov");
  auto r = run({"cover", "gap", "7", "7", "-o", cov});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("size 24 (sigma product 25)") != std::string::npos);
  const auto c7 = t.file("c7.mat");
  run({"crown", "7", "-o", c7});
  CHECK(run({"verify", "cover", c7, cov, "--kron", c7}).code == 0);
  CHECK(run({"cover", "gap", "5", "5"}).code == cli::kInvalidInput);
}

TEST_CASE("algebraic and asymptotic reports") {
  auto r = run({"cover", "algebraic", "2", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "PARAMS d=2 q=2 p=5 n=25 k=8 s=4 bound=64 feasible=yes\nOK exhaustive subsets=6\n");

  r = run({"cover", "asymptotic", "81"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PARAMS d=2 q=4 p=5 n=81 k=10 s=8 bound=128 feasible=no\nNOTE ", 0) == 0);

  r = run({"cover", "asymptotic", "25", "--d", "2", "--q", "2", "--s", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("COMPOSED n=25") != std::string::npos);
  CHECK(r.out.find("HALF OK") != std::string::npos);
  CHECK(r.out.find("HYPOTHESES OK") != std::string::npos);
  CHECK(run({"cover", "asymptotic", "25", "--d", "2"}).code == cli::kInvalidInput);
}

TEST_CASE("materialization limit from the environment") {
  TempDir t;
  const auto c = t.file("c.mat");
  run({"crown", "40", "-o", c});
  ::setenv(cli::kLimitEnv, "1000", 1);
  const auto r = run({"kron", c, c});
  ::unsetenv(cli::kLimitEnv);
  CHECK(r.code == cli::kBudgetExceeded);
  CHECK(run({"kron", c, c, "-o", t.file("p.mat")}).code == 0);
}

TEST_CASE("rank, bounds, isolation and mu") {
  TempDir t;
  const auto c4 = t.file("c4.mat");
  const auto c5 = t.file("c5.mat");
  run({"crown", "4", "-o", c4});
  run({"crown", "5", "-o", c5});
  auto r = run({"rank", "exact", c4});
  CHECK(r.code == 0);
  CHECK(r.out.find("LOWER kind=") != std::string::npos);
  CHECK(r.out.find("value=4") != std::string::npos);

  r = run({"bound", "lower", c4, c5});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("LOWER kind=mu value=14\n", 0) == 0);

  r = run({"isolation", c5});
  CHECK(r.out.rfind("ISOLATION 3\n", 0) == 0);

  r = run({"mu", c5});
  CHECK(r.out.rfind("MU 10/3 ones=20 area=6\n", 0) == 0);

  const auto c12 = t.file("c12.mat");
  run({"crown", "12", "-o", c12});
  r = run({"rank", "exact", c12, "--budget", "10"});
  CHECK(r.code == cli::kBudgetExceeded);
}

TEST_CASE("spanoid commands") {
  TempDir t;
  const auto m = t.file("c2.mat", "2 2\n01\n10\n");
  const auto sp = t.file("c2.spanoid", "MATSPANOID c2.mat\n");
  auto r = run({"spanoid", "rank", sp});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("RANK 2\n", 0) == 0);
  r = run({"spanoid", "product-rank", sp, sp});
  CHECK(r.out.rfind("RANK 4\n", 0) == 0);

  const auto ms = t.file("m.sets", "SETS 2\n0,1\n0,1\n");
  const auto ns = t.file("n.sets", "SETS 2\n0\n1\n");
  r = run({"spanoid", "bound", sp, sp, ms, ns});
  CHECK(r.code == 0);
  CHECK(r.out == "BOUND 4 set=4\n");
  const auto ms_bad = t.file("mb.sets", "SETS 2\n0,1\n0\n");
  r = run({"spanoid", "bound", sp, sp, ms_bad, ns});
  CHECK(r.code == cli::kVerificationFailed);
  CHECK(r.out == "FAIL hypothesis element=1\n");

  const auto explicit_sp = t.file("e.spanoid", "SPANOID 3 1\nS: 0 -> 1\n");
  r = run({"spanoid", "rank", explicit_sp});
  CHECK(r.out.rfind("RANK 2\nWITNESS 0,2\n", 0) == 0);
  CHECK(run({"spanoid", "rank", t.file("bad.spanoid", "SPANOID 2 1\nS: 0 -> 5\n")}).code == cli::kInvalidInput);
  (void)m;
}

TEST_CASE("thread count does not change output") {
  TempDir t;
  const auto c = t.file("c.mat");
  run({"crown", "35", "-o", c});
  const auto fam = t.file("t.fam");
  run({"cover", "triple", "7", "1", "-o", fam});
  for (const char* q : {"1", "2"}) {
    const auto a = run({"--threads", "1", "verify", "qcover", c, fam, q});
    const auto b = run({"--threads", "8", "verify", "qcover", c, fam, q});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
}

TEST_CASE("installed binary exit codes") {
  const std::string bin = KRONRANK_CLI_PATH;
  CHECK(std::system((bin + " sigma 4 > /dev/null").c_str()) == 0);
  const int bad = std::system((bin + " frobnicate 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == cli::kInvalidInput);
}
