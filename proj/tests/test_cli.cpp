#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cozeta/cli.hpp"

using namespace cozeta;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cozeta");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("formula") {
  Run h = run({"formula", "--algebra", "H", "--symbolic"});
  CHECK(h.code == 0);
  CHECK(has(h.out, "algebra=H\nprime_validity=all\n"));
  CHECK(has(h.out, "(1 - X^3*Y1^2)"));
  Run s = run({"formula", "--algebra", "sl2", "--prime", "2"});
  CHECK(has(s.out, "prime_validity=p=2"));
  CHECK(has(s.out, "16*Y1^4*Y2^2*Y3"));
  Run z = run({"formula", "--algebra", "Z3", "--corank", "1", "--symbolic"});
  CHECK(has(z.out, "(1 + T + X*T) / (1 - X^2*T)"));
  Run l2 = run({"formula", "--algebra", "L2", "--machine"});
  CHECK(l2.code == 0);
  CHECK(has(l2.out, "prime_validity=p=1 mod 4\t"));
  CHECK(has(l2.out, "prime_validity=p=3 mod 4\t"));
  Run free = run({"formula", "--free-rank", "2", "--univariate"});
  CHECK(free.code == 0);
  CHECK(has(free.out, "algebra=Z2"));
}

TEST_CASE("formula from a file and the bad-prime fallback") {
  const char* path = "cli_test_m.alg";
  {
    std::ofstream f(path);
    f << "# form diag(0, 3, 1)\nname = M\n[1,2] = 0 0 1\n[1,3] = 0 -3 0\n";
  }
  Run ok = run({"formula", "--algebra", std::string("file:") + path, "--prime", "5"});
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "algebra=M"));
  Run bad = run({"formula", "--algebra", std::string("file:") + path, "--prime", "3"});
  CHECK(bad.code == 2);
  CHECK(has(bad.err, "census"));
  Run sym = run({"formula", "--algebra", std::string("file:") + path, "--symbolic"});
  CHECK(sym.code == 0);
  CHECK(has(sym.out, "(-12/p)=1"));
  std::remove(path);
}

TEST_CASE("census and verify") {
  Run c = run({"census", "--algebra", "H", "--prime", "2", "--max-exponent", "3"});
  CHECK(c.code == 0);
  CHECK(has(c.out, "\n1 0 0 3\n"));
  Run m = run({"census", "--algebra", "H", "--prime", "2", "--max-exponent", "1", "--machine"});
  CHECK(m.out == "p=2\tc1=0\tc2=0\tc3=0\tcount=1\np=2\tc1=1\tc2=0\tc3=0\tcount=3\n");
  Run v = run({"verify", "--algebra", "H", "--prime", "2", "--max-exponent", "6"});
  CHECK(v.code == 0);
  CHECK(has(v.out, "PASS"));
  Run l2 = run({"verify", "--algebra", "L2", "--prime", "3", "--max-exponent", "5"});
  CHECK(l2.code == 0);
  Run sc = run({"verify", "--algebra", "H", "--prime", "3", "--max-exponent", "4", "--scale", "1"});
  CHECK(sc.code == 0);
  Run big = run({"census", "--algebra", "H", "--prime", "7", "--max-exponent", "9"});
  CHECK(big.code == 3);
}

TEST_CASE("input errors") {
  const char* path = "cli_test_bad.alg";
  {
    std::ofstream f(path);
    f << "[1,2] = 0 0 1\n[1,3] = 1 0 0\n[2,3] = 0 1 1\n";
  }
  Run j = run({"verify", "--algebra", std::string("file:") + path, "--prime", "2"});
  CHECK(j.code == 2);
  CHECK(has(j.err, "Jacobi"));
  std::remove(path);
  CHECK(run({"formula", "--algebra", "sl3"}).code == 2);
  CHECK(run({"census", "--algebra", "H", "--prime", "4"}).code == 2);
  CHECK(run({"census", "--algebra", "H"}).code == 2);
  CHECK(run({"census", "--algebra", "Z2", "--prime", "2"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "--algebra", "file:/nonexistent/x.alg", "--prime", "2"}).code == 2);
}

TEST_CASE("fe") {
  CHECK(run({"fe", "--algebra", "H"}).code == 0);
  CHECK(run({"fe", "--free-rank", "4"}).code == 0);
  Run two = run({"fe", "--algebra", "sl2", "--prime", "2"});
  CHECK(two.code == 2);
  CHECK(has(two.err, "p=2"));
  Run l2 = run({"fe", "--algebra", "L2", "--machine"});
  CHECK(l2.code == 0);
  CHECK(has(l2.out, "fe=holds"));
}

TEST_CASE("igusa") {
  Run h = run({"igusa", "--family", "H", "--prime", "3", "--levels", "4"});
  CHECK(h.code == 0);
  CHECK(has(h.out, "all levels match"));
  Run wrong = run({"igusa", "--family", "H", "--prime", "5", "--levels", "3", "--form", "0 0 0 0 1 0 0 0 1"});
  CHECK(wrong.code == 1);
  CHECK(run({"igusa", "--family", "sl3", "--prime", "3"}).code == 2);
}

TEST_CASE("density and catalog") {
  Run d = run({"density", "--algebra", "H", "--corank", "1", "--prime-bound", "20000"});
  CHECK(d.code == 0);
  CHECK(has(d.out, "P(1) for H = 0.49"));
  CHECK(has(d.out, "log(X)"));
  Run dm = run({"density", "--algebra", "Z3", "--corank", "2", "--prime-bound", "2000", "--machine"});
  CHECK(has(dm.out, "sigma0=3\tomega=1"));
  Run c = run({"catalog"});
  for (const char* label : {"Z3", "H", "sl2", "L1", "L2", "rank2-nonabelian", "solvable(i,k)"})
    CHECK(has(c.out, label));
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args = {"census", "--algebra", "sl2", "--prime", "3", "--max-exponent", "3"};
  CHECK(run(args).out == run(args).out);
  std::vector<std::string> text = {"census", "--algebra", "L1", "--prime", "2", "--max-exponent", "2"};
  std::vector<std::string> machine = text;
  machine.push_back("--machine");
  // same counts in both modes
  std::istringstream t(run(text).out), m(run(machine).out);
  std::string line;
  std::vector<std::string> a, b;
  while (std::getline(t, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'c') a.push_back(line.substr(line.rfind(' ') + 1));
  while (std::getline(m, line)) b.push_back(line.substr(line.rfind('=') + 1));
  CHECK(a == b);
}
