// End-to-end checks of the command-line binary; the path arrives through
// the MULTISING_CLI environment variable set by the test harness.
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("MULTISING_CLI");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// rows of a CSV body, ignoring '#' metadata and the header line
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("gamma summary names the exact rational") {
  RunResult r = run("semigroup --gens 2,3,5,7,11 --gamma");
  CHECK(r.code == 0);
  CHECK(r.out.find("77/16") != std::string::npos);
}

TEST_CASE("exit codes distinguish config and computation errors") {
  CHECK(run("semigroup").code == 2);                      // no generators
  CHECK(run("curve --fig1 --fig2").code == 2);            // conflicting presets
  CHECK(run("decompose --gens 2 --box 9999999").code == 3);  // too large
  CHECK(run("--help").code == 0);
}

TEST_CASE("identical configurations produce byte-identical files") {
  const std::string a = "/tmp/multising_cli_a.csv";
  const std::string b = "/tmp/multising_cli_b.csv";
  std::remove(a.c_str());
  std::remove(b.c_str());
  std::string args = "curve --gens 2,3 --r 0.37 --beta-grid=-2:2:17 --out ";
  CHECK(run(args + a).code == 0);
  CHECK(run(args + b).code == 0);
  std::string ca = slurp(a), cb = slurp(b);
  CHECK(!ca.empty());
  CHECK(ca == cb);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("figure presets") {
  RunResult fig1 = run("curve --fig1");
  CHECK(fig1.code == 0);
  auto rows = csv_rows(fig1.out);
  REQUIRE(rows.size() == 121);
  // r = 1/2 preset: F(0) = 0 and F(1) = log cosh 1
  for (auto& row : rows) {
    if (std::fabs(row[0]) < 1e-12) CHECK(std::fabs(row[1]) < 1e-10);
    if (std::fabs(row[0] - 1.0) < 1e-12)
      CHECK(row[1] == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-9));
  }
  CHECK(fig1.out.find("# truncation_K=100") != std::string::npos);
  RunResult fig2 = run("curve --fig2 --beta-grid=-1:1:3");
  CHECK(fig2.code == 0);
  CHECK(fig2.out.find("2,3;3,5;5,7;7,11;11,2") != std::string::npos);
}

TEST_CASE("an r grid emits one block per bias value") {
  RunResult r = run("curve --gens 2 --r-grid 0.3:0.7:3 --beta-grid=0:1:3");
  CHECK(r.code == 0);
  auto rows = csv_rows(r.out);
  CHECK(rows.size() == 9);
  int headers = 0;
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# r=", 0) == 0) ++headers;
  CHECK(headers == 3);
}

TEST_CASE("rate output carries x, I, eta columns") {
  RunResult r = run("rate --gens 2 --r 0.5 --x-grid=-0.5:0.5:5 --tol 1e-9");
  CHECK(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[2][0] == doctest::Approx(0.0));
  CHECK(rows[2][1] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rows[0][1] == doctest::Approx(rows[4][1]).epsilon(1e-8));
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  RunResult a = run("sample --gens 2 --box 8 --beta 0.7 --seed 99 --count 5");
  RunResult b = run("sample --gens 2 --box 8 --beta 0.7 --seed 99 --count 5");
  RunResult c = run("sample --gens 2 --box 8 --beta 0.7 --seed 100 --count 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("gibbs probabilities from an event file") {
  const std::string ev = "/tmp/multising_cli_event.json";
  {
    std::ofstream out(ev);
    out << R"({"sites": [[1],[2],[4]], "values": [1,1,1]})";
  }
  RunResult r = run("gibbs --gens 2 --event-file " + ev +
                    " --beta 0.8 --box 4 --m 3 --format json");
  CHECK(r.code == 0);
  // limit value is q^2/2 with q = 1/(1+e^{-1.6})
  double q = 1.0 / (1.0 + std::exp(-1.6));
  CHECK(r.out.find("limit_probability") != std::string::npos);
  double val = std::stod(r.out.substr(r.out.find("limit_probability") + 19));
  CHECK(val == doctest::Approx(0.5 * q * q).epsilon(1e-12));
  CHECK(r.out.find("multiplication_invariance_gap") != std::string::npos);
  std::remove(ev.c_str());
}

TEST_CASE("specs load from JSON files") {
  const std::string sp = "/tmp/multising_cli_spec.json";
  {
    std::ofstream out(sp);
    out << R"({"d": 2, "generators": [[2,3],[3,5]], "direction": 1})";
  }
  RunResult r = run("free-energy --spec-file " + sp + " --r 0.5 --beta 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("# generators=2,3;3,5") != std::string::npos);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][1] == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-9));
  std::remove(sp.c_str());
}

TEST_CASE("census export lists length counts") {
  RunResult r = run("decompose --gens 2 --box 8 --census");
  CHECK(r.code == 0);
  CHECK(r.out.find("M_index,count") != std::string::npos);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);  // lengths 1, 2, 4
  CHECK(rows[0][0] == 1);
  CHECK(rows[0][1] == 2);
  RunResult chains = run("decompose --gens 2 --box 8");
  CHECK(chains.out.find("root,length") != std::string::npos);
}

TEST_CASE("verify command reports a passing table") {
  RunResult r = run("verify --max-sites 16");
  CHECK(r.code == 0);
  CHECK(r.out.find("all cross-checks passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("json mirror parses and matches the csv value") {
  RunResult j = run("free-energy --gens 2 --r 0.3 --beta 1 --format json");
  CHECK(j.code == 0);
  CHECK(j.out.find("\"F\"") != std::string::npos);
  CHECK(j.out.find("truncation_K") != std::string::npos);
  RunResult c = run("free-energy --gens 2 --r 0.3 --beta 1");
  auto rows = csv_rows(c.out);
  REQUIRE(rows.size() == 1);
  // the JSON document carries the same value
  std::string key = "\"F\": ";
  double jf = std::stod(j.out.substr(j.out.find(key) + key.size()));
  CHECK(jf == doctest::Approx(rows[0][1]).epsilon(1e-15));
}

TEST_CASE("entropy curves via the closed geometric form") {
  RunResult r = run("ks-entropy --p 6 --beta-grid=0:2:3");
  CHECK(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(rows[2][1] < rows[0][1]);  // entropy decreases with beta
  RunResult d = run("ks-entropy --gens 2,3 --beta-grid=0:1:2");
  CHECK(d.code == 0);
  auto drows = csv_rows(d.out);
  REQUIRE(drows.size() == 2);
  CHECK(drows[0][1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
