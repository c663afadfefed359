#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DIRAC8_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) v.push_back(line);
  return v;
}

// Drops the leading comment line and parses the rest.
nlohmann::json body(const std::string& s) {
  REQUIRE(s.rfind("# ", 0) == 0);
  return nlohmann::json::parse(s.substr(s.find('\n') + 1));
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> v;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) v.push_back(std::stod(cell));
  return v;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2, help exits 0") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run("dispersion --pmax -1").code == 2);
  CHECK(run("dispersion --n 1").code == 2);
  CHECK(run("verify --corrupt bogus").code == 2);
  CHECK(run("evolve --method euler").code == 2);
}

TEST_CASE("cli: dispersion table") {
  const auto r = run("dispersion");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 123);
  CHECK(ls[0] == "# units=natural m_e=1 c=1 hbar=1 epsilon=0.5");
  CHECK(ls[1] == "p_z,E_acoustic_plus,E_acoustic_minus,E_optical_plus,E_optical_minus");
  double prev = -1.0;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto row = split_doubles(ls[i]);
    REQUIRE(row.size() == 5);
    CHECK(row[1] == row[0]);
    CHECK(row[2] == -row[0]);
    CHECK(row[3] > prev);
    CHECK(row[4] == -row[3]);
    prev = row[3];
  }
  CHECK(std::abs(split_doubles(ls[2])[3] - std::sqrt(1.25)) < 1e-12);

  const auto zero = lines(run("dispersion --epsilon 0").out);
  CHECK(split_doubles(zero[2])[3] == 1.0);
}

TEST_CASE("cli: output is byte-identical across runs") {
  CHECK(run("dispersion --epsilon 0.5 --epsilon 1").out == run("dispersion --epsilon 0.5 --epsilon 1").out);
  CHECK(run("solutions").out == run("solutions").out);
  CHECK(run("verify --quick --format json").out == run("verify --quick --format json").out);
}

TEST_CASE("cli: dispersion json") {
  const auto r = run("dispersion --format json --n 5");
  REQUIRE(r.code == 0);
  CHECK_NOTHROW(body(r.out));
}

TEST_CASE("cli: solutions") {
  const auto r = run("solutions --pz 1 --epsilon 0.5");
  REQUIRE(r.code == 0);
  const auto j = body(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["determinant"].get<double>() > 1e-8);
  CHECK(j["max_residual"].get<double>() < 1e-10);
  REQUIRE(j["solutions"].size() == 8);
  for (const auto& s : j["solutions"]) {
    const bool up = s["spin"] == "up";
    // spin-up occupies slots 0,2,4,6 and spin-down 1,3,5,7
    for (int i = up ? 1 : 0; i < 8; i += 2) {
      CHECK(s["amplitudes"][i][0] == 0.0);
      CHECK(s["amplitudes"][i][1] == 0.0);
    }
  }
}

TEST_CASE("cli: verify") {
  const auto ok = run("verify --quick");
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("# units=natural", 0) == 0);
  CHECK(ok.out.find("[FAIL]") == std::string::npos);
  const auto herm = run("verify --quick --epsilon 1");
  CHECK(herm.code == 0);
  CHECK(herm.out.find("[PASS] hermitian_at_eps_1") != std::string::npos);
  for (const char* f : {"optical-plus-amplitude", "acoustic-minus-sign", "optical-gap"}) {
    INFO(f);
    CHECK(run(std::string("verify --quick --corrupt ") + f).code == 1);
  }
}

TEST_CASE("cli: evolve") {
  const auto plus = run("evolve --branch optical+ --k0 1");
  REQUIRE(plus.code == 0);
  const auto jp = body(plus.out);
  CHECK(std::abs(jp["group_velocity_measured"].get<double>() - 2.0 / 3.0) < 0.01 * 2.0 / 3.0);

  const auto minus = body(run("evolve --branch optical- --k0 1").out);
  CHECK(std::abs(minus["group_velocity_measured"].get<double>() + 2.0 / 3.0) < 0.01 * 2.0 / 3.0);

  const auto ac = body(run("evolve --branch acoustic+").out);
  CHECK(std::abs(ac["group_velocity_measured"].get<double>() - 1.0) < 1e-3);

  CHECK(run("evolve --sigma 0.5").code == 1);
}

TEST_CASE("cli: evolve writes snapshot and time series") {
  const std::string snap = "cli_test_snapshot.csv";
  const std::string ts = "cli_test_timeseries.csv";
  REQUIRE(run("evolve --n 256 --L 100 --t-end 15 --samples 21 --snapshot " + snap + " --timeseries " + ts).code == 0);
  std::ifstream s(snap);
  std::string line;
  std::getline(s, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(s, line);
  CHECK(line == "z,|Psi_1|^2,|Psi_3|^2,|Phi_1|^2,|Phi_3|^2");
  std::ifstream t(ts);
  std::getline(t, line);
  std::getline(t, line);
  CHECK(line == "t,centroid,width");
  std::remove(snap.c_str());
  std::remove(ts.c_str());
}

TEST_CASE("cli: chain") {
  const auto r = run("chain");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# units=chain", 0) == 0);
  const auto j = body(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["relative_error"].get<double>() < 1e-4);
  CHECK(std::abs(j["convergence"]["acoustic_exponent"].get<double>() - 2.0) < 0.2);
  CHECK(run("chain --dt 5").code == 1);
}
