#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(HOOKAMP_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

json parse_report(const std::string& text) {
  const json j = json::parse(text);
  CHECK(j.at("schema") == "hookamp/1");
  CHECK(j.contains("config_hash"));
  CHECK(j.contains("timestamp"));
  return j;
}

std::string tmp_path(const std::string& name) {
  return std::string(HOOKAMP_TEST_TMP_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("compute command pinned values") {
  auto r = run_cli("compute --n 2 --t 3 --radii 1,1 --weights 1,1");
  CHECK(r.exit_code == 0);
  auto j = parse_report(r.out);
  CHECK(std::abs(j["result"]["m_t"].get<double>() - 5.0) < 1e-12);
  CHECK(std::abs(j["result"]["bounds"]["refined"].get<double>() - 9.0) < 1e-12);
  CHECK(std::abs(j["result"]["bounds"]["crude"].get<double>() - 7.5) < 1e-12);

  r = run_cli("compute --n 2 --t 2 --radii 1,1 --weights 1,1");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(json::parse(r.out)["result"]["m_t"].get<double>() - 3.0) < 1e-12);

  r = run_cli("compute --n 1 --t 5 --radii 0.5 --weights 1");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(json::parse(r.out)["result"]["m_t"].get<double>() - 0.03125) < 1e-15);
}

TEST_CASE("exit code contract") {
  // range guard violation -> 1
  CHECK(run_cli("compute --n 20 --t 25 --radii "
                "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1 --weights "
                "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1").exit_code == 1);
  // bad precondition (t < n) -> 1
  CHECK(run_cli("compute --n 2 --t 1 --radii 1,1 --weights 1,1").exit_code == 1);
  // unknown conjecture -> 1
  CHECK(run_cli("scan --conjecture nonsense --n 2").exit_code == 1);
  // --unsafe-range lifts the guard
  CHECK(run_cli("compute --n 2 --t 70 --radii 0.5,0.5 --weights 1,1 --unsafe-range").exit_code ==
        0);
}

TEST_CASE("verify command") {
  const auto r = run_cli(
      "verify --n 2 --t 3 --radii 1,1 --weights 1,1 --phase-grid 32 --radial-grid 2 "
      "--trials 200 --seed 9");
  CHECK(r.exit_code == 0);
  const auto j = parse_report(r.out);
  CHECK(j["result"]["ok"].get<bool>());
  CHECK(std::abs(j["result"]["closed_form"].get<double>() - 5.0) < 1e-12);
  CHECK(j["result"]["gap"].get<double>() >= -1e-9);
}

TEST_CASE("scan command variants") {
  auto r = run_cli("scan --conjecture t-equals-n --n 4 --trials 50 --seed 3");
  CHECK(r.exit_code == 0);
  auto j = parse_report(r.out);
  for (const auto& rep : j["result"])
    CHECK(std::abs(rep["max_abs_q"].get<double>() - 1.0) < 1e-12);

  r = run_cli("scan --conjecture pointwise-z1 --n 2 --t 3 --k 0 --trials 200 --seed 7 "
              "--counterexample-log " + tmp_path("ce.ndjson"));
  CHECK(r.exit_code == 0);
  j = parse_report(r.out);
  CHECK(j["result"].size() == 1);
  CHECK(j["result"][0]["max_abs_q"].get<double>() <= 1.0 + 1e-7);

  // a scan that finds exceedances exits 3 and appends NDJSON records
  const std::string ce_log = tmp_path("ce_records.ndjson");
  std::remove(ce_log.c_str());
  r = run_cli("scan --conjecture pointwise-z1 --n 2 --t 5 --k 1 --trials 500 --seed 97 "
              "--counterexample-log " + ce_log);
  CHECK(r.exit_code == 3);
  {
    std::ifstream log(ce_log);
    REQUIRE(log.good());
    std::string line;
    int records = 0;
    while (std::getline(log, line)) {
      if (line.empty()) continue;
      const json rec = json::parse(line);
      CHECK(rec["abs_q"].get<double>() > 1.0 + 1e-7);
      CHECK(rec.contains("nodes"));
      CHECK(rec.contains("seed"));
      ++records;
    }
    CHECK(records > 0);
  }

  r = run_cli("scan --conjecture special-np1 --n 2 --k 0 --trials 100 --seed 11");
  CHECK(r.exit_code == 0);
  j = parse_report(r.out);
  CHECK(j["result"]["violations"].get<long long>() == 0);

  r = run_cli("scan --conjecture uniform --n 2 --k 1 --t-max 20 --trials 3 --seed 5 "
              "--z-grid 401");
  CHECK(r.exit_code == 0);

  r = run_cli("scan --conjecture kallioniemi --n 2 --k 0 --trials 2 --seed 5 --z-grid 101");
  CHECK(r.exit_code == 0);
  j = parse_report(r.out);
  for (const auto& est : j["result"]) CHECK(est["full_membership"].get<bool>());
}

TEST_CASE("kallioniemi CSV membership table") {
  const std::string path = tmp_path("kall.csv");
  const auto r = run_cli("scan --conjecture kallioniemi --n 2 --k 1 --trials 1 --seed 2 "
                         "--z-grid 51 --format csv --output " + path);
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "grid,z,member");
  int lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 51);

  // CSV is not available for structured scan output
  CHECK(run_cli("scan --conjecture pointwise-z1 --n 2 --t 3 --format csv").exit_code == 1);
}

TEST_CASE("trajectory CSV export") {
  const std::string path = tmp_path("traj.csv");
  const auto r = run_cli("compute --n 2 --t 3 --radii 1,1 --weights 1,1 --trajectory-out " + path);
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,re,im,abs");
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  REQUIRE(rows.size() == 4);  // x_0..x_3
  // the extremal trajectory reaches |x_3| = 5
  CHECK(rows.back().find(",5") != std::string::npos);
}

TEST_CASE("reproducibility and seed override") {
  const auto a = run_cli("verify --n 2 --t 2 --radii 1,0.5 --weights 1,1 --phase-grid 16 "
                         "--radial-grid 2 --trials 100 --seed 21");
  const auto b = run_cli("verify --n 2 --t 2 --radii 1,0.5 --weights 1,1 --phase-grid 16 "
                         "--radial-grid 2 --trials 100 --seed 21");
  json ja = json::parse(a.out), jb = json::parse(b.out);
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja.dump() == jb.dump());

  // HOOKAMP_SEED overrides --seed
  const auto c = run_cli("verify --n 1 --t 2 --radii 1 --weights 1 --seed 21",
                         "HOOKAMP_SEED=99");
  CHECK(json::parse(c.out)["seed"].get<std::uint64_t>() == 99);
}

TEST_CASE("reinhardt command") {
  const std::string path = tmp_path("domain.json");
  {
    std::ofstream out(path);
    out << R"({"n":2,"t":4,"vertices":[[0.0,0.0],[-0.5,-0.5]],)"
        << R"("init_oracle":{"kind":"polydisc","bounds":[1.0,1.0]}})";
  }
  const auto r = run_cli("reinhardt --domain " + path);
  CHECK(r.exit_code == 0);
  const auto j = parse_report(r.out);
  // the all-ones vertex dominates; its value is the t=4 hook-count sum 3+4=7
  CHECK(j["result"]["argmax_vertex_index"].get<int>() == 0);
  CHECK(std::abs(j["result"]["value"].get<double>() - 7.0) < 1e-12);

  CHECK(run_cli("reinhardt --domain /nonexistent.json").exit_code == 1);
}

TEST_CASE("selftest runs clean") {
  CHECK(run_cli("selftest").exit_code == 0);
  CHECK(run_cli("--version").out.find("hookamp") != std::string::npos);
}
