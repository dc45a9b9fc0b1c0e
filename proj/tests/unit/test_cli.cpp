#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "emden/csv.hpp"
#include "emden/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "emden-glue");
  std::vector<char*> argv;
  for (std::string& a : args) {
    argv.push_back(a.data());
  }
  std::ostringstream out, err;
  const int code = emden::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("emden_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read(const fs::path& path) { return json::parse(slurp(path)); }

fs::path write_radial_config(const fs::path& dir) {
  const json cfg = json::parse(R"({
    "problem": {"N": 3, "p": 4},
    "spec": {"points": [[0, 0, 0]], "epsilons": [0.05], "R": 0.25},
    "disc": {"mode": "radial1d", "grid_n": 2001}
  })");
  std::ofstream(dir / "run.json") << cfg.dump(2);
  return dir / "run.json";
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const Outcome none = run({});
  CHECK(none.code == 2);
  const Outcome missing = run({"radial", "--N", "5"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--p") != std::string::npos);
  CHECK(missing.err.find("Usage") != std::string::npos);
  const Outcome super = run({"radial", "--N", "5", "--p", "2.4", "--out", fresh("super").string()});
  CHECK(super.code == 2);
  CHECK(super.err.find("SupercriticalExponent") != std::string::npos);
  CHECK(run({"radial", "--N", "2", "--p", "3"}).code == 2);
  CHECK(run({"solve", "--config", "/nonexistent/run.json"}).code == 2);
  const Outcome version = run({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find(emden::kVersionString) != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("radial and indicial") {
  const fs::path dir = fresh("radial");
  const Outcome r = run({"radial", "--N", "5", "--p", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("v_inf = 2,") != std::string::npos);
  const json rep = read(dir / "profile_report.json");
  CHECK(rep["v_inf"] == 2.0);
  CHECK(rep["A_p"] == 4.0);
  CHECK(rep["status"] == "ok");
  CHECK(rep["tail_slope"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
  for (const char* key : {"command", "version", "git_describe", "config", "tolerances"}) {
    CHECK(rep.contains(key));
  }
  const emden::CsvTable prof = emden::read_csv(dir / "profile.csv");
  CHECK(prof.header == std::vector<std::string>{"t", "v", "v_prime"});
  CHECK(prof.rows.size() > 100);
  const emden::CsvTable u1 = emden::read_csv(dir / "u1.csv");
  CHECK(u1.header == std::vector<std::string>{"r", "u1", "u1_prime"});

  const Outcome ind = run({"indicial", "--N", "5", "--p", "2", "--out", dir.string()});
  CHECK(ind.code == 0);
  CHECK(fs::exists(dir / "indicial.csv"));
  CHECK(read(dir / "indicial_report.json")["status"] == "ok");
}

TEST_CASE("a0map") {
  const fs::path dir = fresh("a0map");
  const Outcome r = run({"a0map", "--N", "5", "--p-grid", "1.8:2.2:5", "--E-grid", "0,0.5,1,2,5,10", "--out",
                         dir.string()});
  CHECK(r.code == 0);
  std::istringstream csv(slurp(dir / "a0map.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "p,E,a0,fit_residual,status");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[2]) > 0.0);
    CHECK(cells[4] != "invalid");
    ++rows;
  }
  CHECK(rows == 30);
  CHECK(read(dir / "a0map_report.json")["all_positive"] == true);

  const fs::path again = fresh("a0map_again");
  run({"a0map", "--N", "5", "--p-grid", "1.8:2.2:5", "--E-grid", "0,0.5,1,2,5,10", "--out", again.string()});
  CHECK(slurp(dir / "a0map.csv") == slurp(again / "a0map.csv"));

  CHECK(run({"a0map", "--N", "5", "--p-grid", "1.8:2.2", "--out", dir.string()}).code == 2);
  CHECK(run({"a0map", "--N", "5", "--E-grid", "0,-1", "--out", dir.string()}).code == 2);
}

TEST_CASE("approx") {
  const fs::path dir = fresh("approx");
  const fs::path cfg = write_radial_config(dir);
  const Outcome r = run({"approx", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "ubar.csv"));
  const emden::CsvTable sc = emden::read_csv(dir / "scaling.csv");
  CHECK(sc.rows.size() == 3);
  const json rep = read(dir / "approx_report.json");
  CHECK(rep["status"] == "ok");
}

TEST_CASE("solve, verify and tampering") {
  const fs::path dir = fresh("solve");
  const fs::path cfg = write_radial_config(dir);
  const Outcome s = run({"solve", "--config", cfg.string(), "--out", dir.string()});
  CHECK(s.code == 0);
  const json rep = read(dir / "report.json");
  CHECK(rep["converged"] == true);
  CHECK(rep["status"] == "ok");
  CHECK(rep["ledger"]["passed"] == true);
  CHECK(rep["tolerances"].contains("cg_tol"));
  CHECK(fs::exists(dir / "trace.csv"));

  const Outcome v = run({"verify", "--report", (dir / "report.json").string()});
  CHECK(v.code == 0);
  CHECK(read(dir / "verify.json")["status"] == "ok");

  // byte-identical outputs for an identical config
  const fs::path twin = fresh("solve_twin");
  CHECK(run({"solve", "--config", cfg.string(), "--out", twin.string()}).code == 0);
  CHECK(slurp(dir / "solution.csv") == slurp(twin / "solution.csv"));
  CHECK(slurp(dir / "trace.csv") == slurp(twin / "trace.csv"));

  // scale the field near the singular point
  emden::CsvTable t = emden::read_csv(twin / "solution.csv");
  const std::size_t cu = t.column("u");
  for (std::size_t k = 0; k < 50; ++k) {
    t.rows[k][cu] *= 3.0;
  }
  {
    emden::CsvWriter w(twin / "solution.csv", t.header);
    for (const auto& row : t.rows) {
      w.row(row);
    }
    w.close();
  }
  const Outcome tampered = run({"verify", "--report", (twin / "report.json").string()});
  CHECK(tampered.code == 3);
  CHECK(tampered.err.find("failed check: ") != std::string::npos);
  CHECK(read(twin / "verify.json")["status"] == "failed");

  // dropping rows breaks the layout check
  t.rows.pop_back();
  {
    emden::CsvWriter w(twin / "solution.csv", t.header);
    for (const auto& row : t.rows) {
      w.row(row);
    }
    w.close();
  }
  const Outcome truncated = run({"verify", "--report", (twin / "report.json").string()});
  CHECK(truncated.code == 3);
  CHECK(truncated.err.find("failed check: layout") != std::string::npos);
}

TEST_CASE("solve reports a failed run with exit 3 and status failed") {
  const fs::path dir = fresh("solve_fail");
  const json cfg = json::parse(R"({
    "problem": {"N": 3, "p": 4},
    "spec": {"points": [[0, 0, 0]], "epsilons": [0.05], "R": 0.25},
    "disc": {"grid_n": 1001},
    "picard": {"max_iter": 2}
  })");
  std::ofstream(dir / "run.json") << cfg.dump();
  const Outcome s = run({"solve", "--config", (dir / "run.json").string(), "--out", dir.string()});
  CHECK(s.code == 3);
  const json rep = read(dir / "report.json");
  CHECK(rep["status"] == "failed");
  CHECK(rep["converged"] == false);
  CHECK(rep["error"].get<std::string>().find("MaxIterations") != std::string::npos);
  CHECK(fs::exists(dir / "solution.csv"));

  std::ofstream(dir / "bad.json") << R"({"problem": {"N": 3, "p": 4}, "spec": {"points": [[0,0,0]], "epsilons": [0.05], "R": 0.25}, "extra": 1})";
  const Outcome bad = run({"solve", "--config", (dir / "bad.json").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("config.extra") != std::string::npos);
}
