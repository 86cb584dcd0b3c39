#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "exactsub");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = exactsub::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string data(const std::string& name) { return (std::filesystem::path(EXACTSUB_TEST_DATA) / name).string(); }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("exactsub_cli_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("theta on Paley61 agrees in both formulations") {
  const Outcome r = run_cli({"theta", "--gen", "paley:61", "--no-time"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(r.out.rfind("name,n,m,formulation,k_or_J,bound,alpha,solve_s,iters,status\n", 0) == 0);
  for (std::size_t i = 1; i < 3; ++i) {
    REQUIRE(rows[i].size() == 10);
    CHECK(rows[i][0] == "Paley61");
    CHECK(rows[i][1] == "61");
    CHECK(rows[i][2] == "915");
    CHECK(std::abs(std::stod(rows[i][5]) - 7.8102) <= 1e-3);
    CHECK(rows[i][6] == "5");
    CHECK(rows[i][7] == "0.000");
    CHECK(rows[i][9] == "optimal");
  }
  CHECK(rows[1][3] == "theta_n+1");
  CHECK(rows[2][3] == "theta_n");
}

TEST_CASE("facet counts") {
  const Outcome r = run_cli({"facets", "--k", "4", "--no-time"});
  CHECK(r.code == 0);
  CHECK(r.out.find("56 facets") != std::string::npos);
  const Outcome csv = run_cli({"facets", "--format", "csv", "--no-time"});
  CHECK(csv.out == "k,facets,solve_s\n2,4,0.000\n3,16,0.000\n4,56,0.000\n5,368,0.000\n");
  CHECK(run_cli({"facets", "--k", "6"}).code == 1);
  CHECK(run_cli({"facets", "--k", "7"}).code == 1);

  const auto ieq = scratch("k3.ieq");
  CHECK(run_cli({"facets", "--k", "3", "--ieq", ieq.string()}).code == 0);
  std::ifstream in(ieq);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("DIM = 6\n", 0) == 0);
  std::filesystem::remove(ieq);
}

TEST_CASE("compare orders the three formulations") {
  const Outcome r = run_cli({"compare", "--gen", "er:12:0.4:7", "--k", "3", "--all-subsets", "--no-time"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][3] == "ESH");
  CHECK(rows[2][3] == "CESH");
  CHECK(rows[3][3] == "SESH");
  CHECK(rows[1][4] == "k=3");
  const double e = std::stod(rows[1][5]), c = std::stod(rows[2][5]), s = std::stod(rows[3][5]);
  CHECK(e <= c + 1e-6);
  CHECK(std::abs(s - c) <= 1e-5);
}

TEST_CASE("bound with explicit subsets, SDPA export and json output") {
  const auto sdpa = scratch("c5.dat-s");
  const Outcome r = run_cli({"bound", "--gen", "cycle:5", "--subsets", "1,2,3,4,5", "--formulation", "cesh",
                             "--format", "json", "--no-time", "--sdpa", sdpa.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["formulation"] == "CESH");
  CHECK(j[0]["k_or_J"] == "J=1");
  CHECK(std::abs(j[0]["bound"].get<double>() - 2.0) <= 1e-5);
  CHECK(j[0]["alpha"] == 2);
  CHECK(j[0]["solve_s"] == 0.0);
  CHECK(std::filesystem::file_size(sdpa) > 0);
  std::filesystem::remove(sdpa);

  const Outcome random = run_cli({"bound", "--gen", "er:10:0.3:2", "--k", "3", "--random", "5", "--no-time"});
  CHECK(random.code == 0);
  CHECK(csv_rows(random.out)[1][4] == "k=3;J=5");
}

TEST_CASE("levels, search trajectory and alpha") {
  const Outcome lv = run_cli({"level", "--gen", "cycle:7", "--k", "0", "--k", "7", "--no-time", "--no-alpha"});
  REQUIRE(lv.code == 0);
  const auto rows = csv_rows(lv.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][4] == "k=0");
  CHECK(rows[1][6] == "");
  CHECK(std::abs(std::stod(rows[2][5]) - 3.0) <= 1e-5);

  const auto traj = scratch("trajectory.csv");
  const Outcome s = run_cli({"search", "--gen", "cycle:5", "--k", "5", "--rounds", "1", "--no-time", "--trajectory",
                             traj.string()});
  REQUIRE(s.code == 0);
  CHECK(csv_rows(s.out)[1][4] == "k=5;J=1");
  std::ifstream in(traj);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() ==
        "round,formulation,bound,escs_added,escs_total,solve_seconds\n"
        "0,ESH,2.236068,0,0,0.000\n"
        "1,ESH,2.000000,1,1,0.000\n");
  std::filesystem::remove(traj);

  const Outcome a = run_cli({"alpha", "--gen", "hamming64", "--no-time"});
  REQUIRE(a.code == 0);
  CHECK(csv_rows(a.out)[1][6] == "4");
}

TEST_CASE("file input, batch files and --out") {
  const Outcome file = run_cli({"theta", "--input", data("petersen.col"), "--no-time"});
  REQUIRE(file.code == 0);
  CHECK(std::abs(std::stod(csv_rows(file.out)[1][5]) - 4.0) <= 1e-5);

  const Outcome warn = run_cli({"alpha", "--input", data("mismatch.col")});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning") != std::string::npos);

  const auto batch = scratch("batch.txt");
  {
    std::ofstream b(batch);
    b << "# two graphs\ncycle:5\n\n" << data("wheel6.json") << "\n";
  }
  const auto out = scratch("batch.csv");
  const Outcome r = run_cli({"theta", "--batch", batch.string(), "--no-time", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  const auto rows = csv_rows(text.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[1][0] == "C5");
  CHECK(rows[3][0] == "wheel6");
  std::filesystem::remove(batch);
  std::filesystem::remove(out);
}

TEST_CASE("identical commands print identical bytes") {
  const std::vector<std::string> cmd{"search", "--gen", "er:14:0.3:3", "--k", "3", "--rounds", "2",
                                     "--max-per-round", "15", "--seed", "5", "--no-time"};
  const Outcome a = run_cli(cmd);
  const Outcome b = run_cli(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("exit codes for usage errors") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"theta"}).code == 1);
  CHECK(run_cli({"theta", "--gen", "paley:7"}).code == 1);
  CHECK(run_cli({"theta", "--gen", "nosuch:3"}).code == 1);
  CHECK(run_cli({"theta", "--gen", "cycle:5", "--input", data("petersen.col")}).code == 1);
  CHECK(run_cli({"theta", "--input", data("missing.col")}).code == 1);
  CHECK(run_cli({"bound", "--gen", "cycle:5", "--subsets", "1,9"}).code == 1);
  CHECK(run_cli({"bound", "--gen", "cycle:5", "--k", "2", "--formulation", "xsh"}).code == 1);
  CHECK(run_cli({"bound", "--gen", "cycle:5", "--k", "2", "--format", "xml"}).code == 1);
  CHECK(run_cli({"level", "--gen", "paley:61", "--k", "5"}).code == 1);
  CHECK(run_cli({"bound", "--gen", "cycle:7", "--subsets", "1,2,3,4,5,6", "--mode", "facets"}).code == 1);
  const Outcome e = run_cli({"theta", "--gen", "paley:9"});
  CHECK(e.err.rfind("error: ", 0) == 0);
}

TEST_CASE("solver failures exit with 2") {
  CHECK(run_cli({"theta", "--gen", "cycle:9", "--max-iter", "2"}).code == 2);
}

}  // TEST_SUITE
