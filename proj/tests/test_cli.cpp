#include <sstream>

#include "doctest.h"
#include "dbird/cli.hpp"
#include "dbird/io.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace dbird;
using namespace dbird::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dbird");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

void simulate_small(const TempDir& dir, const std::string& students = "4",
                    const std::string& times = "3") {
  const auto r = run_cli({"simulate", "--students", students, "--times", times,
                          "--items-per-session", "2", "--seed", "7", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("simulate") {
  TempDir dir;
  SUBCASE("tiny cohort") {
    const auto r = run_cli({"simulate", "--students", "2", "--times", "2", "--items-per-session",
                            "1", "--out", dir.path().string()});
    REQUIRE(r.code == 0);
    CHECK(count_lines(read_text(dir / "responses.csv")) == 5);
    CHECK(count_lines(read_text(dir / "truth_theta.csv")) == 5);
    CHECK(count_lines(read_text(dir / "truth_mu.csv")) == 3);
  }
  SUBCASE("paper preset") {
    REQUIRE(run_cli({"simulate", "--preset", "paper-sim", "--out", dir.path().string()}).code == 0);
    CHECK(count_lines(read_text(dir / "responses.csv")) == 150001);
  }
  SUBCASE("usage errors") {
    CHECK(run_cli({"simulate"}).code == 2);
    CHECK(run_cli({"simulate", "--preset", "huge", "--out", dir.path().string()}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
  }
  SUBCASE("manifest hashes match the files") {
    simulate_small(dir);
    const auto m = nlohmann::json::parse(read_text(dir / "manifest.json"));
    CHECK(m["seed"] == 7);
    CHECK(m["outputs"].size() == 5);
    for (const auto& [name, hash] : m["hashes"].items()) {
      CHECK(io::sha256_file(dir / name) == hash.get<std::string>());
    }
  }
  SUBCASE("seed from the environment") {
    ::setenv("DBIRD_SEED", "7", 1);
    REQUIRE(run_cli({"simulate", "--students", "4", "--times", "3", "--items-per-session", "2",
                     "--out", (dir / "env").string()})
                .code == 0);
    ::unsetenv("DBIRD_SEED");
    simulate_small(dir);
    CHECK(read_text(dir / "env" / "responses.csv") == read_text(dir / "responses.csv"));
  }
}

TEST_CASE("fit") {
  TempDir dir;
  simulate_small(dir);
  const std::vector<std::string> base{"fit", dir.path().string(), "--burn", "20", "--keep", "30",
                                      "--seed", "3"};
  SUBCASE("deterministic outputs") {
    auto args = base;
    args.insert(args.end(), {"--out", (dir / "a").string(), "--emit-draws"});
    REQUIRE(run_cli(args).code == 0);
    args[args.size() - 2] = (dir / "b").string();
    REQUIRE(run_cli(args).code == 0);
    for (const char* f : {"theta_summary.csv", "mu_summary.csv", "variances_summary.csv", "draws.jsonl"}) {
      CAPTURE(f);
      CHECK(read_text(dir / "a" / f) == read_text(dir / "b" / f));
    }
    const auto theta = read_text(dir / "a" / "theta_summary.csv");
    CHECK(theta.rfind("student,time,mean,sd,q025,q975\n", 0) == 0);
    CHECK(count_lines(theta) == 13);
    CHECK(count_lines(read_text(dir / "a" / "draws.jsonl")) == 30);
  }
  SUBCASE("baselines have no cohort summary") {
    auto args = base;
    args.insert(args.end(), {"--model", "global-rw"});
    REQUIRE(run_cli(args).code == 0);
    CHECK(std::filesystem::exists(dir / "theta_summary.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "mu_summary.csv"));
  }
  SUBCASE("single time point") {
    TempDir one;
    simulate_small(one, "4", "1");
    const auto r = run_cli({"fit", one.path().string(), "--burn", "2", "--keep", "2"});
    CHECK(r.code == 3);
    CHECK(r.err.find("T >= 2") != std::string::npos);
  }
  SUBCASE("bad arguments") {
    auto args = base;
    args.insert(args.end(), {"--model", "static"});
    CHECK(run_cli(args).code == 2);
    CHECK(run_cli({"fit", (dir / "missing").string()}).code == 3);
  }
}

TEST_CASE("evaluate") {
  TempDir dir;
  write_text(dir / "truth.csv", "student,time,theta\ns0,0,0.5\ns0,1,-0.25\n");
  SUBCASE("zero-width intervals at the truth") {
    write_text(dir / "summary.csv",
               "student,time,mean,sd,q025,q975\ns0,1,-0.25,0,-0.25,-0.25\ns0,0,0.5,0,0.5,0.5\n");
    const auto r = run_cli({"evaluate", "--truth", (dir / "truth.csv").string(), "--summary",
                            (dir / "summary.csv").string(), "--out", dir.path().string()});
    REQUIRE(r.code == 0);
    const auto m = nlohmann::json::parse(read_text(dir / "metrics.json"));
    CHECK(m["mse"] == 0.0);
    CHECK(m["ec"] == 1.0);
    CHECK(m["mciw"] == 0.0);
  }
  SUBCASE("mismatched cells") {
    write_text(dir / "summary.csv", "student,time,mean,sd,q025,q975\ns0,0,0.5,0,0.5,0.5\n");
    CHECK(run_cli({"evaluate", "--truth", (dir / "truth.csv").string(), "--summary",
                   (dir / "summary.csv").string()})
              .code == 3);
  }
}

TEST_CASE("static-map") {
  TempDir dir;
  write_text(dir / "items.csv", "item_id,difficulty\na,0\nb,0\nc,1\n");
  write_text(dir / "responses.csv",
             "student_id,time,item_id,correct,quiz\n"
             "s,0,a,1,q1\ns,0,b,0,q2\ns,0,c,1,q2\nt,1,a,1,q3\n");
  SUBCASE("one assessment per cell") {
    REQUIRE(run_cli({"static-map", dir.path().string()}).code == 0);
    const auto csv = read_text(dir / "static_map.csv");
    CHECK(count_lines(csv) == 5);
    CHECK(csv.find("t,0,0,0\n") != std::string::npos);
  }
  SUBCASE("grouped assessments") {
    REQUIRE(run_cli({"static-map", dir.path().string(), "--group-column", "quiz"}).code == 0);
    const auto table = io::read_csv(dir / "static_map.csv");
    REQUIRE(table.rows.size() == 3);
    CHECK(std::stod(table.rows[0][table.column("theta_map")]) ==
          doctest::Approx(2.294).epsilon(1e-3));
    CHECK(table.rows[1][table.column("n_items")] == "2");
  }
  SUBCASE("unknown group column") {
    CHECK(run_cli({"static-map", dir.path().string(), "--group-column", "nope"}).code == 3);
  }
}

TEST_CASE("replicate") {
  TempDir dir;
  const auto r = run_cli({"replicate", "--reps", "1", "--burn", "5", "--keep", "5", "--out",
                          dir.path().string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find("(0.000)") != std::string::npos);
  const auto j = nlohmann::json::parse(read_text(dir / "report.json"));
  CHECK(j["sd_undefined"] == true);
  CHECK(j["models"].size() == 3);
  CHECK(run_cli({"replicate", "--preset", "tiny"}).code == 2);
}
