#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hbinterp/cli.hpp"
#include "hbinterp/core.hpp"
#include "hbinterp/json_io.hpp"

using namespace hbinterp;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("hbtool_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Json report(const std::string& name) const { return Json::parse(read(name)); }
};

int run(std::vector<std::string> args) { return cli::run(args); }

// b = (1 - z)^2 / 4 and its mate, written to pair.json.
void make_pair(const Workspace& w) {
  w.write("b.json", R"({"num": [[0.25, 0], [-0.5, 0], [0.25, 0]], "den": [[1, 0]]})");
  REQUIRE(run({"mate", "--b", w.path("b.json"), "--out", w.path("pair.json")}) == 0);
}

}  // namespace

TEST_CASE("mate on the worked example") {
  Workspace w;
  make_pair(w);
  const Json r = w.report("pair.json");
  io::validate_report("mate", r);
  const RationalPair pair = io::pair_from_json(r["pair"]);
  REQUIRE(pair.zeros.size() == 1);
  CHECK(std::abs(pair.zeros[0].zeta.value() - Complex(-1.0)) < 1e-9);
  CHECK(pair.zeros[0].multiplicity == 1);
  CHECK(r["verification"]["max_residual"].get<double>() < 1e-10);
  CHECK(r["verification"]["pass"].get<bool>());
}

TEST_CASE("decide on a singleton is finite-interpolating") {
  Workspace w;
  make_pair(w);
  w.write("seq.json", R"({"points": [[0.3, 0.1]]})");
  REQUIRE(run({"decide", "--pair", w.path("pair.json"), "--seq", w.path("seq.json"), "--out", w.path("d.json")}) == 0);
  const Json r = w.report("d.json");
  io::validate_report("decide", r);
  CHECK(r["verdict"] == "interpolating (finite)");
}

TEST_CASE("simulate in the divergent regime") {
  Workspace w;
  REQUIRE(run({"simulate", "--family", "power:c=1,beta=1", "--M", "1", "--trials", "200", "--truncate", "4096",
               "--seed", "42", "--out", w.path("s.json")}) == 0);
  const Json r = w.report("s.json");
  io::validate_report("simulate", r);
  const auto f = r["exceedance_fraction"].get<std::vector<double>>();
  REQUIRE(f.size() == 3);
  CHECK(f[0] <= f[1]);
  CHECK(f[1] <= f[2]);
  CHECK(r["classification"] == "divergent");
}

TEST_CASE("every report re-parses against its layout") {
  Workspace w;
  make_pair(w);
  const std::string pair = w.path("pair.json");
  const std::string seq = w.write("seq.json", R"({"points": [[0.3, 0], [-0.2, 0.4], [0, 0.5]]})");
  const std::string fam = w.write(
      "fam.json", R"({"family": {"kind": "geometric", "c": 0.5, "q": 0.5, "count": 12, "angles": {"mode": "fixed", "values": [0]}}})");
  const std::string values = w.write("values.json", R"([[1, 0], [0, 0], [0.5, 0.5]])");
  const std::string nodes = w.write("nodes.json", R"({"points": [[0, 0], [0.5, 0]], "targets": [[0, 0], [0.5, 0]]})");
  const std::string f = w.write("f.json", R"({"blaschke": {"points": [[0.5, 0.2]]}})");

  const std::vector<std::pair<std::string, std::vector<std::string>>> jobs = {
      {"mate", {"--b", w.path("b.json")}},
      {"verify-pair", {"--pair", pair}},
      {"decide", {"--pair", pair, "--seq", fam}},
      {"carleson", {"--seq", seq}},
      {"dnorm", {"--f", f, "--zeta", "1", "--order", "2", "--quadrature"}},
      {"blaschke", {"--seq", seq, "--zeta", "1,0", "--derivs", "2"}},
      {"gram", {"--pair", pair, "--seq", fam, "--truncations", "4,8,12"}},
      {"np-solve", {"--nodes", nodes}},
      {"construct", {"--pair", pair, "--seq", seq, "--values", values}},
      {"simulate", {"--family", "geometric:c=1,q=0.5", "--truncate", "64", "--trials", "10"}},
      {"three-series", {"--family", "power:c=1,beta=3,count=32", "--M", "1"}},
      {"dyadic", {"--family", fam, "--M", "2"}},
  };
  for (const auto& [cmd, args] : jobs) {
    CAPTURE(cmd);
    std::vector<std::string> argv{cmd};
    argv.insert(argv.end(), args.begin(), args.end());
    argv.insert(argv.end(), {"--out", w.path(cmd + ".json")});
    REQUIRE(run(argv) == 0);
    const Json r = w.report(cmd + ".json");
    CHECK_NOTHROW(io::validate_report(cmd, r));
  }

  // add-point on top of the construct report
  REQUIRE(run({"add-point", "--pair", pair, "--F", w.path("construct.json"), "--zeros", seq, "--lambda", "0.1,-0.3",
               "--value", "2", "--out", w.path("ap.json")}) == 0);
  const Json ap = w.report("ap.json");
  CHECK_NOTHROW(io::validate_report("add-point", ap));
  CHECK(ap["residual"].get<double>() < 1e-9);

  const Json np = w.report("np-solve.json");
  CHECK(np["t_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!np["f"].is_null());

  const Json con = w.report("construct.json");
  for (const Json& v : con["value_residuals"]) CHECK(v.get<double>() <= 1e-8);

  const Json dn = w.report("dnorm.json");
  CHECK(dn["quadrature"].get<double>() == doctest::Approx(dn["value"].get<double>()).epsilon(1e-7));

  CHECK_THROWS_AS(io::validate_report("carleson", w.report("gram.json")), DomainError);
}

TEST_CASE("identical invocations give byte-identical reports") {
  Workspace w;
  make_pair(w);
  REQUIRE(run({"mate", "--b", w.path("b.json"), "--out", w.path("again.json")}) == 0);
  CHECK(w.read("pair.json") == w.read("again.json"));

  const std::vector<std::string> base = {"simulate", "--family", "power:c=0.5,beta=1.5", "--M", "2",
                                         "--trials", "31", "--truncate", "500", "--seed", "7"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(run(with({"--threads", "1", "--out", w.path("s1.json")})) == 0);
  REQUIRE(run(with({"--threads", "4", "--out", w.path("s4.json")})) == 0);
  CHECK(w.read("s1.json") == w.read("s4.json"));
}

TEST_CASE("csv output has a header and one series per column") {
  Workspace w;
  REQUIRE(run({"dyadic", "--family", "geometric:c=1,q=0.5,count=10", "--format", "csv", "--out", w.path("d.csv")}) == 0);
  std::istringstream in(w.read("d.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,N_k");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line == std::to_string(rows) + ",1");
  }
  CHECK(rows == 10);

  REQUIRE(run({"three-series", "--family", "power:c=1,beta=4,count=8", "--format", "csv", "--out", w.path("t.csv")}) == 0);
  std::istringstream t(w.read("t.csv"));
  std::getline(t, line);
  CHECK(line == "n,prob_exceed,mean_truncated,var_truncated");
}

TEST_CASE("exit codes") {
  Workspace w;
  make_pair(w);
  CHECK(run({}) == 2);
  CHECK(run({"--help"}) == 0);
  CHECK(run({"decide", "--pair", w.path("missing.json"), "--seq", w.path("missing.json")}) == 2);
  w.write("bad.json", R"({"points": [[1.5, 0]]})");
  CHECK(run({"carleson", "--seq", w.path("bad.json")}) == 2);
  w.write("broken.json", "{ not json");
  CHECK(run({"carleson", "--seq", w.path("broken.json")}) == 2);
  CHECK(run({"simulate", "--family", "power:c=1", "--out", w.path("x.json")}) == 2);
  CHECK(run({"mate", "--b", w.path("b.json"), "--format", "csv"}) == 2);

  // The trapezoid rule cannot resolve a zero this close to zeta on a small grid.
  w.write("near.json", R"({"blaschke": {"points": [[0.999, 0]]}})");
  CHECK(run({"dnorm", "--f", w.path("near.json"), "--order", "1", "--quadrature", "--max-grid", "512", "--out",
             w.path("n.json")}) == 3);
}
