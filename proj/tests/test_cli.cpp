#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string binary() {
  const char* bin = std::getenv("SYMRING_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SYMRING_BIN must point at the symring binary");
  return bin;
}

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "symring-cli-io";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter));
  fs::path err = dir / ("err" + std::to_string(counter));
  ++counter;
  std::string cmd =
      binary() + " " + args + " > " + out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  CmdResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "symring-cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json load(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), "missing " << p.string());
  return Json::parse(in);
}

}  // namespace

TEST_CASE("bare invocation demands a subcommand") {
  CmdResult r = run_cli("");
  CHECK(r.exit_code != 0);
}

TEST_CASE("magnus reports the series and filtration degree") {
  fs::path dir = fresh_dir("magnus");
  CmdResult r =
      run_cli("magnus --word \"x0^-1 x1^-1 x0 x1\" --cap 4 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("gamma degree: 2") != std::string::npos);
  Json rep = load(dir / "magnus-report.json");
  CHECK(rep.at("schema") == "symring/report/1");
  CHECK(rep.at("gamma_degree") == 2);
  CHECK(rep.at("gamma_capped") == false);
  CHECK(rep.at("claims").size() == 1);
  CHECK(rep.at("claims")[0].at("ok") == true);
  CHECK(rep.at("wall_ms") == 0);
}

TEST_CASE("config files feed runs and command-line flags win") {
  fs::path dir = fresh_dir("magnus-config");
  fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"word": "x0^2", "cap": 2, "out": ")" << (dir / "a").string()
        << R"("})";
  }
  CmdResult r = run_cli("magnus --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(load(dir / "a" / "magnus-report.json").at("gamma_degree") == 1);

  CmdResult r2 = run_cli("magnus --config " + cfg.string() + " --word \"[]\" --out " +
                         (dir / "b").string());
  CHECK(r2.exit_code == 0);
  Json rep = load(dir / "b" / "magnus-report.json");
  CHECK(rep.at("config").at("word") == "[]");
  CHECK(rep.at("gamma_degree") == 3);  // identity: everything below the cap dies
}

TEST_CASE("unknown config keys are rejected") {
  fs::path dir = fresh_dir("badcfg");
  fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"wordd": "x0"})";
  CmdResult r = run_cli("magnus --config " + cfg.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("unknown config key") != std::string::npos);
}

TEST_CASE("lemma21 certificates replay through check-certificate") {
  fs::path dir = fresh_dir("lemma21");
  CmdResult r = run_cli("lemma21 --out " + dir.string());
  CHECK(r.exit_code == 0);
  Json rep = load(dir / "lemma21-report.json");
  REQUIRE(rep.at("claims").size() == 4);
  for (const auto& c : rep.at("claims")) {
    CHECK(c.at("ok") == true);
    CHECK(c.at("verdict") == "certified");
  }
  REQUIRE(rep.at("certificates").size() > 0);
  for (const auto& name : rep.at("certificates")) {
    fs::path cert = dir / name.get<std::string>();
    CmdResult ck = run_cli("check-certificate " + cert.string());
    CHECK_MESSAGE(ck.exit_code == 0, "rejected " << cert.string() << ": " << ck.err);
  }

  /* Every certified membership row must actually replay: perturb one
     coefficient and the checker has to refuse. */
  fs::path victim;
  for (const auto& name : rep.at("certificates")) {
    Json a = load(dir / name.get<std::string>());
    if (a.at("kind") == "product-membership" && !a.at("rows").empty()) {
      a["rows"][0]["coeff"] = "7";
      victim = dir / "tampered.json";
      std::ofstream(victim) << a.dump(2);
      break;
    }
  }
  REQUIRE(!victim.empty());
  CmdResult bad = run_cli("check-certificate " + victim.string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("reject") != std::string::npos);

  CmdResult missing = run_cli("check-certificate " + (dir / "nope.json").string());
  CHECK(missing.exit_code == 1);
}

TEST_CASE("an underpowered budget schedule downgrades the verdict to exit 2") {
  fs::path dir = fresh_dir("lemma23-small");
  CmdResult r = run_cli("lemma23 --n 2 --L 3 --M-schedule 3 --out " + dir.string());
  CHECK(r.exit_code == 2);
  Json rep = load(dir / "lemma23-report.json");
  CHECK(rep.at("claims")[0].at("ok") == false);
  CHECK(rep.at("claims")[0].at("verdict") == "evidence");
  CHECK(rep.at("runs")[0].at("saturated") == false);
}

TEST_CASE("lemma23 defaults saturate and leave replayable equality artifacts") {
  fs::path dir = fresh_dir("lemma23");
  CmdResult r = run_cli("lemma23 --out " + dir.string());
  CHECK(r.exit_code == 0);
  Json rep = load(dir / "lemma23-report.json");
  CHECK(rep.at("runs")[0].at("saturated_at") == 5);
  CHECK(rep.at("runs")[0].at("exact_rank") == 40);
  for (const auto& name : rep.at("certificates")) {
    CmdResult ck = run_cli("check-certificate " + (dir / name.get<std::string>()).string());
    CHECK(ck.exit_code == 0);
  }
}

TEST_CASE("carlsson over the integers certifies a free generator") {
  fs::path dir = fresh_dir("carlsson-z");
  CmdResult r = run_cli("carlsson --group Z --level 1 --L 3 --out " + dir.string());
  CHECK(r.exit_code == 0);
  Json rep = load(dir / "carlsson-report.json");
  const Json& h = rep.at("homology")[0];
  CHECK(h.at("stabilized") == true);
  CHECK(h.at("free_rank") == 1);
  CHECK(h.at("torsion").empty());
  const Json& w = rep.at("witness");
  CHECK(w.at("value") == "-1*[[]] + 1*[x0]");
  CHECK(w.at("moduli") == Json::array({"0"}));
}

TEST_CASE("reports and certificates are byte-identical across thread counts") {
  fs::path a = fresh_dir("det-a");
  fs::path b = fresh_dir("det-b");
  CHECK(run_cli("carlsson --threads 1 --out " + a.string()).exit_code == 0);
  CHECK(run_cli("carlsson --threads 4 --out " + b.string()).exit_code == 0);
  Json rep = load(a / "carlsson-report.json");
  CHECK(slurp(a / "carlsson-report.json") == slurp(b / "carlsson-report.json"));
  for (const auto& name : rep.at("certificates"))
    CHECK(slurp(a / name.get<std::string>()) == slurp(b / name.get<std::string>()));
  /* The torsion witness: twice the class bounds, the class itself does not. */
  CHECK(rep.at("witness").at("order") == "2");
  CHECK(rep.at("witness").at("witness_outside_final_boundary") == true);
}

TEST_CASE("wu witness battery emits valid certificates at a small window") {
  fs::path dir = fresh_dir("wu-small");
  CmdResult r = run_cli("wu --n 2 --L 2 --M-schedule 3 --out " + dir.string());
  CHECK((r.exit_code == 0 || r.exit_code == 2));
  Json rep = load(dir / "wu-report.json");
  CHECK(rep.at("config").at("ideals") == 4);
  REQUIRE(rep.at("witnesses").size() == 50);
  for (const auto& w : rep.at("witnesses")) CHECK(w.at("valid") == true);
  int checked = 0;
  for (const auto& name : rep.at("certificates")) {
    if (checked++ == 3) break;
    CmdResult ck = run_cli("check-certificate " + (dir / name.get<std::string>()).string());
    CHECK(ck.exit_code == 0);
  }
}

TEST_CASE("prop22 round trip stays deterministic under a fixed seed") {
  fs::path a = fresh_dir("prop22-a");
  fs::path b = fresh_dir("prop22-b");
  CHECK(run_cli("prop22 --seed 7 --out " + a.string()).exit_code == 0);
  CHECK(run_cli("prop22 --seed 7 --threads 4 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a / "prop22-report.json") == slurp(b / "prop22-report.json"));
  Json rep = load(a / "prop22-report.json");
  CHECK(rep.at("schreier").at("round_trips_passed") == 100);
  CHECK(rep.at("square_nonmembership").at("status") == "out");
  int idx = rep.at("square_nonmembership").at("certificate").get<int>();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", idx);
  CmdResult ck =
      run_cli("check-certificate " + (a / ("prop22-cert-" + std::string(buf) + ".json")).string());
  CHECK(ck.exit_code == 0);
}
