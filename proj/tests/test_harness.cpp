#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rh/outputs.hpp"
#include "rh/pipeline.hpp"

namespace fs = std::filesystem;
using namespace rh;

namespace {

// small enough for a few seconds per run
const char* kSmall = R"(
[run]
name = small
s_re = 2
bits = 256
n_list = 2, 4, 8
[density]
kind = uniform
A = 1
B = 3
[field]
kind = kappa
[equilibrium]
m = 64
[phase]
m = 128
bits = 192
n_list = 8, 16, 32
[rates]
n_list = 4, 8, 16
[output]
dir = out
)";

fs::path scratch(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("rhpade-test-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_cli(const std::string& args) {
  const char* bin = std::getenv("RHPADE_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "RHPADE_BIN is not set");
  std::string cmd = std::string(bin) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("config: parse and defaults") {
  RunConfig c = parse_config(kSmall);
  CHECK(c.name == "small");
  CHECK(c.bits == 256);
  CHECK(c.n_list == std::vector<int>{2, 4, 8});
  CHECK(c.eq_m == 64);
  CHECK(c.qp_tol == 1e-10);  // default kept
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config: validation errors") {
  auto bad = [](const std::string& text) {
    try {
      validate(parse_config(text));
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Config;
    }
    return false;
  };
  CHECK(bad(replace(kSmall, "s_re = 2", "s_re = 0.5")));
  CHECK(bad(replace(kSmall, "A = 1", "A = 0")));
  CHECK(bad(replace(kSmall, "B = 3", "B = 0.5")));
  CHECK(bad(replace(kSmall, "bits = 256", "bits = 64")));
  CHECK(bad(replace(kSmall, "n_list = 2, 4, 8", "n_list = 4, 2, 8")));
  CHECK(bad(replace(kSmall, "kind = kappa", "kind = cubic")));
  CHECK(bad(replace(kSmall, "kind = uniform", "kind = gaussian")));
  CHECK(bad(replace(kSmall, "[output]", "[output]\ncolour = red")));
  CHECK(bad("[run\nname = x"));
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), Error);
}

TEST_CASE("config: hash is deterministic and ignores jobs and output dir") {
  RunConfig a = parse_config(kSmall), b = parse_config(kSmall);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.jobs = 4;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.bits = 320;
  CHECK(config_hash(a) != config_hash(b));
  // whitespace and comments do not matter
  RunConfig c = parse_config(std::string("; comment\n") + replace(kSmall, "s_re = 2", "s_re   =   2.0"));
  CHECK(config_hash(a) == config_hash(c));
}

TEST_CASE("outputs: csv quoting and table text") {
  Table t{"demo", {"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
  CHECK(csv_text(t) == "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
  CheckRecord r;
  r.id = 3;
  r.name = "demo";
  r.status = CheckStatus::Pass;
  std::string txt = acceptance_table_text({r});
  CHECK(txt.find("demo") != std::string::npos);
  CHECK(txt.find("PASS") != std::string::npos);
}

TEST_CASE("exit code semantics") {
  AcceptanceReport rep;
  CheckRecord r;
  for (CheckStatus s : {CheckStatus::Pass, CheckStatus::Skipped, CheckStatus::KnownFail, CheckStatus::UnexpectedPass}) {
    r.status = s;
    rep.checks = {r};
    CHECK(report_exit_code(rep) == 0);
  }
  // checks of stages that were not requested are omitted; a NotRun record
  // means its stage failed
  for (CheckStatus s : {CheckStatus::Fail, CheckStatus::Error, CheckStatus::NotRun}) {
    r.status = s;
    rep.checks = {r};
    CHECK(report_exit_code(rep) == 1);
  }
}

TEST_CASE("pipeline: partial run marks the rest not-run") {
  RunConfig c = parse_config(kSmall);
  auto rep = run_pipeline(c, {Stage::Nodes});
  REQUIRE(rep.stages.size() == 5);
  CHECK(rep.stages[0].status == "ok");
  for (size_t i = 1; i < 5; ++i) CHECK(rep.stages[i].status == "not-run");
  REQUIRE(rep.checks.size() == 3);
  for (const auto& ch : rep.checks) CHECK(ch.status == CheckStatus::Pass);
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("cli: bad config exits 2") {
  fs::path dir = scratch("bad");
  write(dir / "bad.ini", replace(kSmall, "s_re = 2", "s_re = 0.5"));
  CHECK(run_cli("nodes --config " + (dir / "bad.ini").string()) == 2);
  CHECK(run_cli("nodes --config " + (dir / "missing.ini").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("nodes") == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli: verify writes byte-identical outputs, report reads them back") {
  fs::path dir = scratch("verify");
  write(dir / "small.ini", kSmall);
  fs::path out = dir / "nested" / "out";  // created on demand
  std::string args = "--config " + (dir / "small.ini").string() + " --out " + out.string();
  CHECK(run_cli("verify " + args) == 0);
  RunConfig c = parse_config(kSmall);
  fs::path json = out / ("small-" + config_hash(c) + "-verify.summary.json");
  REQUIRE(fs::exists(json));
  CHECK(fs::exists(out / ("small-" + config_hash(c) + "-verify.acceptance.txt")));
  CHECK(fs::exists(out / ("small-" + config_hash(c) + "-verify.spacing.csv")));
  std::string first = slurp(json);

  CHECK(run_cli("verify " + args + " --jobs 2") == 0);
  CHECK(slurp(json) == first);

  AcceptanceReport rep = load_summary(json.string());
  CHECK(rep.config_name == "small");
  CHECK(rep.cfg_hash == config_hash(c));
  CHECK(rep.checks.size() == 16);
  CHECK(run_cli("report " + args) == 0);

  // a partial command writes its own files and leaves the verify summary alone
  CHECK(run_cli("nodes " + args) == 0);
  CHECK(fs::exists(out / ("small-" + config_hash(c) + "-nodes.summary.json")));
  CHECK(slurp(json) == first);
  fs::remove_all(dir);
}

TEST_CASE("cli: report without a previous verify fails") {
  fs::path dir = scratch("report");
  write(dir / "small.ini", kSmall);
  CHECK(run_cli("report --config " + (dir / "small.ini").string() + " --out " + (dir / "none").string()) == 1);
  fs::remove_all(dir);
}

TEST_CASE("shipped configs validate") {
  const char* cdir = std::getenv("RH_CONFIG_DIR");
  REQUIRE(cdir != nullptr);
  int n = 0;
  for (const auto& e : fs::directory_iterator(cdir)) {
    if (e.path().extension() != ".ini") continue;
    CHECK_NOTHROW(validate(load_config(e.path().string())));
    ++n;
  }
  CHECK(n >= 4);
}
