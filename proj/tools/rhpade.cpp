// rhpade: run pipeline stages for one config and write the outputs.
//
// Exit codes: 0 all enabled checks pass, 1 a check failed (or a stage/IO
// error), 2 configuration or validation error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "rh/outputs.hpp"
#include "rh/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  long bits = 0;
  std::string out;
  int jobs = 0;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "config file (INI)")->required();
  sub->add_option("--bits", o.bits, "working precision in bits (overrides run.bits)");
  sub->add_option("--out", o.out, "output directory (overrides output.dir)");
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

int load(const Options& o, rh::RunConfig& cfg) {
  try {
    cfg = rh::load_config(o.config);
    if (o.bits) cfg.bits = o.bits;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.jobs) cfg.jobs = o.jobs;
    rh::validate(cfg);
  } catch (const rh::Error& e) {
    std::cerr << "rhpade: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(const Options& o, const std::string& command, const std::vector<rh::Stage>& stages) {
  rh::RunConfig cfg;
  if (int rc = load(o, cfg)) return rc;
  rh::AcceptanceReport rep = rh::run_pipeline(cfg, stages);
  rep.command = command;
  for (const auto& st : rep.stages)
    if (st.status != "not-run") std::cout << "stage " << rh::stage_name(st.stage) << ": " << st.status << "\n";
  std::cout << rh::acceptance_table_text(rep.checks);
  try {
    rh::OutputPaths p = rh::emit_outputs(rep, cfg.out_dir);
    std::cout << "summary: " << p.summary_json << "\n";
  } catch (const rh::Error& e) {
    std::cerr << "rhpade: " << e.what() << "\n";
    return 1;
  }
  return rh::report_exit_code(rep);
}

int report(const Options& o) {
  rh::RunConfig cfg;
  if (int rc = load(o, cfg)) return rc;
  rh::AcceptanceReport probe;
  probe.config_name = cfg.name;
  probe.cfg_hash = rh::config_hash(cfg);
  probe.command = "verify";
  std::string path = (std::filesystem::path(cfg.out_dir) / (rh::output_stem(probe) + ".summary.json")).string();
  try {
    rh::AcceptanceReport rep = rh::load_summary(path);
    std::cout << "config " << rep.config_name << " (" << rep.cfg_hash << ")\n";
    for (const auto& st : rep.stages) std::cout << "stage " << rh::stage_name(st.stage) << ": " << st.status << "\n";
    std::cout << rh::acceptance_table_text(rep.checks);
    return rh::report_exit_code(rep);
  } catch (const rh::Error& e) {
    std::cerr << "rhpade: " << e.what() << " (run `rhpade verify` with this config first)\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using rh::Stage;
  CLI::App app{"Multipoint Pade approximants of Hurwitz-zeta data: nodes, solves, equilibrium, parametrix checks"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
    std::vector<Stage> stages;
  };
  const std::vector<Cmd> cmds = {
      {"nodes", "quantile nodes, spacing, rates, Hurwitz bound", {Stage::Nodes}},
      {"pade", "Pade solves and their identities", {Stage::Pade}},
      {"equilibrium", "constrained equilibrium and regime flags", {Stage::Equilibrium}},
      {"phase", "g-function, phase, outer parametrix, Airy model, lens lips", {Stage::Phase}},
      {"parametrix", "local parametrices, matching, strong asymptotics", {Stage::Parametrix}},
      {"verify", "full pipeline", {Stage::Nodes, Stage::Pade, Stage::Equilibrium, Stage::Phase, Stage::Parametrix}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_common(subs.back(), o);
  }
  CLI::App* rep = app.add_subcommand("report", "print the acceptance table of a previous verify run");
  add_common(rep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (rep->parsed()) return report(o);
  for (size_t i = 0; i < cmds.size(); ++i)
    if (subs[i]->parsed()) return run(o, cmds[i].name, cmds[i].stages);
  return 2;
}
