#include "rh/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>

#include "rh/simd_kernels.hpp"

namespace rh {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Nodes: return "nodes";
    case Stage::Pade: return "pade";
    case Stage::Equilibrium: return "equilibrium";
    case Stage::Phase: return "phase";
    case Stage::Parametrix: return "parametrix";
  }
  return "?";
}

namespace {

constexpr Stage kOrder[] = {Stage::Nodes, Stage::Pade, Stage::Equilibrium, Stage::Phase, Stage::Parametrix};

// check ids owned by each stage
const std::map<Stage, std::vector<int>> kStageChecks = {
    {Stage::Nodes, {6, 7, 8}},
    {Stage::Pade, {1, 2, 3, 4, 5, 10, 16}},
    {Stage::Equilibrium, {9}},
    {Stage::Phase, {11, 12, 14}},
    {Stage::Parametrix, {13, 15}},
};

std::vector<Stage> closure(const std::vector<Stage>& req) {
  std::vector<bool> on(5, false);
  for (Stage s : req) on[static_cast<int>(s)] = true;
  if (on[static_cast<int>(Stage::Parametrix)]) {
    on[static_cast<int>(Stage::Phase)] = true;
    on[static_cast<int>(Stage::Pade)] = true;
  }
  if (on[static_cast<int>(Stage::Phase)]) on[static_cast<int>(Stage::Equilibrium)] = true;
  std::vector<Stage> out;
  for (Stage s : kOrder)
    if (on[static_cast<int>(s)]) out.push_back(s);
  return out;
}

bool is_symmetric(const RunConfig& cfg) {
  DensitySpec d = cfg.density();
  const double mid = 0.5 * (cfg.A + cfg.B);
  for (int k = 0; k <= 64; ++k) {
    double t = (cfg.B - cfg.A) * 0.5 * k / 64;
    if (std::abs(d.kappa(mid - t) - d.kappa(mid + t)) > 1e-12 * d.kappa_max()) return false;
  }
  return cfg.field_kind == "kappa" || std::abs(cfg.field_center - mid) < 1e-12 * (cfg.B - cfg.A);
}

// Seeded extra points in the box [B + 0.5, B + 2] x [-1, 1] (away from [A, B]).
std::vector<Complex> extra_k_points(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(cfg.B + 0.5, cfg.B + 2.0), im(-1.0, 1.0);
  std::vector<Complex> out;
  for (int i = 0; i < cfg.extra_k_points; ++i) {
    double x = re(rng), y = im(rng);
    out.emplace_back(x, y);
  }
  return out;
}

Table nodes_table(const RunConfig& cfg) {
  PrecisionScope ps(cfg.bits);
  Table t;
  t.name = "nodes";
  t.columns = {"n", "j", "alpha"};
  DensitySpec d = cfg.density();
  for (int n : cfg.n_list) {
    NodeSet ns = quantile_nodes(d, n);
    for (size_t j = 0; j < ns.alpha.size(); ++j)
      t.rows.push_back({std::to_string(n), std::to_string(j), ns.alpha[j].str(40)});
  }
  return t;
}

Table cells_table(const EquilibriumCase& ec) {
  Table t;
  t.name = "equilibrium";
  t.columns = {"i", "center", "kappa_bar", "rho", "e", "slack", "class"};
  const auto& g = ec.grid;
  const auto& s = ec.sol;
  for (int i = 0; i < g.m; ++i)
    t.rows.push_back({std::to_string(i), fmt_num(g.centers[i]), fmt_num(g.kappa_bar[i]), fmt_num(s.rho.rho[i]),
                      fmt_num(s.e[i]), fmt_num(s.slack[i]), cell_class_name(s.classes[i])});
  return t;
}

// Same n values as requested in the criteria when the config provides them.
std::vector<int> subset_le(const std::vector<int>& v, int cap) {
  std::vector<int> out;
  for (int n : v)
    if (n <= cap) out.push_back(n);
  return out;
}

CheckRecord not_run(int id, const std::string& why) {
  CheckRecord r;
  r.id = id;
  r.name = "check " + std::to_string(id);
  r.status = CheckStatus::NotRun;
  r.detail = why;
  return r;
}

}  // namespace

AcceptanceReport run_pipeline(const RunConfig& cfg, const std::vector<Stage>& requested) {
  AcceptanceReport rep;
  rep.config_name = cfg.name;
  rep.cfg_hash = config_hash(cfg);
  rep.canonical_config = canonical_text(cfg);
  rep.contour = cfg.contour_description();
  rep.simd_backend = simd::backend_name(simd::active_backend());
  for (Stage s : kOrder) rep.stages.push_back({s, "not-run"});

  PrecisionScope ps(cfg.bits);
  const DensitySpec d = cfg.density();
  const Complex s = cfg.s();
  const std::vector<Stage> stages = closure(requested);

  std::optional<PadeSweep> sweep;
  std::unique_ptr<EquilibriumCase> eq_case, phase_case;
  std::map<int, CheckRecord> checks;
  auto add = [&](CheckRecord r) { checks[r.id] = std::move(r); };
  auto add_table = [&](Table t) {
    if (!t.name.empty()) rep.tables.push_back(std::move(t));
  };
  auto set_status = [&](Stage st, std::string v) { rep.stages[static_cast<int>(st)].status = std::move(v); };

  for (Stage st : stages) {
    try {
      switch (st) {
        case Stage::Nodes: {
          add_table(nodes_table(cfg));
          Table t1, t2;
          add(check_spacing({d}, cfg.n_list, cfg.bits, &t1));
          add(check_rates({d}, cfg.rate_n_list, cfg.bits, &t2));
          add(check_hurwitz_exponent({s}, cfg.A, cfg.B, cfg.rate_n_list, cfg.bits));
          add_table(std::move(t1));
          add_table(std::move(t2));
          break;
        }
        case Stage::Pade: {
          sweep = pade_sweep(d, s, cfg.n_list, cfg.bits, cfg.jobs);
          Table t, t16;
          add(check_interpolation(*sweep, &t));
          add(check_orthogonality(*sweep));
          add(check_rational_recovery(cfg.bits));
          add(check_barycentric(d, s, 8, cfg.bits));
          std::vector<int> hw = subset_le(cfg.n_list, 16);
          if (hw.empty()) hw = {cfg.n_list.front()};
          add(check_hermite_walsh(d, s, hw, Complex(cfg.B + 1), cfg.bits, cfg.jobs));
          add(check_y_normalization(d, s, 4, cfg.bits));
          add(check_subexponential(d, s, cfg.rate_n_list, cfg.bits, &t16));
          add_table(std::move(t));
          add_table(std::move(t16));
          break;
        }
        case Stage::Equilibrium: {
          eq_case = std::make_unique<EquilibriumCase>(
              solve_case(cfg.name, d, cfg.field(), cfg.eq_m, cfg.qp_tol, is_symmetric(cfg)));
          add(check_equilibrium({eq_case.get()}, cfg.qp_tol));
          add_table(cells_table(*eq_case));
          break;
        }
        case Stage::Phase: {
          if (!eq_case) throw Error(ErrorKind::DomainError, "equilibrium stage did not complete");
          phase_case = std::make_unique<EquilibriumCase>(
              solve_case(cfg.name, d, cfg.field(), cfg.phase_m, cfg.qp_tol, eq_case->symmetric));
          add(check_outer_parametrix(phase_case->sol.c, phase_case->sol.d, cfg.phase_bits));
          add(check_airy(cfg.phase_bits));
          Table t;
          add(check_lips(*phase_case, cfg.phase_n_list, cfg.phase_bits, &t));
          add_table(std::move(t));
          break;
        }
        case Stage::Parametrix: {
          if (!phase_case) throw Error(ErrorKind::DomainError, "phase stage did not complete");
          if (!phase_case->sol.flags.all()) {
            set_status(st, "skipped: regime not regular");
          }
          Table t, t15;
          add(check_matching(*phase_case, cfg.phase_n_list, cfg.phase_bits, &t));
          add(check_strong_asymptotics({phase_case.get()}, sweep ? &*sweep : nullptr, cfg.phase_bits, &t15,
                                       extra_k_points(cfg)));
          add_table(std::move(t));
          add_table(std::move(t15));
          break;
        }
      }
      if (rep.stages[static_cast<int>(st)].status == "not-run") set_status(st, "ok");
      if (st == Stage::Phase && phase_case && !phase_case->sol.flags.all())
        set_status(st, "ok (lips skipped: regime not regular)");
    } catch (const std::exception& e) {
      set_status(st, std::string("error: ") + e.what());
      for (int id : kStageChecks.at(st))
        if (!checks.count(id)) add(not_run(id, std::string(stage_name(st)) + " stage error: " + e.what()));
    }
  }
  for (const auto& [id, r] : checks) rep.checks.push_back(r);
  return rep;
}

int report_exit_code(const AcceptanceReport& r) {
  for (const auto& st : r.stages)
    if (st.status.rfind("error", 0) == 0) return 1;
  for (const auto& c : r.checks)
    if (!status_ok(c.status)) return 1;
  return 0;
}

}  // namespace rh
