#include "rh/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rh/parallel.hpp"

namespace rh {

const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::KnownFail: return "FAIL (known)";
    case CheckStatus::UnexpectedPass: return "PASS (unexpected)";
    case CheckStatus::Skipped: return "SKIPPED";
    case CheckStatus::NotRun: return "not-run";
    case CheckStatus::Error: return "ERROR";
  }
  return "?";
}

bool status_ok(CheckStatus s) {
  return s == CheckStatus::Pass || s == CheckStatus::Skipped || s == CheckStatus::KnownFail ||
         s == CheckStatus::UnexpectedPass;
}

std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", x);
  return buf;
}

std::string fmt_num(const Real& x) {
  if (x.is_zero()) return fmt_num(0.0);
  double l = x.log2_abs();
  if (std::abs(l) < 1000) return fmt_num(x.to_double());
  return x.str(11);
}

namespace {

CheckRecord make(int id, const char* name, const char* basis, const char* relation, double threshold) {
  CheckRecord r;
  r.id = id;
  r.name = name;
  r.basis = basis;
  r.relation = relation;
  r.threshold = threshold;
  return r;
}

void finish_le(CheckRecord& r) { r.status = r.measured <= r.threshold ? CheckStatus::Pass : CheckStatus::Fail; }

// ratio a / b for values that may be far outside double range
double ratio(const Real& a, const Real& b) {
  if (a.is_zero()) return 0;
  return std::exp2(std::clamp(a.log2_abs() - b.log2_abs(), -1000.0, 1000.0));
}

std::string join(const std::vector<std::string>& parts, const char* sep = "; ") {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string short_num(const Real& x) { return x.is_zero() ? "0" : x.str(3); }

Table table(const char* name, std::vector<std::string> cols) {
  Table t;
  t.name = name;
  t.columns = std::move(cols);
  return t;
}

}  // namespace

// ---------------------------------------------------------------- inputs

PadeSweep pade_sweep(const DensitySpec& d, const Complex& s, const std::vector<int>& n_list, long bits, int jobs) {
  PadeSweep sw;
  sw.density = d;
  sw.s = s;
  sw.runs.resize(n_list.size());
  parallel_for(static_cast<int>(n_list.size()), jobs, [&](int i) {
    PrecisionScope ps(bits);
    sw.runs[i] = run_pade(d, hurwitz_sampler(s), n_list[i], bits);
  });
  return sw;
}

EquilibriumCase solve_case(const std::string& label, const DensitySpec& d, const FieldEvaluator& fe, int m,
                           double qp_tol, bool symmetric) {
  EquilibriumCase ec;
  ec.label = label;
  ec.density = d;
  ec.field = fe;
  ec.symmetric = symmetric;
  ec.grid = assemble_grid(d, fe, m);
  QpOptions opt;
  opt.qp_tol = qp_tol;
  ec.sol = solve_equilibrium(ec.grid, opt);
  return ec;
}

std::string regime_evidence(const EquilibriumCase& ec) {
  const auto& f = ec.sol.flags;
  std::ostringstream os;
  os << ec.label << ": R1=" << f.r1 << " R2=" << f.r2 << " R3=" << f.r3 << " R4=" << f.r4
     << " band_runs=" << f.band_runs << " saturated_cells=" << f.saturated_cells
     << " sqrt_misfit=" << short_num(f.r3_misfit_c) << "/" << short_num(f.r3_misfit_d);
  return os.str();
}

// ---------------------------------------------------------------- checks

CheckRecord check_interpolation(const PadeSweep& sw, Table* tab) {
  CheckRecord r = make(1, "interpolation exactness", "|Qf - P| at the nodes against cond * 1e2 * 2^-192",
                       "residual/bound <=", 1.0);
  Table t = table("pade", {"n", "bits_used", "log10_cond", "max_abs_residual", "max_normwise_residual", "bound"});
  std::vector<std::string> parts;
  r.measured = 0;
  bool all_solved = true;
  for (const auto& run : sw.runs) {
    PrecisionScope ps(run.bits_used);
    if (!run.solved) {
      all_solved = false;
      parts.push_back("n=" + std::to_string(run.n) + " not solved");
      continue;
    }
    Real bound = run.pair.cond_estimate * Real(tol::kInterpFactor) * ldexp(Real(1), static_cast<long>(tol::kInterpLog2));
    double q = ratio(run.pair.max_normwise_residual, bound);
    r.measured = std::max(r.measured, q);
    parts.push_back("n=" + std::to_string(run.n) + " bits=" + std::to_string(run.bits_used) +
                    " res=" + short_num(run.pair.max_normwise_residual) + " bound=" + short_num(bound));
    t.rows.push_back({std::to_string(run.n), std::to_string(run.bits_used),
                      fmt_num(run.pair.cond_estimate.log2_abs() * std::log10(2.0)), fmt_num(run.pair.max_abs_residual),
                      fmt_num(run.pair.max_normwise_residual), fmt_num(bound)});
  }
  r.detail = join(parts);
  finish_le(r);
  if (!all_solved) r.status = CheckStatus::Fail;
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_orthogonality(const PadeSweep& sw) {
  CheckRecord r = make(2, "discrete orthogonality", "sum_j Q(alpha_j) alpha_j^k w_j = 0 for k < n, normalized",
                       "normalized/bound <=", 1.0);
  std::vector<std::string> parts;
  bool ok = true;
  for (const auto& run : sw.runs) {
    if (!run.solved) {
      ok = false;
      continue;
    }
    PrecisionScope ps(run.bits_used);
    auto o = discrete_orthogonality_check(run.pair, run.weights, run.ns);
    Real bound = run.pair.cond_estimate * Real(tol::kInterpFactor) * ldexp(Real(1), static_cast<long>(tol::kInterpLog2));
    r.measured = std::max(r.measured, ratio(o.max_normalized, bound));
    parts.push_back("n=" + std::to_string(run.n) + " max=" + short_num(o.max_normalized) +
                    " k=n:" + short_num(o.degree_n_normalized));
  }
  r.detail = join(parts);
  finish_le(r);
  if (!ok) r.status = CheckStatus::Fail;
  return r;
}

CheckRecord check_rational_recovery(long bits) {
  CheckRecord r = make(3, "rational recovery", "f(a) = (a+1)/(a+2) recovered exactly for n = 1..3",
                       "max error <=", tol::kRationalRecovery);
  PrecisionScope ps(bits);
  DensitySpec d = build_density(DensityKind::Uniform, 1, 3);
  SampleFn f = [](const Complex& a) { return (a + 1.0) / (a + 2.0); };
  std::vector<std::string> parts;
  Real worst(0);
  for (int n = 1; n <= 3; ++n) {
    NodeSet ns = quantile_nodes(d, n);
    CVec fv = sample_at_nodes(ns, f);
    PadePair pp = solve_pade_reduced(ns, fv);
    Real res(0);
    for (size_t j = 0; j < ns.alpha.size(); ++j) {
      Complex z(ns.alpha[j]);
      res = max(res, abs(pp.Qhat(z) * fv[j] - pp.Phat(z)));
    }
    // in zeta = a/n: Q = zeta + 2/n, P = zeta + 1/n
    Polynomial q({Complex(Real(2) / Real(n)), Complex(1)});
    Polynomial p({Complex(Real(1) / Real(n)), Complex(1)});
    Real coef(0);
    for (int k = 0; k <= 1; ++k) {
      coef = max(coef, abs(pp.Qhat.coeff(k) - q.coeff(k)));
      coef = max(coef, abs(pp.Phat.coeff(k) - p.coeff(k)));
    }
    bool degree_ok = pp.Qhat.degree() == 1 && pp.Phat.degree() == 1;
    if (!degree_ok) coef = Real(1);
    worst = max(worst, max(res, coef));
    parts.push_back("n=" + std::to_string(n) + " type=" + std::to_string(pp.Qhat.degree()) +
                    " res=" + short_num(res) + " coef=" + short_num(coef));
  }
  r.measured = worst.to_double();
  r.detail = join(parts);
  finish_le(r);
  return r;
}

CheckRecord check_barycentric(const DensitySpec& d, const Complex& s, int n, long bits) {
  CheckRecord r = make(4, "barycentric identity", "W_n omega_n = L_n at 20 points off the nodes",
                       "relative residual <=", tol::kBarycentric);
  PrecisionScope ps(bits);
  NodeSet ns = quantile_nodes(d, n);
  CVec f = sample_at_nodes(ns, hurwitz_sampler(s));
  WeightSet ws = build_weights(ns, f);
  const double mid = 0.5 * (d.A() + d.B()), rad = 0.75 * (d.B() - d.A());
  Real worst(0);
  for (int k = 0; k < 20; ++k) {
    double th = (k + 0.5) * 2 * M_PI / 20;
    Complex z(mid + rad * std::cos(th), rad * std::sin(th));
    worst = max(worst, eval_Wn_Ln(ws, ns, f, z).residual);
  }
  r.measured = worst.to_double();
  r.detail = "n=" + std::to_string(n) + " max=" + short_num(worst);
  finish_le(r);
  return r;
}

CheckRecord check_hermite_walsh(const DensitySpec& d, const Complex& s, const std::vector<int>& n_list,
                                const Complex& zeta, long bits, int jobs) {
  CheckRecord r = make(5, "Hermite-Walsh contour form", "contour value against the Lagrange value",
                       "relative difference <=", tol::kHermiteWalsh);
  PrecisionScope ps(bits);
  std::vector<Real> rel(n_list.size());
  parallel_for(static_cast<int>(n_list.size()), jobs, [&](int i) {
    NodeSet ns = quantile_nodes(d, n_list[i]);
    SampleFn f = hurwitz_sampler(s);
    CVec fv = sample_at_nodes(ns, f);
    Complex lv = lagrange_eval(ns, fv, zeta);
    Complex hv = hermite_walsh_eval(ns, f, default_contour(d).curve(), zeta).value;
    rel[i] = abs(hv - lv) / abs(lv);
  });
  std::vector<std::string> parts;
  Real worst(0);
  for (size_t i = 0; i < n_list.size(); ++i) {
    worst = max(worst, rel[i]);
    parts.push_back("n=" + std::to_string(n_list[i]) + " rel=" + short_num(rel[i]));
  }
  r.measured = worst.to_double();
  r.detail = join(parts);
  finish_le(r);
  return r;
}

CheckRecord check_spacing(const std::vector<DensitySpec>& ds, const std::vector<int>& n_list, long bits,
                          Table* tab) {
  CheckRecord r = make(6, "quantile spacing", "n * gaps inside [1/kappa_max - 1e-3, 1/kappa_min + 1e-3]",
                       "worst excess <=", 0.0);
  PrecisionScope ps(bits);
  Table t = table("spacing", {"density", "n", "min_gap_n", "max_gap_n", "lower", "upper", "second_diff_n2"});
  r.measured = -INFINITY;
  std::vector<std::string> parts;
  for (const auto& d : ds) {
    double lo = INFINITY, hi = -INFINITY;
    for (int n : n_list) {
      SpacingResult sr = spacing_check(quantile_nodes(d, n), d);
      double excess = std::max(sr.lower_bound - tol::kSpacingSlack - sr.min_gap_n,
                               sr.max_gap_n - sr.upper_bound - tol::kSpacingSlack);
      r.measured = std::max(r.measured, excess);
      lo = std::min(lo, sr.min_gap_n);
      hi = std::max(hi, sr.max_gap_n);
      t.rows.push_back({d.describe(), std::to_string(n), fmt_num(sr.min_gap_n), fmt_num(sr.max_gap_n),
                        fmt_num(sr.lower_bound), fmt_num(sr.upper_bound), fmt_num(sr.second_diff_n2)});
    }
    parts.push_back(d.describe() + " gaps in [" + short_num(lo) + ", " + short_num(hi) + "] vs [" +
                    short_num(1 / d.kappa_max()) + ", " + short_num(1 / d.kappa_min()) + "]");
  }
  r.detail = join(parts);
  finish_le(r);
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_rates(const std::vector<DensitySpec>& ds, const std::vector<int>& n_list, long bits, Table* tab) {
  CheckRecord r = make(7, "Riemann-sum and log-potential rates", "log-log slopes of both errors against n",
                       "max slope <=", tol::kRateSlope);
  PrecisionScope ps(bits);
  Table t = table("rates", {"density", "kind", "n", "error"});
  r.measured = -INFINITY;
  std::vector<std::string> parts;
  for (const auto& d : ds) {
    SweepFit rs = riemann_sum_check(d, n_list, [](const Real& x) { return log(x); });
    Complex z(0.5 * (d.A() + d.B()), d.B() - d.A());
    SweepFit lp = logpot_check(d, n_list, z);
    r.measured = std::max({r.measured, rs.slope, lp.slope});
    for (const auto& [n, e] : rs.errors) t.rows.push_back({d.describe(), "riemann_log", std::to_string(n), fmt_num(e)});
    for (const auto& [n, e] : lp.errors) t.rows.push_back({d.describe(), "logpot", std::to_string(n), fmt_num(e)});
    parts.push_back(d.describe() + " riemann=" + short_num(rs.slope) + " logpot=" + short_num(lp.slope));
  }
  r.detail = join(parts);
  finish_le(r);
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_hurwitz_exponent(const std::vector<Complex>& s_list, double A, double B,
                                   const std::vector<int>& n_list, long bits) {
  CheckRecord r = make(8, "Hurwitz bound exponent", "slope of log sup|zeta(s, n alpha)| against log n is 1 - Re s",
                       "max |slope - (1 - Re s)| <=", tol::kHurwitzExponent);
  PrecisionScope ps(bits);
  std::vector<std::string> parts;
  for (const auto& s : s_list) {
    HurwitzBoundFit h = hurwitz_bound_check(HurwitzParams{s}, A, B, n_list);
    double expect = 1 - s.re.to_double();
    r.measured = std::max(r.measured, std::abs(h.slope - expect));
    parts.push_back("s=" + short_num(s.re) + (s.im.is_zero() ? "" : "+" + short_num(s.im) + "i") +
                    " slope=" + short_num(h.slope) + " expect=" + short_num(expect));
  }
  r.detail = join(parts);
  finish_le(r);
  return r;
}

CheckRecord check_equilibrium(const std::vector<const EquilibriumCase*>& cases, double qp_tol) {
  CheckRecord r = make(9, "equilibrium certification",
                       "KKT violations / kkt_tol, two-start gap / (10 qp_tol), band asymmetry in cells",
                       "max ratio <=", 1.0);
  std::vector<std::string> parts;
  for (const auto* ec : cases) {
    const auto& sol = ec->sol;
    const auto& g = ec->grid;
    double kkt = sol.kkt_tol > 0 ? sol.max_violation / sol.kkt_tol : INFINITY;
    if (static_cast<int>(sol.classes.size()) != g.m) kkt = INFINITY;
    QpOptions opt;
    opt.qp_tol = qp_tol;
    EquilibriumSolution other = solve_qp(g, ramp_start(g), opt);
    double gap = 0;
    for (int i = 0; i < g.m; ++i) gap = std::max(gap, std::abs(other.rho.rho[i] - sol.rho.rho[i]));
    double two = gap / (tol::kTwoStartFactor * qp_tol);
    double asym = 0;
    if (ec->symmetric) {
      if (sol.band_first < 0)
        asym = INFINITY;
      else
        asym = std::abs(sol.band_first - (g.m - 1 - sol.band_last));
    }
    r.measured = std::max({r.measured, kkt, two, asym});
    parts.push_back(ec->label + " viol/kkt_tol=" + short_num(kkt) + " two_start=" + short_num(gap) +
                    (ec->symmetric ? " asym_cells=" + short_num(asym) : std::string()) +
                    " band=[" + short_num(sol.c) + ", " + short_num(sol.d) + "]");
  }
  r.detail = join(parts);
  finish_le(r);
  return r;
}

CheckRecord check_y_normalization(const DensitySpec& d, const Complex& s, int n, long bits) {
  CheckRecord r = make(10, "residues and normalization of Y",
                       "residues of Y12, Y22 at the nodes; |Y z^{-n sigma3} - I| ~ 1/|z|",
                       "max ratio <=", 1.0);
  PadeRun run = run_pade(d, hurwitz_sampler(s), n, bits);
  if (!run.solved) {
    r.status = CheckStatus::Fail;
    r.detail = "Pade system not solved";
    return r;
  }
  PrecisionScope ps(run.bits_used);
  YEvaluator Y(run.pair, run.weights, run.ns);
  // node spacing in z units is n (alpha_{j+1} - alpha_j); a quarter of the smallest gap
  Real gap(INFINITY);
  for (size_t j = 1; j < run.ns.a.size(); ++j) gap = min(gap, run.ns.a[j] - run.ns.a[j - 1]);
  Real worst(0);
  for (size_t j = 0; j < run.ns.a.size(); ++j) {
    auto rc = Y.residue_check(static_cast<int>(j), gap / 4);
    worst = max(worst, max(rc.rel12, rc.rel22));
  }
  std::vector<std::pair<double, double>> pts;
  for (double R : {1e2, 1e3, 1e4, 1e5}) {
    Complex z = polar(Real(R), pi() / 4);
    DenseMatrix M = Y.normalized(z) - DenseMatrix::identity(2);
    pts.emplace_back(R, frobenius(M).to_double());
  }
  RateFit fit = fit_rate(pts);
  double res_ratio = worst.to_double() / tol::kResidue;
  double slope_ratio = std::abs(fit.slope + 1) / tol::kDecaySlope;
  r.measured = std::max(res_ratio, slope_ratio);
  r.detail = "n=" + std::to_string(n) + " residue_rel=" + short_num(worst) + " decay_slope=" + short_num(fit.slope);
  finish_le(r);
  return r;
}

CheckRecord check_outer_parametrix(double c, double d, long bits) {
  CheckRecord r = make(11, "outer parametrix", "det N = 1, N+ = N- [[0,1],[-1,0]] on the band, |N - I| |z| bounded",
                       "max ratio <=", 1.0);
  PrecisionScope ps(bits);
  OuterParametrix op{Real(c), Real(d)};
  const double mid = 0.5 * (c + d), w = d - c;
  Real det_err(0);
  for (Complex z : {Complex(mid, 1.0), Complex(c - 1, 0.5), Complex(d + 2, -1.0), Complex(10.0, 10.0),
                    Complex(-3.0, 0.1), Complex(mid, -0.01)})
    det_err = max(det_err, abs(det2(op.N(z)) - Complex(1)));
  DenseMatrix J = DenseMatrix::two_by_two(Complex(0), Complex(1), Complex(-1), Complex(0));
  Real jump(0);
  for (int k = 1; k <= 9; ++k) {
    Complex x(Real(c + w * k / 10.0));
    jump = max(jump, frobenius(op.N(x, Side::Plus) - op.N(x, Side::Minus) * J));
  }
  std::vector<double> scaled;
  for (double R : {1e2, 1e3, 1e4}) {
    Complex z = Complex(mid) + polar(Real(R), pi() / 3);
    scaled.push_back((frobenius(op.N(z) - DenseMatrix::identity(2)) * Real(R)).to_double());
  }
  double spread = *std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end());
  r.measured = std::max({det_err.to_double() / tol::kDetN, jump.to_double() / tol::kJumpN, spread / tol::kNDecayRatio});
  r.detail = "det_err=" + short_num(det_err) + " jump=" + short_num(jump) + " |N-I||z| at 1e2,1e3,1e4: " +
             short_num(scaled[0]) + ", " + short_num(scaled[1]) + ", " + short_num(scaled[2]);
  finish_le(r);
  return r;
}

CheckRecord check_airy(long bits) {
  CheckRecord r = make(12, "Airy asymptotics", "residual ratio between |xi| = 20 and 40 is 2^{3/2}",
                       "max |ratio / 2^{3/2} - 1| <=", tol::kAiryRatioRel);
  PrecisionScope ps(bits);
  std::vector<std::string> parts;
  Real det_err(0);
  for (double th : {0.3, 1.0, 2.5, 3.0, -0.3, -1.0, -2.5, -3.0}) {
    Complex x20 = polar(Real(20), Real(th)), x40 = polar(Real(40), Real(th));
    det_err = max(det_err, abs(det2(airy_model(x20)) - Complex(1)));
    double q = (airy_asymptotic_residual(x20).middle / airy_asymptotic_residual(x40).middle).to_double();
    r.measured = std::max(r.measured, std::abs(q / tol::kAiryRatio - 1));
    parts.push_back("arg=" + short_num(th) + ":" + short_num(q));
  }
  r.detail = "ratios " + join(parts, " ") + "; det_err=" + short_num(det_err);
  finish_le(r);
  return r;
}

CheckRecord check_matching(const EquilibriumCase& ec, const std::vector<int>& n_list, long bits, Table* tab) {
  CheckRecord r = make(13, "matching on the endpoint circles", "log-log slope of sup |P N^{-1} - I| against n is -1",
                       "max |slope + 1| <=", tol::kMatchingSlope);
  if (!ec.sol.flags.all()) {
    r.status = CheckStatus::Skipped;
    r.detail = "regime not regular: " + regime_evidence(ec);
    return r;
  }
  PrecisionScope ps(bits);
  Table t = table("matching", {"endpoint", "n", "sup_error"});
  GPhaseEvaluator ev(ec.sol, ec.grid, ec.field);
  OuterParametrix op{Real(ec.sol.c), Real(ec.sol.d)};
  const double delta = disk_radius(ec.sol.c, ec.sol.d, ec.grid.A, ec.grid.B);
  std::vector<std::string> parts;
  for (bool left : {true, false}) {
    ConformalMap cm(ev, left ? ec.sol.c : ec.sol.d, left, delta);
    std::vector<std::pair<double, double>> pts;
    for (int n : n_list) {
      double e = LocalParametrix(cm, op, n).matching_error(delta).to_double();
      pts.emplace_back(n, e);
      t.rows.push_back({left ? "c" : "d", std::to_string(n), fmt_num(e)});
    }
    double slope = fit_rate(pts).slope;
    r.measured = std::max(r.measured, std::abs(slope + 1));
    parts.push_back(std::string(left ? "c" : "d") + " slope=" + short_num(slope) +
                    " fit_residual=" + short_num(cm.fit_residual()));
  }
  r.detail = ec.label + ": " + join(parts) + "; delta=" + short_num(delta);
  finish_le(r);
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_lips(const EquilibriumCase& ec, const std::vector<int>& n_list, long bits, Table* tab) {
  CheckRecord r = make(14, "exponential decay on the lens lips",
                       "semi-log slope of sup |J_lip - I| against n equals -c0, c0 = -max Re phi on the lips",
                       "|slope + c0| / c0 <=", tol::kLipRel);
  if (!ec.sol.flags.all()) {
    r.status = CheckStatus::Skipped;
    r.detail = "regime not regular: " + regime_evidence(ec);
    return r;
  }
  PrecisionScope ps(bits);
  GPhaseEvaluator ev(ec.sol, ec.grid, ec.field);
  const double delta = disk_radius(ec.sol.c, ec.sol.d, ec.grid.A, ec.grid.B);
  LensLips lips = make_lips(ec.sol.c, ec.sol.d, 0.5 * delta, delta);
  PhaseSignScan sc = phase_sign_scan(ev, lips);
  if (!(sc.c0 > 0)) {
    r.status = CheckStatus::Fail;
    r.measured = INFINITY;
    r.detail = "Re phi not negative on the lips: max=" + short_num(sc.max_re_phi);
    return r;
  }
  LipDecay ld = lens_jump_norms(ev, lips, n_list);
  Table t = table("lips", {"n", "sup_norm"});
  for (const auto& [n, v] : ld.sup_norms) t.rows.push_back({std::to_string(n), fmt_num(v)});
  r.measured = std::abs(ld.slope + sc.c0) / sc.c0;
  r.detail = ec.label + ": slope=" + short_num(ld.slope) + " c0=" + short_num(sc.c0) +
             " Re phi in [" + short_num(sc.min_re_phi) + ", " + short_num(sc.max_re_phi) + "]";
  finish_le(r);
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_strong_asymptotics(const std::vector<const EquilibriumCase*>& cases, const PadeSweep* sw,
                                     long bits, Table* tab, const std::vector<Complex>& extra_points) {
  CheckRecord r = make(15, "strong asymptotics of Q", "log-log slope of |Q e^{-n g} - N11| at the K points",
                       "max slope <=", tol::kRateSlope);
  const EquilibriumCase* use = nullptr;
  std::vector<std::string> evidence;
  for (const auto* ec : cases) {
    bool matches = sw && ec->field.kind() == FieldKind::KappaPotential &&
                   ec->density.describe() == sw->density.describe();
    if (matches && ec->sol.flags.all()) {
      use = ec;
      break;
    }
    if (ec->field.kind() != FieldKind::KappaPotential)
      evidence.push_back(ec->label + ": field is not the node-density potential (Q has no relation to it)");
    else
      evidence.push_back(regime_evidence(*ec));
  }
  if (!use) {
    r.status = CheckStatus::Skipped;
    r.detail = "conditionally skipped, no regular node-density case: " + join(evidence);
    return r;
  }
  PrecisionScope ps(bits);
  GPhaseEvaluator ev(use->sol, use->grid, use->field);
  OuterParametrix op{Real(use->sol.c), Real(use->sol.d)};
  Table t = table("strong_asymptotics", {"point", "n", "residual"});
  std::vector<Complex> K = k_points(use->grid.A, use->grid.B);
  K.insert(K.end(), extra_points.begin(), extra_points.end());
  r.measured = -INFINITY;
  std::vector<std::string> parts;
  for (size_t k = 0; k < K.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& run : sw->runs) {
      if (!run.solved) continue;
      PrecisionScope ps2(run.bits_used);
      double v = strong_asymptotics_residual(run.pair, ev, op, K[k]).to_double();
      pts.emplace_back(run.n, v);
      t.rows.push_back({std::to_string(k), std::to_string(run.n), fmt_num(v)});
    }
    double slope = pts.size() >= 2 ? fit_rate(pts).slope : INFINITY;
    r.measured = std::max(r.measured, slope);
    parts.push_back("K" + std::to_string(k) + " slope=" + short_num(slope));
  }
  r.detail = use->label + ": " + join(parts);
  finish_le(r);
  if (tab) *tab = std::move(t);
  return r;
}

CheckRecord check_subexponential(const DensitySpec& d, const Complex& s, const std::vector<int>& n_list, long bits,
                                 Table* tab) {
  CheckRecord r = make(16, "subexponential factor E_n",
                       "|(1/n) log|E_n|| decreasing in n and <= C log n / n (worst ratio to the fit)",
                       "worst ratio <= (and monotone)", 1.5);
  PrecisionScope ps(bits);
  FieldEvaluator fe(d);
  std::vector<Complex> K = k_points(d.A(), d.B());
  std::vector<std::vector<std::pair<int, double>>> vals(K.size());
  Real cross(0);
  for (int n : n_list) {
    NodeSet ns = quantile_nodes(d, n);
    CVec f = sample_at_nodes(ns, hurwitz_sampler(s));
    WeightSet ws = build_weights(ns, f);
    for (size_t k = 0; k < K.size(); ++k) {
      double v = log_En_over_n(ws, ns, fe, K[k]);
      double vb = log_En_over_n_barycentric(ns, f, fe, K[k]);
      cross = max(cross, Real(std::abs(v - vb)));
      vals[k].emplace_back(n, v);
    }
  }
  Table t = table("subexponential", {"point", "n", "log_En_over_n"});
  bool all_pass = true;
  std::vector<std::string> parts;
  for (size_t k = 0; k < K.size(); ++k) {
    WnFactorization w = wn_factorization_check(vals[k]);
    all_pass = all_pass && w.pass;
    r.measured = std::max(r.measured, w.monotone ? w.worst_ratio : INFINITY);
    for (const auto& [n, v] : vals[k]) t.rows.push_back({std::to_string(k), std::to_string(n), fmt_num(v)});
    std::string seq;
    for (const auto& [n, v] : vals[k]) seq += (seq.empty() ? "" : ",") + short_num(v);
    parts.push_back("K" + std::to_string(k) + " values=" + seq + " monotone=" + (w.monotone ? "yes" : "no") +
                    " ratio=" + short_num(w.worst_ratio));
  }
  r.detail = join(parts) + "; weight vs barycentric form max diff=" + short_num(cross);
  r.status = all_pass ? CheckStatus::UnexpectedPass : CheckStatus::KnownFail;
  if (tab) *tab = std::move(t);
  return r;
}

}  // namespace rh
