#include "rh/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rh/simd_kernels.hpp"

namespace rh {

double self_cell_kernel(double h) { return h * h * (1.5 - std::log(h)); }

EnergyGrid assemble_grid(const DensitySpec& d, const FieldEvaluator& fe, int m) {
  if (m < 2) throw Error(ErrorKind::DomainError, "assemble_grid: m too small");
  EnergyGrid g;
  g.m = m;
  g.A = d.A();
  g.B = d.B();
  g.edges.resize(m + 1);
  for (int i = 0; i <= m; ++i) g.edges[i] = g.A + (g.B - g.A) * i / m;
  g.edges[m] = g.B;
  g.h.resize(m);
  g.centers.resize(m);
  g.kappa_bar.resize(m);
  g.v.resize(m);
  for (int i = 0; i < m; ++i) {
    g.h[i] = g.edges[i + 1] - g.edges[i];
    g.centers[i] = 0.5 * (g.edges[i] + g.edges[i + 1]);
    g.kappa_bar[i] = d.cell_average(g.edges[i], g.edges[i + 1]);
    g.v[i] = fe.field_cell_integral(g.edges[i], g.edges[i + 1]);
    g.field_scale = std::max(g.field_scale, std::abs(g.v[i] / g.h[i]));
  }
  g.K.assign(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    g.K[static_cast<size_t>(i) * m + i] = self_cell_kernel(g.h[i]);
    for (int j = i + 1; j < m; ++j) {
      double k = -static_cast<double>(
          log_abs_pair_integral(g.edges[i], g.edges[i + 1], g.edges[j], g.edges[j + 1]));
      g.K[static_cast<size_t>(i) * m + j] = k;
      g.K[static_cast<size_t>(j) * m + i] = k;
    }
  }
  return g;
}

ConstrainedMeasure project_feasible(const EnergyGrid& g, const std::vector<double>& y) {
  const auto& kt = simd::kernels();
  const size_t m = g.m;
  ConstrainedMeasure out;
  out.rho.assign(m, 0.0);
  double ymin = *std::min_element(y.begin(), y.end());
  double ymax = *std::max_element(y.begin(), y.end());
  double umax = *std::max_element(g.kappa_bar.begin(), g.kappa_bar.end());
  double lo = ymin - umax - 1.0, hi = ymax + 1.0;
  // mass(shift) is nonincreasing; mass(lo) = sum h kappa = 2, mass(hi) = 0
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double mass = kt.clip_shift(y.data(), mid, g.kappa_bar.data(), g.h.data(), out.rho.data(), m);
    if (mass > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  double mlo = kt.clip_shift(y.data(), lo, g.kappa_bar.data(), g.h.data(), out.rho.data(), m);
  std::vector<double> rlo = out.rho;
  double mhi = kt.clip_shift(y.data(), hi, g.kappa_bar.data(), g.h.data(), out.rho.data(), m);
  // linear blend of the two bracketing projections closes the last ulp of mass
  double t = (mlo == mhi) ? 0.0 : (mlo - 1.0) / (mlo - mhi);
  for (size_t i = 0; i < m; ++i) out.rho[i] = (1 - t) * rlo[i] + t * out.rho[i];
  out.mass = kt.dot(out.rho.data(), g.h.data(), m);
  return out;
}

ConstrainedMeasure default_start(const EnergyGrid& g) {
  ConstrainedMeasure s;
  s.rho.resize(g.m);
  for (int i = 0; i < g.m; ++i) s.rho[i] = 0.5 * g.kappa_bar[i];
  s.mass = simd::kernels().dot(s.rho.data(), g.h.data(), g.m);
  return s;
}

ConstrainedMeasure ramp_start(const EnergyGrid& g) {
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i) y[i] = g.kappa_bar[i] * (g.centers[i] - g.A) / (g.B - g.A);
  return project_feasible(g, y);
}

double energy(const EnergyGrid& g, const std::vector<double>& rho) {
  const auto& kt = simd::kernels();
  std::vector<double> kr(g.m);
  kt.matvec(g.K.data(), rho.data(), kr.data(), g.m);
  return kt.dot(rho.data(), kr.data(), g.m) + kt.dot(g.v.data(), rho.data(), g.m);
}

std::vector<double> effective_potential(const EnergyGrid& g, const std::vector<double>& rho) {
  std::vector<double> e(g.m);
  simd::kernels().matvec(g.K.data(), rho.data(), e.data(), g.m);
  for (int i = 0; i < g.m; ++i) e[i] = (2.0 * e[i] + g.v[i]) / g.h[i];
  return e;
}

const char* cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::Void: return "void";
    case CellClass::Band: return "band";
    case CellClass::Saturated: return "saturated";
  }
  return "?";
}

namespace {

// Dense Gaussian elimination with partial pivoting; returns false if singular.
bool dense_solve(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[static_cast<size_t>(i) * n + k]) > std::abs(a[static_cast<size_t>(p) * n + k])) p = i;
    if (a[static_cast<size_t>(p) * n + k] == 0.0) return false;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
      std::swap(b[k], b[p]);
    }
    double piv = a[static_cast<size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      double f = a[static_cast<size_t>(i) * n + k] / piv;
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(i) * n + j] * b[j];
    b[i] = s / a[static_cast<size_t>(i) * n + i];
  }
  return true;
}

double pg_norm(const EnergyGrid& g, const std::vector<double>& rho, const std::vector<double>& e) {
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i) y[i] = rho[i] - e[i];
  ConstrainedMeasure p = project_feasible(g, y);
  double r = 0;
  for (int i = 0; i < g.m; ++i) r = std::max(r, std::abs(p.rho[i] - rho[i]));
  return r;
}

// Equality-constrained solve on the free cells of the current active set.
// Returns false if the solution leaves the box or a bound multiplier has the
// wrong sign.
bool polish_step(const EnergyGrid& g, std::vector<double>& rho, double tol) {
  const int m = g.m;
  std::vector<int> freeidx;
  std::vector<char> at_upper(m, 0);
  for (int i = 0; i < m; ++i) {
    double u = g.kappa_bar[i];
    if (rho[i] <= tol * u)
      continue;
    else if (rho[i] >= u * (1 - tol))
      at_upper[i] = 1;
    else
      freeidx.push_back(i);
  }
  const int nf = static_cast<int>(freeidx.size());
  if (nf == 0) return false;
  std::vector<double> fixed(m, 0.0);
  double fixed_mass = 0;
  for (int i = 0; i < m; ++i)
    if (at_upper[i]) {
      fixed[i] = g.kappa_bar[i];
      fixed_mass += g.h[i] * g.kappa_bar[i];
    }
  std::vector<double> kfix(m);
  simd::kernels().matvec(g.K.data(), fixed.data(), kfix.data(), m);
  const int n = nf + 1;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0), b(n, 0.0);
  for (int r = 0; r < nf; ++r) {
    int i = freeidx[r];
    for (int c = 0; c < nf; ++c) a[static_cast<size_t>(r) * n + c] = 2.0 * g.kernel(i, freeidx[c]);
    a[static_cast<size_t>(r) * n + nf] = -g.h[i];
    b[r] = -g.v[i] - 2.0 * kfix[i];
  }
  for (int c = 0; c < nf; ++c) a[static_cast<size_t>(nf) * n + c] = g.h[freeidx[c]];
  b[nf] = 1.0 - fixed_mass;
  if (!dense_solve(a, b, n)) return false;
  std::vector<double> cand = fixed;
  bool inside = true;
  for (int r = 0; r < nf; ++r) {
    int i = freeidx[r];
    cand[i] = b[r];
    if (b[r] < 0.0 || b[r] > g.kappa_bar[i]) inside = false;
  }
  if (!inside) return false;
  double ell = b[nf];
  std::vector<double> e = effective_potential(g, cand);
  double scale = g.field_scale;
  for (int i = 0; i < m; ++i) {
    if (std::find(freeidx.begin(), freeidx.end(), i) != freeidx.end()) continue;
    if (at_upper[i] && e[i] > ell + 1e-12 * scale) return false;
    if (!at_upper[i] && e[i] < ell - 1e-12 * scale) return false;
  }
  rho = std::move(cand);
  return true;
}

}  // namespace

EquilibriumSolution solve_qp(const EnergyGrid& g, const ConstrainedMeasure& start, const QpOptions& opt) {
  const auto& kt = simd::kernels();
  const int m = g.m;
  EquilibriumSolution sol;
  std::vector<double> rho = project_feasible(g, start.rho).rho;
  std::vector<double> kr(m), e(m), y(m), krn(m), en(m);
  auto eval = [&](const std::vector<double>& r, std::vector<double>& k, std::vector<double>& ee) {
    kt.matvec(g.K.data(), r.data(), k.data(), m);
    for (int i = 0; i < m; ++i) ee[i] = (2.0 * k[i] + g.v[i]) / g.h[i];
    return kt.dot(r.data(), k.data(), m) + kt.dot(g.v.data(), r.data(), m);
  };
  double E = eval(rho, kr, e);
  sol.energy_trace.push_back(E);
  // initial step from the largest row sum of 2K/h (Gershgorin bound on the Hessian)
  double L = 0;
  for (int i = 0; i < m; ++i) {
    double s = 0;
    for (int j = 0; j < m; ++j) s += std::abs(g.kernel(i, j));
    L = std::max(L, 2.0 * s / g.h[i]);
  }
  double t = 1.0 / L;
  sol.min_curvature = std::numeric_limits<double>::infinity();
  int it = 0;
  int since_polish = 0;
  for (; it < opt.max_iter; ++it) {
    double pg = pg_norm(g, rho, e);
    sol.pg_norm = pg;
    if (pg <= opt.qp_tol) {
      sol.converged = true;
      break;
    }
    if (opt.polish && (pg < 1e-6 || since_polish >= 500)) {
      since_polish = 0;
      std::vector<double> cand = rho;
      if (polish_step(g, cand, 1e-13)) {
        double Ec = eval(cand, krn, en);
        if (Ec <= E + 1e-14 * std::abs(E)) {
          rho.swap(cand);
          kr.swap(krn);
          e.swap(en);
          E = Ec;
          sol.energy_trace.push_back(E);
          ++sol.polish_steps;
          continue;
        }
      }
    }
    ++since_polish;
    std::vector<double> cand;
    double Ec = 0;
    double step = t;
    int bt = 0;
    for (;; ++bt) {
      for (int i = 0; i < m; ++i) y[i] = rho[i] - step * e[i];
      cand = project_feasible(g, y).rho;
      Ec = eval(cand, krn, en);
      if (Ec <= E || bt > 60) break;
      step *= 0.5;
    }
    if (Ec > E) break;  // no descent possible at double precision
    // BB step from the accepted pair, curvature of the quadratic along s
    double ss = 0, sy = 0;
    for (int i = 0; i < m; ++i) {
      double s = cand[i] - rho[i];
      ss += g.h[i] * s * s;
      sy += g.h[i] * s * (en[i] - e[i]);
    }
    if (ss > 0) {
      // sy = 2 s^T K s for uniform h-weighting
      double curv = 0.5 * sy / (ss / g.h[0]);
      sol.min_curvature = std::min(sol.min_curvature, curv);
      t = sy > 0 ? ss / sy : 1.0 / L;
    }
    rho.swap(cand);
    kr.swap(krn);
    e.swap(en);
    E = Ec;
    sol.energy_trace.push_back(E);
    if (ss == 0) {
      sol.pg_norm = pg_norm(g, rho, e);
      sol.converged = sol.pg_norm <= opt.qp_tol;
      break;
    }
  }
  sol.iterations = it;
  if (!std::isfinite(sol.min_curvature)) sol.min_curvature = 0;
  sol.rho.rho = rho;
  sol.rho.mass = kt.dot(rho.data(), g.h.data(), m);
  sol.energy = E;
  sol.e = e;
  if (!sol.converged) {
    if (it >= opt.max_iter)
      throw Error(ErrorKind::NoConvergence, "QP did not converge in max_iter iterations");
    throw Error(ErrorKind::NoConvergence, "QP stalled with projected gradient " + std::to_string(sol.pg_norm));
  }
  return sol;
}

void kkt_certify(EquilibriumSolution& sol, const EnergyGrid& g, double qp_tol) {
  const int m = g.m;
  const auto& rho = sol.rho.rho;
  sol.e = effective_potential(g, rho);
  double kmax = *std::max_element(g.kappa_bar.begin(), g.kappa_bar.end());
  sol.sat_tol = 1e-6 * kmax;
  sol.kkt_tol = 10.0 * qp_tol * g.field_scale;
  sol.classes.assign(m, CellClass::Band);
  for (int i = 0; i < m; ++i) {
    if (rho[i] <= sol.sat_tol)
      sol.classes[i] = CellClass::Void;
    else if (rho[i] >= g.kappa_bar[i] - sol.sat_tol)
      sol.classes[i] = CellClass::Saturated;
  }
  // ell: mass-weighted average over band cells whose neighbours are band cells
  double num = 0, den = 0;
  auto band = [&](int i) { return i >= 0 && i < m && sol.classes[i] == CellClass::Band; };
  for (int i = 0; i < m; ++i)
    if (band(i) && band(i - 1) && band(i + 1)) {
      num += rho[i] * g.h[i] * sol.e[i];
      den += rho[i] * g.h[i];
    }
  if (den == 0)
    for (int i = 0; i < m; ++i)
      if (band(i)) {
        num += rho[i] * g.h[i] * sol.e[i];
        den += rho[i] * g.h[i];
      }
  if (den > 0) {
    sol.ell = num / den;
  } else {
    double smax = -INFINITY, vmin = INFINITY;
    for (int i = 0; i < m; ++i) {
      if (sol.classes[i] == CellClass::Saturated) smax = std::max(smax, sol.e[i]);
      if (sol.classes[i] == CellClass::Void) vmin = std::min(vmin, sol.e[i]);
    }
    sol.ell = std::isfinite(smax) && std::isfinite(vmin) ? 0.5 * (smax + vmin) : (std::isfinite(smax) ? smax : vmin);
  }
  sol.slack.resize(m);
  sol.max_violation = 0;
  int worst = -1;
  for (int i = 0; i < m; ++i) {
    double s = sol.e[i] - sol.ell;
    sol.slack[i] = s;
    double viol = 0;
    switch (sol.classes[i]) {
      case CellClass::Band: viol = std::abs(s); break;
      case CellClass::Void: viol = std::max(0.0, -s); break;
      case CellClass::Saturated: viol = std::max(0.0, s); break;
    }
    if (viol > sol.max_violation) {
      sol.max_violation = viol;
      worst = i;
    }
  }
  if (sol.max_violation > sol.kkt_tol)
    throw Error(ErrorKind::InconsistentKKT, "cell " + std::to_string(worst) + " (" +
                                                cell_class_name(sol.classes[worst]) + ") violates KKT by " +
                                                std::to_string(sol.max_violation));
}

namespace {

// cell average of (x - e)_+^{1/2} (left) or (e - x)_+^{1/2} (right)
double sqrt_cell_avg(double x0, double x1, double e, bool left) {
  auto G = [&](double x) {
    double u = left ? x - e : e - x;
    return u > 0 ? (2.0 / 3.0) * u * std::sqrt(u) : 0.0;
  };
  double val = left ? G(x1) - G(x0) : G(x0) - G(x1);
  return val / (x1 - x0);
}

}  // namespace

EdgeFit fit_sqrt_edge(const EquilibriumSolution& sol, const EnergyGrid& g, bool left) {
  EdgeFit out;
  if (sol.band_first < 0) return out;
  const int run = sol.band_last - sol.band_first + 1;
  const int k = std::max(4, run / 10);
  if (run < k + 2) return out;
  std::vector<int> idx;
  for (int t = 0; t < k; ++t) idx.push_back(left ? sol.band_first + t : sol.band_last - t);
  const int e0 = left ? sol.band_first : sol.band_last;
  const double h = g.h[e0];
  const double lo = left ? g.edges[e0] - h : g.edges[e0];
  const double hi = left ? g.edges[e0 + 1] : g.edges[e0 + 1] + h;
  auto misfit = [&](double e, double* coeff) {
    double num = 0, den = 0, rr = 0;
    for (int i : idx) {
      double mdl = sqrt_cell_avg(g.edges[i], g.edges[i + 1], e, left);
      num += mdl * sol.rho.rho[i];
      den += mdl * mdl;
      rr += sol.rho.rho[i] * sol.rho.rho[i];
    }
    double C = den > 0 ? num / den : 0;
    double res = 0;
    for (int i : idx) {
      double r = sol.rho.rho[i] - C * sqrt_cell_avg(g.edges[i], g.edges[i + 1], e, left);
      res += r * r;
    }
    if (coeff) *coeff = C;
    return rr > 0 ? std::sqrt(res / rr) : 1.0;
  };
  // golden section on the edge position
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = misfit(x1, nullptr), f2 = misfit(x2, nullptr);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = misfit(x1, nullptr);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = misfit(x2, nullptr);
    }
  }
  out.edge = 0.5 * (a + b);
  out.misfit = misfit(out.edge, &out.coeff);
  return out;
}

RegimeFlags classify_regime(EquilibriumSolution& sol, const EnergyGrid& g) {
  const int m = g.m;
  RegimeFlags f;
  sol.band_first = sol.band_last = -1;
  bool in_run = false;
  for (int i = 0; i < m; ++i) {
    bool b = sol.classes[i] == CellClass::Band;
    if (b && !in_run) ++f.band_runs;
    in_run = b;
    if (b) {
      if (sol.band_first < 0) sol.band_first = i;
      sol.band_last = i;
    }
    if (sol.classes[i] == CellClass::Saturated) ++f.saturated_cells;
  }
  f.r1 = f.band_runs == 1 && sol.band_first > 0 && sol.band_last < m - 1 && f.saturated_cells == 0;
  // R2: interior band cells stay away from both bounds
  f.r2_margin = INFINITY;
  for (int i = sol.band_first + 1; sol.band_first >= 0 && i < sol.band_last; ++i)
    f.r2_margin = std::min(f.r2_margin, std::min(sol.rho.rho[i], g.kappa_bar[i] - sol.rho.rho[i]));
  if (!std::isfinite(f.r2_margin)) f.r2_margin = 0;
  f.r2 = f.band_runs >= 1 && f.r2_margin > sol.sat_tol && f.saturated_cells == 0;
  if (f.band_runs >= 1) {
    EdgeFit fc = fit_sqrt_edge(sol, g, true);
    EdgeFit fd = fit_sqrt_edge(sol, g, false);
    f.r3_misfit_c = fc.misfit;
    f.r3_misfit_d = fd.misfit;
  }
  f.r3 = f.r1 && f.r3_misfit_c < 0.2 && f.r3_misfit_d < 0.2;
  // R4: strict positive slack on cells at distance > delta from the band
  if (sol.band_first >= 0) {
    double c = g.edges[sol.band_first], d = g.edges[sol.band_last + 1];
    f.r4_delta = std::min(0.1 * (d - c), 0.5 * std::min(c - g.A, g.B - d));
    f.r4_delta = std::max(f.r4_delta, 0.0);
    double margin_tol = 100.0 * sol.kkt_tol;
    f.r4_margin = INFINITY;
    for (int i = 0; i < m; ++i) {
      double dist = g.centers[i] < c ? c - g.centers[i] : (g.centers[i] > d ? g.centers[i] - d : 0.0);
      if (dist > f.r4_delta) f.r4_margin = std::min(f.r4_margin, sol.slack[i]);
    }
    f.r4 = f.r1 && f.r4_margin > margin_tol;
    if (!std::isfinite(f.r4_margin)) f.r4_margin = 0;
  }
  sol.flags = f;
  return f;
}

void extract_band(EquilibriumSolution& sol, const EnergyGrid& g) {
  if (sol.band_first < 0) throw Error(ErrorKind::Degenerate, "no band cells");
  EdgeFit fc = fit_sqrt_edge(sol, g, true);
  EdgeFit fd = fit_sqrt_edge(sol, g, false);
  const int i0 = sol.band_first, i1 = sol.band_last;
  sol.c = std::clamp(fc.misfit < 1 ? fc.edge : g.edges[i0], g.edges[i0], g.edges[i0 + 1]);
  sol.d = std::clamp(fd.misfit < 1 ? fd.edge : g.edges[i1 + 1], g.edges[i1], g.edges[i1 + 1]);
  sol.band_uncertainty = g.h[i0];
}

EquilibriumSolution solve_equilibrium(const EnergyGrid& g, const QpOptions& opt) {
  EquilibriumSolution sol = solve_qp(g, default_start(g), opt);
  kkt_certify(sol, g, opt.qp_tol);
  classify_regime(sol, g);
  if (sol.band_first >= 0) extract_band(sol, g);
  return sol;
}

}  // namespace rh
