#include "rh/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rh {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  bad(key + ": not a number: '" + v + "'");
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  bad(key + ": not an integer: '" + v + "'");
}

template <class T, class Conv>
std::vector<T> to_list(const std::string& key, const std::string& v, Conv conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<T>(conv(key, item)));
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::set<std::string> kKeys = {
    "run.name",       "run.s_re",      "run.s_im",       "run.bits",        "run.n_list",
    "run.seed",       "run.extra_k_points",
    "density.kind",   "density.A",     "density.B",      "density.params",
    "field.kind",     "field.strength", "field.center",
    "equilibrium.m",  "equilibrium.qp_tol",
    "phase.m",        "phase.bits",    "phase.n_list",
    "rates.n_list",
    "output.dir",
};

}  // namespace

DensitySpec RunConfig::density() const { return build_density(density_kind, A, B, density_params); }

FieldEvaluator RunConfig::field() const {
  DensitySpec d = density();
  if (field_kind == "quadratic") return FieldEvaluator::quadratic(d, field_strength, field_center);
  return FieldEvaluator(d);
}

std::string RunConfig::contour_description() const {
  double left = std::max(A - 0.25 * (B - A), 0.5 * A);
  double right = B + 0.25 * (B - A);
  return "ellipse, real vertices " + num(left) + " and " + num(right) + ", semi-minor axis " + num(0.5 * (B - A));
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(std::string("parse error: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) bad("key outside a section: " + section);
    for (const auto& [k, v] : body) {
      const std::string key = section + "." + k;
      if (!kKeys.count(key)) bad("unknown key: " + key);
      const std::string val = trim(v.data());
      if (key == "run.name") c.name = val;
      else if (key == "run.s_re") c.s_re = to_double(key, val);
      else if (key == "run.s_im") c.s_im = to_double(key, val);
      else if (key == "run.bits") c.bits = to_long(key, val);
      else if (key == "run.n_list") c.n_list = to_list<int>(key, val, to_long);
      else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(to_long(key, val));
      else if (key == "run.extra_k_points") c.extra_k_points = static_cast<int>(to_long(key, val));
      else if (key == "density.kind") {
        try {
          c.density_kind = parse_density_kind(val);
        } catch (const Error& e) {
          bad(key + ": " + e.what());
        }
      } else if (key == "density.A") c.A = to_double(key, val);
      else if (key == "density.B") c.B = to_double(key, val);
      else if (key == "density.params") c.density_params = to_list<double>(key, val, to_double);
      else if (key == "field.kind") c.field_kind = val;
      else if (key == "field.strength") c.field_strength = to_double(key, val);
      else if (key == "field.center") c.field_center = to_double(key, val);
      else if (key == "equilibrium.m") c.eq_m = static_cast<int>(to_long(key, val));
      else if (key == "equilibrium.qp_tol") c.qp_tol = to_double(key, val);
      else if (key == "phase.m") c.phase_m = static_cast<int>(to_long(key, val));
      else if (key == "phase.bits") c.phase_bits = to_long(key, val);
      else if (key == "phase.n_list") c.phase_n_list = to_list<int>(key, val, to_long);
      else if (key == "rates.n_list") c.rate_n_list = to_list<int>(key, val, to_long);
      else if (key == "output.dir") c.out_dir = val;
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto increasing = [](const std::vector<int>& v) {
    if (v.empty() || v.front() < 1) return false;
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i] <= v[i - 1]) return false;
    return true;
  };
  if (!(c.s_re > 1)) bad("Re s must be > 1 (got " + num(c.s_re) + ")");
  if (!(c.A > 0)) bad("A must be > 0 (got " + num(c.A) + ")");
  if (!(c.B > c.A)) bad("B must exceed A");
  if (c.bits < 128) bad("bits must be >= 128");
  if (c.phase_bits < 128) bad("phase.bits must be >= 128");
  if (!increasing(c.n_list)) bad("run.n_list must be positive and increasing");
  if (!increasing(c.phase_n_list)) bad("phase.n_list must be positive and increasing");
  if (!increasing(c.rate_n_list)) bad("rates.n_list must be positive and increasing");
  if (c.field_kind != "kappa" && c.field_kind != "quadratic") bad("field.kind must be kappa or quadratic");
  if (c.field_kind == "quadratic" && !(c.field_strength > 0)) bad("field.strength must be > 0");
  if (c.eq_m < 16 || c.phase_m < 16) bad("grid sizes must be >= 16");
  if (!(c.qp_tol > 0)) bad("qp_tol must be > 0");
  if (c.extra_k_points < 0) bad("extra_k_points must be >= 0");
  if (c.jobs < 1) bad("jobs must be >= 1");
  try {
    (void)c.density();
  } catch (const Error& e) {
    bad(std::string("density: ") + e.what());
  }
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream os;
  os << "run.name=" << c.name << "\n"
     << "run.s=" << num(c.s_re) << "," << num(c.s_im) << "\n"
     << "run.bits=" << c.bits << "\n"
     << "run.n_list=" << join_ints(c.n_list) << "\n"
     << "run.seed=" << c.seed << "\n"
     << "run.extra_k_points=" << c.extra_k_points << "\n"
     << "density.kind=" << density_kind_name(c.density_kind) << "\n"
     << "density.A=" << num(c.A) << "\n"
     << "density.B=" << num(c.B) << "\n"
     << "density.params=";
  for (size_t i = 0; i < c.density_params.size(); ++i) os << (i ? "," : "") << num(c.density_params[i]);
  os << "\n"
     << "field.kind=" << c.field_kind << "\n"
     << "field.strength=" << num(c.field_strength) << "\n"
     << "field.center=" << num(c.field_center) << "\n"
     << "equilibrium.m=" << c.eq_m << "\n"
     << "equilibrium.qp_tol=" << num(c.qp_tol) << "\n"
     << "phase.m=" << c.phase_m << "\n"
     << "phase.bits=" << c.phase_bits << "\n"
     << "phase.n_list=" << join_ints(c.phase_n_list) << "\n"
     << "rates.n_list=" << join_ints(c.rate_n_list) << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rh
