#include "rh/outputs.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace rh {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "run" : out;
}

// JSON has no inf/nan; those are written as strings.
ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

double from_number(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  std::string s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, p.string() + ": " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::Io, p.string() + ": write failed: " + std::strerror(errno));
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

CheckStatus parse_status(const std::string& s) {
  for (CheckStatus c : {CheckStatus::Pass, CheckStatus::Fail, CheckStatus::KnownFail, CheckStatus::UnexpectedPass,
                        CheckStatus::Skipped, CheckStatus::NotRun, CheckStatus::Error})
    if (s == check_status_name(c)) return c;
  throw Error(ErrorKind::Io, "unknown check status: " + s);
}

}  // namespace

std::string output_stem(const AcceptanceReport& r) {
  return sanitize(r.config_name) + "-" + r.cfg_hash + "-" + sanitize(r.command);
}

std::string acceptance_table_text(const std::vector<CheckRecord>& checks) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-3s %-38s %-18s %-30s %-12s\n", "id", "criterion", "status", "relation",
                "measured / threshold");
  os << buf;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-3d %-38s %-18s %-30s %.4g / %.4g\n", c.id, c.name.c_str(),
                  check_status_name(c.status), c.relation.c_str(), c.measured, c.threshold);
    os << buf;
    if (!c.detail.empty()) os << "      " << c.detail << "\n";
  }
  return os.str();
}

std::string summary_json_text(const AcceptanceReport& r) {
  ordered_json j;
  j["config_name"] = r.config_name;
  j["command"] = r.command;
  j["cfg_hash"] = r.cfg_hash;
  j["config"] = r.canonical_config;
  j["contour"] = r.contour;
  j["simd_backend"] = r.simd_backend;
  ordered_json st = ordered_json::array();
  for (const auto& s : r.stages) st.push_back({{"stage", stage_name(s.stage)}, {"status", s.status}});
  j["stages"] = st;
  ordered_json cs = ordered_json::array();
  for (const auto& c : r.checks)
    cs.push_back({{"id", c.id},
                  {"name", c.name},
                  {"status", check_status_name(c.status)},
                  {"measured", number(c.measured)},
                  {"threshold", number(c.threshold)},
                  {"relation", c.relation},
                  {"basis", c.basis},
                  {"detail", c.detail}});
  j["checks"] = cs;
  ordered_json tabs = ordered_json::array();
  for (const auto& t : r.tables) tabs.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}});
  j["tables"] = tabs;
  j["exit_code"] = report_exit_code(r);
  return j.dump(2) + "\n";
}

std::string csv_text(const Table& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_cell(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  return os.str();
}

OutputPaths emit_outputs(const AcceptanceReport& r, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, dir + ": " + ec.message());
  const fs::path base(dir);
  const std::string stem = output_stem(r);
  OutputPaths p;
  p.summary_json = (base / (stem + ".summary.json")).string();
  p.acceptance_txt = (base / (stem + ".acceptance.txt")).string();
  write_file(p.summary_json, summary_json_text(r));
  write_file(p.acceptance_txt, acceptance_table_text(r.checks));
  for (const auto& t : r.tables) {
    std::string path = (base / (stem + "." + t.name + ".csv")).string();
    write_file(path, csv_text(t));
    p.csv.push_back(path);
  }
  return p;
}

AcceptanceReport load_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, path + ": " + std::strerror(errno));
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Io, path + ": " + e.what());
  }
  AcceptanceReport r;
  r.config_name = j.at("config_name").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.cfg_hash = j.at("cfg_hash").get<std::string>();
  r.canonical_config = j.at("config").get<std::string>();
  r.contour = j.at("contour").get<std::string>();
  r.simd_backend = j.at("simd_backend").get<std::string>();
  for (const auto& s : j.at("stages")) {
    std::string name = s.at("stage").get<std::string>();
    for (Stage st : {Stage::Nodes, Stage::Pade, Stage::Equilibrium, Stage::Phase, Stage::Parametrix})
      if (name == stage_name(st)) r.stages.push_back({st, s.at("status").get<std::string>()});
  }
  for (const auto& c : j.at("checks")) {
    CheckRecord rec;
    rec.id = c.at("id").get<int>();
    rec.name = c.at("name").get<std::string>();
    rec.status = parse_status(c.at("status").get<std::string>());
    rec.measured = from_number(c.at("measured"));
    rec.threshold = from_number(c.at("threshold"));
    rec.relation = c.at("relation").get<std::string>();
    rec.basis = c.at("basis").get<std::string>();
    rec.detail = c.at("detail").get<std::string>();
    r.checks.push_back(std::move(rec));
  }
  return r;
}

}  // namespace rh
