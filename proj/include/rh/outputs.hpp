#pragma once

#include <string>
#include <vector>

#include "rh/pipeline.hpp"

namespace rh {

// Files are named <name>-<cfg hash>-<command>.<kind> inside the output directory:
//   .summary.json      stages, checks, config, contour metadata
//   .acceptance.txt    the plain-text acceptance table
//   .<table>.csv       one per table, header row first
struct OutputPaths {
  std::string summary_json;
  std::string acceptance_txt;
  std::vector<std::string> csv;
};

std::string output_stem(const AcceptanceReport& r);
std::string acceptance_table_text(const std::vector<CheckRecord>& checks);
std::string summary_json_text(const AcceptanceReport& r);
std::string csv_text(const Table& t);

// Creates the directory if needed. Throws Error(Io) with the OS message.
OutputPaths emit_outputs(const AcceptanceReport& r, const std::string& dir);

// Reads back a summary written by emit_outputs (tables are not restored).
AcceptanceReport load_summary(const std::string& path);

}  // namespace rh
