#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "oscc/core_model.hpp"
#include "oscc/lower_bound.hpp"
#include "oscc/threshold_solver.hpp"

namespace oscc {

struct LoadedConfig {
  Setup setup;
  SolverConfig solver;
};

// Strict parse of {"cost": {...}, "p_min": x, "p_max": y, "k": n}.
LoadedConfig parse_config(const std::string& text);
LoadedConfig load_config(const std::string& path);

nlohmann::json setup_to_json(const Setup& setup);
// FNV-1a of the canonical setup JSON, as 16 hex digits.
std::string setup_id(const Setup& setup);

nlohmann::json design_to_json(const OptimalDesign& design);
nlohmann::json lower_bound_to_json(const LowerBoundResult& result);
nlohmann::json asymptotic_to_json(const AsymptoticResult& result);

using CsvCell = std::variant<std::string, double, std::int64_t>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

std::string format_number(double v);
std::string to_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::string& path);
void write_text(const std::string& text, const std::string& path);
// Header row first; cells are returned as text.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace oscc
