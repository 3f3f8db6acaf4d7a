#include "oscc/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "oscc/error.hpp"

namespace oscc {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw Error(ErrorCode::kSchemaViolation, "unexpected field '" + where + item.key() + "'");
    }
  }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw Error(ErrorCode::kSchemaViolation, "missing field '" + where + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw Error(ErrorCode::kSchemaViolation, "field '" + where + key + "' must be a number");
  return v.get<double>();
}

double optional_number(const json& obj, const std::string& key, const std::string& where, double fallback) {
  return obj.contains(key) ? require_number(obj, key, where) : fallback;
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < text.size() && i < byte; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

CostModel parse_cost(const json& cost) {
  if (!cost.is_object()) throw Error(ErrorCode::kSchemaViolation, "field 'cost' must be an object");
  if (!cost.contains("family")) throw Error(ErrorCode::kSchemaViolation, "missing field 'cost.family'");
  if (!cost.at("family").is_string()) {
    throw Error(ErrorCode::kSchemaViolation, "field 'cost.family' must be a string");
  }
  const std::string family = cost.at("family").get<std::string>();
  if (family == "linear" || family == "quadratic") {
    reject_unknown(cost, {"family", "a"}, "cost.");
    const double a = require_number(cost, "a", "cost.");
    return family == "linear" ? CostModel::linear(a) : CostModel::quadratic(a);
  }
  if (family == "exponential") {
    reject_unknown(cost, {"family", "a", "s"}, "cost.");
    return CostModel::exponential(optional_number(cost, "a", "cost.", 145.5),
                                  optional_number(cost, "s", "cost.", 50.0));
  }
  if (family == "table") {
    reject_unknown(cost, {"family", "c"}, "cost.");
    if (!cost.contains("c")) throw Error(ErrorCode::kSchemaViolation, "missing field 'cost.c'");
    const json& c = cost.at("c");
    if (!c.is_array()) throw Error(ErrorCode::kSchemaViolation, "field 'cost.c' must be an array");
    std::vector<double> marginals;
    for (const json& v : c) {
      if (!v.is_number()) throw Error(ErrorCode::kSchemaViolation, "field 'cost.c' must hold numbers");
      marginals.push_back(v.get<double>());
    }
    return CostModel::table(std::move(marginals));
  }
  throw Error(ErrorCode::kUnknownCostFamily, "'" + family + "'");
}

}  // namespace

LoadedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaViolation, "top level must be an object");
  reject_unknown(doc, {"cost", "p_min", "p_max", "k"}, "");
  if (!doc.contains("cost")) throw Error(ErrorCode::kSchemaViolation, "missing field 'cost'");

  LoadedConfig out;
  out.setup.cost = parse_cost(doc.at("cost"));
  out.setup.p_min = require_number(doc, "p_min", "");
  out.setup.p_max = require_number(doc, "p_max", "");
  if (!doc.contains("k")) throw Error(ErrorCode::kSchemaViolation, "missing field 'k'");
  const json& k = doc.at("k");
  if (!k.is_number_integer()) throw Error(ErrorCode::kSchemaViolation, "field 'k' must be an integer");
  const auto kv = k.get<std::int64_t>();
  if (kv < 1 || kv > 100000000) throw Error(ErrorCode::kNonPositiveCapacity, "k must be in [1, 1e8]");
  out.setup.k = static_cast<int>(kv);
  return out;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json setup_to_json(const Setup& setup) {
  json cost;
  cost["family"] = std::string(family_name(setup.cost.family()));
  switch (setup.cost.family()) {
    case CostFamily::kLinear:
    case CostFamily::kQuadratic:
      cost["a"] = setup.cost.a();
      break;
    case CostFamily::kExponential:
      cost["a"] = setup.cost.a();
      cost["s"] = setup.cost.s();
      break;
    case CostFamily::kTable:
      cost["c"] = setup.cost.marginals();
      break;
  }
  return json{{"cost", cost}, {"p_min", setup.p_min}, {"p_max", setup.p_max}, {"k", setup.k}};
}

std::string setup_id(const Setup& setup) {
  const std::string canonical = setup_to_json(setup).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

json design_to_json(const OptimalDesign& design) {
  json candidates = json::array();
  for (const auto& c : design.tau_candidates) candidates.push_back({{"tau", c.tau}, {"alpha", c.alpha}});
  return json{{"cr_star", design.cr_star},
              {"tau", design.threshold.tau},
              {"lambda", design.threshold.values},
              {"residual_max", design.residual_max()},
              {"tau_candidates", candidates}};
}

json lower_bound_to_json(const LowerBoundResult& result) {
  return json{{"cr_lb", result.cr_lb}, {"gamma", result.gamma}, {"q", result.q}, {"residual", result.residual}};
}

json asymptotic_to_json(const AsymptoticResult& result) {
  json trace = json::array();
  for (const auto& [y, phi] : result.phi_trace) trace.push_back({y, phi});
  return json{{"cr_asym", result.cr_asym}, {"theta", result.theta}, {"phi_trace", trace}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto emit_row = [&](const auto& cells, auto&& render) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += render(cells[i]);
    }
    out += '\n';
  };
  emit_row(table.header, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) {
    emit_row(row, [](const CsvCell& cell) {
      if (const auto* s = std::get_if<std::string>(&cell)) return *s;
      if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
      return std::to_string(std::get<std::int64_t>(cell));
    });
  }
  return out;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

void write_csv(const CsvTable& table, const std::string& path) { write_text(to_csv(table), path); }

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace oscc
