#include "cohesive/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cohesive/csv.hpp"

namespace cohesive {

namespace {

enum class Type { Real, Int, Bool, Text, RealList, IntList };

const char* type_name(Type t) {
  switch (t) {
    case Type::Real: return "real";
    case Type::Int: return "integer";
    case Type::Bool: return "bool";
    case Type::Text: return "string";
    case Type::RealList: return "real list";
    case Type::IntList: return "integer list";
  }
  return "?";
}

using Schema = std::map<std::string, std::map<std::string, Type>>;

const Schema& schema() {
  static const Schema s = {
      {"potential",
       {{"family", Type::Text},
        {"ell", Type::Real},
        {"a", Type::Real},
        {"p", Type::Real},
        {"kappa", Type::Real},
        {"j", Type::Real},
        {"tab_s", Type::RealList},
        {"tab_f", Type::RealList}}},
      {"grid", {{"s", Type::RealList}}},
      {"solver",
       {{"max_iterations", Type::Int},
        {"energy_tol", Type::Real},
        {"initial_T", Type::Real},
        {"T_growth", Type::Real},
        {"T_stop_tol", Type::Real},
        {"max_T_steps", Type::Int},
        {"nodes_per_unit", Type::Real},
        {"beta_clamp", Type::Real},
        {"max_nodes", Type::Int},
        {"init", Type::Text},
        {"table_tol", Type::Real}}},
      {"checks",
       {{"small_slope_tol", Type::Real}, {"large_s_level", Type::Real}, {"remark_bound", Type::Bool}}},
      {"profiles", {{"s", Type::RealList}, {"oracle", Type::Bool}}},
      {"fk", {{"eps", Type::Real}, {"points", Type::Int}}},
      {"bar",
       {{"eps", Type::RealList},
        {"t", Type::RealList},
        {"tol", Type::Real},
        {"max_rounds", Type::Int},
        {"v_iterations", Type::Int},
        {"multistart", Type::Bool},
        {"cells", Type::Int}}},
      {"regime",
       {{"kind", Type::Text},
        {"indices", Type::IntList},
        {"s", Type::RealList},
        {"ell", Type::Real},
        {"a_base", Type::Real},
        {"eps_power", Type::Real},
        {"p", Type::Real},
        {"kappa", Type::Real},
        {"ell_base", Type::Real},
        {"small_s", Type::RealList},
        {"sup_gap_max", Type::Real},
        {"level_min", Type::Real}}},
      {"oracle",
       {{"s", Type::RealList},
        {"n_alpha", Type::Int},
        {"n_beta", Type::Int},
        {"stencil", Type::Int},
        {"factor", Type::Real},
        {"tol", Type::Real},
        {"max_refinements", Type::Int},
        {"polish", Type::Bool},
        {"paths", Type::Bool}}},
  };
  return s;
}

std::string trim(std::string_view v) {
  std::size_t a = 0;
  std::size_t b = v.size();
  while (a < b && std::isspace(static_cast<unsigned char>(v[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(v[b - 1]))) --b;
  return std::string(v.substr(a, b - a));
}

bool parse_real(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& text, long& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_bool(const std::string& text, bool& out) {
  if (text == "true") {
    out = true;
    return true;
  }
  if (text == "false") {
    out = false;
    return true;
  }
  return false;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  for (const auto& cell : csv::split(text)) items.push_back(trim(cell));
  return items;
}

bool check_type(Type type, const std::string& value) {
  double d;
  long l;
  bool b;
  switch (type) {
    case Type::Real:
      return parse_real(value, d);
    case Type::Int:
      return parse_int(value, l);
    case Type::Bool:
      return parse_bool(value, b);
    case Type::Text:
      return !value.empty();
    case Type::RealList:
      for (const auto& item : split_list(value)) {
        if (!parse_real(item, d)) return false;
      }
      return true;
    case Type::IntList:
      for (const auto& item : split_list(value)) {
        if (!parse_int(item, l)) return false;
      }
      return true;
  }
  return false;
}

Type lookup(const std::string& section, const std::string& key) {
  const auto& s = schema();
  const auto sec = s.find(section);
  if (sec == s.end()) throw std::invalid_argument("unknown config section [" + section + "]");
  const auto k = sec->second.find(key);
  if (k == sec->second.end()) {
    throw std::invalid_argument("unknown config key '" + key + "' in [" + section + "]");
  }
  return k->second;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto where = origin + ":" + std::to_string(number) + ": ";
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw std::invalid_argument(where + "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (schema().count(section) == 0) {
        throw std::invalid_argument(where + "unknown config section [" + section + "]");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(where + "expected key = value");
    if (section.empty()) throw std::invalid_argument(where + "key outside of a section");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (cfg.has(section, key)) throw std::invalid_argument(where + "duplicate key '" + key + "'");
    try {
      cfg.set(section, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + e.what());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  return parse(in, path.string());
}

void ExperimentConfig::set(const std::string& section, const std::string& key,
                           const std::string& value) {
  const Type type = lookup(section, key);
  if (!check_type(type, value)) {
    throw std::invalid_argument("value '" + value + "' for " + section + "." + key +
                                " is not a " + type_name(type));
  }
  values_[section][key] = value;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  const auto sec = values_.find(section);
  return sec != values_.end() && sec->second.count(key) > 0;
}

double ExperimentConfig::real(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  double v = 0.0;
  parse_real(values_.at(section).at(key), v);
  return v;
}

long ExperimentConfig::integer(const std::string& section, const std::string& key,
                               long fallback) const {
  if (!has(section, key)) return fallback;
  long v = 0;
  parse_int(values_.at(section).at(key), v);
  return v;
}

bool ExperimentConfig::boolean(const std::string& section, const std::string& key,
                               bool fallback) const {
  if (!has(section, key)) return fallback;
  bool v = false;
  parse_bool(values_.at(section).at(key), v);
  return v;
}

std::string ExperimentConfig::text(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  return has(section, key) ? values_.at(section).at(key) : fallback;
}

std::vector<double> ExperimentConfig::reals(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(values_.at(section).at(key))) {
    double v = 0.0;
    parse_real(item, v);
    out.push_back(v);
  }
  return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& section, const std::string& key,
                                            const std::vector<int>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(values_.at(section).at(key))) {
    long v = 0;
    parse_int(item, v);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string config_schema() {
  std::ostringstream out;
  for (const auto& [section, keys] : schema()) {
    for (const auto& [key, type] : keys) {
      out << '[' << section << "] " << key << " : " << type_name(type) << '\n';
    }
  }
  return out.str();
}

}  // namespace cohesive
