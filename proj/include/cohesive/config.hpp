#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cohesive {

/// Sectioned key-value configuration:
///
///   # comment
///   [section]
///   key = value          reals, integers, true/false, bare strings
///   list = 0.1, 0.2, 0.5 comma-separated lists
///
/// Every section and key is checked against a fixed schema when parsed;
/// unknown names and ill-typed values throw std::invalid_argument with the
/// offending line.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::istream& in, const std::string& origin = "<config>");
  static ExperimentConfig load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key, long fallback) const;
  bool boolean(const std::string& section, const std::string& key, bool fallback) const;
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const;
  std::vector<double> reals(const std::string& section, const std::string& key,
                            const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& section, const std::string& key,
                            const std::vector<int>& fallback) const;

  /// Sets or replaces a value after validating it against the schema.
  void set(const std::string& section, const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
};

/// Human-readable schema: one "[section] key : type" line per entry.
std::string config_schema();

}  // namespace cohesive
