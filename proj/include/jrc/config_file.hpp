#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jrc {

// INI-style config: [section] headers, key = value lines, full-line # or ;
// comments. Repeated keys are kept in order (used for target lists).
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path);
  static ConfigFile parse(const std::string& text, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<std::string> get_all(const std::string& section,
                                   const std::string& key) const;
  bool has_section(const std::string& section) const;

  // Comma-separated value helpers.
  static std::vector<std::string> split_list(const std::string& value);

 private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      sections_;
  std::string origin_;
};

}  // namespace jrc
