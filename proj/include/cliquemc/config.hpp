#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cliquemc {

// Flat `key = value` text config. `#` starts a comment, blank lines are
// skipped, keys are unique. Values are accessed through typed getters;
// unknown keys left unread are reported so configs stay diff-able and
// typo-proof.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_string(const std::string& text);
  static KeyValueConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-separated
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& key) const;

  // Keys present in the file but never read through a getter.
  std::vector<std::string> unused_keys() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::map<std::string, bool> touched_;
};

}  // namespace cliquemc
