// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace ssc {

// Flat key-value configuration with dotted keys, e.g.
//
//   # comment
//   corpus.speakers = 4
//   scenario.tau    = 0.7
//   matrix.seeds    = 1 2 3
//
// Values are stored as strings; typed getters parse on access. Getters with a
// default never fail on a missing key, the `require_*` variants do.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::string require_string(const std::string& key) const;
  long long require_int(const std::string& key) const;
  double require_double(const std::string& key) const;

  // Whitespace- or comma-separated lists.
  std::vector<std::string> get_string_list(const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ssc
