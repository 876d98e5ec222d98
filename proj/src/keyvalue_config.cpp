// SPDX-License-Identifier: Apache-2.0

#include "ssc/keyvalue_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssc {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value', got: " + line);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  std::size_t pos = 0;
  long long v = std::stoll(it->second, &pos);
  if (pos != it->second.size()) {
    throw std::runtime_error("config key '" + key + "': not an integer: " + it->second);
  }
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  std::size_t pos = 0;
  double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) {
    throw std::runtime_error("config key '" + key + "': not a number: " + it->second);
  }
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  const std::string& v = it->second;
  if (v == "true" || v == "yes" || v == "on" || v == "1") {
    return true;
  }
  if (v == "false" || v == "no" || v == "off" || v == "0") {
    return false;
  }
  throw std::runtime_error("config key '" + key + "': not a boolean: " + v);
}

std::string KeyValueConfig::require_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw std::runtime_error("missing required config key: " + key);
  }
  return it->second;
}

long long KeyValueConfig::require_int(const std::string& key) const {
  if (!has(key)) {
    throw std::runtime_error("missing required config key: " + key);
  }
  return get_int(key, 0);
}

double KeyValueConfig::require_double(const std::string& key) const {
  if (!has(key)) {
    throw std::runtime_error("missing required config key: " + key);
  }
  return get_double(key, 0.0);
}

std::vector<std::string> KeyValueConfig::get_string_list(const std::string& key) const {
  std::vector<std::string> items;
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return items;
  }
  std::string value = it->second;
  for (char& c : value) {
    if (c == ',') {
      c = ' ';
    }
  }
  std::istringstream in(value);
  std::string item;
  while (in >> item) {
    items.push_back(item);
  }
  return items;
}

std::vector<long long> KeyValueConfig::get_int_list(const std::string& key) const {
  std::vector<long long> items;
  for (const std::string& s : get_string_list(key)) {
    items.push_back(std::stoll(s));
  }
  return items;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> items;
  for (const std::string& s : get_string_list(key)) {
    items.push_back(std::stod(s));
  }
  return items;
}

}  // namespace ssc
