//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_PIPELINE_CONFIG_H_
#define MOLPROBE_PIPELINE_CONFIG_H_

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace molprobe {

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` text. '#' starts a comment line; keys may
// repeat, the last one wins for scalar reads. Lookups are recorded so
// unknown keys can be reported.
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path &path);

  // Adds or overrides a key (command-line flags).
  void set(std::string key, std::string value);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;
  // Keys starting with `prefix`, in file order, without duplicates.
  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  // Throws ConfigError listing keys never looked up.
  void reject_unused() const;

  // Sorted "key=value" lines of the effective values; hashing this text
  // identifies the configuration.
  std::string canonical() const;

  const std::vector<std::pair<std::string, std::string>> &entries() const {
    return entries_;
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<int> lines_;
  mutable std::set<std::string, std::less<>> used_;
};

// Comma-separated list with blanks trimmed and empty items dropped.
std::vector<std::string> split_list(std::string_view text);

}  // namespace molprobe

#endif  // MOLPROBE_PIPELINE_CONFIG_H_
