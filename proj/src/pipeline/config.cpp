//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/pipeline/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace molprobe {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos)
      comma = text.size();
    std::string item = trim(text.substr(start, comma - start));
    if (!item.empty())
      out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig c;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(
          fmt::format("line {}: expected key = value, got '{}'", line_no, line));
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty())
      throw ConfigError(fmt::format("line {}: empty key", line_no));
    c.entries_.emplace_back(std::move(key),
                            trim(std::string_view(line).substr(eq + 1)));
    c.lines_.push_back(line_no);
  }
  return c;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void KeyValueConfig::set(std::string key, std::string value) {
  std::erase_if(entries_, [&](const auto &kv) { return kv.first == key; });
  entries_.emplace_back(std::move(key), std::move(value));
  lines_.push_back(0);
}

bool KeyValueConfig::has(std::string_view key) const {
  return get(key).has_value();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  used_.insert(std::string(key));
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == key)
      return it->second;
  return std::nullopt;
}

std::vector<std::string> KeyValueConfig::get_all(std::string_view key) const {
  used_.insert(std::string(key));
  std::vector<std::string> out;
  for (const auto &[k, v]: entries_)
    if (k == key)
      out.push_back(v);
  return out;
}

std::vector<std::string>
KeyValueConfig::keys_with_prefix(std::string_view prefix) const {
  std::vector<std::string> out;
  for (const auto &[k, v]: entries_)
    if (k.starts_with(prefix)
        && std::find(out.begin(), out.end(), k) == out.end())
      out.push_back(k);
  return out;
}

std::string KeyValueConfig::get_string(std::string_view key,
                                       std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

long long KeyValueConfig::get_int(std::string_view key,
                                  long long fallback) const {
  auto v = get(key);
  if (!v)
    return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, *v));
  return out;
}

double KeyValueConfig::get_double(std::string_view key,
                                  double fallback) const {
  auto v = get(key);
  if (!v)
    return fallback;
  try {
    std::size_t used = 0;
    double out = std::stod(*v, &used);
    if (used == v->size())
      return out;
  } catch (const std::exception &) {
  }
  throw ConfigError(fmt::format("{}: '{}' is not a number", key, *v));
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v)
    return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on")
    return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off")
    return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, *v));
}

void KeyValueConfig::reject_unused() const {
  std::vector<std::string> unknown;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const std::string &k = entries_[i].first;
    if (!used_.contains(k)
        && std::find(unknown.begin(), unknown.end(), k) == unknown.end())
      unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto &k: unknown)
      list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown config keys: " + list);
  }
}

std::string KeyValueConfig::canonical() const {
  std::map<std::string, std::vector<std::string>> merged;
  for (const auto &[k, v]: entries_)
    merged[k].push_back(v);
  std::string out;
  for (const auto &[k, vs]: merged)
    for (const auto &v: vs)
      out += k + "=" + v + "\n";
  return out;
}

}  // namespace molprobe
