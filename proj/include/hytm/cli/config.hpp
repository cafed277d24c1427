#pragma once

// Command-line plumbing shared by the CLI and its tests: key=value config
// files and comma-separated value lists.

#include <charconv>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hytm::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Reads `key = value` lines. Blank lines, `#`/`;` comments and `[section]` headers are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key=value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    while (key.starts_with('-')) key.erase(0, 1);
    if (key.empty()) throw ConfigError("config line " + std::to_string(n) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

/// Config entries as long options. Appended after the command line, they take precedence.
inline std::vector<std::string> config_arguments(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<std::string> args;
  for (const auto& [k, v] : kv) args.push_back("--" + k + "=" + v);
  return args;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    std::string item = trim(s.substr(start, end - start));
    if (item.empty()) throw ConfigError("empty item in list '" + std::string(s) + "'");
    out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
std::vector<T> split_numbers(std::string_view s) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    T v{};
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || p != item.data() + item.size()) throw ConfigError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// Accepts `a`, `a..b` (inclusive) or a comma list.
inline std::vector<std::size_t> parse_range(std::string_view s) {
  if (const auto dots = s.find(".."); dots != std::string_view::npos) {
    auto lo = split_numbers<std::size_t>(s.substr(0, dots));
    auto hi = split_numbers<std::size_t>(s.substr(dots + 2));
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw ConfigError("bad range '" + std::string(s) + "'");
    std::vector<std::size_t> out;
    for (auto v = lo[0]; v <= hi[0]; ++v) out.push_back(v);
    return out;
  }
  return split_numbers<std::size_t>(s);
}

}  // namespace hytm::cli
