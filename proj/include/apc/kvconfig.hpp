#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace apc {

// Flat `key = value` text config. Lines starting with '#' are comments.
// Readers mark keys they consume; unknown keys can then be rejected in one
// place.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig parse(std::string_view text, const std::string& source = "<config>");
  static KvConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;

  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;

  void set(const std::string& key, std::string value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);

  std::vector<std::string> keys() const;
  // Throws ConfigError naming the first key nobody read.
  void reject_unused() const;

  // Sorted `key = value` lines.
  std::string dump() const;
  const std::string& source() const noexcept { return source_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
  std::string source_ = "<config>";
};

std::string format_real(double v);

}  // namespace apc
