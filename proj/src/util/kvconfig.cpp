#include "apc/kvconfig.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "apc/error.hpp"

namespace apc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KvConfig KvConfig::parse(std::string_view text, const std::string& source) {
  KvConfig cfg;
  cfg.source_ = source;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    if (!cfg.values_.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key \"" + key + "\"");
    }
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::string KvConfig::text(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KvConfig::real(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size() || !std::isfinite(out)) {
    throw ConfigError(source_ + ": \"" + key + "\" is not a finite number: " + *v);
  }
  return out;
}

std::int64_t KvConfig::integer(const std::string& key, std::int64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ConfigError(source_ + ": \"" + key + "\" is not an integer: " + *v);
  }
  return out;
}

bool KvConfig::boolean(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError(source_ + ": \"" + key + "\" is not a boolean: " + *v);
}

void KvConfig::set(const std::string& key, std::string value) { values_[key] = std::move(value); }
void KvConfig::set(const std::string& key, double value) { values_[key] = format_real(value); }
void KvConfig::set(const std::string& key, std::int64_t value) { values_[key] = std::to_string(value); }

std::vector<std::string> KvConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void KvConfig::reject_unused() const {
  for (const auto& [k, v] : values_) {
    if (!used_.contains(k)) throw ConfigError(source_ + ": unknown key \"" + k + "\"");
  }
}

std::string KvConfig::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace apc
