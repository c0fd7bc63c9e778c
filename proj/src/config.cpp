#include "spdt/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace spdt {

namespace {

std::string_view trim(std::string_view s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  sections_[section][key] = value;
}

std::optional<std::string> Config::get(const std::string& section,
                                       const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  auto v = get(section, key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: [" + section + "] " + key + " = '" + *v +
                             "' is not a number");
  }
}

int64_t Config::get_int(const std::string& section, const std::string& key,
                        int64_t fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    size_t pos = 0;
    long long d = std::stoll(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: [" + section + "] " + key + " = '" + *v +
                             "' is not an integer");
  }
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw std::runtime_error("config: [" + section + "] " + key + " = '" + *v +
                           "' is not a boolean");
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [sec, kv] : sections_) {
    out += "[" + sec + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  }
  return out;
}

uint64_t Config::hash() const { return fnv1a64(canonical()); }

Config Config::parse(const std::string& text) {
  Config cfg;
  std::string section;  // keys before any [section] land in ""
  size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: unterminated section at line " +
                                 std::to_string(lineno));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      cfg.sections_[section];  // empty sections still register
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(lineno) + ": '" + std::string(line) + "'");
    std::string key(trim(line.substr(0, eq)));
    std::string val(trim(line.substr(eq + 1)));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    cfg.sections_[section][key] = val;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace spdt
