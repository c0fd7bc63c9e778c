#pragma once
// Flat sectioned key=value config files, canonicalization and hashing.
// Syntax:  [section] lines open a section; "key = value" lines assign within
// it; '#' and ';' start comments; blank lines ignored.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace spdt {

constexpr const char* kToolVersion = "0.1.0";

class Config {
 public:
  void set(const std::string& section, const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int64_t get_int(const std::string& section, const std::string& key,
                  int64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;

  bool has_section(const std::string& section) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

  // Sorted "[section]\nkey = value" dump; equal configs hash equal.
  std::string canonical() const;
  uint64_t hash() const;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

uint64_t fnv1a64(std::string_view data);

// Hex form used in output headers.
std::string hash_hex(uint64_t h);

}  // namespace spdt
