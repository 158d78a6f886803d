#pragma once

#include <istream>
#include <map>
#include <string>

namespace young {

// Plain-text key-value config with one [section] per CLI subcommand plus
// [common]. `#` and `;` start comments. Values read by the CLI are
// overridable by flags; every run dumps the resolved state next to its
// outputs.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig parse(std::istream& is);
  static KvConfig parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  unsigned long long get_u64(const std::string& section,
                             const std::string& key,
                             unsigned long long fallback) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

  std::string dump() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace young
