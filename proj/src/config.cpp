#include "young/config.hpp"

#include <fstream>
#include <sstream>

#include "young/errors.hpp"

namespace young {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::parse(std::istream& is) {
  KvConfig cfg;
  std::string line;
  std::string section = "common";
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw precondition_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw precondition_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw precondition_error("cannot open config file: " + path);
  return parse(is);
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

std::string KvConfig::get(const std::string& section, const std::string& key,
                          const std::string& fallback) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double KvConfig::get_double(const std::string& section, const std::string& key,
                            double fallback) const {
  if (!has(section, key)) return fallback;
  return std::stod(get(section, key, ""));
}

long long KvConfig::get_int(const std::string& section, const std::string& key,
                            long long fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoll(get(section, key, ""));
}

unsigned long long KvConfig::get_u64(const std::string& section,
                                     const std::string& key,
                                     unsigned long long fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoull(get(section, key, ""));
}

void KvConfig::set(const std::string& section, const std::string& key,
                   const std::string& value) {
  data_[section][key] = value;
}

std::string KvConfig::dump() const {
  std::ostringstream os;
  for (const auto& [section, kvs] : data_) {
    os << "[" << section << "]\n";
    for (const auto& [k, v] : kvs) os << k << " = " << v << "\n";
    os << "\n";
  }
  return os.str();
}

}  // namespace young
