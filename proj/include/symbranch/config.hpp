#ifndef SYMBRANCH_CONFIG_HPP
#define SYMBRANCH_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sbm {

// Flat `key = value` experiment configuration. One assignment per line,
// `#` starts a comment, keys are snake_case, list values are comma
// separated. The canonical form (sorted keys, one per line) feeds the
// config hash recorded in every output.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  // Throws ConfigError when a key outside `allowed` is present.
  void require_known_keys(const std::vector<std::string>& allowed) const;

  std::string canonical() const;
  std::string hash_hex() const;  // FNV-1a 64 of the canonical form

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace sbm

#endif
