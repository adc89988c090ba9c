#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iswpt/scenario.hpp"

namespace iswpt {

/// Flat `key = value` text file. Blank lines and `#` comments are ignored;
/// list values are comma separated. Keys are looked up through take_*(), which
/// records them so that unused (misspelled) keys can be reported.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string source = "<string>");
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> take_string(const std::string& key);
  std::optional<double> take_real(const std::string& key);
  std::optional<long long> take_integer(const std::string& key);
  std::optional<std::vector<double>> take_real_list(const std::string& key);
  std::optional<std::vector<std::string>> take_string_list(const std::string& key);

  /// Throws std::invalid_argument if some key was never taken.
  void require_all_used() const;

  const std::string& source() const { return source_; }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& why) const;

  std::string source_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> used_;
};

/// Reads SystemConfig fields from `kv`. Angles are degrees in the file.
/// A real field `x` may instead be given as `x_db` (power ratio in dB); the
/// power budget also accepts `p0_dbm`. Missing fields keep their defaults.
SystemConfig read_system_config(KeyValueFile& kv, SystemConfig base = {});

/// Canonical text form (radians and linear units, 17 significant digits).
std::string canonical_text(const SystemConfig& config);

/// 64-bit FNV-1a over bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// Shortest round-trip formatting with 17 significant digits.
std::string format_real(double x);

}  // namespace iswpt
