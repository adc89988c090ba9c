#include "iswpt/config_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace iswpt {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) items.push_back(std::move(t));
  }
  return items;
}

std::optional<double> parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
  KeyValueFile kv;
  kv.source_ = std::move(source);
  std::stringstream ss{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(
          fmt::format("{}:{}: expected `key = value`", kv.source_, line_no));
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(fmt::format("{}:{}: empty key", kv.source_, line_no));
    if (!kv.entries_.emplace(key, value).second)
      throw std::invalid_argument(
          fmt::format("{}:{}: duplicate key `{}`", kv.source_, line_no, key));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open spec file `{}`", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

void KeyValueFile::fail(const std::string& key, const std::string& why) const {
  throw std::invalid_argument(fmt::format("{}: key `{}`: {}", source_, key, why));
}

std::optional<std::string> KeyValueFile::take_string(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::optional<double> KeyValueFile::take_real(const std::string& key) {
  const auto s = take_string(key);
  if (!s) return std::nullopt;
  const auto v = parse_double(*s);
  if (!v) fail(key, fmt::format("`{}` is not a real number", *s));
  return v;
}

std::optional<long long> KeyValueFile::take_integer(const std::string& key) {
  const auto s = take_string(key);
  if (!s) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s->c_str(), &end, 10);
  if (end == s->c_str() || *end != '\0' || errno == ERANGE)
    fail(key, fmt::format("`{}` is not an integer", *s));
  return v;
}

std::optional<std::vector<double>> KeyValueFile::take_real_list(const std::string& key) {
  const auto s = take_string(key);
  if (!s) return std::nullopt;
  std::vector<double> values;
  for (const auto& item : split_list(*s)) {
    const auto v = parse_double(item);
    if (!v) fail(key, fmt::format("`{}` is not a real number", item));
    values.push_back(*v);
  }
  return values;
}

std::optional<std::vector<std::string>> KeyValueFile::take_string_list(const std::string& key) {
  const auto s = take_string(key);
  if (!s) return std::nullopt;
  return split_list(*s);
}

void KeyValueFile::require_all_used() const {
  for (const auto& [key, value] : entries_)
    if (!used_.count(key))
      throw std::invalid_argument(fmt::format("{}: unknown key `{}`", source_, key));
}

SystemConfig read_system_config(KeyValueFile& kv, SystemConfig base) {
  SystemConfig c = std::move(base);

  auto integer = [&](const char* key, int& field) {
    if (auto v = kv.take_integer(key)) field = static_cast<int>(*v);
  };
  auto real = [&](const std::string& key, double& field) {
    const auto lin = kv.take_real(key);
    const auto db = kv.take_real(key + "_db");
    if (lin && db)
      throw std::invalid_argument(
          fmt::format("{}: both `{}` and `{}_db` given", kv.source(), key, key));
    if (lin) field = *lin;
    if (db) field = db_to_linear(*db);
  };

  integer("n_tx", c.n_tx);
  integer("n_irs", c.n_irs);
  integer("n_ehd", c.n_ehd);
  if (auto dbm = kv.take_real("p0_dbm")) {
    if (kv.has("p0") || kv.has("p0_db"))
      throw std::invalid_argument(fmt::format("{}: p0 given more than once", kv.source()));
    c.p0 = db_to_linear(*dbm - 30.0);
  } else {
    real("p0", c.p0);
  }
  real("eta", c.eta);
  real("rho", c.rho);
  real("delta", c.delta);
  if (auto angles = kv.take_real_list("target_angles")) {
    c.target_angles.clear();
    for (double deg : *angles) c.target_angles.push_back(deg_to_rad(deg));
    c.n_targets = static_cast<int>(c.target_angles.size());
  }
  integer("n_targets", c.n_targets);
  real("dist_tx_irs", c.dist_tx_irs);
  real("dist_irs_ehd", c.dist_irs_ehd);
  real("dist_tx_ehd", c.dist_tx_ehd);
  real("ple_tx_irs", c.ple_tx_irs);
  real("ple_irs_ehd", c.ple_irs_ehd);
  real("ple_tx_ehd", c.ple_tx_ehd);
  real("pl_ref", c.pl_ref);
  real("rician_k", c.rician_k);
  if (auto s = kv.take_string("seed")) {
    errno = 0;
    char* end = nullptr;
    const auto v = std::strtoull(s->c_str(), &end, 10);
    if (end == s->c_str() || *end != '\0' || errno == ERANGE || s->front() == '-')
      throw std::invalid_argument(fmt::format("{}: seed `{}` is not a u64", kv.source(), *s));
    c.seed = v;
  }
  if (auto mode = kv.take_string("los_mode")) {
    if (*mode == "iid")
      c.los_mode = LosMode::iid_gaussian;
    else if (*mode == "steering")
      c.los_mode = LosMode::steering;
    else
      throw std::invalid_argument(
          fmt::format("{}: los_mode must be `iid` or `steering`", kv.source()));
  }
  c.validate();
  return c;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string canonical_text(const SystemConfig& c) {
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  put("n_tx", std::to_string(c.n_tx));
  put("n_irs", std::to_string(c.n_irs));
  put("n_ehd", std::to_string(c.n_ehd));
  put("n_targets", std::to_string(c.n_targets));
  put("p0", format_real(c.p0));
  put("eta", format_real(c.eta));
  put("rho", format_real(c.rho));
  put("delta", format_real(c.delta));
  std::string angles;
  for (std::size_t i = 0; i < c.target_angles.size(); ++i) {
    if (i) angles += ',';
    angles += format_real(c.target_angles[i]);
  }
  put("target_angles_rad", angles);
  put("dist_tx_irs", format_real(c.dist_tx_irs));
  put("dist_irs_ehd", format_real(c.dist_irs_ehd));
  put("dist_tx_ehd", format_real(c.dist_tx_ehd));
  put("ple_tx_irs", format_real(c.ple_tx_irs));
  put("ple_irs_ehd", format_real(c.ple_irs_ehd));
  put("ple_tx_ehd", format_real(c.ple_tx_ehd));
  put("pl_ref", format_real(c.pl_ref));
  put("rician_k", format_real(c.rician_k));
  put("seed", std::to_string(c.seed));
  put("los_mode", c.los_mode == LosMode::iid_gaussian ? "iid" : "steering");
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace iswpt
