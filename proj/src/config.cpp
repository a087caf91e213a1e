#include "veo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace veo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError(key + ": trailing junk in '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse number '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x)) throw ConfigError(key + ": expected integer, got '" + v + "'");
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": cannot parse unsigned integer '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected boolean, got '" + v + "'");
}

Interval parse_interval(const std::string& key, const std::string& v) {
  std::string s = v;
  for (auto& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::string a, b, rest;
  if (!(in >> a >> b) || (in >> rest))
    throw ConfigError(key + ": expected two numbers, got '" + v + "'");
  return {parse_double(key, a), parse_double(key, b)};
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(const Interval& iv) { return fmt(iv.lo) + "," + fmt(iv.hi); }

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const ScenarioConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

#define FIELD_DOUBLE(name)                                                       \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) {   \
             c.name = parse_double(k, v);                                        \
           },                                                                    \
           [](const ScenarioConfig& c) { return fmt(c.name); }}}
#define FIELD_INT(name)                                                          \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) {   \
             c.name = parse_int(k, v);                                           \
           },                                                                    \
           [](const ScenarioConfig& c) { return std::to_string(c.name); }}}
#define FIELD_U64(name)                                                          \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) {   \
             c.name = parse_u64(k, v);                                           \
           },                                                                    \
           [](const ScenarioConfig& c) { return std::to_string(c.name); }}}
#define FIELD_BOOL(name)                                                         \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) {   \
             c.name = parse_bool(k, v);                                          \
           },                                                                    \
           [](const ScenarioConfig& c) { return c.name ? "true" : "false"; }}}
#define FIELD_INTERVAL(name)                                                     \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) {   \
             c.name = parse_interval(k, v);                                      \
           },                                                                    \
           [](const ScenarioConfig& c) { return fmt(c.name); }}}

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = {
      FIELD_INT(num_cvs),
      FIELD_INT(num_rsus),
      FIELD_INT(num_lanes),
      FIELD_DOUBLE(lane_width_m),
      FIELD_DOUBLE(road_length_m),
      FIELD_DOUBLE(rsu_spacing_m),
      FIELD_DOUBLE(rsu_height_m),
      FIELD_DOUBLE(rsu_lateral_offset_m),
      FIELD_DOUBLE(rsu_coverage_m),
      FIELD_DOUBLE(bandwidth_hz),
      FIELD_DOUBLE(noise_power_w),
      FIELD_DOUBLE(tx_power_w),
      FIELD_DOUBLE(enhancement_factor),
      FIELD_DOUBLE(slot_duration_s),
      FIELD_INT(slots_per_episode),
      FIELD_INTERVAL(speed_range_mps),
      FIELD_INTERVAL(cv_cpu_range_hz),
      FIELD_DOUBLE(rsu_cpu_hz),
      FIELD_DOUBLE(twin_reserve_hz),
      FIELD_INTERVAL(task_bits_range),
      FIELD_INTERVAL(instr_bits_range),
      FIELD_INTERVAL(task_intensity_range),
      FIELD_INTERVAL(cotra_intensity_range),
      FIELD_DOUBLE(t_max_s),
      FIELD_DOUBLE(kappa_cv),
      FIELD_DOUBLE(kappa_rsu),
      FIELD_DOUBLE(alpha),
      FIELD_DOUBLE(lyapunov_v),
      FIELD_DOUBLE(energy_budget_w),
      FIELD_DOUBLE(deadline_penalty),
      FIELD_INT(window_m),
      FIELD_BOOL(static_distance),
      FIELD_BOOL(instr_includes_transmit),
      FIELD_U64(seed),
  };
  return table;
}

#undef FIELD_DOUBLE
#undef FIELD_INT
#undef FIELD_U64
#undef FIELD_BOOL
#undef FIELD_INTERVAL

void check_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + ": must be positive and finite");
}

void check_interval(const char* name, const Interval& iv, bool positive = true) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
    throw ConfigError(std::string(name) + ": requires lo <= hi and finite bounds");
  if (positive && !(iv.lo > 0.0)) throw ConfigError(std::string(name) + ": bounds must be positive");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (num_cvs < 1) throw ConfigError("num_cvs: must be >= 1");
  if (num_rsus < 1) throw ConfigError("num_rsus: must be >= 1");
  if (num_lanes < 1) throw ConfigError("num_lanes: must be >= 1");
  check_positive("lane_width_m", lane_width_m);
  check_positive("road_length_m", road_length_m);
  check_positive("rsu_spacing_m", rsu_spacing_m);
  check_positive("rsu_height_m", rsu_height_m);
  if (rsu_lateral_offset_m < 0.0) throw ConfigError("rsu_lateral_offset_m: must be >= 0");
  check_positive("rsu_coverage_m", rsu_coverage_m);
  check_positive("bandwidth_hz", bandwidth_hz);
  check_positive("noise_power_w", noise_power_w);
  check_positive("tx_power_w", tx_power_w);
  check_positive("enhancement_factor", enhancement_factor);
  check_positive("slot_duration_s", slot_duration_s);
  if (slots_per_episode < 1) throw ConfigError("slots_per_episode: must be >= 1");
  check_interval("speed_range_mps", speed_range_mps);
  check_interval("cv_cpu_range_hz", cv_cpu_range_hz);
  check_positive("rsu_cpu_hz", rsu_cpu_hz);
  if (twin_reserve_hz < 0.0) throw ConfigError("twin_reserve_hz: must be >= 0");
  if (rsu_usable_hz() <= 0.0) throw ConfigError("twin_reserve_hz: must leave usable RSU cycles");
  check_interval("task_bits_range", task_bits_range, false);
  check_interval("instr_bits_range", instr_bits_range, false);
  if (task_bits_range.lo < 0.0) throw ConfigError("task_bits_range: bounds must be >= 0");
  if (instr_bits_range.lo < 0.0) throw ConfigError("instr_bits_range: bounds must be >= 0");
  if (task_bits_range.hi > 0.0 && instr_bits_range.hi >= task_bits_range.lo)
    throw ConfigError("instr_bits_range: must lie strictly below task_bits_range");
  check_interval("task_intensity_range", task_intensity_range);
  check_interval("cotra_intensity_range", cotra_intensity_range);
  check_positive("t_max_s", t_max_s);
  check_positive("kappa_cv", kappa_cv);
  check_positive("kappa_rsu", kappa_rsu);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha: must lie in [0, 1]");
  if (!(lyapunov_v > 0.0)) throw ConfigError("lyapunov_v: must be positive");
  check_positive("energy_budget_w", energy_budget_w);
  if (deadline_penalty < 0.0) throw ConfigError("deadline_penalty: must be >= 0");
  if (window_m < 1) throw ConfigError("window_m: must be >= 1");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = field_table().find(key);
    if (it == field_table().end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second.set(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  for (const auto& [name, field] : field_table()) out << name << " = " << field.get(cfg) << "\n";
  return out.str();
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << config_to_text(cfg);
}

void config_set_field(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = field_table().find(key);
  if (it == field_table().end()) throw ConfigError("unknown key '" + key + "'");
  it->second.set(cfg, key, value);
}

std::string config_get_field(const ScenarioConfig& cfg, const std::string& key) {
  const auto it = field_table().find(key);
  if (it == field_table().end()) throw ConfigError("unknown key '" + key + "'");
  return it->second.get(cfg);
}

}  // namespace veo
