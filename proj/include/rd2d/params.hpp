#ifndef RD2D_PARAMS_HPP
#define RD2D_PARAMS_HPP

#include "units.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rd2d {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ue_kind { cue, d2d };

struct sim_params {
  int n_rbs = 13;
  int n_relays = 3;
  double rb_bandwidth_hz = 180e3;
  double noise_psd_dbm_hz = -174.0;
  double relay_power_dbm = 30.0;
  double ue_power_dbm = 23.0;
  double cue_rate_req_bps = 128e3;
  double d2d_rate_req_bps = 256e3;
  double shadow_sigma_relay_enb_db = 6.0;
  double shadow_sigma_ue_relay_db = 10.0;
  double interference_threshold_hop1_dbm = -70.0;
  double interference_threshold_hop2_dbm = -70.0;
  double omega = 1.0;
  double epsilon = 1.0;
  int t_max = 200;
  double p_tilde_dbm = 0.0;
  double cell_side_m = 700.0;
  double relay_cell_radius_m = 200.0;
  double enb_relay_distance_m = 125.0;
  double min_ue_relay_distance_m = 10.0;
  double d_rd_m = 80.0;
  double d_dd_m = 140.0;
  double schedule_time_ms = 0.10;
  double decode_time_ms = 0.173;
  double packet_size_bytes = 1500.0;

  double noise_power_w() const { return dbm_to_watt(noise_psd_dbm_hz) * rb_bandwidth_hz; }
  double ue_power_w() const { return dbm_to_watt(ue_power_dbm); }
  double relay_power_w() const { return dbm_to_watt(relay_power_dbm); }
  double p_tilde_w() const { return dbm_to_watt(p_tilde_dbm); }
  double i_th1_w() const { return dbm_to_watt(interference_threshold_hop1_dbm); }
  double i_th2_w() const { return dbm_to_watt(interference_threshold_hop2_dbm); }
  double rate_req_bps(ue_kind k) const { return k == ue_kind::cue ? cue_rate_req_bps : d2d_rate_req_bps; }
  double packet_bits() const { return packet_size_bytes * 8.0; }

  void validate() const
  {
    auto need = [](bool ok, const std::string& what) {
      if (!ok)
        throw config_error("invalid parameter: " + what);
    };
    need(n_rbs >= 1, "n_rbs must be >= 1");
    need(n_relays >= 1, "n_relays must be >= 1");
    need(std::isfinite(rb_bandwidth_hz) && rb_bandwidth_hz > 0, "rb_bandwidth_hz must be positive");
    need(std::isfinite(noise_psd_dbm_hz), "noise_psd_dbm_hz must be finite");
    need(std::isfinite(relay_power_dbm) && std::isfinite(ue_power_dbm) && std::isfinite(p_tilde_dbm),
         "powers must be finite");
    need(std::isfinite(interference_threshold_hop1_dbm) && std::isfinite(interference_threshold_hop2_dbm),
         "interference thresholds must be finite");
    need(cue_rate_req_bps >= 0 && d2d_rate_req_bps >= 0, "rate requirements must be >= 0");
    need(shadow_sigma_relay_enb_db >= 0 && shadow_sigma_ue_relay_db >= 0, "shadow sigmas must be >= 0");
    need(omega > 0 && omega <= 1, "omega must lie in (0,1]");
    need(epsilon > 0, "epsilon must be > 0");
    need(t_max >= 1, "t_max must be >= 1");
    need(cell_side_m > 0 && relay_cell_radius_m > 0, "cell dimensions must be positive");
    need(enb_relay_distance_m >= 0, "enb_relay_distance_m must be >= 0");
    need(min_ue_relay_distance_m > 0, "min_ue_relay_distance_m must be > 0");
    need(d_rd_m > 0, "d_rd_m must be > 0");
    need(d_dd_m >= 0, "d_dd_m must be >= 0");
    need(schedule_time_ms >= 0 && decode_time_ms >= 0, "timing parameters must be >= 0");
    need(packet_size_bytes > 0, "packet_size_bytes must be > 0");
  }
};

namespace detail {

using param_member = std::variant<int sim_params::*, double sim_params::*>;

inline const std::vector<std::pair<std::string, param_member>>& param_fields()
{
  static const std::vector<std::pair<std::string, param_member>> fields = {
    {"n_rbs", &sim_params::n_rbs},
    {"n_relays", &sim_params::n_relays},
    {"rb_bandwidth_hz", &sim_params::rb_bandwidth_hz},
    {"noise_psd_dbm_hz", &sim_params::noise_psd_dbm_hz},
    {"relay_power_dbm", &sim_params::relay_power_dbm},
    {"ue_power_dbm", &sim_params::ue_power_dbm},
    {"cue_rate_req_bps", &sim_params::cue_rate_req_bps},
    {"d2d_rate_req_bps", &sim_params::d2d_rate_req_bps},
    {"shadow_sigma_relay_enb_db", &sim_params::shadow_sigma_relay_enb_db},
    {"shadow_sigma_ue_relay_db", &sim_params::shadow_sigma_ue_relay_db},
    {"interference_threshold_hop1_dbm", &sim_params::interference_threshold_hop1_dbm},
    {"interference_threshold_hop2_dbm", &sim_params::interference_threshold_hop2_dbm},
    {"omega", &sim_params::omega},
    {"epsilon", &sim_params::epsilon},
    {"t_max", &sim_params::t_max},
    {"p_tilde_dbm", &sim_params::p_tilde_dbm},
    {"cell_side_m", &sim_params::cell_side_m},
    {"relay_cell_radius_m", &sim_params::relay_cell_radius_m},
    {"enb_relay_distance_m", &sim_params::enb_relay_distance_m},
    {"min_ue_relay_distance_m", &sim_params::min_ue_relay_distance_m},
    {"d_rd_m", &sim_params::d_rd_m},
    {"d_dd_m", &sim_params::d_dd_m},
    {"schedule_time_ms", &sim_params::schedule_time_ms},
    {"decode_time_ms", &sim_params::decode_time_ms},
    {"packet_size_bytes", &sim_params::packet_size_bytes},
  };
  return fields;
}

inline std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace detail

// Flat key=value configuration. '#' starts a comment.
class kv_config {
public:
  static kv_config parse(std::istream& in, const std::string& origin = "<config>")
  {
    kv_config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos)
        line.erase(h);
      line = detail::trim(line);
      if (line.empty())
        continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw config_error(origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
      auto key = detail::trim(line.substr(0, eq));
      auto value = detail::trim(line.substr(eq + 1));
      if (key.empty())
        throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
      if (cfg.values_.count(key))
        throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static kv_config parse_string(const std::string& text)
  {
    std::istringstream in(text);
    return parse(in);
  }

  static kv_config load(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw config_error("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const
  {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const
  {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(key, it->second);
  }

  long long get_int(const std::string& key, long long fallback) const
  {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end())
      return fallback;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(it->second, &pos);
    } catch (const std::exception&) {
      throw config_error("key '" + key + "': expected integer, got '" + it->second + "'");
    }
    if (pos != it->second.size())
      throw config_error("key '" + key + "': expected integer, got '" + it->second + "'");
    return v;
  }

  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const
  {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end())
      return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(to_double(key, detail::trim(item)));
    return out;
  }

  // keys never read by any getter
  std::vector<std::string> unused_keys() const
  {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k))
        out.push_back(k);
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  static double to_double(const std::string& key, const std::string& s)
  {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw config_error("key '" + key + "': expected number, got '" + s + "'");
    }
    if (pos != s.size())
      throw config_error("key '" + key + "': expected number, got '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

inline sim_params params_from_config(const kv_config& cfg)
{
  sim_params p;
  for (const auto& [name, member] : detail::param_fields()) {
    std::visit([&](auto m) {
      using field_t = std::remove_reference_t<decltype(p.*m)>;
      if constexpr (std::is_same_v<field_t, int>)
        p.*m = static_cast<int>(cfg.get_int(name, p.*m));
      else
        p.*m = cfg.get_double(name, p.*m);
    }, member);
  }
  p.validate();
  return p;
}

// canonical key=value dump, one field per line, fixed order
inline std::string params_to_text(const sim_params& p)
{
  std::ostringstream out;
  out.precision(17);
  for (const auto& [name, member] : detail::param_fields())
    std::visit([&](auto m) { out << name << '=' << p.*m << '\n'; }, member);
  return out.str();
}

// 64-bit FNV-1a, stable across platforms
inline std::uint64_t fnv1a64(const std::string& s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace rd2d

#endif
