#ifndef RD2D_IO_HPP
#define RD2D_IO_HPP

#include "channel.hpp"
#include "scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rd2d {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

inline json point_to_json(point p) { return json::array({p.x, p.y}); }
inline point point_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json scenario_to_json(const network_scenario& s)
{
  json j;
  j["enb"] = point_to_json(s.enb);
  j["cell_side_m"] = s.cell_side_m;
  j["relays"] = json::array();
  for (auto r : s.relays)
    j["relays"].push_back(point_to_json(r));
  j["ues"] = json::array();
  for (const auto& u : s.ues) {
    json e;
    e["kind"] = u.kind == ue_kind::cue ? "cue" : "d2d";
    e["relay"] = u.relay;
    e["tx"] = point_to_json(u.tx);
    if (u.kind == ue_kind::d2d)
      e["rx"] = point_to_json(u.rx);
    j["ues"].push_back(e);
  }
  return j;
}

inline network_scenario scenario_from_json(const json& j)
{
  network_scenario s;
  try {
    s.enb = point_from_json(j.at("enb"));
    s.cell_side_m = j.at("cell_side_m").get<double>();
    for (const auto& r : j.at("relays"))
      s.relays.push_back(point_from_json(r));
    for (const auto& e : j.at("ues")) {
      ue_node u;
      const auto kind = e.at("kind").get<std::string>();
      if (kind != "cue" && kind != "d2d")
        throw io_error("scenario: unknown UE kind '" + kind + "'");
      u.kind = kind == "cue" ? ue_kind::cue : ue_kind::d2d;
      u.relay = e.at("relay").get<int>();
      u.tx = point_from_json(e.at("tx"));
      u.rx = u.kind == ue_kind::d2d ? point_from_json(e.at("rx")) : u.tx;
      s.ues.push_back(u);
    }
  } catch (const json::exception& ex) {
    throw io_error(std::string("scenario: malformed JSON: ") + ex.what());
  }
  return s;
}

namespace detail {

template<typename G>
json flat_tensor(const G& g, std::vector<std::size_t> shape)
{
  return json{{"shape", shape}, {"data", g.data()}};
}

} // namespace detail

inline json channel_to_json(const channel_realization& ch)
{
  json j;
  j["n_rbs"] = ch.n_rbs;
  j["noise_power_w"] = ch.noise_power_w;
  j["caps_active"] = ch.caps_active;
  j["relay_of"] = ch.relay_of;
  j["d2d_ues"] = ch.d2d_ues;
  j["ue_relay"] = detail::flat_tensor(ch.ue_relay, {ch.ue_relay.dim0(), ch.ue_relay.dim1(), ch.ue_relay.dim2()});
  j["mean_ue_relay"] = detail::flat_tensor(ch.mean_ue_relay, {ch.mean_ue_relay.rows(), ch.mean_ue_relay.cols()});
  j["relay_enb"] = detail::flat_tensor(ch.relay_enb, {ch.relay_enb.rows(), ch.relay_enb.cols()});
  j["relay_d2drx"] =
    detail::flat_tensor(ch.relay_d2drx, {ch.relay_d2drx.dim0(), ch.relay_d2drx.dim1(), ch.relay_d2drx.dim2()});
  j["ue_d2drx"] = detail::flat_tensor(ch.ue_d2drx, {ch.ue_d2drx.dim0(), ch.ue_d2drx.dim1(), ch.ue_d2drx.dim2()});
  j["g_ref_hop1"] = detail::flat_tensor(ch.g_ref_hop1, {ch.g_ref_hop1.rows(), ch.g_ref_hop1.cols()});
  j["g_ref_hop2"] = detail::flat_tensor(ch.g_ref_hop2, {ch.g_ref_hop2.rows(), ch.g_ref_hop2.cols()});
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw io_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out)
    throw io_error("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal CSV builder; numbers at full precision, non-finite as "inf"/"nan".
class csv_table {
public:
  explicit csv_table(std::vector<std::string> header) : header_(std::move(header)) {}

  csv_table& row() { rows_.emplace_back(); return *this; }
  csv_table& add(const std::string& v) { rows_.back().push_back(v); return *this; }
  csv_table& add(double v)
  {
    std::ostringstream s;
    if (std::isnan(v))
      s << "nan";
    else if (std::isinf(v))
      s << (v > 0 ? "inf" : "-inf");
    else
      s << std::setprecision(12) << v;
    rows_.back().push_back(s.str());
    return *this;
  }
  template<typename I>
    requires std::is_integral_v<I>
  csv_table& add(I v)
  {
    rows_.back().push_back(std::to_string(v));
    return *this;
  }

  std::size_t size() const { return rows_.size(); }

  std::string str() const
  {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i)
        out << (i ? "," : "") << r[i];
      out << '\n';
    };
    line(header_);
    for (const auto& r : rows_)
      line(r);
    return out.str();
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace rd2d

#endif
