#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "efcm/energy.hpp"
#include "efcm/geometry.hpp"

namespace efcm {

enum class Protocol { Efcm, Leach, Heed };
enum class SelectionMode { Ring, LiteralMax };

/// Thrown for malformed configuration documents and invariant violations.
/// Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrafficModel {
  double packet_bits = 2000;
  std::uint32_t packets_per_node_per_round = 15;
  double announcement_bits = 400;
};

/// Transient cluster-head fault process. A head is most exposed in the round
/// it assumes the role (handoff); once settled it faults at a lower rate.
struct FaultModel {
  double head_fault_prob = 0.002;    // per settled serving round
  double handoff_fault_prob = 0.05;  // in the round a head takes over
};

struct LeachParams {
  double p = 0.1;  // desired head fraction per round
};

struct HeedParams {
  double c_prob = 0.05;
  double p_min = 1e-4;
  double e_max = 0.0;  // 0 => use scenario initial_energy
};

struct XmeansParams {
  std::uint32_t k_min = 0;  // 0 => ceil(sqrt(node_count))
  std::uint32_t k_max = 0;  // 0 => ceil(sqrt(node_count))
  std::uint32_t max_iter = 100;
  double tol = 1e-6;
};

/// Every free parameter of a run in one record.
struct Scenario {
  Protocol protocol = Protocol::Efcm;
  SelectionMode selection_mode = SelectionMode::Ring;
  std::uint32_t node_count = 100;
  double area_width = 100.0;
  double area_height = 100.0;
  double initial_energy = 0.5;  // joules
  std::uint32_t time_slice = 5;
  std::uint32_t duration = 25;
  std::uint32_t checkpoint_interval = 5;
  std::uint64_t seed = 1;
  double radio_range = 58.0;  // meters; intra-cluster link reliability scale
  double base_station_x = std::numeric_limits<double>::quiet_NaN();  // NaN => area center
  double base_station_y = std::numeric_limits<double>::quiet_NaN();
  RadioParams radio;
  TrafficModel traffic;
  FaultModel fault;
  LeachParams leach;
  HeedParams heed;
  XmeansParams xmeans;

  Point base_station() const {
    Point bs{area_width / 2.0, area_height / 2.0};
    if (!std::isnan(base_station_x)) bs.x = base_station_x;
    if (!std::isnan(base_station_y)) bs.y = base_station_y;
    return bs;
  }

  std::uint32_t sqrt_k() const {
    std::uint32_t k = static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(node_count))));
    return k > 0 ? k : 1;
  }

  std::uint32_t effective_k_min() const {
    std::uint32_t k = xmeans.k_min > 0 ? xmeans.k_min : sqrt_k();
    return std::min(k, effective_k_max());
  }

  std::uint32_t effective_k_max() const {
    return xmeans.k_max > 0 ? xmeans.k_max : sqrt_k();
  }

  double effective_e_max() const {
    return heed.e_max > 0.0 ? heed.e_max : initial_energy;
  }
};

inline std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Efcm: return "efcm";
    case Protocol::Leach: return "leach";
    case Protocol::Heed: return "heed";
  }
  return "?";
}

inline Protocol parse_protocol(const std::string& s) {
  if (s == "efcm") return Protocol::Efcm;
  if (s == "leach") return Protocol::Leach;
  if (s == "heed") return Protocol::Heed;
  throw ConfigError("protocol: unknown value '" + s +
                    "' (expected efcm | leach | heed)");
}

inline std::string selection_mode_name(SelectionMode m) {
  return m == SelectionMode::Ring ? "ring" : "literal-max";
}

inline SelectionMode parse_selection_mode(const std::string& s) {
  if (s == "ring") return SelectionMode::Ring;
  if (s == "literal-max") return SelectionMode::LiteralMax;
  throw ConfigError("selection_mode: unknown value '" + s +
                    "' (expected ring | literal-max)");
}

/// Validates Scenario invariants; throws ConfigError naming the offending key.
inline void validate(const Scenario& s) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(s.area_width > 0.0, "area_width: must be > 0");
  require(s.area_height > 0.0, "area_height: must be > 0");
  require(s.initial_energy > 0.0, "initial_energy: must be > 0");
  require(s.time_slice >= 1, "time_slice: must be >= 1");
  require(s.checkpoint_interval >= 1, "checkpoint_interval: must be >= 1");
  require(s.duration == 0 || s.duration >= s.checkpoint_interval,
          "duration: must be 0 or >= checkpoint_interval");
  require(s.radio_range >= 0.0, "radio_range: must be >= 0");
  require(s.radio.e_elec >= 0.0, "radio.e_elec: must be >= 0");
  require(s.radio.eps_fs >= 0.0, "radio.eps_fs: must be >= 0");
  require(s.radio.eps_mp >= 0.0, "radio.eps_mp: must be >= 0");
  require(s.radio.e_da >= 0.0, "radio.e_da: must be >= 0");
  require(s.radio.idle_per_round >= 0.0, "radio.idle_per_round: must be >= 0");
  require(s.traffic.packet_bits >= 0.0, "traffic.packet_bits: must be >= 0");
  require(s.traffic.announcement_bits >= 0.0,
          "traffic.announcement_bits: must be >= 0");
  require(s.fault.head_fault_prob >= 0.0 && s.fault.head_fault_prob <= 1.0,
          "fault.head_fault_prob: must be in [0,1]");
  require(s.fault.handoff_fault_prob >= 0.0 && s.fault.handoff_fault_prob <= 1.0,
          "fault.handoff_fault_prob: must be in [0,1]");
  require(s.leach.p > 0.0 && s.leach.p <= 1.0, "leach.p: must be in (0,1]");
  require(s.heed.p_min > 0.0, "heed.p_min: must be > 0");
  require(s.heed.c_prob >= s.heed.p_min && s.heed.c_prob <= 1.0,
          "heed.c_prob: must be in [heed.p_min, 1]");
  require(s.heed.e_max >= 0.0, "heed.e_max: must be >= 0");
  require(s.xmeans.k_min == 0 || s.xmeans.k_max == 0 ||
              s.xmeans.k_max >= s.xmeans.k_min,
          "xmeans.k_max: must be 0 (auto) or >= xmeans.k_min");
  require(s.xmeans.max_iter >= 1, "xmeans.max_iter: must be >= 1");
  require(s.xmeans.tol >= 0.0, "xmeans.tol: must be >= 0");
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    if (n < 0) throw ConfigError(key + ": must be non-negative, got " + v);
    return static_cast<std::uint64_t>(n);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Applies one `key = value` override to a scenario. Unknown keys are
/// rejected.
inline void apply_key(Scenario& s, const std::string& key,
                      const std::string& value) {
  using detail::parse_double;
  using detail::parse_uint;
  if (key == "protocol") s.protocol = parse_protocol(value);
  else if (key == "selection_mode") s.selection_mode = parse_selection_mode(value);
  else if (key == "node_count")
    s.node_count = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "area_width") s.area_width = parse_double(key, value);
  else if (key == "area_height") s.area_height = parse_double(key, value);
  else if (key == "initial_energy") s.initial_energy = parse_double(key, value);
  else if (key == "time_slice")
    s.time_slice = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "duration")
    s.duration = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "checkpoint_interval")
    s.checkpoint_interval = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "seed") s.seed = parse_uint(key, value);
  else if (key == "radio_range") s.radio_range = parse_double(key, value);
  else if (key == "base_station_x") s.base_station_x = parse_double(key, value);
  else if (key == "base_station_y") s.base_station_y = parse_double(key, value);
  else if (key == "radio.e_elec") s.radio.e_elec = parse_double(key, value);
  else if (key == "radio.eps_fs") s.radio.eps_fs = parse_double(key, value);
  else if (key == "radio.eps_mp") s.radio.eps_mp = parse_double(key, value);
  else if (key == "radio.e_da") s.radio.e_da = parse_double(key, value);
  else if (key == "radio.idle_per_round")
    s.radio.idle_per_round = parse_double(key, value);
  else if (key == "traffic.packet_bits")
    s.traffic.packet_bits = parse_double(key, value);
  else if (key == "traffic.packets_per_node_per_round")
    s.traffic.packets_per_node_per_round =
        static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "traffic.announcement_bits")
    s.traffic.announcement_bits = parse_double(key, value);
  else if (key == "fault.head_fault_prob")
    s.fault.head_fault_prob = parse_double(key, value);
  else if (key == "fault.handoff_fault_prob")
    s.fault.handoff_fault_prob = parse_double(key, value);
  else if (key == "leach.p") s.leach.p = parse_double(key, value);
  else if (key == "heed.c_prob") s.heed.c_prob = parse_double(key, value);
  else if (key == "heed.p_min") s.heed.p_min = parse_double(key, value);
  else if (key == "heed.e_max") s.heed.e_max = parse_double(key, value);
  else if (key == "xmeans.k_min")
    s.xmeans.k_min = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "xmeans.k_max")
    s.xmeans.k_max = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "xmeans.max_iter")
    s.xmeans.max_iter = static_cast<std::uint32_t>(parse_uint(key, value));
  else if (key == "xmeans.tol") s.xmeans.tol = parse_double(key, value);
  else
    throw ConfigError("unknown key '" + key + "'");
}

/// Parses the flat key-value scenario format. Missing keys keep defaults;
/// the result is validated before returning.
inline Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    apply_key(s, key, value);
  }
  validate(s);
  return s;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Serializes a scenario so that parse_scenario(serialize_scenario(s)) == s.
/// With `annotate`, defaults chosen by this implementation carry a marker.
inline std::string serialize_scenario(const Scenario& s, bool annotate = false) {
  using detail::fmt;
  std::ostringstream out;
  auto np = [&](const char* comment) {
    return annotate ? std::string("  # assumed default: ") + comment : "";
  };
  out << "protocol = " << protocol_name(s.protocol) << "\n";
  out << "selection_mode = " << selection_mode_name(s.selection_mode) << "\n";
  out << "node_count = " << s.node_count << np("typical mid-size deployment") << "\n";
  out << "area_width = " << fmt(s.area_width) << np("square field dimension in meters") << "\n";
  out << "area_height = " << fmt(s.area_height) << np("square field dimension in meters") << "\n";
  out << "initial_energy = " << fmt(s.initial_energy) << np("per-node battery budget in joules") << "\n";
  out << "time_slice = " << s.time_slice << np("rotation slice length in rounds") << "\n";
  out << "duration = " << s.duration << np("run length in rounds") << "\n";
  out << "checkpoint_interval = " << s.checkpoint_interval << np("reporting granularity") << "\n";
  out << "seed = " << s.seed << "\n";
  out << "radio_range = " << fmt(s.radio_range) << np("intra-cluster link reliability scale") << "\n";
  if (!std::isnan(s.base_station_x))
    out << "base_station_x = " << fmt(s.base_station_x) << "\n";
  if (!std::isnan(s.base_station_y))
    out << "base_station_y = " << fmt(s.base_station_y) << "\n";
  out << "radio.e_elec = " << fmt(s.radio.e_elec) << np("first-order radio constant") << "\n";
  out << "radio.eps_fs = " << fmt(s.radio.eps_fs) << np("first-order radio constant") << "\n";
  out << "radio.eps_mp = " << fmt(s.radio.eps_mp) << np("first-order radio constant") << "\n";
  out << "radio.e_da = " << fmt(s.radio.e_da) << np("fusion cost constant") << "\n";
  out << "radio.idle_per_round = " << fmt(s.radio.idle_per_round) << "\n";
  out << "traffic.packet_bits = " << fmt(s.traffic.packet_bits) << np("offered load") << "\n";
  out << "traffic.packets_per_node_per_round = "
      << s.traffic.packets_per_node_per_round << np("offered load") << "\n";
  out << "traffic.announcement_bits = " << fmt(s.traffic.announcement_bits) << np("control packet size") << "\n";
  out << "fault.head_fault_prob = " << fmt(s.fault.head_fault_prob) << np("head fault process") << "\n";
  out << "fault.handoff_fault_prob = " << fmt(s.fault.handoff_fault_prob) << np("head fault process") << "\n";
  out << "leach.p = " << fmt(s.leach.p) << np("standard LEACH parameter") << "\n";
  out << "heed.c_prob = " << fmt(s.heed.c_prob) << np("standard HEED parameter") << "\n";
  out << "heed.p_min = " << fmt(s.heed.p_min) << np("standard HEED parameter") << "\n";
  out << "heed.e_max = " << fmt(s.heed.e_max) << np("0 = use initial_energy") << "\n";
  out << "xmeans.k_min = " << s.xmeans.k_min << np("0 = ceil(sqrt(node_count))") << "\n";
  out << "xmeans.k_max = " << s.xmeans.k_max << np("0 = ceil(sqrt(node_count))") << "\n";
  out << "xmeans.max_iter = " << s.xmeans.max_iter << "\n";
  out << "xmeans.tol = " << fmt(s.xmeans.tol) << "\n";
  return out.str();
}

inline bool operator==(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace efcm
