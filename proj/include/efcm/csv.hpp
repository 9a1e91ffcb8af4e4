#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "efcm/engine.hpp"

namespace efcm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// One run's checkpoint series. Header row then one row per checkpoint;
/// byte-deterministic for deterministic input.
inline void emit_csv(const MetricsSeries& series, std::ostream& out) {
  out << "time,protocol,throughput_bps,throughput_interval_bps,pdr,"
         "mean_residual_energy_j,ch_failures\n";
  for (const Checkpoint& c : series.checkpoints) {
    out << c.time << ',' << protocol_name(series.protocol) << ','
        << detail::csv_num(c.throughput_bps) << ','
        << detail::csv_num(c.throughput_interval_bps) << ','
        << detail::csv_num(c.pdr) << ','
        << detail::csv_num(c.mean_residual_energy) << ',' << c.ch_failures
        << '\n';
  }
}

/// Aggregated comparison table, with stddev columns and the seed count.
inline void emit_csv(const ComparisonTable& table, std::ostream& out) {
  out << "time,protocol,throughput_bps,throughput_bps_std,"
         "throughput_interval_bps,throughput_interval_bps_std,pdr,pdr_std,"
         "mean_residual_energy_j,mean_residual_energy_j_std,ch_failures,"
         "ch_failures_std,seeds\n";
  for (const AggregateRow& r : table.rows) {
    out << r.time << ',' << r.protocol << ','
        << detail::csv_num(r.throughput_mean) << ','
        << detail::csv_num(r.throughput_std) << ','
        << detail::csv_num(r.throughput_interval_mean) << ','
        << detail::csv_num(r.throughput_interval_std) << ','
        << detail::csv_num(r.pdr_mean) << ',' << detail::csv_num(r.pdr_std)
        << ',' << detail::csv_num(r.energy_mean) << ','
        << detail::csv_num(r.energy_std) << ','
        << detail::csv_num(r.ch_failures_mean) << ','
        << detail::csv_num(r.ch_failures_std) << ',' << r.n_seeds << '\n';
  }
}

template <typename T>
inline std::string to_csv(const T& value) {
  std::ostringstream out;
  emit_csv(value, out);
  return out.str();
}

template <typename T>
inline void write_csv_file(const T& value, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << to_csv(value);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace efcm
