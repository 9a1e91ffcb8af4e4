#pragma once

#include <cmath>
#include <limits>

namespace efcm {

/// First-order radio model constants.
///
/// Electronics cost applies per bit on both transmit and receive; the
/// amplifier term switches from free-space (d^2) to multipath (d^4) at the
/// crossover distance d0 = sqrt(eps_fs / eps_mp).
struct RadioParams {
  double e_elec = 50e-9;       // J/bit
  double eps_fs = 10e-12;      // J/bit/m^2
  double eps_mp = 0.0013e-12;  // J/bit/m^4
  double e_da = 5e-9;          // J/bit, fusion cost at a head
  double idle_per_round = 0.0; // J per node per round

  double crossover() const {
    if (eps_fs > 0.0 && eps_mp > 0.0) return std::sqrt(eps_fs / eps_mp);
    return std::numeric_limits<double>::infinity();
  }
};

/// Transmit cost for `bits` over distance `d`. At d == d0 the multipath
/// branch applies.
inline double tx_cost(double bits, double d, const RadioParams& p) {
  if (d < p.crossover()) {
    return p.e_elec * bits + p.eps_fs * bits * d * d;
  }
  return p.e_elec * bits + p.eps_mp * bits * d * d * d * d;
}

/// Receive cost: electronics only, distance-independent.
inline double rx_cost(double bits, const RadioParams& p) {
  return p.e_elec * bits;
}

}  // namespace efcm
