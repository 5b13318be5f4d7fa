#pragma once

#include <cstddef>
#include <cstdint>

#include "bopim/temporal_graph.hpp"

namespace bopim {

/// Activity-driven proximity model: nodes belong to equal-size groups and
/// carry a heavy-tailed activity rate. At every step each node fires with its
/// activity and contacts one partner, inside its group with probability
/// `within_group`.
struct ProximityModel {
  std::size_t n = 64;
  std::size_t steps = 200;
  std::size_t groups = 4;
  double within_group = 0.8;
  double activity_min = 0.01;
  double activity_exponent = 2.2;  // Pareto tail of the activity rates
  double activity_max = 0.5;
};

ContactList generate_proximity_contacts(const ProximityModel& model, std::uint64_t seed);

}  // namespace bopim
