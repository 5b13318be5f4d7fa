#include "bopim/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "bopim/error.hpp"
#include "bopim/rng.hpp"

namespace bopim {

ContactList generate_proximity_contacts(const ProximityModel& model, std::uint64_t seed) {
  if (model.n < 2 || model.steps < 1 || model.groups < 1 || model.groups > model.n) {
    throw Error(ErrorCode::InvalidConfig, "proximity model needs n >= 2, steps >= 1, 1 <= groups <= n");
  }
  Rng rng(substream_seed(seed, 0x53594e54ULL, 0));

  std::vector<double> activity(model.n);
  for (auto& a : activity) {
    // Inverse-CDF Pareto draw, truncated.
    double u = uniform_open01(rng);
    a = std::min(model.activity_max,
                 model.activity_min * std::pow(u, -1.0 / (model.activity_exponent - 1.0)));
  }
  const std::size_t group_size = (model.n + model.groups - 1) / model.groups;
  auto group_of = [&](std::size_t i) { return i / group_size; };

  ContactList out;
  out.n_hint = model.n;
  for (std::size_t step = 0; step < model.steps; ++step) {
    for (std::size_t i = 0; i < model.n; ++i) {
      if (uniform01(rng) >= activity[i]) continue;
      std::size_t j = i;
      if (uniform01(rng) < model.within_group) {
        std::size_t lo = group_of(i) * group_size;
        std::size_t hi = std::min(model.n, lo + group_size);
        if (hi - lo < 2) continue;
        while (j == i) j = lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo));
      } else {
        while (j == i) j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(model.n));
      }
      out.contacts.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), static_cast<double>(step)});
    }
  }
  if (out.contacts.empty()) throw Error(ErrorCode::EmptyInput, "generator produced no contacts");
  return out;
}

}  // namespace bopim
