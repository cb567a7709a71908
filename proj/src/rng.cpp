#include "simaudit/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace simaudit {

Engine seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Engine(seq);
}

double unit_uniform(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(Engine& engine) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine);
}

}  // namespace simaudit
