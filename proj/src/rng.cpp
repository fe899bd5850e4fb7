#include "selective/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace selective {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t replication,
                            std::uint32_t substream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32), substream};
  return std::mt19937_64(seq);
}

}  // namespace

ReplicationStream::ReplicationStream(std::uint64_t seed,
                                     std::uint64_t replication,
                                     std::uint32_t substream)
    : engine_(make_engine(seed, replication, substream)) {}

double ReplicationStream::beta(int a, int b) {
  if (a < 1 || b < 1) {
    throw std::invalid_argument("integer beta shapes must be >= 1");
  }
  double x = 0.0;
  for (int i = 0; i < a; ++i) x -= std::log(uniform_open_zero());
  double y = 0.0;
  for (int i = 0; i < b; ++i) y -= std::log(uniform_open_zero());
  return x / (x + y);
}

}  // namespace selective
