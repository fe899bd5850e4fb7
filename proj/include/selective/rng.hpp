#pragma once

#include <cstdint>
#include <random>

namespace selective {

// Independent random stream for one (seed, replication, substream) triple.
// mt19937_64 and seed_seq are fully specified by the standard, and uniforms
// are built from raw 53-bit words rather than a <random> distribution, so
// streams are bit-identical across platforms. Parallel or sequential
// execution of replications gives the same draws.
class ReplicationStream {
 public:
  ReplicationStream(std::uint64_t seed, std::uint64_t replication,
                    std::uint32_t substream = 0);

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1].
  double uniform_open_zero() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Beta(a, b) for integer shapes via the gamma ratio
  // X / (X + Y), X ~ Gamma(a), Y ~ Gamma(b), each Gamma(m) drawn as a sum of
  // m unit exponentials -log(U). Consumes exactly a + b uniforms. Results
  // depend on the platform's std::log only through its last-ulp rounding.
  double beta(int a, int b);

 private:
  std::mt19937_64 engine_;
};

}  // namespace selective
