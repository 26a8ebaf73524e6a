#pragma once

#include <cstdint>
#include <random>

#include "spoofkit/linalg.hpp"

namespace spoofkit {

// Derives a per-stream seed from a master seed and a stream index by pushing
// master + (index + 1) * golden-gamma through the splitmix64 finalizer. Streams
// for distinct indices are decorrelated even for small master seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Deterministic Gaussian sampling: one engine, fixed draw order. Identical
// seeds give identical sequences within a build of this library.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double standard_normal() { return normal_(engine_); }
    double uniform01() { return uniform_(engine_); }

    // Sample from N(0, cov) through the PSD Cholesky factor of cov.
    Vec gaussian(const Mat& cov_chol);

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace spoofkit
