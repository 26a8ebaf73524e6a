#include "spoofkit/rng.hpp"

namespace spoofkit {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Vec RandomStream::gaussian(const Mat& cov_chol) {
    Vec unit(cov_chol.rows);
    for (std::size_t i = 0; i < cov_chol.rows; ++i) unit[i] = standard_normal();
    return cov_chol * unit;
}

} // namespace spoofkit
