#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bhq/model.hpp"

namespace bhq {

// Number of occupation vectors (n_1..n_M) with sum N and n_i <= n_max,
// by inclusion-exclusion over the cap. Returned as double so oversized
// requests can be refused before any allocation.
double count_bounded_compositions(int M, long N, int n_max);

// Canonical fixed-N truncated Fock space. Configurations are enumerated in
// ascending lexicographic order, which is deterministic and reproducible;
// index() inverts the enumeration via packed 64-bit keys.
struct FockBasis {
    int M = 0;
    int n_max = 0;
    long N = 0;
    int bits = 0;  // bits per site in the packed key
    std::size_t dim = 0;
    std::vector<std::uint8_t> configs;  // dim x M, row-major
    std::unordered_map<std::uint64_t, std::uint32_t> index;

    const std::uint8_t* config(std::size_t i) const { return configs.data() + i * M; }

    std::uint64_t pack(const std::uint8_t* n) const {
        std::uint64_t key = 0;
        for (int s = 0; s < M; ++s) key |= static_cast<std::uint64_t>(n[s]) << (bits * s);
        return key;
    }

    // Ordinal of a configuration, or dim if it is not in the basis.
    std::size_t find(const std::uint8_t* n) const {
        auto it = index.find(pack(n));
        return it == index.end() ? dim : it->second;
    }
};

// Throws CapacityError if N > M * n_max or the packed-key width is exceeded.
FockBasis build_basis(const BoseHubbardParams& p);

}  // namespace bhq
