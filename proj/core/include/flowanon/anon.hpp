#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <variant>

#include "flowanon/flow.hpp"

namespace flowanon {

struct InvalidScheme : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The five address anonymization schemes.
struct Blackmarking {};
struct Truncation {
    int bits;  // 1..32 least-significant bits zeroed
};
struct RandomPermutation {
    uint64_t seed;
};
struct PartialPrefixPermutation {
    int split;  // 1..31; network part = top `split` bits
    uint64_t seed;
};
struct PrefixPermutation {
    std::array<uint64_t, 2> key;  // 128-bit key
};

using AnonScheme = std::variant<Blackmarking, Truncation, RandomPermutation,
                                PartialPrefixPermutation, PrefixPermutation>;

/// Throws InvalidScheme if a parameter is out of range.
void validate_scheme(const AnonScheme& scheme);

/// Parses the scheme syntax `bm`, `tr:<t>`, `rp:<seed>`, `ppp:<p>:<seed>`,
/// `pp:<hexkey128>`.
AnonScheme parse_scheme(const std::string& text);
std::string format_scheme(const AnonScheme& scheme);

uint32_t anonymize_address(const AnonScheme& scheme, uint32_t addr);

/// Rewrites src/dst addresses of every record; everything else is unchanged.
Trace anonymize_trace(const AnonScheme& scheme, const Trace& trace);

/// A cell of the granularity design space: (subset size, resolution) in bits.
struct DesignSpaceCell {
    int subset_size;
    int resolution;
    auto operator<=>(const DesignSpaceCell&) const = default;
};

std::set<DesignSpaceCell> available_cells(const AnonScheme& scheme);

/// True if metrics at address resolution `bits` survive the scheme
/// (the (subset 0, resolution bits) cell is retained).
bool resolution_available(const AnonScheme& scheme, int bits);

/// Keyed bijection on [0, 2^domain_bits) via a balanced Feistel network
/// (cycle-walking for odd widths).
uint32_t feistel_permute(uint64_t seed, int domain_bits, uint32_t value);
uint32_t feistel_unpermute(uint64_t seed, int domain_bits, uint32_t value);

/// Zeroes the `bits` least-significant bits. bits == 32 maps everything to 0.
inline uint32_t truncate_address(uint32_t addr, int bits) {
    return bits >= 32 ? 0u : addr & (0xFFFFFFFFu << bits);
}

/// Keeps the top `resolution` bits (the prefix mask used by metrics).
inline uint32_t mask_prefix(uint32_t addr, int resolution) {
    return resolution <= 0 ? 0u : addr & (0xFFFFFFFFu << (32 - resolution));
}

int common_prefix_len(uint32_t a, uint32_t b);

}  // namespace flowanon
