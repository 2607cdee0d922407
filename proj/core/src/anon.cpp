#include "flowanon/anon.hpp"

#include <bit>
#include <charconv>
#include <unordered_map>

namespace flowanon {

namespace {

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Keyed round function for the Feistel network.
inline uint32_t round_fn(uint64_t seed, int round, uint32_t half) {
    return static_cast<uint32_t>(
        mix64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(round + 1)) ^
              (static_cast<uint64_t>(half) << 16)));
}

constexpr int kFeistelRounds = 4;

uint32_t feistel_even(uint64_t seed, int width, uint32_t value, bool inverse) {
    const int h = width / 2;
    const uint32_t mask = (h == 32) ? 0xFFFFFFFFu : ((1u << h) - 1u);
    uint32_t left = (value >> h) & mask;
    uint32_t right = value & mask;
    if (!inverse) {
        for (int r = 0; r < kFeistelRounds; ++r) {
            uint32_t next = left ^ (round_fn(seed, r, right) & mask);
            left = right;
            right = next;
        }
    } else {
        for (int r = kFeistelRounds - 1; r >= 0; --r) {
            uint32_t prev = right ^ (round_fn(seed, r, left) & mask);
            right = left;
            left = prev;
        }
    }
    return (left << h) | right;
}

uint32_t feistel_apply(uint64_t seed, int domain_bits, uint32_t value, bool inverse) {
    if (domain_bits < 1 || domain_bits > 32)
        throw DomainError("domain_bits must be in [1,32]");
    const uint64_t domain = 1ULL << domain_bits;
    if (value >= domain) throw DomainError("value out of domain");
    if (domain_bits % 2 == 0) return feistel_even(seed, domain_bits, value, inverse);
    // Odd width: cycle-walk through the next even-width domain.
    const int w = domain_bits + 1;
    uint32_t x = value;
    do {
        x = feistel_even(seed, w, x, inverse);
    } while (x >= domain);
    return x;
}

// One pseudorandom bit per (key, prefix) pair; the prefix-XOR structure is
// what guarantees exact prefix preservation.
inline uint32_t prefix_bit(const std::array<uint64_t, 2>& key, int len, uint32_t prefix) {
    uint64_t h = mix64(key[0] ^ mix64(key[1] ^ ((static_cast<uint64_t>(len) << 32) |
                                                static_cast<uint64_t>(prefix))));
    return static_cast<uint32_t>(h & 1u);
}

uint32_t prefix_permute(const std::array<uint64_t, 2>& key, uint32_t addr) {
    uint32_t out = 0;
    for (int i = 0; i < 32; ++i) {
        uint32_t prefix = (i == 0) ? 0u : (addr >> (32 - i));
        uint32_t bit = ((addr >> (31 - i)) & 1u) ^ prefix_bit(key, i, prefix);
        out = (out << 1) | bit;
    }
    return out;
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

uint64_t parse_u64(const std::string& s, const char* what) {
    uint64_t v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidScheme(std::string("bad ") + what + ": " + s);
    return v;
}

}  // namespace

void validate_scheme(const AnonScheme& scheme) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Truncation>) {
                if (s.bits < 1 || s.bits > 32)
                    throw InvalidScheme("truncation bits must be in [1,32]");
            } else if constexpr (std::is_same_v<T, PartialPrefixPermutation>) {
                if (s.split < 1 || s.split > 31)
                    throw InvalidScheme("ppp split must be in [1,31]");
            }
        },
        scheme);
}

AnonScheme parse_scheme(const std::string& text) {
    if (text == "bm") return Blackmarking{};
    if (text.rfind("tr:", 0) == 0) {
        Truncation t{static_cast<int>(parse_u64(text.substr(3), "truncation bits"))};
        validate_scheme(t);
        return t;
    }
    if (text.rfind("rp:", 0) == 0)
        return RandomPermutation{parse_u64(text.substr(3), "rp seed")};
    if (text.rfind("ppp:", 0) == 0) {
        auto rest = text.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw InvalidScheme("ppp syntax is ppp:<p>:<seed>");
        PartialPrefixPermutation p{
            static_cast<int>(parse_u64(rest.substr(0, colon), "ppp split")),
            parse_u64(rest.substr(colon + 1), "ppp seed")};
        validate_scheme(p);
        return p;
    }
    if (text.rfind("pp:", 0) == 0) {
        auto hex = text.substr(3);
        if (hex.size() != 32) throw InvalidScheme("pp key must be 32 hex digits");
        PrefixPermutation p{};
        for (int half = 0; half < 2; ++half) {
            uint64_t v = 0;
            for (int i = 0; i < 16; ++i) {
                int d = hex_val(hex[half * 16 + i]);
                if (d < 0) throw InvalidScheme("pp key must be hex");
                v = (v << 4) | static_cast<uint64_t>(d);
            }
            p.key[half] = v;
        }
        return p;
    }
    throw InvalidScheme("unknown scheme: " + text);
}

std::string format_scheme(const AnonScheme& scheme) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Blackmarking>) return "bm";
            else if constexpr (std::is_same_v<T, Truncation>)
                return "tr:" + std::to_string(s.bits);
            else if constexpr (std::is_same_v<T, RandomPermutation>)
                return "rp:" + std::to_string(s.seed);
            else if constexpr (std::is_same_v<T, PartialPrefixPermutation>)
                return "ppp:" + std::to_string(s.split) + ":" + std::to_string(s.seed);
            else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "pp:%016llx%016llx",
                              static_cast<unsigned long long>(s.key[0]),
                              static_cast<unsigned long long>(s.key[1]));
                return buf;
            }
        },
        scheme);
}

uint32_t feistel_permute(uint64_t seed, int domain_bits, uint32_t value) {
    return feistel_apply(seed, domain_bits, value, false);
}

uint32_t feistel_unpermute(uint64_t seed, int domain_bits, uint32_t value) {
    return feistel_apply(seed, domain_bits, value, true);
}

uint32_t anonymize_address(const AnonScheme& scheme, uint32_t addr) {
    validate_scheme(scheme);
    return std::visit(
        [addr](const auto& s) -> uint32_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Blackmarking>) {
                return 0u;
            } else if constexpr (std::is_same_v<T, Truncation>) {
                return truncate_address(addr, s.bits);
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                return feistel_permute(s.seed, 32, addr);
            } else if constexpr (std::is_same_v<T, PartialPrefixPermutation>) {
                uint32_t net = addr >> (32 - s.split);
                uint32_t host = addr & ((s.split == 32) ? 0u : (0xFFFFFFFFu >> s.split));
                uint32_t anet = feistel_permute(s.seed ^ 1u, s.split, net);
                uint32_t ahost = feistel_permute(s.seed ^ 2u, 32 - s.split, host);
                return (anet << (32 - s.split)) | ahost;
            } else {
                return prefix_permute(s.key, addr);
            }
        },
        scheme);
}

Trace anonymize_trace(const AnonScheme& scheme, const Trace& trace) {
    validate_scheme(scheme);
    Trace out;
    out.interval_length = trace.interval_length;
    out.num_intervals = trace.num_intervals;
    out.records = trace.records;

    std::unordered_map<uint32_t, uint32_t> cache;
    cache.reserve(1 << 16);
    auto map = [&](uint32_t addr) {
        auto it = cache.find(addr);
        if (it != cache.end()) return it->second;
        uint32_t v = anonymize_address(scheme, addr);
        cache.emplace(addr, v);
        return v;
    };
    for (auto& r : out.records) {
        r.src_addr = map(r.src_addr);
        r.dst_addr = map(r.dst_addr);
    }
    return out;
}

bool resolution_available(const AnonScheme& scheme, int bits) {
    if (bits < 0 || bits > 32) return false;
    return std::visit(
        [bits](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Blackmarking>) return bits == 0;
            else if constexpr (std::is_same_v<T, Truncation>) return bits <= 32 - s.bits;
            else if constexpr (std::is_same_v<T, RandomPermutation>)
                return bits == 0 || bits == 32;
            else if constexpr (std::is_same_v<T, PartialPrefixPermutation>)
                return bits == 0 || bits == s.split || bits == 32;
            else return true;
        },
        scheme);
}

std::set<DesignSpaceCell> available_cells(const AnonScheme& scheme) {
    validate_scheme(scheme);
    std::set<DesignSpaceCell> cells;
    std::visit(
        [&cells](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Blackmarking>) {
                cells.insert({0, 0});
            } else if constexpr (std::is_same_v<T, Truncation>) {
                for (int ss = 0; ss <= 32 - s.bits; ++ss)
                    for (int r = 0; r <= 32 - s.bits; ++r) cells.insert({ss, r});
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                for (int ss : {0, 32})
                    for (int r : {0, 32}) cells.insert({ss, r});
            } else if constexpr (std::is_same_v<T, PartialPrefixPermutation>) {
                for (int ss : {0, s.split, 32})
                    for (int r : {0, s.split, 32}) cells.insert({ss, r});
            } else {
                for (int ss = 0; ss <= 32; ++ss)
                    for (int r = 0; r <= 32; ++r) cells.insert({ss, r});
            }
        },
        scheme);
    return cells;
}

int common_prefix_len(uint32_t a, uint32_t b) {
    return a == b ? 32 : std::countl_zero(a ^ b);
}

}  // namespace flowanon
