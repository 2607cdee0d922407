#include "flowanon/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace flowanon {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kDiurnalPeriod = 96;  // 24h of 15-minute intervals

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Thin RNG wrapper with explicit samplers so output is engine-deterministic.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    uint64_t below(uint64_t n) { return n == 0 ? 0 : gen() % n; }
    double normal() {
        double u1 = std::max(uniform(), 1e-300);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
};

struct ZipfSampler {
    std::vector<double> cdf;
    ZipfSampler(size_t n, double exponent) {
        cdf.resize(n);
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) {
            acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cdf[i] = acc;
        }
    }
    size_t sample(Rng& rng) const {
        double u = rng.uniform() * cdf.back();
        return static_cast<size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
};

// Static host address plan: external population spread over many /16s with
// pseudorandom low halves (so /24 occupancy fluctuates per interval), plus
// 256 internal hosts inside the configured /16.
struct HostPlan {
    std::vector<uint32_t> external;
    std::vector<uint32_t> internal;
    int64_t n16;

    HostPlan(const SynthConfig& cfg) {
        const int64_t pop = cfg.host_population;
        n16 = std::clamp<int64_t>(pop / 256, 1, 112 * 256);
        external.resize(pop);
        for (int64_t i = 0; i < pop; ++i) {
            int64_t g = i % n16;
            uint32_t base = ((16u + static_cast<uint32_t>(g / 256)) << 24) |
                            ((static_cast<uint32_t>(g % 256)) << 16);
            uint32_t low = feistel_permute(cfg.seed ^ 0x5151, 16,
                                           static_cast<uint32_t>((i / n16) & 0xFFFF));
            external[i] = base | low;
        }
        internal.resize(256);
        for (uint32_t i = 0; i < 256; ++i)
            internal[i] = cfg.internal_prefix | feistel_permute(cfg.seed ^ 0x7272, 16, i);
    }
};

uint64_t event_seed(const SynthConfig& cfg, const AnomalyEvent& e) {
    return mix64(cfg.seed ^ mix64((static_cast<uint64_t>(e.start_interval) << 24) ^
                                  (static_cast<uint64_t>(e.duration_intervals) << 8) ^
                                  static_cast<uint64_t>(e.cls) ^
                                  (static_cast<uint64_t>(e.protocol) << 4) ^
                                  (static_cast<uint64_t>(e.direction) << 5)));
}

void check_window(const SynthConfig& cfg, const AnomalyEvent& e) {
    if (e.start_interval < 0 || e.duration_intervals < 1 ||
        e.start_interval + e.duration_intervals > cfg.num_intervals)
        throw ConfigError("event window out of trace bounds");
}

void sort_trace(Trace& t) {
    std::stable_sort(t.records.begin(), t.records.end(),
                     [](const FlowRecord& a, const FlowRecord& b) {
                         return a.start_time < b.start_time;
                     });
}

// Average per-interval byte baseline for (direction, protocol) in the window.
double window_byte_baseline(const Trace& t, const AnomalyEvent& e) {
    const int64_t lo = e.start_interval * t.interval_length;
    const int64_t hi = (e.start_interval + e.duration_intervals) * t.interval_length;
    double bytes = 0.0;
    for (const auto& r : t.records) {
        if (r.start_time < lo || r.start_time >= hi) continue;
        if (r.direction != e.direction || r.protocol != e.protocol) continue;
        bytes += static_cast<double>(r.bytes);
    }
    return bytes / static_cast<double>(e.duration_intervals);
}

}  // namespace

const char* to_string(AnomalyClass c) {
    switch (c) {
        case AnomalyClass::AlphaFlow: return "alpha";
        case AnomalyClass::Outage: return "outage";
        case AnomalyClass::DDoS: return "ddos";
        case AnomalyClass::Scan: return "scan";
        case AnomalyClass::Fluctuation: return "fluctuation";
    }
    return "?";
}

AnomalyClass parse_anomaly_class(const std::string& s) {
    if (s == "alpha") return AnomalyClass::AlphaFlow;
    if (s == "outage") return AnomalyClass::Outage;
    if (s == "ddos") return AnomalyClass::DDoS;
    if (s == "scan") return AnomalyClass::Scan;
    if (s == "fluctuation") return AnomalyClass::Fluctuation;
    throw ConfigError("bad anomaly class: " + s);
}

Label event_label(AnomalyClass c) {
    switch (c) {
        case AnomalyClass::AlphaFlow:
        case AnomalyClass::Outage: return Label::Volume;
        case AnomalyClass::DDoS: return Label::DoS;
        case AnomalyClass::Scan: return Label::Scan;
        case AnomalyClass::Fluctuation: return Label::Fluctuation;
    }
    return Label::Unknown;
}

void inject_volume(Trace& trace, const SynthConfig& cfg, const AnomalyEvent& e) {
    check_window(cfg, e);
    if (e.magnitude < 0.0) throw ConfigError("volume magnitude must be >= 0");
    if (e.magnitude == 0.0) return;
    Rng rng(event_seed(cfg, e));

    if (e.cls == AnomalyClass::AlphaFlow) {
        // One high-volume pair between hosts that already carry traffic, so
        // the event rides on bytes only and leaves address features alone.
        HostPlan plan(cfg);
        uint32_t ext = plan.external[rng.below(8)];
        uint32_t internal = plan.internal[rng.below(8)];
        uint32_t src = e.direction == Direction::IN ? ext : internal;
        uint32_t dst = e.direction == Direction::IN ? internal : ext;
        double per_interval = e.magnitude * window_byte_baseline(trace, e);
        const int kChunks = 8;
        for (int64_t iv = e.start_interval; iv < e.start_interval + e.duration_intervals;
             ++iv) {
            for (int c = 0; c < kChunks; ++c) {
                FlowRecord r;
                r.start_time = iv * trace.interval_length +
                               static_cast<int64_t>(rng.below(trace.interval_length));
                r.src_addr = src;
                r.dst_addr = dst;
                r.src_port = 49152;
                r.dst_port = 443;
                r.protocol = e.protocol;
                r.direction = e.direction;
                r.bytes = std::max<uint64_t>(
                    static_cast<uint64_t>(per_interval / kChunks), 1500);
                r.packets = std::max<uint64_t>(r.bytes / 1400, 1);
                trace.records.push_back(r);
            }
        }
    } else {  // Outage: uniformly thin the matching background flows.
        if (e.magnitude > 1.0) throw ConfigError("outage fraction must be <= 1");
        const int64_t lo = e.start_interval * trace.interval_length;
        const int64_t hi =
            (e.start_interval + e.duration_intervals) * trace.interval_length;
        std::erase_if(trace.records, [&](const FlowRecord& r) {
            if (r.start_time < lo || r.start_time >= hi) return false;
            if (r.direction != e.direction || r.protocol != e.protocol) return false;
            return rng.uniform() < e.magnitude;
        });
        return;
    }
    sort_trace(trace);
}

void inject_ddos(Trace& trace, const SynthConfig& cfg, const AnomalyEvent& e) {
    check_window(cfg, e);
    if (e.n_sources < 0 || e.n_subnets < 1) throw ConfigError("bad ddos parameters");
    if (e.n_sources > 256 * e.n_subnets)
        throw ConfigError("ddos sources exceed /24 capacity (256 per subnet)");
    if (e.n_sources == 0) return;

    // Attack /24s are drawn from the most popular background hosts' networks,
    // so the anomaly stays confined to already-active networks.
    HostPlan plan(cfg);
    std::vector<uint32_t> subnets;
    std::unordered_set<uint32_t> seen;
    for (uint32_t a : plan.external) {
        uint32_t s24 = a >> 8;
        if (seen.insert(s24).second) {
            subnets.push_back(s24);
            if (static_cast<int>(subnets.size()) == e.n_subnets) break;
        }
    }
    if (static_cast<int>(subnets.size()) < e.n_subnets)
        throw ConfigError("host population too small for requested ddos subnets");

    Rng rng(event_seed(cfg, e));
    uint32_t target = e.direction == Direction::IN
                          ? cfg.internal_prefix | 2u
                          : plan.external[0];
    for (int64_t iv = e.start_interval; iv < e.start_interval + e.duration_intervals;
         ++iv) {
        for (int i = 0; i < e.n_sources; ++i) {
            FlowRecord r;
            r.start_time = iv * trace.interval_length +
                           static_cast<int64_t>(rng.below(trace.interval_length));
            r.src_addr = (subnets[i % e.n_subnets] << 8) |
                         static_cast<uint32_t>((i / e.n_subnets) & 0xFF);
            r.dst_addr = target;
            r.src_port = static_cast<uint16_t>(1024 + rng.below(60000));
            r.dst_port = 80;
            r.protocol = e.protocol;
            r.direction = e.direction;
            r.packets = 1;
            r.bytes = 40;
            trace.records.push_back(r);
        }
    }
    sort_trace(trace);
}

void inject_scan(Trace& trace, const SynthConfig& cfg, const AnomalyEvent& e) {
    check_window(cfg, e);
    if (e.n_targets < 0) throw ConfigError("bad scan parameters");
    if (e.n_targets == 0) return;
    int n_sources = std::max(e.n_sources, 1);

    Rng rng(event_seed(cfg, e));
    uint64_t tseed = event_seed(cfg, e) ^ 0x1234;
    auto target_of = [&](int i) -> uint32_t {
        if (e.direction == Direction::IN) {
            // Scan of the internal /16.
            return cfg.internal_prefix |
                   feistel_permute(tseed, 16, static_cast<uint32_t>(i & 0xFFFF));
        }
        // Scan spread uniformly over a wide external region.
        return 0xC0000000u | feistel_permute(tseed, 24, static_cast<uint32_t>(i));
    };
    if (e.direction == Direction::IN && e.n_targets > 65536)
        throw ConfigError("internal scan limited to 65536 targets");

    for (int64_t iv = e.start_interval; iv < e.start_interval + e.duration_intervals;
         ++iv) {
        for (int i = 0; i < e.n_targets; ++i) {
            FlowRecord r;
            r.start_time = iv * trace.interval_length +
                           static_cast<int64_t>(rng.below(trace.interval_length));
            r.src_addr = 0xDF000000u | static_cast<uint32_t>(i % n_sources);
            r.dst_addr = target_of(i);
            r.src_port = static_cast<uint16_t>(1024 + rng.below(60000));
            r.dst_port = static_cast<uint16_t>(rng.below(1024));
            r.protocol = e.protocol;
            r.direction = e.direction;
            r.packets = 1;
            r.bytes = 40;
            trace.records.push_back(r);
        }
    }
    sort_trace(trace);
}

void inject_fluctuation(Trace& trace, const SynthConfig& cfg, const AnomalyEvent& e) {
    check_window(cfg, e);
    if (e.magnitude < 0.0 || e.magnitude > 1.0)
        throw ConfigError("fluctuation fraction must be in [0,1]");
    if (e.n_new < 1) throw ConfigError("fluctuation needs n_new >= 1");
    if (e.magnitude == 0.0) return;

    HostPlan plan(cfg);
    uint64_t es = event_seed(cfg, e);

    // Fresh /16 prefixes from a region the background never uses.
    std::vector<uint32_t> fresh(e.n_new);
    for (int j = 0; j < e.n_new; ++j) {
        uint32_t idx = static_cast<uint32_t>((mix64(es) + static_cast<uint64_t>(j)) % 16384);
        fresh[j] = ((128u + idx / 256u) << 24) | ((idx % 256u) << 16);
    }

    // Bijective relocation of a deterministic host subset. Selection is by a
    // hash of the host index, not the index itself: the index is congruent to
    // the host's /16 slot, and a plain stride would empty whole /16s instead
    // of thinning all of them.
    std::unordered_map<uint32_t, uint32_t> reloc;
    const uint64_t stride =
        std::max<uint64_t>(1, static_cast<uint64_t>(1.0 / e.magnitude));
    int64_t j = 0;
    for (size_t i = 0; i < plan.external.size(); ++i) {
        if (mix64(es ^ (0x9E3779B9ULL + i)) % stride != 0) continue;
        if (j >= 65536) break;
        uint32_t to = fresh[j % e.n_new] |
                      feistel_permute(es ^ 0xF1F1, 16, static_cast<uint32_t>(j & 0xFFFF));
        reloc.emplace(plan.external[i], to);
        ++j;
    }

    const int64_t lo = e.start_interval * trace.interval_length;
    const int64_t hi = (e.start_interval + e.duration_intervals) * trace.interval_length;
    for (auto& r : trace.records) {
        if (r.start_time < lo || r.start_time >= hi) continue;
        if (r.direction != e.direction || r.protocol != e.protocol) continue;
        uint32_t& addr = e.direction == Direction::IN ? r.src_addr : r.dst_addr;
        auto it = reloc.find(addr);
        if (it != reloc.end()) addr = it->second;
    }
}

namespace {

Trace generate_background(const SynthConfig& cfg, const HostPlan& plan) {
    Rng rng(cfg.seed);
    ZipfSampler ext_zipf(plan.external.size(), cfg.popularity_exponent);
    ZipfSampler int_zipf(plan.internal.size(), 0.8);

    const double sigma = std::sqrt(std::log(1.0 + cfg.noise_cv * cfg.noise_cv));
    static const uint16_t kServicePorts[] = {80, 443, 53, 123, 25, 22, 8080, 8443};

    Trace trace;
    trace.interval_length = cfg.interval_length;
    trace.num_intervals = cfg.num_intervals;
    trace.records.reserve(static_cast<size_t>(cfg.base_flows_per_interval) *
                          static_cast<size_t>(cfg.num_intervals) * 11 / 10);

    for (int64_t t = 0; t < cfg.num_intervals; ++t) {
        double level = static_cast<double>(cfg.base_flows_per_interval) *
                       (1.0 + cfg.diurnal_amplitude *
                                  std::sin(2.0 * kPi * static_cast<double>(t) /
                                           kDiurnalPeriod));
        double noise = std::exp(rng.normal() * sigma - 0.5 * sigma * sigma);
        int64_t n = std::llround(level * noise);
        // Shared per-interval popularity bursts: the busiest host on each side
        // absorbs a fluctuating extra share of the draws (flash-crowd
        // behaviour). All address-distribution metrics then co-move with one
        // factor per side instead of wiggling independently.
        double burst_ext =
            std::min(0.5, 0.10 * std::exp(1.0 * rng.normal() - 0.5));
        double burst_int =
            std::min(0.5, 0.10 * std::exp(1.0 * rng.normal() - 0.5));
        size_t first = trace.records.size();
        for (int64_t i = 0; i < n; ++i) {
            FlowRecord r;
            r.start_time = t * cfg.interval_length +
                           static_cast<int64_t>(rng.below(cfg.interval_length));
            r.direction = rng.uniform() < 0.5 ? Direction::IN : Direction::OUT;
            r.protocol = rng.uniform() < 0.5 ? Protocol::TCP : Protocol::UDP;
            uint32_t ext = plan.external[rng.uniform() < burst_ext
                                             ? 0
                                             : ext_zipf.sample(rng)];
            uint32_t internal = plan.internal[rng.uniform() < burst_int
                                                  ? 0
                                                  : int_zipf.sample(rng)];
            if (r.direction == Direction::IN) {
                r.src_addr = ext;
                r.dst_addr = internal;
            } else {
                r.src_addr = internal;
                r.dst_addr = ext;
            }
            r.src_port = static_cast<uint16_t>(1024 + rng.below(60000));
            r.dst_port = kServicePorts[rng.below(8)];
            r.packets = 1 + rng.below(20);
            r.bytes = r.packets * (40 + rng.below(1460));
            trace.records.push_back(r);
        }
        std::sort(trace.records.begin() + first, trace.records.end(),
                  [](const FlowRecord& a, const FlowRecord& b) {
                      if (a.start_time != b.start_time) return a.start_time < b.start_time;
                      if (a.src_addr != b.src_addr) return a.src_addr < b.src_addr;
                      return a.src_port < b.src_port;
                  });
    }
    return trace;
}

void apply_event(Trace& trace, const SynthConfig& cfg, const AnomalyEvent& e) {
    switch (e.cls) {
        case AnomalyClass::AlphaFlow:
        case AnomalyClass::Outage: inject_volume(trace, cfg, e); break;
        case AnomalyClass::DDoS: inject_ddos(trace, cfg, e); break;
        case AnomalyClass::Scan: inject_scan(trace, cfg, e); break;
        case AnomalyClass::Fluctuation: inject_fluctuation(trace, cfg, e); break;
    }
}

// Checks each event's class signature on injected metric deltas, using the
// background series' out-of-window standard deviation as the unit.
void validate_signatures(const SynthConfig& cfg, const Trace& background,
                         const Trace& final_trace) {
    auto catalog = full_catalog();
    auto bg = compute_metrics(background, catalog);
    auto fin = compute_metrics(final_trace, catalog);

    std::vector<bool> in_any_window(cfg.num_intervals, false);
    for (const auto& e : cfg.events)
        for (int64_t iv = e.start_interval;
             iv < e.start_interval + e.duration_intervals; ++iv)
            in_any_window[iv] = true;

    auto sigma_of = [&](const MetricId& id) {
        const auto& v = bg.at(id).values;
        double sum = 0.0, sq = 0.0;
        size_t n = 0;
        for (int64_t iv = 0; iv < cfg.num_intervals; ++iv) {
            if (in_any_window[iv]) continue;
            sum += v[iv];
            sq += v[iv] * v[iv];
            ++n;
        }
        if (n < 2) return 1e-6;
        double mean = sum / n;
        return std::max(std::sqrt(std::max(sq / n - mean * mean, 0.0)), 1e-6);
    };
    auto max_delta = [&](const MetricId& id, const AnomalyEvent& e) {
        const auto& b = bg.at(id).values;
        const auto& f = fin.at(id).values;
        double m = 0.0;
        for (int64_t iv = e.start_interval;
             iv < e.start_interval + e.duration_intervals; ++iv)
            m = std::max(m, std::fabs(f[iv] - b[iv]));
        return m;
    };

    for (const auto& e : cfg.events) {
        const Direction d = e.direction;
        const Protocol p = e.protocol;
        auto fail = [&](const char* why) {
            throw ConfigError(std::string("event signature check failed (") +
                              to_string(e.cls) + "): " + why);
        };
        switch (e.cls) {
            case AnomalyClass::AlphaFlow:
            case AnomalyClass::Outage: {
                MetricId vol{e.cls == AnomalyClass::AlphaFlow ? MetricKind::Bytes
                                                              : MetricKind::Flows,
                             0, AddressRole::SRC, d, p};
                if (max_delta(vol, e) < 3.0 * sigma_of(vol))
                    fail("volume deviation below 3 sigma");
                for (MetricKind k : {MetricKind::UniqueIP, MetricKind::IpEntropy})
                    for (int res : {16, 24, 32})
                        for (AddressRole role : {AddressRole::SRC, AddressRole::DST}) {
                            MetricId id{k, res, role, d, p};
                            if (max_delta(id, e) >= 3.0 * sigma_of(id))
                                fail("feature metric moved beyond 3 sigma");
                        }
                break;
            }
            case AnomalyClass::DDoS: {
                MetricId id{MetricKind::UniqueIP, 32, AddressRole::SRC, d, p};
                if (max_delta(id, e) < 3.0 * sigma_of(id))
                    fail("source address spike below 3 sigma");
                break;
            }
            case AnomalyClass::Scan: {
                MetricId id{MetricKind::UniqueIP, 32, AddressRole::DST, d, p};
                if (max_delta(id, e) < 3.0 * sigma_of(id))
                    fail("destination address spike below 3 sigma");
                break;
            }
            case AnomalyClass::Fluctuation: {
                AddressRole role =
                    d == Direction::IN ? AddressRole::SRC : AddressRole::DST;
                MetricId lo{MetricKind::UniqueIP, 16, role, d, p};
                MetricId hi{MetricKind::UniqueIP, 32, role, d, p};
                if (max_delta(lo, e) < 3.0 * sigma_of(lo))
                    fail("/16 count shift below 3 sigma");
                if (max_delta(hi, e) >= 3.0 * sigma_of(hi))
                    fail("/32 count moved beyond 3 sigma");
                break;
            }
        }
    }
}

}  // namespace

std::pair<Trace, GroundTruth> generate(const SynthConfig& cfg) {
    if (cfg.base_flows_per_interval < 100)
        throw ConfigError("base_flows_per_interval must be >= 100");
    if (cfg.num_intervals < 1 || cfg.interval_length < 1)
        throw ConfigError("bad trace dimensions");
    if (cfg.diurnal_amplitude < 0.0 || cfg.diurnal_amplitude >= 1.0)
        throw ConfigError("diurnal_amplitude must be in [0,1)");
    if (cfg.popularity_exponent <= 0.0)
        throw ConfigError("popularity_exponent must be > 0");
    for (const auto& e : cfg.events) check_window(cfg, e);

    // Overlapping events of different classes on the same protocol would make
    // the single-label ground truth ambiguous.
    {
        std::map<std::pair<Protocol, int64_t>, Label> seen;
        for (const auto& e : cfg.events)
            for (int64_t iv = e.start_interval;
                 iv < e.start_interval + e.duration_intervals; ++iv) {
                auto key = std::make_pair(e.protocol, iv);
                auto [it, fresh] = seen.emplace(key, event_label(e.cls));
                if (!fresh && it->second != event_label(e.cls))
                    throw ConfigError("overlapping events of different classes");
            }
    }

    HostPlan plan(cfg);
    Trace background = generate_background(cfg, plan);
    Trace trace = background;
    for (const auto& e : cfg.events) apply_event(trace, cfg, e);

    if (cfg.validate_events && !cfg.events.empty())
        validate_signatures(cfg, background, trace);

    GroundTruth truth;
    for (Protocol p : {Protocol::TCP, Protocol::UDP})
        truth.labels[p].assign(cfg.num_intervals, Label::Normal);
    for (const auto& e : cfg.events)
        for (int64_t iv = e.start_interval;
             iv < e.start_interval + e.duration_intervals; ++iv)
            truth.labels[e.protocol][iv] = event_label(e.cls);

    return {std::move(trace), std::move(truth)};
}

SynthConfig read_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    SynthConfig cfg;
    std::map<int, AnomalyEvent> events;
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "num_intervals") cfg.num_intervals = std::stoll(value);
            else if (key == "interval_length") cfg.interval_length = std::stoll(value);
            else if (key == "base_flows_per_interval")
                cfg.base_flows_per_interval = std::stoll(value);
            else if (key == "diurnal_amplitude") cfg.diurnal_amplitude = std::stod(value);
            else if (key == "noise_cv") cfg.noise_cv = std::stod(value);
            else if (key == "host_population") cfg.host_population = std::stoll(value);
            else if (key == "popularity_exponent")
                cfg.popularity_exponent = std::stod(value);
            else if (key == "internal_prefix")
                cfg.internal_prefix = parse_ipv4(value) & 0xFFFF0000u;
            else if (key == "validate_events")
                cfg.validate_events = (value == "1" || value == "true");
            else if (key.rfind("event.", 0) == 0) {
                auto rest = key.substr(6);
                auto dot = rest.find('.');
                if (dot == std::string::npos)
                    throw ConfigError("bad event key: " + key);
                int idx = std::stoi(rest.substr(0, dot));
                std::string field = rest.substr(dot + 1);
                AnomalyEvent& e = events[idx];
                if (field == "class") e.cls = parse_anomaly_class(value);
                else if (field == "protocol")
                    e.protocol = value == "tcp" ? Protocol::TCP : Protocol::UDP;
                else if (field == "direction")
                    e.direction = value == "in" ? Direction::IN : Direction::OUT;
                else if (field == "start") e.start_interval = std::stoll(value);
                else if (field == "duration") e.duration_intervals = std::stoll(value);
                else if (field == "magnitude") e.magnitude = std::stod(value);
                else if (field == "n_sources") e.n_sources = std::stoi(value);
                else if (field == "n_subnets") e.n_subnets = std::stoi(value);
                else if (field == "n_targets") e.n_targets = std::stoi(value);
                else if (field == "n_new") e.n_new = std::stoi(value);
                else throw ConfigError("unknown event field: " + field);
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for " + key + " at line " + std::to_string(row));
        }
    }
    for (auto& [idx, e] : events) cfg.events.push_back(e);
    return cfg;
}

}  // namespace flowanon
