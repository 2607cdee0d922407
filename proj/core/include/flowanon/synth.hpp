#pragma once

#include "flowanon/eval.hpp"

namespace flowanon {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class AnomalyClass : uint8_t { AlphaFlow, Outage, DDoS, Scan, Fluctuation };

const char* to_string(AnomalyClass c);
AnomalyClass parse_anomaly_class(const std::string& s);

struct AnomalyEvent {
    AnomalyClass cls = AnomalyClass::AlphaFlow;
    Protocol protocol = Protocol::TCP;
    Direction direction = Direction::IN;
    int64_t start_interval = 0;
    int64_t duration_intervals = 1;

    // Per-class magnitude parameters (unused ones ignored):
    double magnitude = 1.0;  // alpha: byte multiplier; outage/fluctuation: fraction
    int n_sources = 0;       // ddos / scan
    int n_subnets = 1;       // ddos: /24 networks holding the sources
    int n_targets = 0;       // scan
    int n_new = 1;           // fluctuation: fresh /16 prefixes
};

struct SynthConfig {
    uint64_t seed = 1;
    int64_t num_intervals = 2016;
    int64_t interval_length = 900;
    int64_t base_flows_per_interval = 1000;
    double diurnal_amplitude = 0.3;
    double noise_cv = 0.15;
    int64_t host_population = 4096;
    double popularity_exponent = 1.0;
    uint32_t internal_prefix = 0x0A010000;  // 10.1.0.0/16
    bool validate_events = true;
    std::vector<AnomalyEvent> events;
};

/// Key-value config file, one `key = value` per line; events keyed as
/// `event.<n>.<field>`.
SynthConfig read_synth_config(const std::string& path);

Label event_label(AnomalyClass c);

/// Deterministic trace + labels for the given config. When validate_events is
/// set, each event is checked against its class signature (injected metric
/// deltas vs. background standard deviation) and a failing event raises
/// ConfigError.
std::pair<Trace, GroundTruth> generate(const SynthConfig& config);

// Injectors, exposed for direct testing. Each returns added (or removes
// existing) records; `inject_*` leave the input trace sorted.
void inject_volume(Trace& trace, const SynthConfig& config, const AnomalyEvent& event);
void inject_ddos(Trace& trace, const SynthConfig& config, const AnomalyEvent& event);
void inject_scan(Trace& trace, const SynthConfig& config, const AnomalyEvent& event);
void inject_fluctuation(Trace& trace, const SynthConfig& config,
                        const AnomalyEvent& event);

}  // namespace flowanon
