#pragma once

#include <map>
#include <vector>

#include "flowanon/anon.hpp"
#include "flowanon/flow.hpp"

namespace flowanon {

struct EmptyCatalog : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MetricKind : uint8_t { Bytes, Packets, Flows, UniqueIP, IpEntropy };
enum class AddressRole : uint8_t { SRC, DST };

/// Identifies one detection metric time series. Volume kinds (Bytes, Packets,
/// Flows) use resolution 0 and a nominal SRC role.
struct MetricId {
    MetricKind kind;
    int resolution;  // 0 for volume kinds, {16,24,32} for feature kinds
    AddressRole role;
    Direction direction;
    Protocol protocol;

    auto operator<=>(const MetricId&) const = default;
};

/// String form `kind.res.role.dir.proto`, e.g. `uniqueip.24.src.in.tcp`.
std::string metric_id_string(const MetricId& id);
MetricId parse_metric_id(const std::string& s);

struct TimeSeries {
    MetricId metric;
    std::vector<double> values;  // one per interval
};

using MetricMatrix = std::map<MetricId, TimeSeries>;

/// The metrics computable under a scheme, in deterministic order
/// (kind, resolution, role, direction, protocol).
std::vector<MetricId> metric_catalog(const AnonScheme& scheme);

/// The full 60-metric catalog (what prefix-preserving permutation retains).
std::vector<MetricId> full_catalog();

MetricMatrix compute_metrics(const Trace& trace, const std::vector<MetricId>& catalog);

/// Shannon entropy in bits of the distribution induced by `counts`.
/// Summation order depends only on the multiset of counts, so any relabeling
/// of the underlying prefixes yields a bit-identical result.
double shannon_entropy(std::vector<uint64_t> counts);

void write_metric_matrix(const MetricMatrix& m, const std::string& path);
MetricMatrix read_metric_matrix(const std::string& path);

}  // namespace flowanon
