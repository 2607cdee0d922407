#pragma once

#include "flowanon/metrics.hpp"

namespace flowanon {

struct NoTraffic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-host flow aggregation once truncation of t bits folds the host into
/// its /(32-t) subnet.
struct FocusEntry {
    uint32_t host;
    int t;
    uint64_t own_flows;
    uint64_t subnet_flows;  // flows whose role-address shares the truncated subnet
    double extra_ratio;     // (subnet_flows - own_flows) / own_flows
};

struct FocusSummary {
    int t;
    double fraction_unaffected;  // extra_ratio == 0
    double fraction_doubled;     // extra_ratio >= 1.0
};

struct FocusReport {
    std::vector<FocusEntry> entries;
    std::vector<FocusSummary> summaries;
    std::vector<uint32_t> dropped_hosts;  // hosts with zero traffic
};

FocusReport focus_loss(const Trace& trace, const std::vector<uint32_t>& hosts,
                       AddressRole role, const std::vector<int>& t_values);

void write_focus_report(const FocusReport& report, const std::string& path);

}  // namespace flowanon
