#include "flowanon/focus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

namespace flowanon {

FocusReport focus_loss(const Trace& trace, const std::vector<uint32_t>& hosts,
                       AddressRole role, const std::vector<int>& t_values) {
    if (hosts.empty()) throw NoTraffic("no hosts given");
    for (int t : t_values)
        if (t < 1 || t > 31) throw ParseError("t must be in [1,31]");

    std::unordered_map<uint32_t, uint64_t> addr_flows;
    addr_flows.reserve(1 << 16);
    for (const auto& r : trace.records)
        ++addr_flows[role == AddressRole::SRC ? r.src_addr : r.dst_addr];

    FocusReport report;
    std::vector<uint32_t> active;
    for (uint32_t h : hosts) {
        if (addr_flows.count(h)) active.push_back(h);
        else report.dropped_hosts.push_back(h);
    }
    if (active.empty()) throw NoTraffic("all hosts have zero flows");

    for (int t : t_values) {
        // Flow totals per truncated subnet for this t.
        std::unordered_map<uint32_t, uint64_t> subnet_flows;
        subnet_flows.reserve(addr_flows.size());
        for (const auto& [addr, n] : addr_flows)
            subnet_flows[truncate_address(addr, t)] += n;

        size_t unaffected = 0, doubled = 0;
        for (uint32_t h : active) {
            FocusEntry e;
            e.host = h;
            e.t = t;
            e.own_flows = addr_flows.at(h);
            e.subnet_flows = subnet_flows.at(truncate_address(h, t));
            e.extra_ratio = static_cast<double>(e.subnet_flows - e.own_flows) /
                            static_cast<double>(e.own_flows);
            if (e.extra_ratio == 0.0) ++unaffected;
            if (e.extra_ratio >= 1.0) ++doubled;
            report.entries.push_back(e);
        }
        report.summaries.push_back(
            {t, static_cast<double>(unaffected) / static_cast<double>(active.size()),
             static_cast<double>(doubled) / static_cast<double>(active.size())});
    }
    return report;
}

void write_focus_report(const FocusReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "host,t,own_flows,subnet_flows,extra_ratio\n";
    char buf[32];
    for (const auto& e : report.entries) {
        std::snprintf(buf, sizeof buf, "%.6f", e.extra_ratio);
        out << e.host << ',' << e.t << ',' << e.own_flows << ',' << e.subnet_flows
            << ',' << buf << '\n';
    }
    for (const auto& s : report.summaries) {
        char b2[64];
        std::snprintf(b2, sizeof b2, "%.6f,%.6f", s.fraction_unaffected,
                      s.fraction_doubled);
        out << "SUMMARY," << s.t << ',' << b2 << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace flowanon
