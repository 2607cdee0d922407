#include "flowanon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <sstream>

namespace flowanon {

namespace {

const char* kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::Bytes: return "bytes";
        case MetricKind::Packets: return "packets";
        case MetricKind::Flows: return "flows";
        case MetricKind::UniqueIP: return "uniqueip";
        case MetricKind::IpEntropy: return "ipentropy";
    }
    return "?";
}

constexpr MetricKind kVolumeKinds[] = {MetricKind::Bytes, MetricKind::Packets,
                                       MetricKind::Flows};
constexpr MetricKind kFeatureKinds[] = {MetricKind::UniqueIP, MetricKind::IpEntropy};
constexpr int kFeatureResolutions[] = {16, 24, 32};

}  // namespace

std::string metric_id_string(const MetricId& id) {
    std::string s = kind_name(id.kind);
    s += '.';
    s += std::to_string(id.resolution);
    s += id.role == AddressRole::SRC ? ".src." : ".dst.";
    s += id.direction == Direction::IN ? "in." : "out.";
    s += id.protocol == Protocol::TCP ? "tcp" : "udp";
    return s;
}

MetricId parse_metric_id(const std::string& s) {
    std::istringstream in(s);
    std::string kind, res, role, dir, proto;
    if (!std::getline(in, kind, '.') || !std::getline(in, res, '.') ||
        !std::getline(in, role, '.') || !std::getline(in, dir, '.') ||
        !std::getline(in, proto))
        throw ParseError("bad metric id: " + s);
    MetricId id{};
    if (kind == "bytes") id.kind = MetricKind::Bytes;
    else if (kind == "packets") id.kind = MetricKind::Packets;
    else if (kind == "flows") id.kind = MetricKind::Flows;
    else if (kind == "uniqueip") id.kind = MetricKind::UniqueIP;
    else if (kind == "ipentropy") id.kind = MetricKind::IpEntropy;
    else throw ParseError("bad metric kind: " + kind);
    id.resolution = std::stoi(res);
    if (role == "src") id.role = AddressRole::SRC;
    else if (role == "dst") id.role = AddressRole::DST;
    else throw ParseError("bad metric role: " + role);
    if (dir == "in") id.direction = Direction::IN;
    else if (dir == "out") id.direction = Direction::OUT;
    else throw ParseError("bad metric direction: " + dir);
    if (proto == "tcp") id.protocol = Protocol::TCP;
    else if (proto == "udp") id.protocol = Protocol::UDP;
    else throw ParseError("bad metric protocol: " + proto);
    return id;
}

std::vector<MetricId> metric_catalog(const AnonScheme& scheme) {
    validate_scheme(scheme);
    std::vector<MetricId> out;
    for (MetricKind k : kVolumeKinds)
        for (Direction d : {Direction::IN, Direction::OUT})
            for (Protocol p : {Protocol::TCP, Protocol::UDP})
                out.push_back({k, 0, AddressRole::SRC, d, p});
    for (MetricKind k : kFeatureKinds)
        for (int res : kFeatureResolutions) {
            if (!resolution_available(scheme, res)) continue;
            for (AddressRole role : {AddressRole::SRC, AddressRole::DST})
                for (Direction d : {Direction::IN, Direction::OUT})
                    for (Protocol p : {Protocol::TCP, Protocol::UDP})
                        out.push_back({k, res, role, d, p});
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MetricId> full_catalog() {
    return metric_catalog(PrefixPermutation{});
}

double shannon_entropy(std::vector<uint64_t> counts) {
    std::erase(counts, 0u);
    if (counts.empty()) return 0.0;
    std::sort(counts.begin(), counts.end());
    double total = 0.0;
    double weighted = 0.0;
    for (uint64_t c : counts) {
        total += static_cast<double>(c);
        weighted += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    double h = std::log2(total) - weighted / total;
    return h < 0.0 ? 0.0 : h;
}

MetricMatrix compute_metrics(const Trace& trace, const std::vector<MetricId>& catalog) {
    if (catalog.empty()) throw EmptyCatalog("empty metric catalog");
    const size_t n = static_cast<size_t>(trace.num_intervals);

    MetricMatrix matrix;
    for (const auto& id : catalog) {
        TimeSeries ts;
        ts.metric = id;
        ts.values.assign(n, 0.0);
        matrix.emplace(id, std::move(ts));
    }

    // Which (role, resolution) pairs the feature metrics need.
    bool need_feature[2][3] = {};
    auto res_slot = [](int r) { return r == 16 ? 0 : r == 24 ? 1 : 2; };
    for (const auto& id : catalog)
        if (id.kind == MetricKind::UniqueIP || id.kind == MetricKind::IpEntropy)
            need_feature[static_cast<int>(id.role)][res_slot(id.resolution)] = true;

    auto find = [&matrix](MetricKind k, int res, AddressRole role, Direction d,
                          Protocol p) -> TimeSeries* {
        auto it = matrix.find({k, res, role, d, p});
        return it == matrix.end() ? nullptr : &it->second;
    };

    // Records are sorted by time, so each interval is a contiguous span.
    size_t begin = 0;
    std::vector<uint32_t> scratch;
    std::vector<uint64_t> counts;
    for (size_t iv = 0; iv < n; ++iv) {
        const int64_t end_time = static_cast<int64_t>(iv + 1) * trace.interval_length;
        size_t end = begin;
        while (end < trace.records.size() && trace.records[end].start_time < end_time)
            ++end;

        for (Direction d : {Direction::IN, Direction::OUT}) {
            for (Protocol p : {Protocol::TCP, Protocol::UDP}) {
                uint64_t bytes = 0, packets = 0, flows = 0;
                for (size_t i = begin; i < end; ++i) {
                    const auto& r = trace.records[i];
                    if (r.direction != d || r.protocol != p) continue;
                    bytes += r.bytes;
                    packets += r.packets;
                    ++flows;
                }
                if (auto* ts = find(MetricKind::Bytes, 0, AddressRole::SRC, d, p))
                    ts->values[iv] = static_cast<double>(bytes);
                if (auto* ts = find(MetricKind::Packets, 0, AddressRole::SRC, d, p))
                    ts->values[iv] = static_cast<double>(packets);
                if (auto* ts = find(MetricKind::Flows, 0, AddressRole::SRC, d, p))
                    ts->values[iv] = static_cast<double>(flows);

                for (AddressRole role : {AddressRole::SRC, AddressRole::DST}) {
                    for (int res : kFeatureResolutions) {
                        if (!need_feature[static_cast<int>(role)][res_slot(res)]) continue;
                        scratch.clear();
                        for (size_t i = begin; i < end; ++i) {
                            const auto& r = trace.records[i];
                            if (r.direction != d || r.protocol != p) continue;
                            uint32_t a = role == AddressRole::SRC ? r.src_addr : r.dst_addr;
                            scratch.push_back(mask_prefix(a, res));
                        }
                        std::sort(scratch.begin(), scratch.end());
                        counts.clear();
                        for (size_t i = 0; i < scratch.size();) {
                            size_t j = i;
                            while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
                            counts.push_back(j - i);
                            i = j;
                        }
                        if (auto* ts = find(MetricKind::UniqueIP, res, role, d, p))
                            ts->values[iv] = static_cast<double>(counts.size());
                        if (auto* ts = find(MetricKind::IpEntropy, res, role, d, p))
                            ts->values[iv] = shannon_entropy(counts);
                    }
                }
            }
        }
        begin = end;
    }
    return matrix;
}

namespace {
struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
}  // namespace

void write_metric_matrix(const MetricMatrix& m, const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fputs("interval", f.get());
    size_t n = 0;
    for (const auto& [id, ts] : m) {
        std::fprintf(f.get(), ",%s", metric_id_string(id).c_str());
        n = std::max(n, ts.values.size());
    }
    std::fputc('\n', f.get());
    for (size_t iv = 0; iv < n; ++iv) {
        std::fprintf(f.get(), "%zu", iv);
        for (const auto& [id, ts] : m)
            std::fprintf(f.get(), ",%.17g", iv < ts.values.size() ? ts.values[iv] : 0.0);
        std::fputc('\n', f.get());
    }
    if (std::ferror(f.get())) throw IoError("write failed for " + path);
}

MetricMatrix read_metric_matrix(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open " + path);
    std::string content;
    char buf[1 << 16];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f.get())) > 0) content.append(buf, got);

    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty metric matrix", 1);
    std::vector<MetricId> ids;
    {
        std::istringstream hs(line);
        std::string field;
        std::getline(hs, field, ',');
        if (field != "interval") throw ParseError("bad metric matrix header", 1);
        while (std::getline(hs, field, ',')) ids.push_back(parse_metric_id(field));
    }
    MetricMatrix m;
    for (const auto& id : ids) m[id].metric = id;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        for (const auto& id : ids) {
            if (!std::getline(ls, field, ','))
                throw ParseError("short metric matrix row", row);
            m[id].values.push_back(std::stod(field));
        }
    }
    return m;
}

}  // namespace flowanon
