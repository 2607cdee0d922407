#include "flowanon/flow.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <memory>

namespace flowanon {

const char* to_string(Protocol p) { return p == Protocol::TCP ? "TCP" : "UDP"; }
const char* to_string(Direction d) { return d == Direction::IN ? "IN" : "OUT"; }

static const char kHeader[] =
    "start_time,src_addr,dst_addr,src_port,dst_port,protocol,packets,bytes,direction";

void validate_record(const FlowRecord& r, long row) {
    if (r.packets < 1) throw ParseError("packets must be >= 1", row);
    if (r.bytes < r.packets) throw ParseError("bytes must be >= packets", row);
    if (r.start_time < 0) throw ParseError("negative start_time", row);
}

void validate_trace(const Trace& t) {
    if (t.interval_length <= 0) throw ParseError("interval_length must be > 0");
    const int64_t span = t.interval_length * t.num_intervals;
    int64_t prev = 0;
    for (size_t i = 0; i < t.records.size(); ++i) {
        const auto& r = t.records[i];
        validate_record(r, static_cast<long>(i) + 2);
        if (r.start_time >= span)
            throw ParseError("start_time beyond trace span", static_cast<long>(i) + 2);
        if (r.start_time < prev)
            throw ParseError("records not sorted by start_time", static_cast<long>(i) + 2);
        prev = r.start_time;
    }
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

template <typename T>
T parse_uint_field(const char* begin, const char* end, long row, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(std::string("bad ") + what, row);
    return value;
}

}  // namespace

Trace read_trace(const std::string& path, int64_t interval_length, int64_t num_intervals) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open " + path);

    Trace trace;
    trace.interval_length = interval_length;
    trace.num_intervals = num_intervals;

    char line[512];
    long row = 0;
    if (!std::fgets(line, sizeof line, f.get()))
        throw ParseError("missing header line", 1);
    ++row;
    {
        size_t n = std::strcspn(line, "\r\n");
        if (std::string_view(line, n) != kHeader)
            throw ParseError("unexpected header line", 1);
    }

    while (std::fgets(line, sizeof line, f.get())) {
        ++row;
        size_t len = std::strcspn(line, "\r\n");
        if (len == 0) continue;
        line[len] = '\0';

        const char* fields[9];
        size_t lens[9];
        int nf = 0;
        char* p = line;
        while (nf < 9) {
            fields[nf] = p;
            char* comma = std::strchr(p, ',');
            if (comma) {
                lens[nf++] = static_cast<size_t>(comma - p);
                p = comma + 1;
            } else {
                lens[nf++] = std::strlen(p);
                p = nullptr;
                break;
            }
        }
        if (nf != 9 || p != nullptr)
            throw ParseError("expected 9 fields", row);

        FlowRecord r;
        r.start_time = parse_uint_field<int64_t>(fields[0], fields[0] + lens[0], row, "start_time");
        r.src_addr = parse_uint_field<uint32_t>(fields[1], fields[1] + lens[1], row, "src_addr");
        r.dst_addr = parse_uint_field<uint32_t>(fields[2], fields[2] + lens[2], row, "dst_addr");
        r.src_port = parse_uint_field<uint16_t>(fields[3], fields[3] + lens[3], row, "src_port");
        r.dst_port = parse_uint_field<uint16_t>(fields[4], fields[4] + lens[4], row, "dst_port");

        std::string_view proto(fields[5], lens[5]);
        if (proto == "TCP") r.protocol = Protocol::TCP;
        else if (proto == "UDP") r.protocol = Protocol::UDP;
        else throw ParseError("protocol must be TCP or UDP", row);

        r.packets = parse_uint_field<uint64_t>(fields[6], fields[6] + lens[6], row, "packets");
        r.bytes = parse_uint_field<uint64_t>(fields[7], fields[7] + lens[7], row, "bytes");

        std::string_view dir(fields[8], lens[8]);
        if (dir == "IN") r.direction = Direction::IN;
        else if (dir == "OUT") r.direction = Direction::OUT;
        else throw ParseError("direction must be IN or OUT", row);

        validate_record(r, row);
        trace.records.push_back(r);
    }

    if (trace.num_intervals == 0) {
        int64_t max_t = 0;
        for (const auto& r : trace.records) max_t = std::max(max_t, r.start_time);
        trace.num_intervals = max_t / trace.interval_length + 1;
    }
    validate_trace(trace);
    return trace;
}

void write_trace(const Trace& trace, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fputs(kHeader, f.get());
    std::fputc('\n', f.get());
    for (const auto& r : trace.records) {
        std::fprintf(f.get(), "%lld,%u,%u,%u,%u,%s,%llu,%llu,%s\n",
                     static_cast<long long>(r.start_time), r.src_addr, r.dst_addr,
                     r.src_port, r.dst_port, to_string(r.protocol),
                     static_cast<unsigned long long>(r.packets),
                     static_cast<unsigned long long>(r.bytes), to_string(r.direction));
    }
    if (std::ferror(f.get())) throw IoError("write failed for " + path);
}

std::string format_ipv4(uint32_t addr) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", addr >> 24, (addr >> 16) & 0xFF,
                  (addr >> 8) & 0xFF, addr & 0xFF);
    return buf;
}

uint32_t parse_ipv4(const std::string& s) {
    unsigned a, b, c, d;
    char tail;
    if (std::sscanf(s.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4 ||
        a > 255 || b > 255 || c > 255 || d > 255)
        throw ParseError("bad IPv4 address: " + s);
    return (a << 24) | (b << 16) | (c << 8) | d;
}

}  // namespace flowanon
