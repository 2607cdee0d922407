#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowanon {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data. `row` is 1-based (header = row 1) when known.
struct ParseError : std::runtime_error {
    long row = -1;
    ParseError(const std::string& msg, long row_ = -1)
        : std::runtime_error(row_ >= 0 ? "row " + std::to_string(row_) + ": " + msg : msg),
          row(row_) {}
};

enum class Protocol : uint8_t { TCP, UDP };
enum class Direction : uint8_t { IN, OUT };

const char* to_string(Protocol p);
const char* to_string(Direction d);

/// One unidirectional flow record.
struct FlowRecord {
    int64_t start_time = 0;  // seconds since epoch
    uint32_t src_addr = 0;
    uint32_t dst_addr = 0;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    Protocol protocol = Protocol::TCP;
    uint64_t packets = 1;
    uint64_t bytes = 1;
    Direction direction = Direction::IN;

    bool operator==(const FlowRecord&) const = default;
};

/// An ordered flow trace covering `num_intervals` fixed-length time bins.
struct Trace {
    std::vector<FlowRecord> records;
    int64_t interval_length = 900;
    int64_t num_intervals = 2016;
};

inline int64_t interval_of(int64_t start_time, int64_t interval_length) {
    return start_time / interval_length;
}

inline int64_t interval_of(const FlowRecord& r, int64_t interval_length) {
    return interval_of(r.start_time, interval_length);
}

/// Validates a single record against the flow invariants; throws ParseError.
void validate_record(const FlowRecord& r, long row = -1);

/// Validates ordering and interval bounds of a whole trace.
void validate_trace(const Trace& t);

/// Reads the CSV trace format. num_intervals == 0 derives the interval count
/// from the last record's timestamp.
Trace read_trace(const std::string& path, int64_t interval_length = 900,
                 int64_t num_intervals = 2016);

void write_trace(const Trace& trace, const std::string& path);

/// Dotted-quad helpers used by CLI and tests.
std::string format_ipv4(uint32_t addr);
uint32_t parse_ipv4(const std::string& s);

}  // namespace flowanon
