#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "netpress/simulator.hpp"

namespace netpress {

struct TraceFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTraceHeader =
    "t,total_queue,total_dual,grad_norm,max_link_util";

/// One row per slot, floats with 9 significant digits.
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace);

/// Throws TraceFormatError unless the file carries the exact trace schema.
/// An empty data section parses to an empty vector.
std::vector<TraceRecord> read_trace_csv(const std::string& path);

}  // namespace netpress
