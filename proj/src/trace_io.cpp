#include "netpress/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace netpress {

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kTraceHeader << '\n';
  char line[160];
  for (const TraceRecord& r : trace) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.9g\n", r.t,
                  r.total_queue, r.total_dual, r.grad_norm, r.max_link_util);
    out << line;
  }
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw TraceFormatError("trace is empty (missing header): " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw TraceFormatError("trace schema mismatch in " + path + ": " + line);

  std::vector<TraceRecord> trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceRecord r;
    char trailing;
    int got = std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf%c", &r.t,
                          &r.total_queue, &r.total_dual, &r.grad_norm,
                          &r.max_link_util, &trailing);
    if (got != 5 && !(got == 6 && trailing == '\r'))
      throw TraceFormatError("bad trace row at " + path + ":" +
                             std::to_string(lineno));
    trace.push_back(r);
  }
  return trace;
}

}  // namespace netpress
