#include "dadmm/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "dadmm/errors.hpp"
#include "dadmm/fsio.hpp"

namespace dadmm {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tol";
    case StopReason::max_iters: return "max_iters";
    case StopReason::diverged: return "diverged";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_csv_string(const ConvergenceTrace& trace) {
  std::ostringstream out;
  out << "iter,comm_rounds,primal_res,dual_res,consensus_res\n";
  for (const auto& r : trace.rows) {
    out << r.iter << "," << r.comm_rounds << "," << format_double(r.primal_res) << ","
        << format_double(r.dual_res) << "," << format_double(r.consensus_res) << "\n";
  }
  return out.str();
}

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
  write_text_file(path, trace_csv_string(trace));
}

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,", 0) != 0)
    throw IoError("trace csv: missing header");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRow r;
    const char* s = line.c_str();
    char* end = nullptr;
    r.iter = static_cast<int>(std::strtol(s, &end, 10));
    if (end == s || *end != ',') throw IoError("trace csv: malformed row '" + line + "'");
    s = end + 1;
    r.comm_rounds = std::strtol(s, &end, 10);
    if (end == s || *end != ',') throw IoError("trace csv: malformed row '" + line + "'");
    s = end + 1;
    r.primal_res = std::strtod(s, &end);
    if (end == s || *end != ',') throw IoError("trace csv: malformed row '" + line + "'");
    s = end + 1;
    r.dual_res = std::strtod(s, &end);
    if (end == s || *end != ',') throw IoError("trace csv: malformed row '" + line + "'");
    s = end + 1;
    r.consensus_res = std::strtod(s, &end);
    if (end == s) throw IoError("trace csv: malformed row '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  return parse_trace_csv(read_text_file(path));
}

}  // namespace dadmm
