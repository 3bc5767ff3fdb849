#include "ssobs/trace.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssobs {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& cell) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error("malformed numeric cell '" + cell + "'");
  }
  return v;
}

long parse_long(const std::string& cell) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error("malformed integer cell '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream os;
  os << "t";
  const char* groups[] = {"err", "cons", "r", "s", "rho"};
  for (const char* g : groups) {
    for (int i = 1; i <= trace.num_nodes; ++i) os << "," << g << "_" << i;
  }
  os << ",inner_rounds,messages\n";

  for (const auto& rec : trace.records) {
    os << rec.t;
    for (const auto* v : {&rec.err, &rec.cons, &rec.r, &rec.s, &rec.rho}) {
      if (static_cast<int>(v->size()) != trace.num_nodes) {
        throw std::runtime_error("trace record does not match the node count");
      }
      for (double d : *v) os << "," << fmt17(d);
    }
    os << "," << rec.inner_rounds << "," << rec.messages << "\n";
  }
  return os.str();
}

void write_trace(const Trace& trace, const std::string& path) {
  const std::string body = trace_to_csv(trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path +
                             "' for writing: " + std::strerror(errno));
  }
  out << body;
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path +
                             "' failed: " + std::strerror(errno));
  }
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path +
                             "' for reading: " + std::strerror(errno));
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace file '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);

  int num_nodes = 0;
  for (const auto& col : header) {
    if (col.rfind("err_", 0) == 0) ++num_nodes;
  }
  const size_t expected = 1 + 5 * static_cast<size_t>(num_nodes) + 2;
  if (header.size() != expected || header.front() != "t" ||
      header.back() != "messages") {
    throw std::runtime_error("unrecognized trace header in '" + path + "'");
  }

  Trace trace;
  trace.num_nodes = num_nodes;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != expected) {
      throw std::runtime_error("trace row with wrong cell count in '" + path +
                               "'");
    }
    TraceRecord rec;
    size_t c = 0;
    rec.t = static_cast<int>(parse_long(cells[c++]));
    for (auto* v : {&rec.err, &rec.cons, &rec.r, &rec.s, &rec.rho}) {
      for (int i = 0; i < num_nodes; ++i) v->push_back(parse_double(cells[c++]));
    }
    rec.inner_rounds = static_cast<int>(parse_long(cells[c++]));
    rec.messages = parse_long(cells[c++]);
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace ssobs
