#include "nibble/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nibble {
namespace {

bool parse_header(const std::string& line, GraphHeader& header) {
  // "# n=<n> delta=<delta>"
  std::istringstream ss(line.substr(1));
  std::string token;
  bool n_seen = false;
  bool delta_seen = false;
  while (ss >> token) {
    if (token.rfind("n=", 0) == 0) {
      header.node_count = std::stoull(token.substr(2));
      n_seen = true;
    } else if (token.rfind("delta=", 0) == 0) {
      header.max_degree = std::stoull(token.substr(6));
      delta_seen = true;
    }
  }
  return n_seen && delta_seen;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& line) {
  throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
}

NodeId parse_node(std::istringstream& ss, std::size_t line_no, const std::string& line) {
  long long value = -1;
  if (!(ss >> value) || value < 0 || value > static_cast<long long>(UINT32_MAX)) parse_error(line_no, line);
  return static_cast<NodeId>(value);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

EdgeListFile read_edge_list(std::istream& in) {
  EdgeListFile file;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!header_seen) header_seen = parse_header(line, file.header);
      continue;
    }
    std::istringstream ss(line);
    const NodeId u = parse_node(ss, line_no, line);
    const NodeId v = parse_node(ss, line_no, line);
    file.edges.push_back({u, v});
  }
  if (!header_seen) throw Error(ErrorCode::kIo, "missing '# n=<n> delta=<delta>' header");
  return file;
}

EdgeListFile read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const GraphHeader& header, std::span<const Endpoints> edges) {
  out << "# n=" << header.node_count << " delta=" << header.max_degree << '\n';
  for (const Endpoints& e : edges) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const GraphHeader& header,
                     std::span<const Endpoints> edges) {
  auto out = open_output(path);
  write_edge_list(out, header, edges);
}

UpdateStreamFile read_update_stream(std::istream& in) {
  UpdateStreamFile file;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!header_seen) header_seen = parse_header(line, file.header);
      continue;
    }
    std::istringstream ss(line);
    char op = 0;
    ss >> op;
    if (op != '+' && op != '-') parse_error(line_no, line);
    const NodeId u = parse_node(ss, line_no, line);
    const NodeId v = parse_node(ss, line_no, line);
    file.updates.push_back({op == '+' ? UpdateOp::kInsert : UpdateOp::kDelete, u, v});
  }
  if (!header_seen) throw Error(ErrorCode::kIo, "missing '# n=<n> delta=<delta>' header");
  return file;
}

UpdateStreamFile read_update_stream(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_update_stream(in);
}

void write_update_stream(std::ostream& out, const GraphHeader& header, std::span<const Update> updates) {
  out << "# n=" << header.node_count << " delta=" << header.max_degree << '\n';
  for (const Update& up : updates) {
    out << (up.op == UpdateOp::kInsert ? '+' : '-') << ' ' << up.u << ' ' << up.v << '\n';
  }
}

void write_update_stream(const std::filesystem::path& path, const GraphHeader& header,
                         std::span<const Update> updates) {
  auto out = open_output(path);
  write_update_stream(out, header, updates);
}

}  // namespace nibble
