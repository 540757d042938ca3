#pragma once

// Text formats.
//
//   edge list:      "# n=<n> delta=<delta>" header, then one "u v" per line
//                   (0-based node indices). In a stream file the line order
//                   is the arrival order.
//   update stream:  same header, then "+ u v" / "- u v" per line.
//
// Blank lines and further '#' comment lines are ignored.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "nibble/types.hpp"

namespace nibble {

struct GraphHeader {
  std::size_t node_count = 0;
  std::size_t max_degree = 0;
};

struct EdgeListFile {
  GraphHeader header;
  std::vector<Endpoints> edges;
};

struct UpdateStreamFile {
  GraphHeader header;
  UpdateStream updates;
};

EdgeListFile read_edge_list(std::istream& in);
EdgeListFile read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const GraphHeader& header, std::span<const Endpoints> edges);
void write_edge_list(const std::filesystem::path& path, const GraphHeader& header,
                     std::span<const Endpoints> edges);

UpdateStreamFile read_update_stream(std::istream& in);
UpdateStreamFile read_update_stream(const std::filesystem::path& path);
void write_update_stream(std::ostream& out, const GraphHeader& header, std::span<const Update> updates);
void write_update_stream(const std::filesystem::path& path, const GraphHeader& header,
                         std::span<const Update> updates);

}  // namespace nibble
