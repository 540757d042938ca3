#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nibble {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Color = std::uint32_t;

/// Colors are positive; 0 marks "no color" (the null tentative color or an
/// uncolored edge).
inline constexpr Color kNoColor = 0;

enum class ErrorCode {
  kDuplicateEdge,
  kSelfLoop,
  kDegreeBoundExceeded,
  kMissingEdge,
  kNodeOutOfRange,
  kInvalidEpsilon,
  kDegreeOutOfRange,
  kStreamLengthMismatch,
  kInfeasibleParams,
  kResourceLimit,
  kGadgetExhausted,
  kEmptySamples,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Unordered node pair; normalized so that u < v.
struct Endpoints {
  NodeId u = 0;
  NodeId v = 0;

  static Endpoints normalized(NodeId a, NodeId b) { return a < b ? Endpoints{a, b} : Endpoints{b, a}; }
  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool touches(NodeId x) const { return x == u || x == v; }
  std::uint64_t key() const { return (std::uint64_t{u} << 32) | v; }

  friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

/// Edges in arrival order. Positions are 1-based when talking about the
/// stream ("the k-th arrival"), 0-based when indexing the vector.
using EdgeStream = std::vector<Endpoints>;

enum class UpdateOp : std::uint8_t { kInsert, kDelete };

struct Update {
  UpdateOp op = UpdateOp::kInsert;
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Update&, const Update&) = default;
};

using UpdateStream = std::vector<Update>;

}  // namespace nibble
