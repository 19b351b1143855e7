#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/errors.hpp"

namespace qgraph {

struct InternalEdge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
};

struct ExternalEdge {
  std::string id;
  std::string at;
};

/// Finite metric graph: internal edges are intervals [0, a_i] running from
/// their initial to their terminal vertex, external edges are half-lines
/// [0, inf) attached at their initial vertex.  Loops (from == to) are allowed.
/// Immutable after construction.
class MetricGraph {
 public:
  MetricGraph(std::vector<std::string> vertices, std::vector<InternalEdge> internal_edges,
              std::vector<ExternalEdge> external_edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<InternalEdge>& internal_edges() const { return internal_; }
  const std::vector<ExternalEdge>& external_edges() const { return external_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_internal() const { return static_cast<int>(internal_.size()); }
  int num_external() const { return static_cast<int>(external_.size()); }

  bool compact() const { return external_.empty(); }

  /// Index of a vertex id; throws InputError for unknown ids.
  int vertex_index(const std::string& v) const;

  /// Number of edge ends attached to the vertex (a loop contributes two).
  int degree(int vertex) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<InternalEdge> internal_;
  std::vector<ExternalEdge> external_;
};

/// One coordinate of the boundary space: which edge end it refers to.
struct Slot {
  enum class Kind { External, InternalInitial, InternalTerminal };
  Kind kind;
  int edge;    // index into external_edges() or internal_edges()
  int vertex;  // vertex the end is attached to
};

/// Index layout of the boundary space K = K_E + K_I- + K_I+, dimension
/// d = |E| + 2|I|.  Blocks are contiguous in that order; within a block,
/// edges appear in input order.  The derivative trace uses psi'(0) on
/// initial ends and -psi'(a_i) on terminal ends; every matrix built on this
/// layout assumes that sign convention.
struct BoundaryLayout {
  int dimension = 0;
  int n_external = 0;
  int n_internal = 0;
  std::vector<Slot> slots;

  int external_slot(int e) const { return e; }
  int initial_slot(int i) const { return n_external + i; }
  int terminal_slot(int i) const { return n_external + n_internal + i; }

  /// Slots attached to a vertex, in slot order.
  std::vector<int> vertex_slots(int vertex) const;
};

BoundaryLayout boundary_layout(const MetricGraph& g);

/// (a_min, a_max) over internal edges; nullopt iff the graph has none.
std::optional<std::pair<double, double>> edge_length_extrema(const MetricGraph& g);

}  // namespace qgraph
