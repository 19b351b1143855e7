#include "qgraph/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace qgraph {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

}  // namespace

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<InternalEdge> internal_edges,
                         std::vector<ExternalEdge> external_edges)
    : vertices_(std::move(vertices)), internal_(std::move(internal_edges)), external_(std::move(external_edges)) {
  require(!vertices_.empty(), "graph: at least one vertex required");
  require(!internal_.empty() || !external_.empty(), "graph: at least one edge required");

  std::unordered_set<std::string> seen;
  for (const auto& v : vertices_) {
    require(seen.insert(v).second, "graph: duplicate vertex id '" + v + "'");
  }
  for (const auto& e : internal_) {
    require(std::isfinite(e.length) && e.length > 0.0,
            "graph: internal edge '" + e.id + "' needs a finite positive length");
    require(seen.count(e.from) == 1, "graph: internal edge '" + e.id + "' names unknown vertex '" + e.from + "'");
    require(seen.count(e.to) == 1, "graph: internal edge '" + e.id + "' names unknown vertex '" + e.to + "'");
  }
  for (const auto& e : external_) {
    require(seen.count(e.at) == 1, "graph: external edge '" + e.id + "' names unknown vertex '" + e.at + "'");
  }
}

int MetricGraph::vertex_index(const std::string& v) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end()) throw InputError("graph: unknown vertex '" + v + "'");
  return static_cast<int>(it - vertices_.begin());
}

int MetricGraph::degree(int vertex) const {
  const std::string& v = vertices_.at(vertex);
  int deg = 0;
  for (const auto& e : external_)
    if (e.at == v) ++deg;
  for (const auto& e : internal_) {
    if (e.from == v) ++deg;
    if (e.to == v) ++deg;
  }
  return deg;
}

std::vector<int> BoundaryLayout::vertex_slots(int vertex) const {
  std::vector<int> out;
  for (int s = 0; s < dimension; ++s)
    if (slots[s].vertex == vertex) out.push_back(s);
  return out;
}

BoundaryLayout boundary_layout(const MetricGraph& g) {
  BoundaryLayout layout;
  layout.n_external = g.num_external();
  layout.n_internal = g.num_internal();
  layout.dimension = layout.n_external + 2 * layout.n_internal;
  layout.slots.reserve(layout.dimension);
  for (int e = 0; e < layout.n_external; ++e)
    layout.slots.push_back({Slot::Kind::External, e, g.vertex_index(g.external_edges()[e].at)});
  for (int i = 0; i < layout.n_internal; ++i)
    layout.slots.push_back({Slot::Kind::InternalInitial, i, g.vertex_index(g.internal_edges()[i].from)});
  for (int i = 0; i < layout.n_internal; ++i)
    layout.slots.push_back({Slot::Kind::InternalTerminal, i, g.vertex_index(g.internal_edges()[i].to)});
  return layout;
}

std::optional<std::pair<double, double>> edge_length_extrema(const MetricGraph& g) {
  if (g.num_internal() == 0) return std::nullopt;
  double lo = g.internal_edges()[0].length;
  double hi = lo;
  for (const auto& e : g.internal_edges()) {
    lo = std::min(lo, e.length);
    hi = std::max(hi, e.length);
  }
  return std::make_pair(lo, hi);
}

}  // namespace qgraph
