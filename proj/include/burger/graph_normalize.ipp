// Template definitions for graph.hpp. Not a standalone header.

#include <cmath>

namespace burger {

template <typename Scalar>
NormalizedAdjacency<Scalar> symmetric_normalize(const InteractionGraph& graph) {
  using Triplet = Eigen::Triplet<Scalar>;
  NormalizedAdjacency<Scalar> out;
  std::vector<Triplet> entries;
  entries.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) {
    const Scalar deg = Scalar(graph.user_degree(e.a)) * Scalar(graph.item_degree(e.b));
    entries.emplace_back(e.a, e.b, Scalar(1) / std::sqrt(deg));
  }
  out.weights.resize(graph.num_users(), graph.num_items());
  out.weights.setFromTriplets(entries.begin(), entries.end());
  out.weights.makeCompressed();
  for (UserIndex u = 0; u < graph.num_users(); ++u)
    if (graph.user_degree(u) == 0) out.isolated_rows.push_back(u);
  for (ItemIndex i = 0; i < graph.num_items(); ++i)
    if (graph.item_degree(i) == 0) out.isolated_cols.push_back(i);
  return out;
}

template <typename Scalar>
NormalizedAdjacency<Scalar> symmetric_normalize(const SocialGraph& graph) {
  using Triplet = Eigen::Triplet<Scalar>;
  NormalizedAdjacency<Scalar> out;
  const std::vector<std::size_t> in_deg = graph.in_degrees();
  std::vector<Triplet> entries;
  entries.reserve(graph.num_arcs());
  for (UserIndex u = 0; u < graph.num_users(); ++u) {
    const Scalar out_deg = Scalar(graph.degree(u));
    for (UserIndex v : graph.neighbors(u))
      entries.emplace_back(u, v, Scalar(1) / std::sqrt(out_deg * Scalar(in_deg[v])));
  }
  out.weights.resize(graph.num_users(), graph.num_users());
  out.weights.setFromTriplets(entries.begin(), entries.end());
  out.weights.makeCompressed();
  for (UserIndex u = 0; u < graph.num_users(); ++u) {
    if (graph.degree(u) == 0) out.isolated_rows.push_back(u);
    if (in_deg[u] == 0) out.isolated_cols.push_back(u);
  }
  return out;
}

}  // namespace burger
