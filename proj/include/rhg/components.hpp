// Connected components: sizes, L1, L2 and canonical labels.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "rhg/builder.hpp"

namespace rhg {

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct ComponentSummary {
  std::vector<std::size_t> sizes;   // descending
  std::vector<VertexId> labels;     // smallest vertex id of each vertex's component
  std::size_t L1 = 0;
  std::size_t L2 = 0;
  std::size_t num_components = 0;
  VertexId largest_label = 0;       // label of an L1-sized component (smallest such label)

  bool in_largest(VertexId v) const { return num_components > 0 && labels[v] == largest_label; }
};

inline ComponentSummary summarize_labels(std::vector<VertexId> labels) {
  ComponentSummary cs;
  const std::size_t n = labels.size();
  std::vector<std::size_t> count(n, 0);
  for (auto l : labels) ++count[l];
  for (std::size_t v = 0; v < n; ++v) {
    if (count[v] == 0) continue;
    cs.sizes.push_back(count[v]);
    if (count[v] > cs.L1) {
      cs.L1 = count[v];
      cs.largest_label = static_cast<VertexId>(v);
    }
  }
  std::sort(cs.sizes.begin(), cs.sizes.end(), std::greater<>());
  cs.num_components = cs.sizes.size();
  cs.L2 = cs.sizes.size() >= 2 ? cs.sizes[1] : 0;
  cs.labels = std::move(labels);
  return cs;
}

inline ComponentSummary connected_components(const HypGraph& g) {
  const std::size_t n = g.vertex_count();
  DisjointSets ds(n);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v) ds.unite(u, v);

  // canonical label: smallest member id
  std::vector<VertexId> root_min(n, static_cast<VertexId>(n));
  std::vector<VertexId> labels(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = ds.find(v);
    if (root_min[r] == n) root_min[r] = static_cast<VertexId>(v);
    labels[v] = root_min[r];
  }
  return summarize_labels(std::move(labels));
}

/// L2, with 0 when fewer than two components exist.
inline std::size_t second_largest(const ComponentSummary& cs) {
  return cs.sizes.size() >= 2 ? cs.sizes[1] : 0;
}

/// Component size -> number of components of that size.
inline std::map<std::size_t, std::size_t> size_histogram(const ComponentSummary& cs) {
  std::map<std::size_t, std::size_t> h;
  for (auto s : cs.sizes) ++h[s];
  return h;
}

/// Number of components with at least k vertices.
inline std::size_t count_components_ge(const ComponentSummary& cs, std::size_t k) {
  return static_cast<std::size_t>(
      std::count_if(cs.sizes.begin(), cs.sizes.end(), [k](std::size_t s) { return s >= k; }));
}

}  // namespace rhg
