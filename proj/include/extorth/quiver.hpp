#ifndef EXTORTH_QUIVER_HPP
#define EXTORTH_QUIVER_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extorth/errors.hpp"

namespace extorth {

// Vertices are 0-based everywhere inside the library; the JSON boundary
// translates to the 1-based external convention.
struct Arrow {
  std::string id;
  int source = 0;
  int target = 0;
};

// A finite quiver without directed cycles. Acyclicity is established at
// construction, so holders of a Quiver never re-check it.
class Quiver {
 public:
  Quiver(int vertex_count, std::vector<Arrow> arrows)
      : n_(vertex_count), arrows_(std::move(arrows)) {
    if (n_ <= 0) throw InvalidQuiver("quiver needs at least one vertex");
    std::set<std::string> ids;
    for (const Arrow& a : arrows_) {
      if (a.source < 0 || a.source >= n_ || a.target < 0 || a.target >= n_)
        throw InvalidQuiver("arrow endpoint out of range");
      if (!ids.insert(a.id).second) throw InvalidQuiver("duplicate arrow id '" + a.id + "'");
    }
    topo_ = compute_topological_order();
  }

  int vertex_count() const { return n_; }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const Arrow& arrow(int k) const { return arrows_[k]; }
  const std::vector<int>& topological_order() const { return topo_; }

  bool operator==(const Quiver& o) const {
    if (n_ != o.n_ || arrows_.size() != o.arrows_.size()) return false;
    for (size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].id != o.arrows_[i].id || arrows_[i].source != o.arrows_[i].source ||
          arrows_[i].target != o.arrows_[i].target)
        return false;
    return true;
  }
  bool operator!=(const Quiver& o) const { return !(*this == o); }

 private:
  std::vector<int> compute_topological_order() const {
    std::vector<int> indeg(n_, 0);
    for (const Arrow& a : arrows_) ++indeg[a.target];
    std::vector<int> order;
    std::vector<int> ready;
    for (int v = n_ - 1; v >= 0; --v)
      if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
      int v = ready.back();
      ready.pop_back();
      order.push_back(v);
      for (const Arrow& a : arrows_)
        if (a.source == v && --indeg[a.target] == 0) ready.push_back(a.target);
    }
    if (static_cast<int>(order.size()) != n_) throw CyclicQuiver("quiver has a directed cycle");
    return order;
  }

  int n_;
  std::vector<Arrow> arrows_;
  std::vector<int> topo_;
};

using QuiverPtr = std::shared_ptr<const Quiver>;
using DimVector = std::vector<int>;

inline QuiverPtr make_quiver(int vertex_count, std::vector<Arrow> arrows) {
  return std::make_shared<const Quiver>(vertex_count, std::move(arrows));
}

// Returns the topological order; throws CyclicQuiver otherwise. Kept as a
// named operation even though construction already guarantees it.
inline std::vector<int> validate_quiver(const Quiver& q) { return q.topological_order(); }

inline long long euler_form(const Quiver& q, const DimVector& d, const DimVector& e) {
  if (static_cast<int>(d.size()) != q.vertex_count() || static_cast<int>(e.size()) != q.vertex_count())
    throw InvalidShape("dimension vector length mismatch");
  long long v = 0;
  for (int i = 0; i < q.vertex_count(); ++i) v += static_cast<long long>(d[i]) * e[i];
  for (const Arrow& a : q.arrows()) v -= static_cast<long long>(d[a.source]) * e[a.target];
  return v;
}

// A path in the quiver; `arrows` lists arrow indices in traversal order,
// empty for the trivial path at `from`.
struct Path {
  int from = 0;
  int to = 0;
  std::vector<int> arrows;

  int length() const { return static_cast<int>(arrows.size()); }
};

namespace detail {

// Canonical path order: by length, then lexicographically by the sequence
// of arrow ids. This order fixes every path-indexed basis in the library.
inline bool path_less(const Quiver& q, const Path& a, const Path& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (int i = 0; i < a.length(); ++i) {
    const std::string& x = q.arrow(a.arrows[i]).id;
    const std::string& y = q.arrow(b.arrows[i]).id;
    if (x != y) return x < y;
  }
  return false;
}

}  // namespace detail

// All paths starting at v, in canonical order.
inline std::vector<Path> paths_from(const Quiver& q, int v) {
  std::vector<Path> all;
  std::vector<Path> frontier{Path{v, v, {}}};
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const Path& p : frontier) {
      all.push_back(p);
      for (int k = 0; k < q.arrow_count(); ++k)
        if (q.arrow(k).source == p.to) {
          Path e = p;
          e.arrows.push_back(k);
          e.to = q.arrow(k).target;
          next.push_back(std::move(e));
        }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end(),
            [&q](const Path& a, const Path& b) { return detail::path_less(q, a, b); });
  return all;
}

// All paths ending at v, in canonical order.
inline std::vector<Path> paths_to(const Quiver& q, int v) {
  std::vector<Path> all;
  for (int u = 0; u < q.vertex_count(); ++u)
    for (const Path& p : paths_from(q, u))
      if (p.to == v) all.push_back(p);
  std::sort(all.begin(), all.end(),
            [&q](const Path& a, const Path& b) { return detail::path_less(q, a, b); });
  return all;
}

// Total number of paths, i.e. the dimension of the path algebra.
inline int path_count(const Quiver& q) {
  int n = 0;
  for (int v = 0; v < q.vertex_count(); ++v) n += static_cast<int>(paths_from(q, v).size());
  return n;
}

}  // namespace extorth

#endif
