#ifndef EXTORTH_REP_HPP
#define EXTORTH_REP_HPP

#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "extorth/matrix.hpp"
#include "extorth/quiver.hpp"

namespace extorth {

// Finite-dimensional representation: a space k^{d_v} per vertex, a matrix of
// shape d_target x d_source per arrow, acting on column vectors.
template <class F>
class Representation {
 public:
  Representation(QuiverPtr quiver, F field, DimVector dims, std::vector<Matrix<F>> arrow_matrices)
      : quiver_(std::move(quiver)),
        field_(std::move(field)),
        dims_(std::move(dims)),
        arrow_matrices_(std::move(arrow_matrices)) {
    const Quiver& q = *quiver_;
    if (static_cast<int>(dims_.size()) != q.vertex_count())
      throw InvalidShape("dimension vector length mismatch");
    for (int d : dims_)
      if (d < 0) throw InvalidShape("negative vertex dimension");
    if (static_cast<int>(arrow_matrices_.size()) != q.arrow_count())
      throw InvalidShape("arrow matrix count mismatch");
    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      const Matrix<F>& m = arrow_matrices_[k];
      if (m.rows() != dims_[a.target] || m.cols() != dims_[a.source])
        throw InvalidShape("arrow matrix '" + a.id + "' has wrong shape");
      if (m.field() != field_) throw FieldMismatch("arrow matrix over wrong field");
    }
  }

  const Quiver& quiver() const { return *quiver_; }
  const QuiverPtr& quiver_ptr() const { return quiver_; }
  const F& field() const { return field_; }
  const DimVector& dims() const { return dims_; }
  int dim(int v) const { return dims_[v]; }
  int total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }
  const Matrix<F>& arrow_matrix(int k) const { return arrow_matrices_[k]; }

  bool is_zero() const { return total_dim() == 0; }

  bool operator==(const Representation& o) const {
    if (quiver() != o.quiver() || field_ != o.field_ || dims_ != o.dims_) return false;
    return arrow_matrices_ == o.arrow_matrices_;
  }
  bool operator!=(const Representation& o) const { return !(*this == o); }

 private:
  QuiverPtr quiver_;
  F field_;
  DimVector dims_;
  std::vector<Matrix<F>> arrow_matrices_;
};

template <class F>
using RepPtr = std::shared_ptr<const Representation<F>>;

template <class F>
RepPtr<F> share(Representation<F> rep) {
  return std::make_shared<const Representation<F>>(std::move(rep));
}

template <class F>
Representation<F> zero_rep(const QuiverPtr& q, const F& field) {
  DimVector dims(q->vertex_count(), 0);
  std::vector<Matrix<F>> mats;
  for (const Arrow& a : q->arrows()) {
    (void)a;
    mats.emplace_back(field, 0, 0);
  }
  return Representation<F>(q, field, std::move(dims), std::move(mats));
}

namespace detail {

template <class F>
void require_parallel(const Representation<F>& m, const Representation<F>& n) {
  if (m.quiver() != n.quiver()) throw InvalidShape("representations live on different quivers");
  if (m.field() != n.field()) throw FieldMismatch("representations over different fields");
}

}  // namespace detail

// Morphism of representations: one matrix per vertex, commuting with every
// arrow action. The squares are verified at construction.
template <class F>
class Morphism {
 public:
  Morphism(RepPtr<F> source, RepPtr<F> target, std::vector<Matrix<F>> vertex_maps)
      : source_(std::move(source)), target_(std::move(target)), maps_(std::move(vertex_maps)) {
    detail::require_parallel(*source_, *target_);
    const Quiver& q = source_->quiver();
    if (static_cast<int>(maps_.size()) != q.vertex_count())
      throw InvalidShape("vertex map count mismatch");
    for (int v = 0; v < q.vertex_count(); ++v)
      if (maps_[v].rows() != target_->dim(v) || maps_[v].cols() != source_->dim(v))
        throw InvalidShape("vertex map has wrong shape");
    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      Matrix<F> lhs = maps_[a.target] * source_->arrow_matrix(k);
      Matrix<F> rhs = target_->arrow_matrix(k) * maps_[a.source];
      if (lhs != rhs) throw NotAMorphism("square for arrow '" + a.id + "' does not commute");
    }
  }

  const Representation<F>& source() const { return *source_; }
  const Representation<F>& target() const { return *target_; }
  const RepPtr<F>& source_ptr() const { return source_; }
  const RepPtr<F>& target_ptr() const { return target_; }
  const Matrix<F>& vertex_map(int v) const { return maps_[v]; }
  const std::vector<Matrix<F>>& vertex_maps() const { return maps_; }

  bool is_zero() const {
    for (const Matrix<F>& m : maps_)
      if (!m.is_zero()) return false;
    return true;
  }
  bool is_injective() const {
    for (const Matrix<F>& m : maps_)
      if (rank(m) != m.cols()) return false;
    return true;
  }
  bool is_surjective() const {
    for (const Matrix<F>& m : maps_)
      if (rank(m) != m.rows()) return false;
    return true;
  }
  bool is_invertible() const {
    for (const Matrix<F>& m : maps_)
      if (m.rows() != m.cols() || rank(m) != m.rows()) return false;
    return true;
  }

  bool operator==(const Morphism& o) const {
    return source() == o.source() && target() == o.target() && maps_ == o.maps_;
  }
  bool operator!=(const Morphism& o) const { return !(*this == o); }

 private:
  RepPtr<F> source_;
  RepPtr<F> target_;
  std::vector<Matrix<F>> maps_;
};

template <class F>
Morphism<F> identity_morphism(const RepPtr<F>& m) {
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < m->quiver().vertex_count(); ++v)
    maps.push_back(Matrix<F>::identity(m->field(), m->dim(v)));
  return Morphism<F>(m, m, std::move(maps));
}

template <class F>
Morphism<F> zero_morphism(const RepPtr<F>& m, const RepPtr<F>& n) {
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < m->quiver().vertex_count(); ++v)
    maps.emplace_back(m->field(), n->dim(v), m->dim(v));
  return Morphism<F>(m, n, std::move(maps));
}

// g after f.
template <class F>
Morphism<F> compose(const Morphism<F>& g, const Morphism<F>& f) {
  if (f.target() != g.source()) throw InvalidShape("composition target/source mismatch");
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < f.source().quiver().vertex_count(); ++v)
    maps.push_back(g.vertex_map(v) * f.vertex_map(v));
  return Morphism<F>(f.source_ptr(), g.target_ptr(), std::move(maps));
}

template <class F>
Morphism<F> morphism_add(const Morphism<F>& f, const Morphism<F>& g) {
  if (f.source() != g.source() || f.target() != g.target())
    throw InvalidShape("morphism sum needs parallel morphisms");
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < f.source().quiver().vertex_count(); ++v)
    maps.push_back(f.vertex_map(v) + g.vertex_map(v));
  return Morphism<F>(f.source_ptr(), f.target_ptr(), std::move(maps));
}

template <class F>
Morphism<F> morphism_scale(const typename F::Elem& c, const Morphism<F>& f) {
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < f.source().quiver().vertex_count(); ++v)
    maps.push_back(f.vertex_map(v).scaled(c));
  return Morphism<F>(f.source_ptr(), f.target_ptr(), std::move(maps));
}

// Kernel, cokernel, image, each returned with its structure morphism.

template <class F>
struct Kernel {
  RepPtr<F> rep;
  Morphism<F> incl;  // rep -> source
};

template <class F>
Kernel<F> kernel(const Morphism<F>& f) {
  const Quiver& q = f.source().quiver();
  const F& field = f.source().field();
  std::vector<Matrix<F>> basis;
  DimVector dims;
  for (int v = 0; v < q.vertex_count(); ++v) {
    basis.push_back(kernel_basis(f.vertex_map(v)));
    dims.push_back(basis.back().cols());
  }
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    // The arrow action maps ker f_{s} into ker f_{t}; coordinates in the
    // kernel basis are unique because the basis has full column rank.
    auto coords = solve(basis[a.target], f.source().arrow_matrix(k) * basis[a.source]);
    if (!coords) throw Error("kernel basis failed to absorb arrow action");
    arr.push_back(std::move(*coords));
  }
  RepPtr<F> rep = share(Representation<F>(f.source().quiver_ptr(), field, std::move(dims), std::move(arr)));
  Morphism<F> incl(rep, f.source_ptr(), std::move(basis));
  return {rep, std::move(incl)};
}

template <class F>
struct Cokernel {
  RepPtr<F> rep;
  Morphism<F> proj;  // target -> rep
};

template <class F>
Cokernel<F> cokernel(const Morphism<F>& f) {
  const Quiver& q = f.target().quiver();
  const F& field = f.target().field();
  std::vector<Matrix<F>> proj;
  DimVector dims;
  for (int v = 0; v < q.vertex_count(); ++v) {
    proj.push_back(cokernel_projection(f.vertex_map(v)));
    dims.push_back(proj.back().rows());
  }
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    // Induced arrow c with c * proj_s = proj_t * N_a; unique since proj_s
    // has full row rank, well defined since ker proj_s = im f_s is stable.
    auto c = solve_left(proj[a.source], proj[a.target] * f.target().arrow_matrix(k));
    if (!c) throw Error("cokernel projection failed to factor arrow action");
    arr.push_back(std::move(*c));
  }
  RepPtr<F> rep = share(Representation<F>(f.target().quiver_ptr(), field, std::move(dims), std::move(arr)));
  Morphism<F> p(f.target_ptr(), rep, std::move(proj));
  return {rep, std::move(p)};
}

template <class F>
struct Image {
  RepPtr<F> rep;
  Morphism<F> incl;  // rep -> target
  Morphism<F> proj;  // source -> rep, with incl o proj = f
};

template <class F>
Image<F> image(const Morphism<F>& f) {
  const Quiver& q = f.source().quiver();
  const F& field = f.source().field();
  std::vector<Matrix<F>> basis;
  DimVector dims;
  for (int v = 0; v < q.vertex_count(); ++v) {
    basis.push_back(image_basis(f.vertex_map(v)));
    dims.push_back(basis.back().cols());
  }
  std::vector<Matrix<F>> arr;
  std::vector<Matrix<F>> proj;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    auto coords = solve(basis[a.target], f.target().arrow_matrix(k) * basis[a.source]);
    if (!coords) throw Error("image basis failed to absorb arrow action");
    arr.push_back(std::move(*coords));
  }
  for (int v = 0; v < q.vertex_count(); ++v) {
    auto coords = solve(basis[v], f.vertex_map(v));
    if (!coords) throw Error("image basis failed to express the morphism");
    proj.push_back(std::move(*coords));
  }
  RepPtr<F> rep = share(Representation<F>(f.source().quiver_ptr(), field, std::move(dims), std::move(arr)));
  Morphism<F> incl(rep, f.target_ptr(), std::move(basis));
  Morphism<F> pr(f.source_ptr(), rep, std::move(proj));
  return {rep, std::move(incl), std::move(pr)};
}

// Subrepresentation spanned by the given vertexwise columns, which must be
// arrow-stable; the spans are canonicalized to a basis first.
template <class F>
Kernel<F> subrep_from_spans(const RepPtr<F>& m, const std::vector<Matrix<F>>& spans) {
  const Quiver& q = m->quiver();
  std::vector<Matrix<F>> basis;
  DimVector dims;
  for (int v = 0; v < q.vertex_count(); ++v) {
    basis.push_back(image_basis(spans[v]));
    dims.push_back(basis.back().cols());
  }
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    auto coords = solve(basis[a.target], m->arrow_matrix(k) * basis[a.source]);
    if (!coords) throw NotAMorphism("spans are not arrow-stable");
    arr.push_back(std::move(*coords));
  }
  RepPtr<F> rep = share(Representation<F>(m->quiver_ptr(), m->field(), std::move(dims), std::move(arr)));
  Morphism<F> incl(rep, m, std::move(basis));
  return {rep, std::move(incl)};
}

template <class F>
struct DirectSum {
  RepPtr<F> rep;
  std::vector<Morphism<F>> injections;
  std::vector<Morphism<F>> projections;
};

template <class F>
DirectSum<F> direct_sum(const std::vector<RepPtr<F>>& parts) {
  if (parts.empty()) throw InvalidShape("direct sum of zero summands needs a quiver");
  const QuiverPtr& qp = parts.front()->quiver_ptr();
  const Quiver& q = *qp;
  const F& field = parts.front()->field();
  for (const auto& p : parts) detail::require_parallel(*parts.front(), *p);

  DimVector dims(q.vertex_count(), 0);
  std::vector<int> offset_at(parts.size() * q.vertex_count(), 0);
  for (size_t s = 0; s < parts.size(); ++s)
    for (int v = 0; v < q.vertex_count(); ++v) {
      offset_at[s * q.vertex_count() + v] = dims[v];
      dims[v] += parts[s]->dim(v);
    }

  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    Matrix<F> blk(field, dims[a.target], dims[a.source]);
    for (size_t s = 0; s < parts.size(); ++s) {
      const Matrix<F>& m = parts[s]->arrow_matrix(k);
      int ro = offset_at[s * q.vertex_count() + a.target];
      int co = offset_at[s * q.vertex_count() + a.source];
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) blk.at(ro + r, co + c) = m.at(r, c);
    }
    arr.push_back(std::move(blk));
  }
  RepPtr<F> rep = share(Representation<F>(qp, field, dims, std::move(arr)));

  DirectSum<F> out{rep, {}, {}};
  for (size_t s = 0; s < parts.size(); ++s) {
    std::vector<Matrix<F>> inj, prj;
    for (int v = 0; v < q.vertex_count(); ++v) {
      int off = offset_at[s * q.vertex_count() + v];
      Matrix<F> in(field, dims[v], parts[s]->dim(v));
      Matrix<F> pr(field, parts[s]->dim(v), dims[v]);
      for (int c = 0; c < parts[s]->dim(v); ++c) {
        in.at(off + c, c) = field.one();
        pr.at(c, off + c) = field.one();
      }
      inj.push_back(std::move(in));
      prj.push_back(std::move(pr));
    }
    out.injections.emplace_back(parts[s], rep, std::move(inj));
    out.projections.emplace_back(rep, parts[s], std::move(prj));
  }
  return out;
}

// Short exact sequence 0 -> A -> B -> C -> 0; exactness is verified at
// construction and the type is immutable afterwards.
template <class F>
class ShortExactSequence {
 public:
  ShortExactSequence(Morphism<F> incl, Morphism<F> proj)
      : incl_(std::move(incl)), proj_(std::move(proj)) {
    if (incl_.target() != proj_.source()) throw InvalidChain("middle terms differ");
    if (!incl_.is_injective()) throw InvalidChain("left map is not injective");
    if (!proj_.is_surjective()) throw InvalidChain("right map is not surjective");
    if (!compose(proj_, incl_).is_zero()) throw InvalidChain("composite is nonzero");
    const Quiver& q = incl_.source().quiver();
    for (int v = 0; v < q.vertex_count(); ++v)
      if (incl_.source().dim(v) + proj_.target().dim(v) != incl_.target().dim(v))
        throw InvalidChain("dimensions are not additive");
  }

  const Representation<F>& sub() const { return incl_.source(); }
  const Representation<F>& mid() const { return incl_.target(); }
  const Representation<F>& quot() const { return proj_.target(); }
  const Morphism<F>& incl() const { return incl_; }
  const Morphism<F>& proj() const { return proj_; }

 private:
  Morphism<F> incl_;
  Morphism<F> proj_;
};

// Product of arrow matrices along a path, mapping the fiber at p.from to
// the fiber at p.to; the trivial path gives the identity.
template <class F>
Matrix<F> path_matrix(const Representation<F>& m, const Path& p) {
  Matrix<F> acc = Matrix<F>::identity(m.field(), m.dim(p.from));
  for (int k : p.arrows) acc = m.arrow_matrix(k) * acc;
  return acc;
}

// Standard modules. Bases are indexed by paths in the canonical order, so
// every construction here is deterministic.

template <class F>
Representation<F> simple(const QuiverPtr& q, const F& field, int v) {
  DimVector dims(q->vertex_count(), 0);
  dims[v] = 1;
  std::vector<Matrix<F>> arr;
  for (const Arrow& a : q->arrows()) arr.emplace_back(field, dims[a.target], dims[a.source]);
  return Representation<F>(q, field, std::move(dims), std::move(arr));
}

namespace detail {

// Per-vertex slices of a canonical path list, preserving the global order.
inline std::vector<std::vector<Path>> paths_by_vertex(const Quiver& q, const std::vector<Path>& ps,
                                                      bool by_source) {
  std::vector<std::vector<Path>> out(q.vertex_count());
  for (const Path& p : ps) out[by_source ? p.from : p.to].push_back(p);
  return out;
}

inline int path_index(const Quiver& q, const std::vector<Path>& list, const Path& p) {
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i].from == p.from && list[i].arrows == p.arrows) return static_cast<int>(i);
  (void)q;
  return -1;
}

}  // namespace detail

// Projective at v: basis at vertex w is the set of paths v ~> w; an arrow a
// appends itself to a path.
template <class F>
Representation<F> projective(const QuiverPtr& q, const F& field, int v) {
  auto slices = detail::paths_by_vertex(*q, paths_from(*q, v), false);
  DimVector dims;
  for (const auto& s : slices) dims.push_back(static_cast<int>(s.size()));
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q->arrow_count(); ++k) {
    const Arrow& a = q->arrow(k);
    Matrix<F> m(field, dims[a.target], dims[a.source]);
    for (size_t c = 0; c < slices[a.source].size(); ++c) {
      Path e = slices[a.source][c];
      e.arrows.push_back(k);
      e.to = a.target;
      int r = detail::path_index(*q, slices[a.target], e);
      if (r < 0) throw Error("path extension missing from projective basis");
      m.at(r, static_cast<int>(c)) = field.one();
    }
    arr.push_back(std::move(m));
  }
  return Representation<F>(q, field, std::move(dims), std::move(arr));
}

// The morphism P(i) -> M determined by a vector in the fiber over i; on the
// path basis it sends p to the path action applied to that vector. Every
// morphism out of P(i) arises this way, for a unique vector.
template <class F>
Morphism<F> morphism_from_projective(const RepPtr<F>& p_i, int i, const RepPtr<F>& m,
                                     const Matrix<F>& vec) {
  const Quiver& q = m->quiver();
  if (vec.rows() != m->dim(i) || vec.cols() != 1) throw InvalidShape("fiber vector has wrong shape");
  auto slices = detail::paths_by_vertex(q, paths_from(q, i), false);
  std::vector<Matrix<F>> maps;
  for (int w = 0; w < q.vertex_count(); ++w) {
    Matrix<F> mm(m->field(), m->dim(w), static_cast<int>(slices[w].size()));
    for (size_t c = 0; c < slices[w].size(); ++c) {
      Matrix<F> col = path_matrix(*m, slices[w][c]) * vec;
      for (int r = 0; r < m->dim(w); ++r) mm.at(r, static_cast<int>(c)) = col.at(r, 0);
    }
    maps.push_back(std::move(mm));
  }
  return Morphism<F>(p_i, m, std::move(maps));
}

// Injective at v: basis at vertex w is the set of paths w ~> v; an arrow a
// strips itself from the front of a path that starts with it.
template <class F>
Representation<F> injective(const QuiverPtr& q, const F& field, int v) {
  auto slices = detail::paths_by_vertex(*q, paths_to(*q, v), true);
  DimVector dims;
  for (const auto& s : slices) dims.push_back(static_cast<int>(s.size()));
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q->arrow_count(); ++k) {
    const Arrow& a = q->arrow(k);
    Matrix<F> m(field, dims[a.target], dims[a.source]);
    for (size_t c = 0; c < slices[a.source].size(); ++c) {
      const Path& p = slices[a.source][c];
      if (p.length() == 0 || p.arrows.front() != k) continue;
      Path tail{a.target, p.to, {p.arrows.begin() + 1, p.arrows.end()}};
      int r = detail::path_index(*q, slices[a.target], tail);
      if (r < 0) throw Error("path tail missing from injective basis");
      m.at(r, static_cast<int>(c)) = field.one();
    }
    arr.push_back(std::move(m));
  }
  return Representation<F>(q, field, std::move(dims), std::move(arr));
}

}  // namespace extorth

#endif
