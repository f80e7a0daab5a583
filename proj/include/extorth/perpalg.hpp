#ifndef EXTORTH_PERPALG_HPP
#define EXTORTH_PERPALG_HPP

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "extorth/hom.hpp"
#include "extorth/iso.hpp"
#include "extorth/orthopair.hpp"

namespace extorth {

// The right perpendicular category of an exceptional generator X, packaged as
// a finite-dimensional algebra B = End(L) where L is the direct sum of the
// reflections of the indecomposable projectives. Everything the construction
// promises is checked at build time: B acts like the path algebra of the
// perpendicular category in the sense that L itself, viewed through the
// column spaces Hom(L_i, L), is a representation isomorphic to L.
template <class F>
class PerpAlgebra {
 public:
  explicit PerpAlgebra(const OrthoPair<F>& pair)
      : x_(pair.generator()), qp_(pair.quiver_ptr()), field_(pair.field()) {
    const Quiver& q = *qp_;
    for (int v = 0; v < q.vertex_count(); ++v) {
      projs_.push_back(share(projective(qp_, field_, v)));
      Reflection<F> r = reflect(pair, projs_[v]);
      l_comp_.push_back(r.target);
      units_.push_back(std::move(r.unit));
    }
    l_sum_ = direct_sum(l_comp_);

    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      Morphism<F> rho = detail::path_prefix(qp_, projs_[a.target], projs_[a.source], k);
      l_rho_.push_back(apply_to_reflection(rho, a.target, a.source));
    }

    end_ = std::make_unique<HomSpace<F>>(hom_space(l_sum_.rep, l_sum_.rep));
    if (end_->dimension() != l_sum_.rep->total_dim())
      throw VerificationFailed("dim End(L) = " + std::to_string(end_->dimension()) +
                               " differs from dim L = " + std::to_string(l_sum_.rep->total_dim()));

    const int b = end_->dimension();
    CoordSolver<F> ec(*end_);
    for (int i = 0; i < b; ++i) {
      Matrix<F> table(field_, b, b);
      for (int j = 0; j < b; ++j) {
        Matrix<F> c = ec.coords(compose(end_->basis[i], end_->basis[j]));
        for (int r = 0; r < b; ++r) table.at(r, j) = c.at(r, 0);
      }
      mult_.push_back(std::move(table));
    }
    one_ = std::make_unique<Matrix<F>>(ec.coords(identity_morphism(l_sum_.rep)));
    check_algebra_axioms();

    for (int v = 0; v < q.vertex_count(); ++v)
      f_vertex_.push_back(ec.coords(compose(l_sum_.injections[v], l_sum_.projections[v])));
    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      f_arrow_.push_back(ec.coords(
          compose(l_sum_.injections[a.source], compose(l_rho_[k], l_sum_.projections[a.target]))));
    }
    check_path_algebra_map();
    check_module_dictionary();
  }

  const RepPtr<F>& generator() const { return x_; }
  const QuiverPtr& quiver_ptr() const { return qp_; }
  const F& field() const { return field_; }

  // L and its summands L_i, together with the units P(i) -> L_i
  const RepPtr<F>& l() const { return l_sum_.rep; }
  const RepPtr<F>& l_component(int i) const { return l_comp_.at(i); }
  const Morphism<F>& unit(int i) const { return units_.at(i); }
  const Morphism<F>& l_injection(int i) const { return l_sum_.injections.at(i); }
  const Morphism<F>& l_projection(int i) const { return l_sum_.projections.at(i); }
  const RepPtr<F>& projective_at(int i) const { return projs_.at(i); }

  int dim() const { return end_->dimension(); }
  const std::vector<Morphism<F>>& basis() const { return end_->basis; }
  const HomSpace<F>& end_space() const { return *end_; }

  // Structure constants: column j of mult_table(i) holds the coordinates of
  // basis[i] o basis[j], so multiply() is bilinear in the coordinate vectors.
  const Matrix<F>& mult_table(int i) const { return mult_.at(i); }
  const Matrix<F>& one() const { return *one_; }

  Matrix<F> multiply(const Matrix<F>& x, const Matrix<F>& y) const {
    if (x.rows() != dim() || x.cols() != 1 || y.rows() != dim() || y.cols() != 1)
      throw InvalidShape("algebra elements are coordinate columns of length dim()");
    Matrix<F> out(field_, dim(), 1);
    for (int i = 0; i < dim(); ++i) {
      if (field_.is_zero(x.at(i, 0))) continue;
      out = out + (mult_.at(i) * y).scaled(x.at(i, 0));
    }
    return out;
  }

  // The algebra map from the path algebra of the quiver: vertex idempotents
  // and arrow images, in B-coordinates.
  const Matrix<F>& path_vertex(int i) const { return f_vertex_.at(i); }
  const Matrix<F>& path_arrow(int k) const { return f_arrow_.at(k); }

  // L applied to the path-prefix map rho_a : P(t(a)) -> P(s(a))
  const Morphism<F>& rho_image(int k) const { return l_rho_.at(k); }

  // Functoriality on morphisms between projectives: the unique psi with
  // psi o unit(i) = unit(j) o phi. Uniqueness is part of the reflection
  // property, so a non-unique or unsolvable system is a genuine failure.
  Morphism<F> apply_to_reflection(const Morphism<F>& phi, int i, int j) const {
    if (phi.source_ptr() != projs_.at(i) && !(phi.source() == *projs_.at(i)))
      throw InvalidShape("apply_to_reflection: source is not P(i)");
    if (phi.target_ptr() != projs_.at(j) && !(phi.target() == *projs_.at(j)))
      throw InvalidShape("apply_to_reflection: target is not P(j)");
    HomSpace<F> hs = hom_space(l_comp_.at(i), l_comp_.at(j));
    Morphism<F> rhs = compose(units_.at(j), phi);
    std::vector<Matrix<F>> rhs_mats = rhs.vertex_maps();
    std::vector<int> off = detail::block_offsets(rhs_mats);
    Matrix<F> target_flat(field_, off.back(), 1);
    for (int v = 0; v < qp_->vertex_count(); ++v)
      detail::flatten_into(rhs_mats[v], target_flat, off[v], 0);
    Matrix<F> sys(field_, off.back(), hs.dimension());
    for (int b = 0; b < hs.dimension(); ++b) {
      Morphism<F> cand = compose(hs.basis[b], units_.at(i));
      for (int v = 0; v < qp_->vertex_count(); ++v)
        detail::flatten_into(cand.vertex_map(v), sys, off[v], b);
    }
    std::optional<Matrix<F>> sol = solve(sys, target_flat);
    if (!sol)
      throw VerificationFailed("reflection is not functorial: no lift through the unit");
    if (kernel_basis(sys).cols() != 0)
      throw VerificationFailed("reflection lift is not unique");
    Morphism<F> out = zero_morphism(l_comp_.at(i), l_comp_.at(j));
    for (int b = 0; b < hs.dimension(); ++b) {
      if (field_.is_zero(sol->at(b, 0))) continue;
      out = morphism_add(out, morphism_scale(sol->at(b, 0), hs.basis[b]));
    }
    return out;
  }

 private:
  void check_algebra_axioms() const {
    const int b = dim();
    for (int i = 0; i < b; ++i) {
      Matrix<F> e(field_, b, 1);
      e.at(i, 0) = field_.one();
      if (multiply(*one_, e) != e || multiply(e, *one_) != e)
        throw VerificationFailed("End(L) identity fails on a basis element");
    }
    // associativity on basis triples, written on table columns:
    // (e_i e_j) e_k = sum_r (e_i e_j)_r e_r e_k against e_i (e_j e_k).
    // The table holds coordinates of actual compositions and every coordinate
    // column is re-verified against the basis when extracted, so this guards
    // against table corruption rather than establishing associativity; the
    // full cube is checked only while it stays cheap, larger algebras get a
    // fixed deterministic sample of triples.
    auto check_triple = [&](int i, int j, int k) {
      Matrix<F> lhs(field_, b, 1), rhs(field_, b, 1);
      for (int r = 0; r < b; ++r) {
        const auto& cij = mult_[i].at(r, j);
        if (!field_.is_zero(cij))
          for (int s = 0; s < b; ++s)
            lhs.at(s, 0) = field_.add(lhs.at(s, 0), field_.mul(cij, mult_[r].at(s, k)));
        const auto& cjk = mult_[j].at(r, k);
        if (!field_.is_zero(cjk))
          for (int s = 0; s < b; ++s)
            rhs.at(s, 0) = field_.add(rhs.at(s, 0), field_.mul(cjk, mult_[i].at(s, r)));
      }
      if (!(lhs == rhs))
        throw VerificationFailed("End(L) multiplication is not associative");
    };
    if (b <= 12) {
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j)
          for (int k = 0; k < b; ++k) check_triple(i, j, k);
    } else {
      std::uint64_t state = 0x243f6a8885a308d3ull;
      for (int t = 0; t < 2000; ++t) {
        auto next = [&] {
          state = state * 6364136223846793005ull + 1442695040888963407ull;
          return static_cast<int>((state >> 33) % static_cast<std::uint64_t>(b));
        };
        int i = next(), j = next(), k = next();
        check_triple(i, j, k);
      }
    }
  }

  void check_path_algebra_map() const {
    const Quiver& q = *qp_;
    Matrix<F> sum(field_, dim(), 1);
    for (int v = 0; v < q.vertex_count(); ++v) {
      const Matrix<F>& e = f_vertex_[v];
      if (multiply(e, e) != e)
        throw VerificationFailed("vertex image in End(L) is not idempotent");
      sum = sum + e;
      for (int w = 0; w < v; ++w)
        if (!multiply(e, f_vertex_[w]).is_zero())
          throw VerificationFailed("vertex images in End(L) are not orthogonal");
    }
    if (sum != *one_)
      throw VerificationFailed("vertex images do not sum to the identity of End(L)");
    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      Matrix<F> img = f_arrow_[k];
      if (multiply(f_vertex_[a.source], multiply(img, f_vertex_[a.target])) != img)
        throw VerificationFailed("arrow image in End(L) violates its vertex sandwich");
    }
  }

  // L itself must be the regular module in disguise: the spaces Hom(L_i, L)
  // with the arrow action g -> g o L(rho_a) assemble into a representation
  // isomorphic to L, vertexwise via evaluation at the unit of P(i).
  void check_module_dictionary() const {
    const Quiver& q = *qp_;
    std::vector<HomSpace<F>> cols;
    DimVector dims;
    for (int i = 0; i < q.vertex_count(); ++i) {
      cols.push_back(hom_space(l_comp_[i], l_sum_.rep));
      dims.push_back(cols.back().dimension());
    }
    std::vector<CoordSolver<F>> solvers;
    for (int i = 0; i < q.vertex_count(); ++i) solvers.emplace_back(cols[i]);
    std::vector<Matrix<F>> arrows;
    for (int k = 0; k < q.arrow_count(); ++k) {
      const Arrow& a = q.arrow(k);
      Matrix<F> mat(field_, dims[a.target], dims[a.source]);
      for (int c = 0; c < dims[a.source]; ++c) {
        Matrix<F> co = solvers[a.target].coords(compose(cols[a.source].basis[c], l_rho_[k]));
        for (int r = 0; r < dims[a.target]; ++r) mat.at(r, c) = co.at(r, 0);
      }
      arrows.push_back(std::move(mat));
    }
    RepPtr<F> breg = share(Representation<F>(qp_, field_, dims, arrows));

    std::vector<Matrix<F>> theta;
    for (int i = 0; i < q.vertex_count(); ++i) {
      Matrix<F> unit_vec(field_, projs_[i]->dim(i), 1);
      unit_vec.at(0, 0) = field_.one();  // the trivial path spans slot 0
      Matrix<F> base_pt = units_[i].vertex_map(i) * unit_vec;
      Matrix<F> mat(field_, l_sum_.rep->dim(i), dims[i]);
      for (int c = 0; c < dims[i]; ++c) {
        Matrix<F> val = cols[i].basis[c].vertex_map(i) * base_pt;
        for (int r = 0; r < mat.rows(); ++r) mat.at(r, c) = val.at(r, 0);
      }
      theta.push_back(std::move(mat));
    }
    Morphism<F> iso(breg, l_sum_.rep, theta);
    if (!iso.is_invertible())
      throw VerificationFailed("Hom(L_i, L) does not reassemble into L");
  }

  RepPtr<F> x_;
  QuiverPtr qp_;
  F field_;
  std::vector<RepPtr<F>> projs_;
  std::vector<RepPtr<F>> l_comp_;
  std::vector<Morphism<F>> units_;
  DirectSum<F> l_sum_;
  std::vector<Morphism<F>> l_rho_;
  std::unique_ptr<HomSpace<F>> end_;
  std::vector<Matrix<F>> mult_;
  std::unique_ptr<Matrix<F>> one_;
  std::vector<Matrix<F>> f_vertex_;
  std::vector<Matrix<F>> f_arrow_;
};

template <class F>
const PerpAlgebra<F>& OrthoPair<F>::perp() const {
  std::call_once(slot_->once, [this] {
    slot_->value = std::make_shared<const PerpAlgebra<F>>(*this);
  });
  return *slot_->value;
}

// - M (x) B and Tor_1(M, B), computed from the standard presentation of M by
// applying the reflection functor to each projective summand. The maps u0, u1
// are the per-summand units; sigma_b is sigma with every block pushed through
// the reflection, assembled from the same layout as sigma itself.
template <class F>
struct TensorWithB {
  ProjectivePresentation<F> pres;
  RepPtr<F> p0_b;
  RepPtr<F> p1_b;
  Morphism<F> sigma_b;  // p1_b -> p0_b
  Morphism<F> u0;       // p0 -> p0_b
  Morphism<F> u1;       // p1 -> p1_b
  RepPtr<F> tor1;
  Morphism<F> tor1_incl;  // tor1 -> p1_b
  RepPtr<F> tensor;
  Morphism<F> coker_proj;  // p0_b -> tensor
  Morphism<F> unit;        // module -> tensor
};

namespace detail {

// Shared blockwise push of sigma through a functor given on projectives: the
// vertex components comp[v] replace P(v), the rho[k] replace the path-prefix
// maps, scalar blocks stay scalars. Used for - (x) B and for the restricted
// path models of the idempotent construction.
template <class F>
Morphism<F> pushed_sigma(const Quiver& q, const F& field, const ProjectivePresentation<F>& pres,
                         const std::vector<RepPtr<F>>& comp, const std::vector<Morphism<F>>& rho,
                         const DirectSum<F>& d0b, const DirectSum<F>& d1b) {
  const RepPtr<F>& m = pres.module;
  auto p0_slot = [&](int v, int l) {
    for (std::size_t s = 0; s < pres.p0_vertex.size(); ++s)
      if (pres.p0_vertex[s] == v && pres.p0_copy[s] == l) return static_cast<int>(s);
    throw Error("presentation layout is missing a degree-zero slot");
  };

  // blocks land at slot offsets; the component sums concatenate in slot order
  auto offsets = [&](const std::vector<int>& slot_vertices) {
    std::vector<std::vector<int>> off(slot_vertices.size(),
                                      std::vector<int>(q.vertex_count(), 0));
    std::vector<int> run(q.vertex_count(), 0);
    for (std::size_t s = 0; s < slot_vertices.size(); ++s)
      for (int v = 0; v < q.vertex_count(); ++v) {
        off[s][v] = run[v];
        run[v] += comp[slot_vertices[s]]->dim(v);
      }
    return off;
  };
  std::vector<int> p1_vertices;
  for (int k : pres.p1_arrow) p1_vertices.push_back(q.arrow(k).target);
  std::vector<std::vector<int>> off0 = offsets(pres.p0_vertex);
  std::vector<std::vector<int>> off1 = offsets(p1_vertices);

  std::vector<Matrix<F>> mats;
  for (int v = 0; v < q.vertex_count(); ++v)
    mats.emplace_back(field, d0b.rep->dim(v), d1b.rep->dim(v));

  // block regions are disjoint: one column stripe per degree-one slot, and
  // a.source != a.target on an acyclic quiver
  for (std::size_t s1 = 0; s1 < pres.p1_arrow.size(); ++s1) {
    int k = pres.p1_arrow[s1];
    const Arrow& a = q.arrow(k);
    int l = pres.p1_copy[s1];
    int s0 = p0_slot(a.source, l);
    for (int v = 0; v < q.vertex_count(); ++v) {
      const Matrix<F>& blk = rho[k].vertex_map(v);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c)
          mats[v].at(off0[s0][v] + r, off1[s1][v] + c) = blk.at(r, c);
    }
    for (int r = 0; r < m->dim(a.target); ++r) {
      const auto& coef = m->arrow_matrix(k).at(r, l);
      if (field.is_zero(coef)) continue;
      int st = p0_slot(a.target, r);
      auto neg = field.neg(coef);
      for (int v = 0; v < q.vertex_count(); ++v)
        for (int i = 0; i < comp[a.target]->dim(v); ++i)
          mats[v].at(off0[st][v] + i, off1[s1][v] + i) = neg;
    }
  }
  return Morphism<F>(d1b.rep, d0b.rep, std::move(mats));
}

template <class F>
DirectSum<F> component_sum(const QuiverPtr& qp, const F& field,
                           const std::vector<RepPtr<F>>& comp, const std::vector<int>& vertices) {
  std::vector<RepPtr<F>> parts;
  for (int v : vertices) parts.push_back(comp[v]);
  if (parts.empty()) {
    RepPtr<F> z = share(zero_rep(qp, field));
    return DirectSum<F>{z, {}, {}};
  }
  return direct_sum(parts);
}

// Per-summand map (+) units[v] : (+) P(v) -> (+) comp[v] over a layout.
// Block diagonal in the shared slot order of the two sums.
template <class F>
Morphism<F> summandwise_unit(const std::vector<Morphism<F>>& units, const RepPtr<F>& source,
                             const DirectSum<F>& source_sum, const DirectSum<F>& target_sum,
                             const std::vector<int>& vertices) {
  (void)source_sum;
  const F& field = source->field();
  int nv = source->quiver().vertex_count();
  std::vector<Matrix<F>> mats;
  for (int v = 0; v < nv; ++v)
    mats.emplace_back(field, target_sum.rep->dim(v), source->dim(v));
  std::vector<int> roff(nv, 0), coff(nv, 0);
  for (std::size_t s = 0; s < vertices.size(); ++s)
    for (int v = 0; v < nv; ++v) {
      const Matrix<F>& blk = units[vertices[s]].vertex_map(v);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c) mats[v].at(roff[v] + r, coff[v] + c) = blk.at(r, c);
      roff[v] += blk.rows();
      coff[v] += blk.cols();
    }
  return Morphism<F>(source, target_sum.rep, std::move(mats));
}

template <class F>
std::vector<RepPtr<F>> perp_components(const PerpAlgebra<F>& pa) {
  std::vector<RepPtr<F>> comp;
  for (int v = 0; v < pa.quiver_ptr()->vertex_count(); ++v) comp.push_back(pa.l_component(v));
  return comp;
}

template <class F>
std::vector<Morphism<F>> perp_rhos(const PerpAlgebra<F>& pa) {
  std::vector<Morphism<F>> rho;
  for (int k = 0; k < pa.quiver_ptr()->arrow_count(); ++k) rho.push_back(pa.rho_image(k));
  return rho;
}

template <class F>
std::vector<Morphism<F>> perp_units(const PerpAlgebra<F>& pa) {
  std::vector<Morphism<F>> units;
  for (int v = 0; v < pa.quiver_ptr()->vertex_count(); ++v) units.push_back(pa.unit(v));
  return units;
}

}  // namespace detail

template <class F>
TensorWithB<F> tensor_with_B(const PerpAlgebra<F>& pa, const RepPtr<F>& m,
                             unsigned permute_seed = 0) {
  if (!(m->quiver() == *pa.quiver_ptr()) || !(m->field() == pa.field()))
    throw FieldMismatch("module lives over a different quiver or field than the algebra");
  ProjectivePresentation<F> pres = projective_presentation(m, permute_seed);
  const Quiver& q = *pa.quiver_ptr();

  std::vector<int> p0_vertices = pres.p0_vertex;
  std::vector<int> p1_vertices;
  for (int k : pres.p1_arrow) p1_vertices.push_back(q.arrow(k).target);

  // rebuild the plain sums to get slotwise injections matching the layout
  std::vector<RepPtr<F>> p0_parts, p1_parts;
  for (int v : p0_vertices) p0_parts.push_back(pa.projective_at(v));
  for (int v : p1_vertices) p1_parts.push_back(pa.projective_at(v));
  auto sum_or_zero = [&](const std::vector<RepPtr<F>>& parts) {
    if (parts.empty()) {
      RepPtr<F> z = share(zero_rep(pa.quiver_ptr(), pa.field()));
      return DirectSum<F>{z, {}, {}};
    }
    return direct_sum(parts);
  };
  DirectSum<F> d0 = sum_or_zero(p0_parts);
  DirectSum<F> d1 = sum_or_zero(p1_parts);

  std::vector<RepPtr<F>> comp = detail::perp_components(pa);
  std::vector<Morphism<F>> rho = detail::perp_rhos(pa);
  std::vector<Morphism<F>> units = detail::perp_units(pa);
  DirectSum<F> d0b = detail::component_sum(pa.quiver_ptr(), pa.field(), comp, p0_vertices);
  DirectSum<F> d1b = detail::component_sum(pa.quiver_ptr(), pa.field(), comp, p1_vertices);
  Morphism<F> sigma_b = detail::pushed_sigma(q, pa.field(), pres, comp, rho, d0b, d1b);

  Morphism<F> u0 = detail::summandwise_unit(units, pres.p0, d0, d0b, p0_vertices);
  Morphism<F> u1 = detail::summandwise_unit(units, pres.p1, d1, d1b, p1_vertices);
  if (!(compose(sigma_b, u1) == compose(u0, pres.sigma)))
    throw VerificationFailed("units do not commute with the presentation differential");

  Kernel<F> tor = kernel(sigma_b);
  Cokernel<F> tens = cokernel(sigma_b);

  // unit M -> M (x) B: lift along pi (any right inverse gives the same
  // composite because the presentation image dies in the cokernel)
  std::vector<Matrix<F>> unit_maps;
  for (int v = 0; v < q.vertex_count(); ++v) {
    const Matrix<F>& piv = pres.pi.vertex_map(v);
    Matrix<F> idm = Matrix<F>::identity(pa.field(), piv.rows());
    std::optional<Matrix<F>> r = solve(piv, idm);
    if (!r) throw Error("presentation cover is not surjective");
    unit_maps.push_back(tens.proj.vertex_map(v) * (u0.vertex_map(v) * *r));
  }
  Morphism<F> unit(m, tens.rep, unit_maps);

  return TensorWithB<F>{std::move(pres), d0b.rep,          d1b.rep,    std::move(sigma_b),
                        std::move(u0),   std::move(u1),    tor.rep,    std::move(tor.incl),
                        tens.rep,        std::move(tens.proj), std::move(unit)};
}

// Hom_A(B, M) and Ext^1_A(B, M) as representations of the original quiver:
// vertex i carries Hom(L_i, M) resp. Ext^1(L_i, M), arrows act by composing
// with (pulling back along) L(rho_a). Evaluation at the units gives the
// counit Hom(B, M) -> M.
template <class F>
struct HomFromB {
  RepPtr<F> hom;
  Morphism<F> ev;  // hom -> module
  RepPtr<F> ext1;
};

template <class F>
HomFromB<F> hom_from_B(const PerpAlgebra<F>& pa, const RepPtr<F>& m) {
  if (!(m->quiver() == *pa.quiver_ptr()) || !(m->field() == pa.field()))
    throw FieldMismatch("module lives over a different quiver or field than the algebra");
  const Quiver& q = *pa.quiver_ptr();
  const F& field = pa.field();

  std::vector<HomSpace<F>> hs;
  DimVector hdims;
  for (int i = 0; i < q.vertex_count(); ++i) {
    hs.push_back(hom_space(pa.l_component(i), m));
    hdims.push_back(hs.back().dimension());
  }
  std::vector<CoordSolver<F>> hsolvers;
  for (int i = 0; i < q.vertex_count(); ++i) hsolvers.emplace_back(hs[i]);
  std::vector<Matrix<F>> harrows;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    Matrix<F> mat(field, hdims[a.target], hdims[a.source]);
    for (int c = 0; c < hdims[a.source]; ++c) {
      Matrix<F> co = hsolvers[a.target].coords(compose(hs[a.source].basis[c], pa.rho_image(k)));
      for (int r = 0; r < mat.rows(); ++r) mat.at(r, c) = co.at(r, 0);
    }
    harrows.push_back(std::move(mat));
  }
  RepPtr<F> hom_rep = share(Representation<F>(pa.quiver_ptr(), field, hdims, harrows));

  std::vector<Matrix<F>> ev_maps;
  for (int i = 0; i < q.vertex_count(); ++i) {
    Matrix<F> unit_vec(field, pa.projective_at(i)->dim(i), 1);
    unit_vec.at(0, 0) = field.one();
    Matrix<F> base_pt = pa.unit(i).vertex_map(i) * unit_vec;
    Matrix<F> mat(field, m->dim(i), hdims[i]);
    for (int c = 0; c < hdims[i]; ++c) {
      Matrix<F> val = hs[i].basis[c].vertex_map(i) * base_pt;
      for (int r = 0; r < mat.rows(); ++r) mat.at(r, c) = val.at(r, 0);
    }
    ev_maps.push_back(std::move(mat));
  }
  Morphism<F> ev(hom_rep, m, ev_maps);

  std::vector<ExtSpace<F>> es;
  DimVector edims;
  for (int i = 0; i < q.vertex_count(); ++i) {
    es.push_back(ext_space(pa.l_component(i), m));
    edims.push_back(es.back().dimension());
  }
  std::vector<Matrix<F>> earrows;
  for (int k = 0; k < q.arrow_count(); ++k) {
    const Arrow& a = q.arrow(k);
    Matrix<F> mat(field, edims[a.target], edims[a.source]);
    for (int c = 0; c < edims[a.source]; ++c) {
      // pull the cocycle back along L(rho_a): precompose every arrow matrix
      // with the source-vertex map of L(rho_a)
      const Cocycle<F>& z = es[a.source].basis[c];
      std::vector<Matrix<F>> pulled;
      for (int b = 0; b < q.arrow_count(); ++b) {
        const Arrow& ab = q.arrow(b);
        pulled.push_back(z.mats[b] * pa.rho_image(k).vertex_map(ab.source));
      }
      Cocycle<F> zk{pa.l_component(a.target), m, std::move(pulled)};
      Matrix<F> co = es[a.target].coords(zk);
      for (int r = 0; r < mat.rows(); ++r) mat.at(r, c) = co.at(r, 0);
    }
    earrows.push_back(std::move(mat));
  }
  RepPtr<F> ext_rep = share(Representation<F>(pa.quiver_ptr(), field, edims, earrows));

  return HomFromB<F>{hom_rep, std::move(ev), ext_rep};
}

// X-membership: the module dies under - (x) B in both degrees. The mirror
// test membership_Y lives next to the pair itself.
template <class F>
bool membership_X(const OrthoPair<F>& pair, const RepPtr<F>& m) {
  TensorWithB<F> t = tensor_with_B(pair.perp(), m);
  return t.tensor->is_zero() && t.tor1->is_zero();
}

// A ring map with flavour of a localization: B must restrict scalars fully
// faithfully, i.e. tensoring B itself changes nothing and Tor_1 vanishes.
template <class F>
struct HomologicalEpiReport {
  int dim_b = 0;
  int tensor_dim = 0;
  bool tor1_zero = false;
  bool unit_invertible = false;
};

template <class F>
HomologicalEpiReport<F> verify_homological_epi(const PerpAlgebra<F>& pa) {
  TensorWithB<F> t = tensor_with_B(pa, pa.l());
  HomologicalEpiReport<F> rpt;
  rpt.dim_b = pa.dim();
  rpt.tensor_dim = t.tensor->total_dim();
  rpt.tor1_zero = t.tor1->is_zero();
  rpt.unit_invertible = t.unit.is_invertible();
  if (!rpt.tor1_zero)
    throw VerificationFailed("Tor_1(L, B) does not vanish");
  if (!rpt.unit_invertible)
    throw VerificationFailed("unit L -> L (x) B is not invertible");
  return rpt;
}

// The maps to invert for the universal localization: the presentation
// differentials of the generator (or of its summands, when given).
template <class F>
struct LocalizationData {
  std::vector<ProjectivePresentation<F>> presentations;
};

template <class F>
LocalizationData<F> universal_localization_data(const OrthoPair<F>& pair,
                                                const std::vector<RepPtr<F>>& summands = {}) {
  LocalizationData<F> data;
  if (summands.empty()) {
    if (!pair.generator()->is_zero())
      data.presentations.push_back(projective_presentation(pair.generator()));
    return data;
  }
  std::vector<RepPtr<F>> parts = summands;
  RepPtr<F> total = parts.size() == 1 ? parts[0] : direct_sum(parts).rep;
  IsoVerdict<F> same = is_isomorphic(total, pair.generator());
  if (!same.is_iso())
    throw InvalidShape("claimed summands do not add up to the generator");
  for (const RepPtr<F>& s : parts)
    if (!s->is_zero()) data.presentations.push_back(projective_presentation(s));
  return data;
}

// Hom(sigma, M) invertible for every sigma in the family <=> M lies in Y.
// The two sides are computed independently and compared; disagreement is a
// broken theorem, not a data error.
template <class F>
bool sigma_characterizes(const OrthoPair<F>& pair, const LocalizationData<F>& data,
                         const RepPtr<F>& m) {
  bool all_invertible = true;
  for (const ProjectivePresentation<F>& pres : data.presentations) {
    HomSpace<F> h0 = hom_space(pres.p0, m);
    HomSpace<F> h1 = hom_space(pres.p1, m);
    if (h0.dimension() != h1.dimension()) {
      all_invertible = false;
      break;
    }
    CoordSolver<F> ch1(h1);
    Matrix<F> mat(m->field(), h1.dimension(), h0.dimension());
    for (int c = 0; c < h0.dimension(); ++c) {
      Matrix<F> co = ch1.coords(compose(h0.basis[c], pres.sigma));
      for (int r = 0; r < mat.rows(); ++r) mat.at(r, c) = co.at(r, 0);
    }
    if (!is_invertible(mat)) {
      all_invertible = false;
      break;
    }
  }
  bool in_y = membership_Y(pair, m);
  if (all_invertible != in_y)
    throw EquivalenceViolation("Hom(sigma, M) invertibility disagrees with Y-membership");
  return in_y;
}

// sigma (x) B must become invertible over B; this is the defining property
// of the localization and has to hold for every presentation in the family.
template <class F>
bool sigma_inverts_over_B(const PerpAlgebra<F>& pa, const LocalizationData<F>& data) {
  const Quiver& q = *pa.quiver_ptr();
  std::vector<RepPtr<F>> comp = detail::perp_components(pa);
  std::vector<Morphism<F>> rho = detail::perp_rhos(pa);
  for (const ProjectivePresentation<F>& pres : data.presentations) {
    std::vector<int> p0_vertices = pres.p0_vertex;
    std::vector<int> p1_vertices;
    for (int k : pres.p1_arrow) p1_vertices.push_back(q.arrow(k).target);
    DirectSum<F> d0b = detail::component_sum(pa.quiver_ptr(), pa.field(), comp, p0_vertices);
    DirectSum<F> d1b = detail::component_sum(pa.quiver_ptr(), pa.field(), comp, p1_vertices);
    Morphism<F> sigma_b = detail::pushed_sigma(q, pa.field(), pres, comp, rho, d0b, d1b);
    if (!sigma_b.is_invertible())
      throw VerificationFailed("sigma (x) B is not invertible over the perpendicular algebra");
  }
  return true;
}

}  // namespace extorth

#endif  // EXTORTH_PERPALG_HPP
