#ifndef EXTORTH_ISO_HPP
#define EXTORTH_ISO_HPP

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "extorth/hom.hpp"

namespace extorth {

// Three-valued isomorphism verdict: an explicit witness, a certified
// refutation, or an honest "the search budget ran out".
template <class F>
struct IsoVerdict {
  enum class Kind { iso, not_iso, inconclusive } kind;
  std::optional<Morphism<F>> witness;
  std::string reason;

  bool is_iso() const { return kind == Kind::iso; }
  bool is_not_iso() const { return kind == Kind::not_iso; }
  bool is_inconclusive() const { return kind == Kind::inconclusive; }
};

namespace detail {

template <class F>
std::optional<Morphism<F>> assemble_invertible(const HomSpace<F>& h,
                                               const std::vector<typename F::Elem>& coeffs) {
  const F& field = h.source->field();
  const Quiver& q = h.source->quiver();
  std::vector<Matrix<F>> maps;
  for (int v = 0; v < q.vertex_count(); ++v) {
    Matrix<F> m(field, h.target->dim(v), h.source->dim(v));
    for (int b = 0; b < h.dimension(); ++b)
      if (!field.is_zero(coeffs[b])) m = m + h.basis[b].vertex_map(v).scaled(coeffs[b]);
    if (rank(m) != m.rows() || m.rows() != m.cols()) return std::nullopt;
    maps.push_back(std::move(m));
  }
  return Morphism<F>(h.source, h.target, std::move(maps));
}

// Exhaustive odometer over F_p^h, coefficients most-significant-first.
inline bool odometer_next(std::vector<std::int64_t>& v, std::int64_t p) {
  for (size_t i = v.size(); i-- > 0;) {
    if (++v[i] < p) return true;
    v[i] = 0;
  }
  return false;
}

}  // namespace detail

template <class F>
IsoVerdict<F> is_isomorphic(const RepPtr<F>& m, const RepPtr<F>& n, long long budget = 20000) {
  using Verdict = IsoVerdict<F>;
  detail::require_parallel(*m, *n);

  if (m->dims() != n->dims()) return {Verdict::Kind::not_iso, std::nullopt, "dimension vectors differ"};
  if (*m == *n) return {Verdict::Kind::iso, identity_morphism(m), ""};
  if (m->is_zero()) return {Verdict::Kind::iso, zero_morphism(m, n), ""};

  HomSpace<F> h = hom_space(m, n);
  // cheap invariants before any search
  const int hmn = h.dimension();
  const int hnm = hom_space(n, m).dimension();
  const int em = hom_space(m, m).dimension();
  const int en = hom_space(n, n).dimension();
  if (hmn != hnm || hmn != em || em != en)
    return {Verdict::Kind::not_iso, std::nullopt, "Hom and End dimensions differ"};
  if (hmn == 0) return {Verdict::Kind::not_iso, std::nullopt, "no nonzero morphisms exist"};

  const F& field = m->field();
  std::vector<typename F::Elem> coeffs(hmn, field.zero());

  // single basis elements, then the all-ones combination
  for (int b = 0; b < hmn; ++b) {
    coeffs.assign(hmn, field.zero());
    coeffs[b] = field.one();
    if (auto w = detail::assemble_invertible(h, coeffs)) return {Verdict::Kind::iso, std::move(w), ""};
  }
  coeffs.assign(hmn, field.one());
  if (auto w = detail::assemble_invertible(h, coeffs)) return {Verdict::Kind::iso, std::move(w), ""};

  if constexpr (std::is_same_v<F, PrimeField>) {
    // exhaustive when the coordinate space fits in the budget: a miss is
    // then a certified refutation
    double total = 1;
    for (int b = 0; b < hmn && total <= static_cast<double>(budget); ++b)
      total *= static_cast<double>(field.p());
    if (total <= static_cast<double>(budget)) {
      std::vector<std::int64_t> v(hmn, 0);
      while (detail::odometer_next(v, field.p()))
        if (auto w = detail::assemble_invertible(h, v)) return {Verdict::Kind::iso, std::move(w), ""};
      return {Verdict::Kind::not_iso, std::nullopt, "exhausted all Hom-space combinations"};
    }
  }

  // deterministic random sampling; integer coefficients keep rational
  // arithmetic cheap and invertibility is a Zariski-open condition
  std::mt19937 rng(0x5eed);
  const int widths[] = {1, 3, 10, 1000};
  for (int wi = 0; wi < 4; ++wi) {
    std::uniform_int_distribution<int> d(-widths[wi], widths[wi]);
    for (long long t = 0; t < budget / 4; ++t) {
      for (int b = 0; b < hmn; ++b) coeffs[b] = field.from_int(d(rng));
      if (auto w = detail::assemble_invertible(h, coeffs)) return {Verdict::Kind::iso, std::move(w), ""};
    }
  }
  return {Verdict::Kind::inconclusive, std::nullopt, "search budget exhausted"};
}

}  // namespace extorth

#endif
