#ifndef EXTORTH_ORTHOPAIR_HPP
#define EXTORTH_ORTHOPAIR_HPP

#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "extorth/hom.hpp"
#include "extorth/iso.hpp"

namespace extorth {

template <class F>
class PerpAlgebra;

// An Ext-orthogonal pair presented by its exceptional generator X. The two
// classes stay intensional: the right class is everything Hom- and
// Ext-orthogonal to X, the left class is detected through the perpendicular
// algebra. Nothing is ever enumerated.
template <class F>
class OrthoPair {
 public:
  explicit OrthoPair(RepPtr<F> x) : x_(std::move(x)), slot_(std::make_shared<Slot>()) {
    int e = ext_space(x_, x_).dimension();
    if (e != 0)
      throw NotExceptional("generator has self-extensions (dim " + std::to_string(e) + ")");
  }

  const RepPtr<F>& generator() const { return x_; }
  const Quiver& quiver() const { return x_->quiver(); }
  const QuiverPtr& quiver_ptr() const { return x_->quiver_ptr(); }
  const F& field() const { return x_->field(); }

  // Lazily built, compute-once, safe under concurrent callers. Defined in
  // perpalg.hpp to keep the header cycle open.
  const PerpAlgebra<F>& perp() const;

 private:
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const PerpAlgebra<F>> value;
  };

  RepPtr<F> x_;
  std::shared_ptr<Slot> slot_;
};

template <class F>
OrthoPair<F> make_pair(RepPtr<F> x) {
  return OrthoPair<F>(std::move(x));
}

template <class F>
struct Reflection {
  RepPtr<F> target;  // lies in the right class
  Morphism<F> unit;  // M -> target
};

// Reflection into the right class: quotient by the iterated trace of X, glue
// on the universal extension, quotient by the trace again. Hereditariness
// keeps step three from resurrecting Ext, and that is re-verified at the end.
template <class F>
Reflection<F> reflect(const OrthoPair<F>& pair, const RepPtr<F>& m) {
  const RepPtr<F>& x = pair.generator();

  TraceQuotient<F> t1 = trace_quotient(x, m);
  UniversalExtension<F> ue = universal_extension(x, t1.quot);
  TraceQuotient<F> t2 = trace_quotient(x, ue.total);

  Morphism<F> unit = compose(t2.proj, compose(ue.ses.incl(), t1.proj));
  if (hom_space(x, t2.quot).dimension() != 0 || ext_space(x, t2.quot).dimension() != 0)
    throw VerificationFailed("reflection target is not orthogonal to the generator");
  return {t2.quot, std::move(unit)};
}

template <class F>
bool membership_Y(const OrthoPair<F>& pair, const RepPtr<F>& m) {
  return hom_space(pair.generator(), m).dimension() == 0 &&
         ext_space(pair.generator(), m).dimension() == 0;
}

}  // namespace extorth

#endif
