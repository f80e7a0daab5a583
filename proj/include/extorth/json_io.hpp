#ifndef EXTORTH_JSON_IO_HPP
#define EXTORTH_JSON_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "extorth/derived.hpp"
#include "extorth/fields.hpp"
#include "extorth/valuation.hpp"

namespace extorth {

// Everything at the JSON boundary is 1-based: vertex numbers, vertex-map
// keys, arrow endpoints. Internally everything stays 0-based.
using Json = nlohmann::ordered_json;

namespace jsondetail {

inline const Json& expect(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline int expect_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

inline int parse_index(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    int v = std::stoi(key, &used);
    if (used != key.size()) throw ParseError(where + ": bad index \"" + key + "\"");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad index \"" + key + "\"");
  }
}

}  // namespace jsondetail

// rationals travel as "num/den" strings (bare "num" when the denominator is
// one); prime-field residues travel as plain decimal numbers
inline Json scalar_to_json(const RationalField& f, const RationalField::Elem& x) {
  return f.to_string(x);
}
inline Json scalar_to_json(const PrimeField&, PrimeField::Elem x) { return x; }

inline RationalField::Elem scalar_from_json(const RationalField& f, const Json& j,
                                            const std::string& where) {
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t slash = s.find('/');
      if (slash == std::string::npos) return BigRat(BigInt(s));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw ParseError(where + ": zero denominator in \"" + s + "\"");
      return BigRat(BigInt(s.substr(0, slash)), den);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(where + ": bad rational \"" + s + "\"");
    }
  }
  throw ParseError(where + ": expected a rational scalar");
}

inline PrimeField::Elem scalar_from_json(const PrimeField& f, const Json& j,
                                         const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected a residue");
  return f.from_int(j.get<long long>());
}

template <class F>
Json matrix_to_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.field(), m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class F>
Matrix<F> matrix_from_json(const F& field, const Json& j, int rows, int cols,
                           const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  Matrix<F> m(field, rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(where + ", row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = scalar_from_json(field, row.at(c),
                                    where + "[" + std::to_string(r + 1) + "][" +
                                        std::to_string(c + 1) + "]");
  }
  return m;
}

inline Json quiver_to_json(const Quiver& q) {
  Json arrows = Json::array();
  for (const Arrow& a : q.arrows())
    arrows.push_back(Json{{"id", a.id}, {"source", a.source + 1}, {"target", a.target + 1}});
  return Json{{"vertices", q.vertex_count()}, {"arrows", std::move(arrows)}};
}

inline QuiverPtr quiver_from_json(const Json& j) {
  const std::string where = "quiver";
  int n = jsondetail::expect_int(jsondetail::expect(j, "vertices", where), where + ".vertices");
  std::vector<Arrow> arrows;
  if (j.contains("arrows")) {
    const Json& arr = j.at("arrows");
    if (!arr.is_array()) throw ParseError(where + ".arrows: expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string at = where + ".arrows[" + std::to_string(k + 1) + "]";
      const Json& a = arr.at(k);
      const Json& id = jsondetail::expect(a, "id", at);
      if (!id.is_string()) throw ParseError(at + ".id: expected a string");
      int s = jsondetail::expect_int(jsondetail::expect(a, "source", at), at + ".source");
      int t = jsondetail::expect_int(jsondetail::expect(a, "target", at), at + ".target");
      if (s < 1 || s > n || t < 1 || t > n)
        throw ParseError(at + ": endpoints must lie in 1.." + std::to_string(n));
      arrows.push_back(Arrow{id.get<std::string>(), s - 1, t - 1});
    }
  }
  return std::make_shared<Quiver>(n, std::move(arrows));
}

struct FieldSpec {
  bool rational = true;
  std::int64_t p = 0;

  bool operator==(const FieldSpec& o) const {
    return rational == o.rational && (rational || p == o.p);
  }
};

inline Json field_to_json(const RationalField&) { return Json{{"kind", "Q"}}; }
inline Json field_to_json(const PrimeField& f) { return Json{{"kind", "Fp"}, {"p", f.p()}}; }
inline FieldSpec field_spec_of(const RationalField&) { return FieldSpec{true, 0}; }
inline FieldSpec field_spec_of(const PrimeField& f) { return FieldSpec{false, f.p()}; }

inline FieldSpec field_spec_from_json(const Json& j, const std::string& where) {
  const Json& kind = jsondetail::expect(j, "kind", where);
  if (kind == "Q") return FieldSpec{true, 0};
  if (kind == "Fp") {
    FieldSpec spec{false, 0};
    spec.p = jsondetail::expect_int(jsondetail::expect(j, "p", where), where + ".p");
    return spec;
  }
  throw ParseError(where + ": field kind must be \"Q\" or \"Fp\"");
}

template <class F>
Json rep_to_json(const Representation<F>& m) {
  Json mats = Json::object();
  for (int k = 0; k < m.quiver().arrow_count(); ++k)
    mats[m.quiver().arrow(k).id] = matrix_to_json(m.arrow_matrix(k));
  return Json{{"field", field_to_json(m.field())}, {"dims", m.dims()}, {"matrices", mats}};
}

template <class F>
Representation<F> rep_from_json(const QuiverPtr& q, const F& field, const Json& j,
                                const std::string& where) {
  if (!(field_spec_from_json(jsondetail::expect(j, "field", where), where + ".field") ==
        field_spec_of(field)))
    throw ParseError(where + ".field: does not match the requested field");
  const Json& jd = jsondetail::expect(j, "dims", where);
  if (!jd.is_array() || static_cast<int>(jd.size()) != q->vertex_count())
    throw ParseError(where + ".dims: expected " + std::to_string(q->vertex_count()) +
                     " entries");
  DimVector dims;
  for (std::size_t v = 0; v < jd.size(); ++v) {
    int d = jsondetail::expect_int(jd.at(v), where + ".dims[" + std::to_string(v + 1) + "]");
    if (d < 0) throw ParseError(where + ".dims: dimensions are nonnegative");
    dims.push_back(d);
  }
  Json mats = j.contains("matrices") ? j.at("matrices") : Json::object();
  if (!mats.is_object()) throw ParseError(where + ".matrices: expected an object");
  for (const auto& [key, val] : mats.items()) {
    bool known = false;
    for (const Arrow& a : q->arrows()) known = known || a.id == key;
    if (!known) throw ParseError(where + ".matrices: unknown arrow \"" + key + "\"");
  }
  std::vector<Matrix<F>> arr;
  for (int k = 0; k < q->arrow_count(); ++k) {
    const Arrow& a = q->arrow(k);
    if (mats.contains(a.id))
      arr.push_back(matrix_from_json(field, mats.at(a.id), dims[a.target], dims[a.source],
                                     where + ".matrices." + a.id));
    else
      arr.push_back(Matrix<F>(field, dims[a.target], dims[a.source]));
  }
  return Representation<F>(q, field, std::move(dims), std::move(arr));
}

template <class F>
Json morphism_to_json(const Morphism<F>& f) {
  Json maps = Json::object();
  for (int v = 0; v < f.source().quiver().vertex_count(); ++v)
    maps[std::to_string(v + 1)] = matrix_to_json(f.vertex_map(v));
  return Json{{"vertexMaps", std::move(maps)}};
}

template <class F>
Morphism<F> morphism_from_json(const RepPtr<F>& source, const RepPtr<F>& target, const Json& j,
                               const std::string& where) {
  const Json& maps = jsondetail::expect(j, "vertexMaps", where);
  if (!maps.is_object()) throw ParseError(where + ".vertexMaps: expected an object");
  const F& field = source->field();
  int n = source->quiver().vertex_count();
  std::vector<Matrix<F>> out;
  for (int v = 0; v < n; ++v) {
    std::string key = std::to_string(v + 1);
    if (maps.contains(key))
      out.push_back(matrix_from_json(field, maps.at(key), target->dim(v), source->dim(v),
                                     where + ".vertexMaps." + key));
    else
      out.push_back(Matrix<F>(field, target->dim(v), source->dim(v)));
  }
  for (const auto& [key, val] : maps.items()) {
    int v = jsondetail::parse_index(key, where + ".vertexMaps");
    if (v < 1 || v > n) throw ParseError(where + ".vertexMaps: vertex " + key + " out of range");
  }
  return Morphism<F>(source, target, std::move(out));
}

template <class F>
Json five_term_to_json(const FiveTermSequence<F>& s) {
  Json terms = Json::object();
  terms["Y_M"] = rep_to_json(*s.y_sub);
  terms["X_M"] = rep_to_json(*s.x_sub);
  terms["Yup"] = rep_to_json(*s.y_up);
  terms["Xup"] = rep_to_json(*s.x_up);
  Json maps = Json::array();
  for (const Morphism<F>* f : {&s.g, &s.h, &s.u, &s.v}) maps.push_back(morphism_to_json(*f));
  return Json{{"M", rep_to_json(*s.module)}, {"terms", std::move(terms)},
              {"maps", std::move(maps)}};
}

template <class F>
Json perp_to_json(const PerpAlgebra<F>& pa) {
  Json labels = Json::array();
  for (int i = 0; i < pa.dim(); ++i) labels.push_back("b" + std::to_string(i + 1));
  Json structure = Json::array();
  for (int i = 0; i < pa.dim(); ++i) {
    Json per_j = Json::array();
    for (int j = 0; j < pa.dim(); ++j) {
      Json coords = Json::array();
      for (int k = 0; k < pa.dim(); ++k)
        coords.push_back(scalar_to_json(pa.field(), pa.mult_table(i).at(k, j)));
      per_j.push_back(std::move(coords));
    }
    structure.push_back(std::move(per_j));
  }
  Json idem = Json::object();
  for (int v = 0; v < pa.quiver_ptr()->vertex_count(); ++v) {
    Json coords = Json::array();
    for (int k = 0; k < pa.dim(); ++k)
      coords.push_back(scalar_to_json(pa.field(), pa.path_vertex(v).at(k, 0)));
    idem[std::to_string(v + 1)] = std::move(coords);
  }
  Json arrows = Json::object();
  for (int k = 0; k < pa.quiver_ptr()->arrow_count(); ++k) {
    Json coords = Json::array();
    for (int i = 0; i < pa.dim(); ++i)
      coords.push_back(scalar_to_json(pa.field(), pa.path_arrow(k).at(i, 0)));
    arrows[pa.quiver_ptr()->arrow(k).id] = std::move(coords);
  }
  return Json{{"dimB", pa.dim()},
              {"basis", std::move(labels)},
              {"structure", std::move(structure)},
              {"f", Json{{"e_i", std::move(idem)}, {"arrows", std::move(arrows)}}},
              {"L", rep_to_json(*pa.l())}};
}

template <class F>
Json localization_to_json(const LocalizationData<F>& data) {
  Json out = Json::array();
  for (const ProjectivePresentation<F>& pres : data.presentations) {
    Json p1 = Json::array();
    for (std::size_t s = 0; s < pres.p1_arrow.size(); ++s)
      p1.push_back(Json{{"arrow", pres.module->quiver().arrow(pres.p1_arrow[s]).id},
                        {"copy", pres.p1_copy[s] + 1}});
    Json p0 = Json::array();
    for (std::size_t s = 0; s < pres.p0_vertex.size(); ++s)
      p0.push_back(Json{{"vertex", pres.p0_vertex[s] + 1}, {"copy", pres.p0_copy[s] + 1}});
    out.push_back(Json{{"p1", std::move(p1)}, {"p0", std::move(p0)},
                       {"sigma", morphism_to_json(pres.sigma)}});
  }
  return out;
}

template <class F>
Json formal_complex_to_json(const FormalComplex<F>& c) {
  Json terms = Json::object();
  for (const auto& [n, rep] : c.terms()) terms[std::to_string(n)] = rep_to_json(*rep);
  return Json{{"terms", std::move(terms)}};
}

template <class F>
FormalComplex<F> formal_complex_from_json(const QuiverPtr& q, const F& field, const Json& j,
                                          const std::string& where) {
  const Json& terms = jsondetail::expect(j, "terms", where);
  if (!terms.is_object()) throw ParseError(where + ".terms: expected an object");
  std::map<int, RepPtr<F>> out;
  for (const auto& [key, val] : terms.items()) {
    int n = jsondetail::parse_index(key, where + ".terms");
    out[n] = share(rep_from_json(q, field, val, where + ".terms." + key));
  }
  return FormalComplex<F>(q, field, out);
}

template <class F>
Json raw_complex_to_json(const RawComplex<F>& c) {
  Json objects = Json::object();
  for (const auto& [n, rep] : c.objects) objects[std::to_string(n)] = rep_to_json(*rep);
  Json diffs = Json::object();
  for (const auto& [n, d] : c.differentials) diffs[std::to_string(n)] = morphism_to_json(d);
  return Json{{"objects", std::move(objects)}, {"differentials", std::move(diffs)}};
}

template <class F>
RawComplex<F> raw_complex_from_json(const QuiverPtr& q, const F& field, const Json& j,
                                    const std::string& where) {
  const Json& objects = jsondetail::expect(j, "objects", where);
  if (!objects.is_object()) throw ParseError(where + ".objects: expected an object");
  RawComplex<F> out;
  for (const auto& [key, val] : objects.items()) {
    int n = jsondetail::parse_index(key, where + ".objects");
    out.objects[n] = share(rep_from_json(q, field, val, where + ".objects." + key));
  }
  if (j.contains("differentials")) {
    const Json& diffs = j.at("differentials");
    if (!diffs.is_object()) throw ParseError(where + ".differentials: expected an object");
    for (const auto& [key, val] : diffs.items()) {
      int n = jsondetail::parse_index(key, where + ".differentials");
      auto src = out.objects.find(n);
      auto dst = out.objects.find(n + 1);
      if (src == out.objects.end() || dst == out.objects.end())
        throw NotAComplex("differential endpoints are not among the objects");
      out.differentials.emplace(
          n, morphism_from_json(src->second, dst->second, val, where + ".differentials." + key));
    }
  }
  validate_complex(out);
  return out;
}

inline Json value_vector_to_json(const ValueVector& v) {
  Json out = Json::object();
  for (const auto& [pos, val] : v.entries()) out[std::to_string(pos)] = val;
  return out;
}

inline ValueVector value_vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a sparse position map");
  std::map<int, std::int64_t> entries;
  for (const auto& [key, val] : j.items()) {
    int pos = jsondetail::parse_index(key, where);
    if (pos < 1) throw ParseError(where + ": positions start at 1");
    if (!val.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
    entries[pos] = val.get<std::int64_t>();
  }
  return ValueVector(entries);
}

inline Json ideal_to_json(const IdealDesc& ideal) {
  switch (ideal.kind()) {
    case IdealDesc::Kind::finite: {
      Json gens = Json::array();
      for (const ValueVector& g : ideal.generators()) gens.push_back(value_vector_to_json(g));
      return Json{{"kind", "finite"}, {"generators", std::move(gens)}};
    }
    case IdealDesc::Kind::canonical_family:
      return Json{{"kind", "canonicalFamily"}};
    case IdealDesc::Kind::product:
      return Json{{"kind", "product"},
                  {"left", ideal_to_json(ideal.left())},
                  {"right", ideal_to_json(ideal.right())}};
  }
  return Json();
}

inline IdealDesc ideal_from_json(const Json& j, const std::string& where) {
  const Json& kind = jsondetail::expect(j, "kind", where);
  if (kind == "canonicalFamily") return IdealDesc::canonical_family();
  if (kind == "finite") {
    const Json& gens = jsondetail::expect(j, "generators", where);
    if (!gens.is_array()) throw ParseError(where + ".generators: expected an array");
    std::vector<ValueVector> out;
    for (std::size_t i = 0; i < gens.size(); ++i)
      out.push_back(value_vector_from_json(gens.at(i),
                                           where + ".generators[" + std::to_string(i + 1) + "]"));
    return IdealDesc::finite(std::move(out));
  }
  if (kind == "product")
    return IdealDesc::product(ideal_from_json(jsondetail::expect(j, "left", where), where + ".left"),
                              ideal_from_json(jsondetail::expect(j, "right", where), where + ".right"));
  throw ParseError(where + ": kind must be finite, canonicalFamily, or product");
}

inline Json certificate_to_json(const MembershipCertificate& c) {
  Json parts = Json::array();
  for (const ValueVector& p : c.parts) parts.push_back(value_vector_to_json(p));
  Json gens = Json::array();
  for (const ValueVector& g : c.generators) gens.push_back(value_vector_to_json(g));
  return Json{{"member", c.member}, {"parts", std::move(parts)},
              {"generators", std::move(gens)}};
}

inline Json keller_report_to_json(const KellerReport& r) {
  Json items = Json::array();
  for (const HypothesisItem& item : r.items)
    items.push_back(Json{{"id", item.id},
                         {"holds", item.holds},
                         {"status", item.machine_checked ? "machine-checked" : "theory-cited"},
                         {"note", item.note}});
  Json probes = Json::array();
  for (const ValueVector& p : r.probes) probes.push_back(value_vector_to_json(p));
  Json least = Json::object();
  least["exists"] = r.least_positive.exists;
  if (r.least_positive.least) least["least"] = value_vector_to_json(*r.least_positive.least);
  Json chain = Json::array();
  for (const ValueVector& v : r.least_positive.descending_chain)
    chain.push_back(value_vector_to_json(v));
  least["descendingChain"] = std::move(chain);
  return Json{{"allHold", r.all_hold}, {"items", std::move(items)},
              {"probes", std::move(probes)}, {"leastPositive", std::move(least)}};
}

}  // namespace extorth

#endif  // EXTORTH_JSON_IO_HPP
