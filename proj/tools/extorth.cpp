// Batch front end: parse quiver and representation files, run the library's
// computations and verification suites, and emit deterministic text or JSON
// reports. Exit codes: 0 success, 2 input error, 3 precondition violation,
// 4 verification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "extorth/json_io.hpp"

namespace {

using namespace extorth;

struct Common {
  std::string format = "text";
  std::string out;
  std::string field = "q";
  int cap = 40;
};

void add_common(CLI::App* cmd, Common& c, bool with_field = true) {
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "write the report to this file instead of stdout");
  if (with_field)
    cmd->add_option("--field", c.field, "coefficient field: q or fp:P")->capture_default_str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit(const Common& c, const Json& j, const std::string& text) {
  std::string payload = c.format == "json" ? j.dump(2) + "\n" : text;
  if (c.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(c.out);
  if (!out) throw ParseError(c.out + ": cannot open for writing");
  out << payload;
}

QuiverPtr load_quiver(const std::string& path) { return quiver_from_json(load_json_file(path)); }

// module arguments are file paths or designators @P1 / @S2 / @I3 (1-based)
template <class F>
RepPtr<F> load_module(const QuiverPtr& q, const F& field, const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    if (arg.size() < 3) throw ParseError(arg + ": designators look like @P1, @S2, @I3");
    char kind = arg[1];
    int v = 0;
    try {
      v = std::stoi(arg.substr(2));
    } catch (const std::exception&) {
      throw ParseError(arg + ": bad vertex number");
    }
    if (v < 1 || v > q->vertex_count())
      throw ParseError(arg + ": vertex out of range 1.." + std::to_string(q->vertex_count()));
    switch (kind) {
      case 'P': return share(projective(q, field, v - 1));
      case 'S': return share(simple(q, field, v - 1));
      case 'I': return share(injective(q, field, v - 1));
      default: throw ParseError(arg + ": designator kind must be P, S, or I");
    }
  }
  return share(rep_from_json(q, field, load_json_file(arg), arg));
}

template <class F>
std::vector<RepPtr<F>> load_probes(const QuiverPtr& q, const F& field,
                                   const std::vector<std::string>& args,
                                   const std::string& probes_path) {
  std::vector<RepPtr<F>> out;
  for (const std::string& a : args) out.push_back(load_module(q, field, a));
  if (!probes_path.empty()) {
    Json j = load_json_file(probes_path);
    if (!j.is_array()) throw ParseError(probes_path + ": expected an array of representations");
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(share(rep_from_json(q, field, j.at(i),
                                        probes_path + "[" + std::to_string(i + 1) + "]")));
  }
  if (out.empty())
    for (int v = 0; v < q->vertex_count(); ++v) {
      out.push_back(share(simple(q, field, v)));
      out.push_back(share(projective(q, field, v)));
      out.push_back(share(injective(q, field, v)));
    }
  return out;
}

std::string dims_text(const DimVector& d) {
  int total = 0;
  for (int x : d) total += x;
  if (total == 0) return "0";
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d[i]);
  }
  return s + ")";
}

template <class F>
std::string matrix_text(const Matrix<F>& m) {
  std::string s = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) s += "; ";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) s += " ";
      s += m.field().to_string(m.at(r, c));
    }
  }
  return s + "]";
}

template <class F>
std::string column_text(const Matrix<F>& col) {
  std::string s = "(";
  for (int r = 0; r < col.rows(); ++r) {
    if (r) s += ", ";
    s += col.field().to_string(col.at(r, 0));
  }
  return s + ")";
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

// make_pair with the ext-dimension diagnostic the CLI contract promises
template <class F>
OrthoPair<F> make_pair_diagnosed(const RepPtr<F>& x) {
  try {
    return make_pair(x);
  } catch (const NotExceptional& e) {
    throw NotExceptional(std::string(e.what()) + "; dim Ext^1(X, X) = " +
                         std::to_string(ext_space(x, x).dimension()) + ", dim End(X) = " +
                         std::to_string(hom_space(x, x).dimension()));
  }
}

// ---------------------------------------------------------------- commands

template <class F>
int run_hom(const Common& c, const F& field, const std::string& quiver_path,
            const std::string& m_arg, const std::string& n_arg, bool ext) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> m = load_module(q, field, m_arg);
  RepPtr<F> n = load_module(q, field, n_arg);
  std::ostringstream text;
  Json j;
  if (!ext) {
    HomSpace<F> hs = hom_space(m, n);
    text << "dim Hom = " << hs.dimension() << "\n";
    Json basis = Json::array();
    for (std::size_t i = 0; i < hs.basis.size(); ++i) {
      basis.push_back(morphism_to_json(hs.basis[i]));
      text << "basis " << i + 1 << ":";
      for (int v = 0; v < q->vertex_count(); ++v)
        text << " vertex " << v + 1 << " " << matrix_text(hs.basis[i].vertex_map(v));
      text << "\n";
    }
    j = Json{{"dimension", hs.dimension()}, {"basis", std::move(basis)}};
  } else {
    ExtSpace<F> es = ext_space(m, n);
    text << "dim Ext^1 = " << es.dimension() << "\n";
    Json basis = Json::array();
    for (std::size_t i = 0; i < es.basis.size(); ++i) {
      Json mats = Json::object();
      text << "cocycle " << i + 1 << ":";
      for (int k = 0; k < q->arrow_count(); ++k) {
        mats[q->arrow(k).id] = matrix_to_json(es.basis[i].mats[k]);
        text << " " << q->arrow(k).id << " " << matrix_text(es.basis[i].mats[k]);
      }
      basis.push_back(Json{{"matrices", std::move(mats)}});
      text << "\n";
    }
    j = Json{{"dimension", es.dimension()}, {"basis", std::move(basis)}};
  }
  emit(c, j, text.str());
  return 0;
}

template <class F>
int run_five_term(const Common& c, const F& field, const std::string& quiver_path,
                  const std::string& x_arg, const std::string& m_arg) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> x = load_module(q, field, x_arg);
  RepPtr<F> m = load_module(q, field, m_arg);
  OrthoPair<F> pair = make_pair_diagnosed(x);
  FiveTermSequence<F> seq = five_term(pair, m);
  TorsionSplice<F> sp = splice(pair, seq);

  std::ostringstream text;
  text << "0 -> Y_M " << dims_text(seq.y_sub->dims()) << " -> X_M " << dims_text(seq.x_sub->dims())
       << " -> M " << dims_text(seq.module->dims()) << " -> Y^M " << dims_text(seq.y_up->dims())
       << " -> X^M " << dims_text(seq.x_up->dims()) << " -> 0\n";
  text << "routes: cone construction and reflection construction agree\n";
  text << "splice: M' " << dims_text(sp.m_prime->dims()) << ", M'' " << dims_text(sp.m_dprime->dims())
       << ", trace filtration depth " << sp.fac_witness.size() << "\n";

  Json j = five_term_to_json(seq);
  j["routesAgree"] = true;
  j["splice"] = Json{{"Mprime", rep_to_json(*sp.m_prime)},
                     {"Mdprime", rep_to_json(*sp.m_dprime)},
                     {"filtrationDepth", sp.fac_witness.size()}};
  emit(c, j, text.str());
  return 0;
}

template <class F>
int run_perp(const Common& c, const F& field, const std::string& quiver_path,
             const std::string& x_arg) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> x = load_module(q, field, x_arg);
  OrthoPair<F> pair = make_pair_diagnosed(x);
  const PerpAlgebra<F>& pa = pair.perp();
  HomologicalEpiReport<F> epi = verify_homological_epi(pa);
  LocalizationData<F> data = universal_localization_data(pair);
  bool inverts = sigma_inverts_over_B(pa, data);
  if (!inverts) throw VerificationFailed("sigma fails to invert over the perpendicular algebra");

  Json j = perp_to_json(pa);
  std::string digest = fnv1a_hex(j.at("structure").dump());
  j["structureDigest"] = digest;
  j["sigma"] = localization_to_json(data);
  j["homologicalEpi"] = Json{{"dimB", epi.dim_b},
                             {"tensorDim", epi.tensor_dim},
                             {"tor1Zero", epi.tor1_zero},
                             {"unitInvertible", epi.unit_invertible}};

  std::ostringstream text;
  text << "dim B = " << pa.dim() << "\n";
  text << "structure digest = " << digest << "\n";
  for (int v = 0; v < q->vertex_count(); ++v)
    text << "f(e_" << v + 1 << ") = " << column_text(pa.path_vertex(v)) << "\n";
  for (int k = 0; k < q->arrow_count(); ++k)
    text << "f(" << q->arrow(k).id << ") = " << column_text(pa.path_arrow(k)) << "\n";
  text << "sigma: " << data.presentations.size() << " presentation(s)";
  for (const ProjectivePresentation<F>& pres : data.presentations)
    text << " [" << dims_text(pres.p1->dims()) << " -> " << dims_text(pres.p0->dims()) << "]";
  text << "\n";
  text << "homological epi: dim B (x) B = " << epi.tensor_dim << ", Tor_1(B, B) = 0, unit"
       << (epi.unit_invertible ? " invertible" : " NOT invertible") << "\n";
  text << "sigma inverts over B: pass\n";
  emit(c, j, text.str());
  return 0;
}

template <class F>
int run_sigma(const Common& c, const F& field, const std::string& quiver_path,
              const std::string& x_arg, const std::vector<std::string>& probe_args,
              const std::string& probes_path) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> x = load_module(q, field, x_arg);
  OrthoPair<F> pair = make_pair_diagnosed(x);
  LocalizationData<F> data = universal_localization_data(pair);
  if (!sigma_inverts_over_B(pair.perp(), data))
    throw VerificationFailed("sigma fails to invert over the perpendicular algebra");
  std::vector<RepPtr<F>> probes = load_probes(q, field, probe_args, probes_path);

  std::ostringstream text;
  text << "sigma inverts over B: pass\n";
  Json rows = Json::array();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    bool verdict = sigma_characterizes(pair, data, probes[i]);
    rows.push_back(Json{{"probe", rep_to_json(*probes[i])},
                        {"homSigmaInvertible", verdict},
                        {"membershipY", verdict}});
    text << "probe " << i + 1 << " " << dims_text(probes[i]->dims())
         << ": Hom(sigma, M) invertible = " << (verdict ? "yes" : "no")
         << ", in perpendicular class = " << (verdict ? "yes" : "no") << " (agree)\n";
  }
  emit(c, Json{{"sigmaInvertsOverB", true}, {"probes", std::move(rows)}}, text.str());
  return 0;
}

struct SuiteRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

template <class F>
std::vector<SuiteRow> run_suite(const OrthoPair<F>& pair, const std::vector<RepPtr<F>>& probes,
                                int cap) {
  const QuiverPtr& q = pair.quiver_ptr();
  std::vector<SuiteRow> rows;
  auto row = [&rows](const std::string& name, const std::function<std::string()>& body) {
    try {
      std::string detail = body();
      rows.push_back(SuiteRow{name, true, detail});
    } catch (const std::exception& e) {
      rows.push_back(SuiteRow{name, false, e.what()});
    }
  };

  row("euler-identity", [&] {
    int pairs = 0;
    for (const RepPtr<F>& m : probes)
      for (const RepPtr<F>& n : probes) {
        if (pairs >= cap) break;
        long long lhs = hom_space(m, n).dimension() - ext_space(m, n).dimension();
        if (lhs != euler_form(*q, m->dims(), n->dims()))
          throw VerificationFailed("Euler identity fails at a probe pair");
        ++pairs;
      }
    return std::to_string(pairs) + " probe pairs";
  });

  std::vector<FiveTermSequence<F>> seqs;
  row("five-term-exactness", [&] {
    for (const RepPtr<F>& m : probes) seqs.push_back(five_term(pair, m));
    return std::to_string(seqs.size()) + " sequences, exactness at every joint";
  });

  row("five-term-membership", [&] {
    for (const FiveTermSequence<F>& s : seqs) {
      if (!membership_Y(pair, s.y_sub) || !membership_Y(pair, s.y_up))
        throw VerificationFailed("a Y-term escapes the perpendicular class");
      if (!membership_X(pair, s.x_sub) || !membership_X(pair, s.x_up))
        throw VerificationFailed("an X-term escapes the generator's class");
    }
    return "all four terms classified";
  });

  row("five-term-uniqueness", [&] {
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      FiveTermSequence<F> permuted = five_term(pair, probes[i], 7u);
      ApproximationLadder<F> ladder =
          extend_morphism(pair, identity_morphism(probes[i]), seqs[i], permuted);
      if (!ladder.y_sub_map.is_invertible() || !ladder.x_sub_map.is_invertible() ||
          !ladder.y_up_map.is_invertible() || !ladder.x_up_map.is_invertible())
        throw VerificationFailed("permuted-basis ladder is not an isomorphism");
    }
    return "permuted presentations connected by invertible ladders";
  });

  row("adjunction-counts", [&] {
    std::vector<RepPtr<F>> xs, ys;
    for (const RepPtr<F>& m : probes) {
      if (membership_X(pair, m)) xs.push_back(m);
      if (membership_Y(pair, m)) ys.push_back(m);
    }
    int checked = 0;
    for (const RepPtr<F>& m : probes)
      checked += static_cast<int>(adjunction_counts(pair, m, xs, ys).size());
    return std::to_string(checked) + " count identities";
  });

  row("splice", [&] {
    for (const FiveTermSequence<F>& s : seqs) splice(pair, s);
    return "torsion splice recomposes every sequence";
  });

  row("second-pair", [&] {
    for (const RepPtr<F>& m : probes) second_five_term(pair, m);
    return "perpendicular-side sequence matches Hom/Ext from the algebra";
  });

  row("sigma-characterization", [&] {
    LocalizationData<F> data = universal_localization_data(pair);
    if (!sigma_inverts_over_B(pair.perp(), data))
      throw VerificationFailed("sigma fails to invert over B");
    for (const RepPtr<F>& m : probes) sigma_characterizes(pair, data, m);
    return "Hom(sigma, M) invertibility matches the class on every probe";
  });

  row("triangle", [&] {
    for (const RepPtr<F>& m : probes) triangle_check(pair, m);
    return "triangle cohomology equals the sequence on every probe";
  });

  row("telescope", [&] {
    std::vector<FormalComplex<F>> complexes;
    complexes.push_back(cohomology(perfect_presentation(pair.generator())));
    for (const RepPtr<F>& m : probes) complexes.push_back(concentrated(m, 0));
    if (!probes.empty())
      complexes.push_back(
          complex_sum(concentrated(probes.front(), -2), concentrated(probes.back(), 3)));
    telescope_check(pair, complexes);
    return std::to_string(complexes.size()) + " probe complexes, trichotomy consistent";
  });

  return rows;
}

template <class F>
int run_verify(const Common& c, const F& field, const std::string& quiver_path,
               const std::string& x_arg, const std::vector<std::string>& probe_args,
               const std::string& probes_path) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> x = load_module(q, field, x_arg);
  OrthoPair<F> pair = make_pair_diagnosed(x);
  std::vector<RepPtr<F>> probes = load_probes(q, field, probe_args, probes_path);
  std::vector<SuiteRow> rows = run_suite(pair, probes, c.cap);

  std::ostringstream text;
  Json jrows = Json::array();
  bool all = true;
  std::string first_fail;
  for (const SuiteRow& r : rows) {
    text << r.name;
    for (std::size_t i = r.name.size(); i < 26; ++i) text << ".";
    text << (r.pass ? " pass" : " FAIL") << "  " << r.detail << "\n";
    jrows.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass && first_fail.empty()) first_fail = r.name;
    all = all && r.pass;
  }
  text << (all ? "all invariants hold" : "FAILED: " + first_fail) << "\n";
  emit(c, Json{{"allPass", all}, {"probeCount", probes.size()}, {"rows", std::move(jrows)}},
       text.str());
  if (!all) {
    std::cerr << "first failing invariant: " << first_fail << "\n";
    return 4;
  }
  return 0;
}

template <class F>
int run_telescope(const Common& c, const F& field, const std::string& quiver_path,
                  const std::string& x_arg, const std::vector<std::string>& complex_paths) {
  QuiverPtr q = load_quiver(quiver_path);
  RepPtr<F> x = load_module(q, field, x_arg);
  OrthoPair<F> pair = make_pair_diagnosed(x);

  std::vector<FormalComplex<F>> probes;
  if (complex_paths.empty()) {
    probes.push_back(cohomology(perfect_presentation(pair.generator())));
    for (int v = 0; v < q->vertex_count(); ++v) {
      probes.push_back(concentrated(share(simple(q, field, v)), 0));
      probes.push_back(concentrated(share(projective(q, field, v)), -1));
    }
    probes.push_back(complex_sum(concentrated(x, -3), concentrated(x, 5)));
  } else {
    for (const std::string& path : complex_paths)
      probes.push_back(formal_complex_from_json(q, field, load_json_file(path), path));
  }

  TelescopeReport<F> report = telescope_check(pair, probes);
  std::ostringstream text;
  Json jrows = Json::array();
  for (std::size_t i = 0; i < report.probes.size(); ++i) {
    const TelescopeProbeVerdict& v = report.probes[i];
    text << "probe " << i + 1 << ": localization " << (v.localize_zero ? "zero" : "nonzero")
         << ", approximation " << (v.approximation_trivial ? "trivial" : "nontrivial")
         << ", tensor " << (v.tensor_annihilated ? "annihilated" : "alive") << " -> "
         << (v.in_kernel ? "in kernel" : "not in kernel") << "\n";
    jrows.push_back(Json{{"localizeZero", v.localize_zero},
                         {"approximationTrivial", v.approximation_trivial},
                         {"tensorAnnihilated", v.tensor_annihilated},
                         {"inKernel", v.in_kernel}});
  }
  text << "generator in kernel: yes\n";
  text << "coproduct distribution: pass\n";
  emit(c,
       Json{{"probes", std::move(jrows)},
            {"generatorInKernel", report.generator_in_kernel},
            {"coproductPreserved", report.coproduct_preserved}},
       text.str());
  return 0;
}

int run_valuation(const Common& c, const std::string& model, const std::string& probes_path) {
  std::vector<std::pair<std::string, IdealDesc>> models;
  if (model == "all" || model == "canonical")
    models.emplace_back("canonical", IdealDesc::canonical_family());
  if (model.size() == 2 && model[0] == 'z' && model[1] >= '1' && model[1] <= '9') {
    int rank = model[1] - '0';
    models.emplace_back(model, IdealDesc::finite({ValueVector::basis(rank)}));
  } else if (model == "all") {
    models.emplace_back("z1", IdealDesc::finite({ValueVector::basis(1)}));
  } else if (model != "canonical") {
    throw ParseError("--model must be canonical, z1..z9, or all");
  }

  std::ostringstream text;
  Json jmodels = Json::array();
  for (const auto& [name, ideal] : models) {
    KellerReport report = keller_hypotheses(ideal);
    text << "model " << name << ": " << (report.all_hold ? "all hypotheses hold" : "hypotheses FAIL")
         << "\n";
    for (const HypothesisItem& item : report.items) {
      text << "  [" << (item.machine_checked ? "machine-checked" : "theory-cited") << "] "
           << item.id << ": " << (item.holds ? "holds" : "fails") << " (" << item.note << ")\n";
    }
    if (!report.least_positive.exists) {
      text << "  descending chain:";
      for (std::size_t i = 0; i < report.least_positive.descending_chain.size(); ++i)
        text << (i ? " > " : " ") << "e" << report.least_positive.descending_chain[i].first_support();
      text << " > ...\n";
    }
    Json jm = keller_report_to_json(report);
    jm["model"] = name;
    jmodels.push_back(std::move(jm));
  }

  Json jprobes = Json::array();
  if (!probes_path.empty()) {
    Json j = load_json_file(probes_path);
    if (!j.is_array()) throw ParseError(probes_path + ": expected an array of value vectors");
    IdealDesc p = IdealDesc::canonical_family();
    IdealDesc square = IdealDesc::product(p, p);
    std::vector<ValueVector> probes;
    for (std::size_t i = 0; i < j.size(); ++i)
      probes.push_back(
          value_vector_from_json(j.at(i), probes_path + "[" + std::to_string(i + 1) + "]"));
    IdempotencyReport r = is_idempotent(p, probes);
    text << "canonical maximal ideal on " << probes.size()
         << " probe(s): " << (r.idempotent_on_probes ? "idempotent" : "NOT idempotent") << "\n";
    for (const IdempotencyWitness& w : r.witnesses) {
      if (!certificate_valid(square, w.probe, w.in_square))
        throw VerificationFailed("an idempotency certificate fails re-validation");
      text << "  probe " << value_vector_to_json(w.probe).dump() << " = ";
      for (std::size_t i = 0; i < w.in_square.parts.size(); ++i)
        text << (i ? " + " : "") << value_vector_to_json(w.in_square.parts[i]).dump();
      text << "\n";
      jprobes.push_back(Json{{"probe", value_vector_to_json(w.probe)},
                             {"certificate", certificate_to_json(w.in_square)}});
    }
  }

  Json j = Json{{"models", std::move(jmodels)}};
  if (!probes_path.empty()) j["probeWitnesses"] = std::move(jprobes);
  emit(c, j, text.str());
  return 0;
}

template <class Fn>
int with_field(const std::string& spec, Fn&& fn) {
  if (spec == "q" || spec == "Q") return fn(RationalField{});
  if (spec.rfind("fp:", 0) == 0) {
    std::int64_t p = 0;
    try {
      p = std::stoll(spec.substr(3));
    } catch (const std::exception&) {
      throw ParseError("--field: bad modulus in \"" + spec + "\"");
    }
    try {
      return fn(PrimeField(p));
    } catch (const Error& e) {
      throw ParseError(std::string("--field: ") + e.what());
    }
  }
  throw ParseError("--field must be q or fp:P");
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 4;
  } catch (const NotExceptional& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 3;
  } catch (const ProbeNotInClass& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 3;
  } catch (const ProbeNotInIdeal& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ext-orthogonal pairs, perpendicular algebras, and approximation sequences"};
  app.require_subcommand(1);

  struct {
    Common common;
    std::string quiver, m, n, x, model = "all", probes_file;
    std::vector<std::string> probes;
  } a;

  CLI::App* hom = app.add_subcommand("hom", "dimension and basis of Hom(M, N)");
  CLI::App* ext = app.add_subcommand("ext", "dimension and basis of Ext^1(M, N)");
  for (CLI::App* cmd : {hom, ext}) {
    cmd->add_option("quiver", a.quiver, "quiver JSON file")->required();
    cmd->add_option("M", a.m, "representation file or @P/@S/@I designator")->required();
    cmd->add_option("N", a.n, "representation file or designator")->required();
    add_common(cmd, a.common);
  }

  CLI::App* five = app.add_subcommand("five-term", "approximation sequence of M for the pair of X");
  five->add_option("quiver", a.quiver, "quiver JSON file")->required();
  five->add_option("X", a.x, "exceptional generator")->required();
  five->add_option("M", a.m, "module to approximate")->required();
  add_common(five, a.common);

  CLI::App* perp = app.add_subcommand("perp", "perpendicular algebra of X with verification");
  perp->add_option("quiver", a.quiver, "quiver JSON file")->required();
  perp->add_option("X", a.x, "exceptional generator")->required();
  add_common(perp, a.common);

  CLI::App* sigma = app.add_subcommand("sigma", "sigma-inversion test against class membership");
  sigma->add_option("quiver", a.quiver, "quiver JSON file")->required();
  sigma->add_option("X", a.x, "exceptional generator")->required();
  sigma->add_option("probes", a.probes, "probe modules");
  sigma->add_option("--probes-file", a.probes_file, "JSON array of probe representations");
  add_common(sigma, a.common);

  CLI::App* verify = app.add_subcommand("verify", "full invariant suite for one pair");
  verify->add_option("quiver", a.quiver, "quiver JSON file")->required();
  verify->add_option("X", a.x, "exceptional generator")->required();
  verify->add_option("probes", a.probes, "probe modules");
  verify->add_option("--probes-file", a.probes_file, "JSON array of probe representations");
  verify->add_option("--cap", a.common.cap, "bound on brute-force probe pairs")
      ->capture_default_str();
  add_common(verify, a.common);

  CLI::App* telescope = app.add_subcommand("telescope", "kernel trichotomy on probe complexes");
  telescope->add_option("quiver", a.quiver, "quiver JSON file")->required();
  telescope->add_option("X", a.x, "exceptional generator")->required();
  telescope->add_option("complexes", a.probes, "formal complex JSON files");
  add_common(telescope, a.common);

  CLI::App* valuation = app.add_subcommand("valuation", "counterexample hypothesis report");
  valuation->add_option("--model", a.model, "canonical, z1..z9, or all")->capture_default_str();
  valuation->add_option("--probes", a.probes_file, "JSON array of value vectors");
  add_common(valuation, a.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  return guarded([&]() -> int {
    if (app.got_subcommand(hom) || app.got_subcommand(ext))
      return with_field(a.common.field, [&](const auto& field) {
        return run_hom(a.common, field, a.quiver, a.m, a.n, app.got_subcommand(ext));
      });
    if (app.got_subcommand(five))
      return with_field(a.common.field, [&](const auto& field) {
        return run_five_term(a.common, field, a.quiver, a.x, a.m);
      });
    if (app.got_subcommand(perp))
      return with_field(a.common.field, [&](const auto& field) {
        return run_perp(a.common, field, a.quiver, a.x);
      });
    if (app.got_subcommand(sigma))
      return with_field(a.common.field, [&](const auto& field) {
        return run_sigma(a.common, field, a.quiver, a.x, a.probes, a.probes_file);
      });
    if (app.got_subcommand(verify))
      return with_field(a.common.field, [&](const auto& field) {
        return run_verify(a.common, field, a.quiver, a.x, a.probes, a.probes_file);
      });
    if (app.got_subcommand(telescope))
      return with_field(a.common.field, [&](const auto& field) {
        return run_telescope(a.common, field, a.quiver, a.x, a.probes);
      });
    return run_valuation(a.common, a.model, a.probes_file);
  });
}
