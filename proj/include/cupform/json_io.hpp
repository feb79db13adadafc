#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "cupform/analysis.hpp"
#include "cupform/error.hpp"
#include "cupform/form.hpp"
#include "cupform/geometry.hpp"
#include "cupform/search.hpp"
#include "cupform/tensor.hpp"

namespace cupform {

using Json = nlohmann::json;

inline const Json& field(const Json& j, const char* key) {
  require(j.is_object(), ErrorCode::bad_schema,
          std::string("expected an object with key \"") + key + "\"");
  auto it = j.find(key);
  require(it != j.end(), ErrorCode::bad_schema,
          std::string("missing key \"") + key + "\"");
  return *it;
}

inline int int_from_json(const Json& j, const char* what) {
  require(j.is_number_integer(), ErrorCode::bad_schema,
          std::string(what) + " must be an integer");
  return j.get<int>();
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  require(j.is_string(), ErrorCode::bad_schema,
          "rationals are written as strings like \"3/4\"");
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline std::vector<Rational> rational_vector_from_json(const Json& j,
                                                       const char* what) {
  require(j.is_array(), ErrorCode::bad_schema,
          std::string(what) + " must be an array");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

inline Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline Json to_json(const Form& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json term;
    term["exps"] = m.exponents();
    term["coef"] = to_string(c);
    terms.push_back(std::move(term));
  }
  Json out;
  out["vars"] = f.num_vars();
  out["degree"] = f.degree();
  out["terms"] = std::move(terms);
  return out;
}

inline Form form_from_json(const Json& j) {
  int vars = int_from_json(field(j, "vars"), "vars");
  int degree = int_from_json(field(j, "degree"), "degree");
  require(vars >= 1, ErrorCode::bad_schema, "vars must be >= 1");
  require(degree >= 0, ErrorCode::bad_schema, "degree must be >= 0");
  Form f(vars, degree);
  const Json& terms = field(j, "terms");
  require(terms.is_array(), ErrorCode::bad_schema, "terms must be an array");
  for (const auto& t : terms) {
    const Json& exps = field(t, "exps");
    require(exps.is_array() && static_cast<int>(exps.size()) == vars,
            ErrorCode::bad_schema, "exps must list one exponent per variable");
    std::vector<int> e;
    for (const auto& x : exps) {
      int v = int_from_json(x, "exponent");
      require(v >= 0, ErrorCode::bad_schema, "exponents must be >= 0");
      e.push_back(v);
    }
    f.add_term(Monomial(std::move(e)), rational_from_json(field(t, "coef")));
  }
  return f;
}

inline Json to_json(const ProjPoint& p) {
  Json out;
  out["coords"] = to_json(p.coords());
  return out;
}

inline ProjPoint point_from_json(const Json& j) {
  if (j.is_array()) return ProjPoint(rational_vector_from_json(j, "coords"));
  return ProjPoint(rational_vector_from_json(field(j, "coords"), "coords"));
}

inline Json to_json(const LinearChange& a) {
  Json rows = Json::array();
  for (const auto& r : a.rows()) rows.push_back(to_json(r));
  Json out;
  out["matrix"] = std::move(rows);
  return out;
}

inline LinearChange change_from_json(const Json& j) {
  const Json& m = j.is_array() ? j : field(j, "matrix");
  require(m.is_array() && !m.empty(), ErrorCode::bad_schema,
          "matrix must be a nonempty array of rows");
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : m) rows.push_back(rational_vector_from_json(r, "row"));
  return LinearChange(std::move(rows));
}

inline Json to_json(const HyperTensor& t) {
  Json out;
  out["shape"] = t.shape();
  Json entries = Json::array();
  for (const auto& e : t.entries()) entries.push_back(to_string(e));
  out["entries"] = std::move(entries);
  return out;
}

inline HyperTensor tensor_from_json(const Json& j) {
  const Json& shape = field(j, "shape");
  require(shape.is_array() && !shape.empty(), ErrorCode::bad_schema,
          "shape must be a nonempty array");
  std::vector<int> s;
  for (const auto& d : shape) {
    int v = int_from_json(d, "axis length");
    require(v >= 1, ErrorCode::bad_schema, "axis lengths must be >= 1");
    s.push_back(v);
  }
  auto entries = rational_vector_from_json(field(j, "entries"), "entries");
  require(entries.size() == HyperTensor::size_from_shape(s),
          ErrorCode::bad_schema, "entry count does not match shape");
  return HyperTensor(std::move(s), std::move(entries));
}

inline Json to_json(const IntersectionData& d) {
  Json values = Json::array();
  for (const auto& [m, v] : d.values) {
    Json row;
    row["mono"] = m.exponents();
    row["value"] = to_string(v);
    values.push_back(std::move(row));
  }
  Json out;
  out["n"] = d.n;
  out["basis"] = d.basis_size;
  out["values"] = std::move(values);
  return out;
}

inline IntersectionData intersection_from_json(const Json& j) {
  IntersectionData d;
  d.n = int_from_json(field(j, "n"), "n");
  d.basis_size = int_from_json(field(j, "basis"), "basis");
  require(d.n >= 1, ErrorCode::bad_schema, "n must be >= 1");
  require(d.basis_size >= 1, ErrorCode::bad_schema, "basis must be >= 1");
  const Json& values = field(j, "values");
  require(values.is_array(), ErrorCode::bad_schema, "values must be an array");
  for (const auto& row : values) {
    const Json& mono = field(row, "mono");
    require(mono.is_array() && static_cast<int>(mono.size()) == d.basis_size,
            ErrorCode::bad_schema, "mono must list one exponent per class");
    std::vector<int> e;
    for (const auto& x : mono) {
      int v = int_from_json(x, "exponent");
      require(v >= 0, ErrorCode::bad_schema, "exponents must be >= 0");
      e.push_back(v);
    }
    Monomial m(std::move(e));
    require(m.degree() == d.n, ErrorCode::bad_schema,
            "mono must have total degree n");
    Rational v = rational_from_json(field(row, "value"));
    if (!is_zero(v)) d.values.emplace(std::move(m), std::move(v));
  }
  return d;
}

inline Json to_json(const BlowupSpec& s) {
  Json out;
  out["k"] = s.k;
  out["a"] = to_string(s.a);
  Json r = Json::array();
  for (const auto& f : s.R) r.push_back(to_json(f));
  out["R"] = std::move(r);
  return out;
}

inline BlowupSpec blowup_spec_from_json(const Json& j) {
  BlowupSpec s;
  s.k = int_from_json(field(j, "k"), "k");
  s.a = rational_from_json(field(j, "a"));
  const Json& r = field(j, "R");
  require(r.is_array(), ErrorCode::bad_schema, "R must be an array of forms");
  for (const auto& f : r) s.R.push_back(form_from_json(f));
  return s;
}

inline Json to_json(const WfPoint& w) {
  Json out;
  out["point"] = to_json(w.point);
  out["f_value"] = to_string(w.f_value);
  out["c"] = to_string(w.scalar);
  out["ell"] = to_json(w.ell);
  return out;
}

inline Json to_json(const NumericCandidate& c) {
  Json out;
  out["point"] = c.unit_point;
  out["residual"] = c.residual;
  return out;
}

inline Json to_json(const WfSearchResult& r) {
  Json out;
  Json certified = Json::array();
  for (const auto& w : r.certified) certified.push_back(to_json(w));
  out["certified_points"] = std::move(certified);
  out["complete"] = r.complete;
  Json numeric = Json::array();
  for (const auto& c : r.numeric_only) numeric.push_back(to_json(c));
  out["numeric_candidates"] = std::move(numeric);
  return out;
}

inline Json to_json(const CandidateSet& c) {
  Json out;
  out["cap"] = c.cap;
  out["complete"] = c.complete;
  Json points = Json::array();
  for (const auto& w : c.points) points.push_back(to_json(w));
  out["candidates"] = std::move(points);
  return out;
}

inline Json to_json(const NormalFormResult& r) {
  Json out;
  out["case"] = r.case_tag;
  out["change_matrix"] = to_json(r.change);
  out["leading_scalar"] = to_string(r.leading);
  out["transformed_form"] = to_json(r.transformed);
  out["residual_form"] = to_json(r.residual);
  return out;
}

inline Json to_json(const HonestyResult& h) {
  Json out;
  out["honest"] = h.honest;
  out["witness"] = h.witness ? to_json(*h.witness) : Json(nullptr);
  return out;
}

inline Json to_json(const NondegeneracyResult& r) {
  Json out;
  switch (r.status) {
    case TriState::yes: out["status"] = "yes"; break;
    case TriState::no: out["status"] = "no"; break;
    case TriState::inconclusive: out["status"] = "inconclusive"; break;
  }
  out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  out["certificate_form"] =
      r.certificate_form ? to_json(*r.certificate_form) : Json(nullptr);
  out["note"] = r.note;
  return out;
}

inline Json to_json(const RankOneTerm& t) {
  Json out;
  out["coef"] = to_string(t.coef);
  Json factors = Json::array();
  for (const auto& v : t.factors) factors.push_back(to_json(v));
  out["factors"] = std::move(factors);
  return out;
}

inline Json to_json(const RankBounds& b) {
  Json out;
  out["lower"] = b.lower;
  out["upper"] = b.upper ? Json(*b.upper) : Json(nullptr);
  out["certificate"] = b.certificate;
  Json dec = Json::array();
  for (const auto& t : b.decomposition) dec.push_back(to_json(t));
  out["decomposition"] = std::move(dec);
  return out;
}

inline Json to_json(const LemmaTrickResult& r) {
  Json out;
  out["bound"] = r.bound;
  out["q"] = r.q;
  out["t"] = r.t;
  out["exact_t"] = r.exact_t;
  out["samples_checked"] = r.samples_checked;
  return out;
}

inline Json to_json(const ExceptionalRankReport& r) {
  Json out;
  out["k"] = r.k;
  out["lower"] = r.lower;
  out["exact"] = r.exact ? Json(*r.exact) : Json(nullptr);
  out["method"] = r.method;
  out["q"] = r.q;
  out["t"] = r.t;
  out["samples_checked"] = r.samples_checked;
  out["caller_certified"] = r.caller_certified;
  return out;
}

}  // namespace cupform
