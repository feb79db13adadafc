// Command line front end: parse forms, intersection data, and tensors from
// JSON files, run the analysis, and emit deterministic JSON reports.
//
// Exit codes: 0 success, 1 domain error (structured error JSON on stdout),
// 2 malformed input or usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cupform/cupform.hpp"
#include "cupform/json_io.hpp"

namespace {

using cupform::Json;

constexpr const char* kSchema = "cupform/1";

// Carries an input-phase failure out to main; compute-phase failures travel
// as cupform::Error and exit 1 instead.
struct CliFailure {
  int exit_code;
  std::string code;
  std::string message;
};

[[noreturn]] void input_fail(const std::string& code,
                             const std::string& message) {
  throw CliFailure{2, code, message};
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    input_fail("BAD_SCHEMA", what + ": " + e.what());
  }
}

void check_schema_tag(const Json& j, const std::string& what) {
  if (!j.is_object()) return;
  auto it = j.find("schema");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchema)
    input_fail("BAD_SCHEMA", what + ": unsupported schema tag");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_fail("BAD_INPUT", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j = parse_json_text(buf.str(), path);
  check_schema_tag(j, path);
  return j;
}

// Reclassify schema errors thrown while decoding an input as exit-2 failures.
template <class F>
auto parse_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const cupform::Error& e) {
    input_fail(cupform::error_code_name(e.code()), e.what());
  }
}

struct Inputs {
  std::string form_path, phi_path, tensor_path, spec_path;
  std::string point_text, override_a_text, out_path, fixture_name;
  std::uint64_t seed = 0;
  int starts = 64;
  long rat_depth = 1000000;
  int k = 0;
  int samples = 200;
  bool symbolic = false;
};

cupform::Form load_form(const Inputs& in) {
  Json j = read_json_file(in.form_path);
  return parse_input([&] { return cupform::form_from_json(j); });
}

cupform::IntersectionData load_phi(const Inputs& in) {
  Json j = read_json_file(in.phi_path);
  return parse_input([&] { return cupform::intersection_from_json(j); });
}

cupform::HyperTensor load_tensor(const Inputs& in) {
  Json j = read_json_file(in.tensor_path);
  return parse_input([&] { return cupform::tensor_from_json(j); });
}

cupform::ProjPoint load_point(const Inputs& in) {
  Json j = parse_json_text(in.point_text, "--point");
  return parse_input([&] { return cupform::point_from_json(j); });
}

cupform::WfSearchConfig search_config(const Inputs& in) {
  cupform::WfSearchConfig cfg;
  cfg.seed = in.seed;
  cfg.max_starts = in.starts;
  cfg.rationalization_depth = in.rat_depth;
  return cfg;
}

// ---------------------------------------------------------------------------
// Embedded fixtures: the worked inputs every report in the documentation and
// test suite refers back to, reproducible with one command.

cupform::Form degenerate_cubic() {
  using namespace cupform;
  Form f(5, 3);
  f.add_term(Monomial({1, 2, 0, 0, 0}), make_rational(1, 2));
  f.add_term(Monomial({0, 1, 0, 1, 1}), Rational(1));
  f.add_term(Monomial({0, 0, 1, 2, 0}), make_rational(1, 2));
  return f;
}

Json point_list(const std::vector<std::vector<const char*>>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) {
    Json row = Json::array();
    for (const char* c : p) row.push_back(c);
    out.push_back(std::move(row));
  }
  return out;
}

Json fixture_degenerate_cubic() { return cupform::to_json(degenerate_cubic()); }

Json fixture_rank_one_conic() {
  Json out;
  out["form"] = cupform::to_json(degenerate_cubic());
  out["members"] = point_list({{"0", "0", "1", "0", "0"},
                               {"1", "0", "1", "0", "1"},
                               {"1", "0", "1", "0", "-1"},
                               {"4", "0", "1", "0", "2"},
                               {"1/4", "0", "1", "0", "1/2"}});
  out["non_members"] = point_list({{"0", "1", "0", "0", "0"},
                                   {"0", "0", "0", "1", "0"},
                                   {"1", "1", "1", "1", "1"},
                                   {"1", "0", "1", "0", "2"},
                                   {"1", "1", "0", "0", "0"}});
  return out;
}

Json fixture_product_fourfold() {
  cupform::IntersectionData d;
  d.n = 4;
  d.basis_size = 2;
  d.values.emplace(cupform::Monomial({1, 3}), cupform::Rational(1));
  return cupform::to_json(d);
}

Json fixture_fermat_cubic() {
  cupform::IntersectionData d;
  d.n = 3;
  d.basis_size = 3;
  for (int i = 0; i < 3; ++i)
    d.values.emplace(cupform::Monomial::unit(3, i, 3), cupform::Rational(1));
  return cupform::to_json(d);
}

// One-variable base x^n modified along a curve: a/n! x_0^n + x_0^{n-1}x_1/(n-1)!
// + x_1^n, for several top self-intersection numbers a.
Json modified_family(int n) {
  using namespace cupform;
  Form fx(1, n);
  fx.add_term(Monomial({n}), Rational(1));
  Form r1(1, 1);
  r1.add_term(Monomial({1}), Rational(1) / Rational(integer_factorial(
                                 static_cast<unsigned>(n - 1))));
  Json family = Json::array();
  for (int av : {0, 1, -1, 5}) {
    BlowupSpec spec{1, Rational(av) / Rational(integer_factorial(
                           static_cast<unsigned>(n))), {r1}};
    Json row;
    row["top_self_intersection"] = av;
    row["form"] = to_json(blowup_form(fx, spec));
    family.push_back(std::move(row));
  }
  Json out;
  out["k"] = 1;
  out["base_form"] = to_json(fx);
  out["family"] = std::move(family);
  return out;
}

struct Fixture {
  const char* name;
  const char* about;
  Json (*build)();
};

const Fixture kFixtures[] = {
    {"degenerate-cubic",
     "five-variable cubic that is honest but has identically zero "
     "hypermatrix determinant",
     fixture_degenerate_cubic},
    {"rank-one-conic",
     "the same cubic with certified rank-one points along a conic plus "
     "rejected control points",
     fixture_rank_one_conic},
    {"product-fourfold",
     "intersection numbers of the product of a line with a threefold",
     fixture_product_fourfold},
    {"fermat-cubic", "diagonal cubic intersection numbers on three classes",
     fixture_fermat_cubic},
    {"modified-cubic-family",
     "one-class cubics modified along a curve, four top self-intersections",
     [] { return modified_family(3); }},
    {"modified-quartic-family",
     "one-class quartics modified along a curve, four top self-intersections",
     [] { return modified_family(4); }},
};

// ---------------------------------------------------------------------------

void emit(const Json& report, const std::string& out_path) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) input_fail("BAD_INPUT", "cannot write " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cupform;

  CLI::App app{"exact analysis of intersection forms on second cohomology"};
  app.require_subcommand(1);

  Inputs in;
  Json report;
  std::string command;

  auto make_sub = [&](const char* name, const char* about) {
    CLI::App* s = app.add_subcommand(name, about);
    s->add_option("--out", in.out_path, "write the report to a file");
    return s;
  };
  auto opt_form = [&](CLI::App* s, bool required = true) {
    auto* o = s->add_option("--form", in.form_path, "form file (JSON)");
    if (required) o->required();
  };
  auto opt_point = [&](CLI::App* s, bool required = true) {
    auto* o = s->add_option("--point", in.point_text,
                            "point, inline JSON coordinate array");
    if (required) o->required();
  };
  auto opt_search = [&](CLI::App* s) {
    s->add_option("--seed", in.seed, "random seed")->envname("CUPFORM_SEED");
    s->add_option("--starts", in.starts, "numeric multistart count");
    s->add_option("--rat-depth", in.rat_depth,
                  "denominator cap when rationalizing numeric roots");
  };

  auto* hessian =
      make_sub("hessian", "derivative hypermatrix, symbolic or at a point");
  opt_form(hessian);
  opt_point(hessian, false);
  hessian->add_flag("--symbolic", in.symbolic,
                    "emit the hypermatrix of entry forms");
  hessian->callback([&] {
    command = "hessian";
    Form f = load_form(in);
    const bool at_point = !in.point_text.empty();
    if (in.symbolic == at_point)
      input_fail("BAD_INPUT", "choose exactly one of --symbolic or --point");
    if (in.symbolic) {
      FormTensor st = hessian_symbolic(f);
      Json entries = Json::array();
      Json display = Json::array();
      for (const Form& e : st.entries) {
        entries.push_back(to_json(e));
        display.push_back(e.str());
      }
      report["shape"] = st.shape;
      report["entries"] = std::move(entries);
      report["display"] = std::move(display);
    } else {
      ProjPoint p = load_point(in);
      HyperTensor h = hessian_at(f, p);
      report = to_json(h);
      report["point"] = to_json(p);
    }
  });

  auto* honest_cmd =
      make_sub("honest", "does every nonzero vector give a nonzero hypermatrix");
  opt_form(honest_cmd);
  honest_cmd->callback([&] {
    command = "honest";
    report = to_json(honest(load_form(in)));
  });

  auto* nondeg = make_sub(
      "nondegenerate",
      "does the hypermatrix determinant or hyperdeterminant vanish identically");
  opt_form(nondeg);
  nondeg->callback([&] {
    command = "nondegenerate";
    report = to_json(nondegenerate(load_form(in)));
  });

  auto* rank_at =
      make_sub("rank-at", "tensor rank bounds of the hypermatrix at a point");
  opt_form(rank_at);
  opt_point(rank_at);
  rank_at->callback([&] {
    command = "rank-at";
    Form f = load_form(in);
    ProjPoint p = load_point(in);
    HyperTensor h = hessian_at(f, p);
    report = to_json(rank_bounds(h));
    report["shape"] = h.shape();
    report["point"] = to_json(p);
  });

  auto* member = make_sub("wf-member", "certify a rank-one point of a form");
  opt_form(member);
  opt_point(member);
  member->callback([&] {
    command = "wf-member";
    Form f = load_form(in);
    ProjPoint p = load_point(in);
    auto w = is_wf_member(f, p);
    report["member"] = bool(w);
    report["witness"] = w ? to_json(*w) : Json(nullptr);
  });

  auto* search = make_sub(
      "wf-search", "enumerate certified rank-one points of an honest form");
  opt_form(search);
  opt_search(search);
  search->callback([&] {
    command = "wf-search";
    Form f = load_form(in);
    report = to_json(wf_search(f, search_config(in)));
    report["seed"] = in.seed;
  });

  auto* normal =
      make_sub("normal-form", "linear change putting a rank-one point in "
                              "standard position");
  opt_form(normal);
  opt_point(normal);
  normal->callback([&] {
    command = "normal-form";
    Form f = load_form(in);
    ProjPoint p = load_point(in);
    auto w = is_wf_member(f, p);
    if (!w)
      fail(ErrorCode::not_wf_member,
           "the point is not a rank-one point of this form");
    report = to_json(normal_form_at(f, *w));
  });

  auto* peel_cmd = make_sub(
      "peel", "rank-one points found by recursing into normal-form residuals");
  opt_form(peel_cmd);
  peel_cmd->callback([&] {
    command = "peel";
    Form f = load_form(in);
    Json points = Json::array();
    for (const WfPoint& w : peel(f)) points.push_back(to_json(w));
    report["points"] = std::move(points);
  });

  auto* build = make_sub(
      "build-form", "degree-n form attached to top intersection numbers");
  build->add_option("--phi", in.phi_path, "intersection data file (JSON)")
      ->required();
  build->callback([&] {
    command = "build-form";
    report = to_json(form_from_intersection(load_phi(in)));
  });

  auto* inter = make_sub("intersection-of",
                         "top intersection numbers recovered from a form");
  opt_form(inter);
  inter->callback([&] {
    command = "intersection-of";
    report = to_json(intersection_from_form(load_form(in)));
  });

  auto* blowup_cmd = make_sub(
      "blowup", "insert an exceptional class in front of a base form");
  opt_form(blowup_cmd);
  blowup_cmd
      ->add_option("--spec", in.spec_path,
                   "modification data file (JSON: k, a, R)")
      ->required();
  blowup_cmd->callback([&] {
    command = "blowup";
    Form f = load_form(in);
    Json sj = read_json_file(in.spec_path);
    BlowupSpec spec = parse_input([&] { return blowup_spec_from_json(sj); });
    report = to_json(blowup_form(f, spec));
  });

  auto* blowup_pt = make_sub(
      "blowup-point", "modification at a point, no correction forms");
  opt_form(blowup_pt);
  blowup_pt->add_option("--override-a", in.override_a_text,
                        "top self-intersection of the new class (rational)");
  blowup_pt->callback([&] {
    command = "blowup-point";
    Form f = load_form(in);
    std::optional<Rational> a;
    if (!in.override_a_text.empty())
      a = parse_input([&] { return parse_rational(in.override_a_text); });
    report = to_json(blowup_point(f, a));
  });

  auto* exc_rank = make_sub(
      "exceptional-rank",
      "certified rank bound at the exceptional basis point of a modified form");
  opt_form(exc_rank);
  opt_point(exc_rank, false);
  exc_rank->add_option("--k", in.k, "dimension of the modified center")
      ->required();
  exc_rank->add_option("--samples", in.samples,
                       "random pencil samples when k = 2");
  exc_rank->add_option("--seed", in.seed, "random seed")
      ->envname("CUPFORM_SEED");
  exc_rank->callback([&] {
    command = "exceptional-rank";
    Form f = load_form(in);
    ProjPoint p = in.point_text.empty() ? ProjPoint::basis(f.num_vars(), 0)
                                        : load_point(in);
    report = to_json(
        exceptional_rank_report(f, p, in.k, in.samples, in.seed));
  });

  auto* cand = make_sub(
      "candidates",
      "candidate exceptional classes: certified rank-one points off the form's "
      "zero locus");
  opt_form(cand, false);
  cand->add_option("--phi", in.phi_path, "intersection data file (JSON)");
  opt_search(cand);
  cand->callback([&] {
    command = "candidates";
    const bool have_form = !in.form_path.empty();
    const bool have_phi = !in.phi_path.empty();
    if (have_form == have_phi)
      input_fail("BAD_INPUT", "choose exactly one of --form or --phi");
    Form f = have_form ? load_form(in) : form_from_intersection(load_phi(in));
    report = to_json(candidate_exceptionals(f, search_config(in)));
    report["seed"] = in.seed;
  });

  auto* trank = make_sub("tensor-rank", "rank bounds for a rational tensor");
  trank->add_option("--tensor", in.tensor_path, "tensor file (JSON)")
      ->required();
  trank->callback([&] {
    command = "tensor-rank";
    report = to_json(rank_bounds(load_tensor(in)));
  });

  auto* hyper = make_sub("hyperdet",
                         "degree-4 hyperdeterminant of a 2x2x2 tensor");
  hyper->add_option("--tensor", in.tensor_path, "tensor file (JSON)")
      ->required();
  hyper->callback([&] {
    command = "hyperdet";
    Rational v = cayley_hyperdet_222(load_tensor(in));
    report["value"] = to_string(v);
    report["zero"] = is_zero(v);
  });

  auto* fixtures = make_sub(
      "fixtures", "embedded worked inputs; name one to emit it as JSON");
  fixtures->add_option("--name", in.fixture_name, "fixture to emit");
  fixtures->callback([&] {
    command = "fixtures";
    if (in.fixture_name.empty()) {
      Json list = Json::array();
      for (const Fixture& fx : kFixtures) {
        Json row;
        row["name"] = fx.name;
        row["about"] = fx.about;
        list.push_back(std::move(row));
      }
      report["fixtures"] = std::move(list);
      return;
    }
    for (const Fixture& fx : kFixtures) {
      if (in.fixture_name == fx.name) {
        report = fx.build();
        report["name"] = fx.name;
        return;
      }
    }
    input_fail("BAD_INPUT", "unknown fixture " + in.fixture_name);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    Json err;
    err["schema"] = kSchema;
    err["error"] = {{"code", "BAD_INPUT"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const CliFailure& f) {
    Json err;
    err["schema"] = kSchema;
    err["error"] = {{"code", f.code}, {"message", f.message}};
    std::cout << err.dump(2) << "\n";
    return f.exit_code;
  } catch (const Error& e) {
    Json err;
    err["schema"] = kSchema;
    err["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    Json err;
    err["schema"] = kSchema;
    err["error"] = {{"code", "INTERNAL"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  }

  report["schema"] = kSchema;
  report["command"] = command;
  try {
    emit(report, in.out_path);
  } catch (const CliFailure& f) {
    Json err;
    err["schema"] = kSchema;
    err["error"] = {{"code", f.code}, {"message", f.message}};
    std::cout << err.dump(2) << "\n";
    return f.exit_code;
  }
  return 0;
}
