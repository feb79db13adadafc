#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cupform/json_io.hpp"

using cupform::Json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env;
  if (!cmd.empty()) cmd += " ";
  cmd += std::string(CUPFORM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  RunResult r;
  r.out = std::move(out);
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  return r;
}

std::filesystem::path work_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cupform_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  auto path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

std::string error_code_of(const RunResult& r) {
  Json j = Json::parse(r.out);
  return j.at("error").at("code").get<std::string>();
}

}  // namespace

TEST_CASE("fixtures are listed and emitted") {
  RunResult list = run_cli("fixtures");
  REQUIRE(list.code == 0);
  Json j = Json::parse(list.out);
  CHECK(j["schema"] == "cupform/1");
  REQUIRE(j["fixtures"].is_array());
  CHECK(j["fixtures"].size() == 6);
  for (const auto& row : j["fixtures"]) {
    CHECK(row.contains("name"));
    CHECK(row.contains("about"));
  }

  RunResult unknown = run_cli("fixtures --name no-such-thing");
  CHECK(unknown.code == 2);
  CHECK(error_code_of(unknown) == "BAD_INPUT");
}

TEST_CASE("fixture output feeds straight back in") {
  auto form_path = (work_dir() / "degenerate.json").string();
  REQUIRE(run_cli("fixtures --name degenerate-cubic --out " + form_path).code ==
          0);

  RunResult h = run_cli("honest --form " + form_path);
  REQUIRE(h.code == 0);
  Json hj = Json::parse(h.out);
  CHECK(hj["honest"] == true);
  CHECK(hj["witness"].is_null());

  RunResult nd = run_cli("nondegenerate --form " + form_path);
  REQUIRE(nd.code == 0);
  Json nj = Json::parse(nd.out);
  CHECK(nj["status"] == "no");
  CHECK(nj["certificate_form"]["terms"].empty());
}

TEST_CASE("symbolic hypermatrix over the wire") {
  auto form_path = (work_dir() / "degenerate2.json").string();
  REQUIRE(run_cli("fixtures --name degenerate-cubic --out " + form_path).code ==
          0);
  RunResult r = run_cli("hessian --symbolic --form " + form_path);
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["shape"] == Json::array({5, 5}));
  REQUIRE(j["display"].size() == 25);
  CHECK(j["display"][5] == "1*x1");
  CHECK(j["display"][6] == "1*x0");
  CHECK(j["display"][7] == "0");
  CHECK(j["display"][8] == "1*x4");
  CHECK(j["display"][9] == "1*x3");
  // every entry re-parses under the form schema
  for (const auto& e : j["entries"]) (void)cupform::form_from_json(e);

  RunResult at = run_cli("hessian --form " + form_path +
                         " --point \"[1,0,0,0,0]\"");
  REQUIRE(at.code == 0);
  Json aj = Json::parse(at.out);
  REQUIRE(aj["entries"].size() == 25);
  for (int i = 0; i < 25; ++i)
    CHECK(aj["entries"][i] == (i == 6 ? "1" : "0"));

  RunResult neither = run_cli("hessian --form " + form_path);
  CHECK(neither.code == 2);
  CHECK(error_code_of(neither) == "BAD_INPUT");
}

TEST_CASE("membership and normal form subcommands") {
  auto form_path = (work_dir() / "degenerate3.json").string();
  REQUIRE(run_cli("fixtures --name degenerate-cubic --out " + form_path).code ==
          0);

  RunResult on = run_cli("wf-member --form " + form_path +
                         " --point \"[1,0,1,0,1]\"");
  REQUIRE(on.code == 0);
  Json oj = Json::parse(on.out);
  CHECK(oj["member"] == true);
  CHECK(oj["witness"]["f_value"] == "0");

  RunResult off = run_cli("wf-member --form " + form_path +
                          " --point \"[0,1,0,0,0]\"");
  REQUIRE(off.code == 0);
  CHECK(Json::parse(off.out)["member"] == false);

  RunResult nf = run_cli("normal-form --form " + form_path +
                         " --point \"[1,0,1,0,1]\"");
  REQUIRE(nf.code == 0);
  Json nj = Json::parse(nf.out);
  CHECK(nj["case"] == "vanishing");
  (void)cupform::change_from_json(nj["change_matrix"]);
  (void)cupform::form_from_json(nj["transformed_form"]);
  (void)cupform::form_from_json(nj["residual_form"]);

  RunResult bad = run_cli("normal-form --form " + form_path +
                          " --point \"[1,1,1,1,1]\"");
  CHECK(bad.code == 1);
  CHECK(error_code_of(bad) == "NOT_WF_MEMBER");

  RunResult zero = run_cli("wf-member --form " + form_path +
                           " --point \"[0,0,0,0,0]\"");
  CHECK(zero.code == 2);
  CHECK(error_code_of(zero) == "ZERO_VECTOR");
}

TEST_CASE("intersection data pipeline") {
  auto phi_path = (work_dir() / "fermat.json").string();
  auto form_path = (work_dir() / "fermat_form.json").string();
  REQUIRE(run_cli("fixtures --name fermat-cubic --out " + phi_path).code == 0);
  REQUIRE(run_cli("build-form --phi " + phi_path + " --out " + form_path)
              .code == 0);

  std::ifstream in(form_path);
  Json fj = Json::parse(in);
  cupform::Form f = cupform::form_from_json(fj);
  CHECK(f.num_vars() == 3);
  CHECK(f.coefficient(cupform::Monomial({3, 0, 0})) == cupform::Rational(1));

  RunResult back = run_cli("intersection-of --form " + form_path);
  REQUIRE(back.code == 0);
  Json bj = Json::parse(back.out);
  CHECK(bj["n"] == 3);
  CHECK(bj["basis"] == 3);
  CHECK(bj["values"].size() == 3);

  RunResult cand = run_cli("candidates --phi " + phi_path);
  REQUIRE(cand.code == 0);
  Json cj = Json::parse(cand.out);
  CHECK(cj["cap"] == 3);
  CHECK(cj["complete"] == true);
  CHECK(cj["candidates"].size() == 3);

  RunResult both = run_cli("candidates --phi " + phi_path + " --form " +
                           form_path);
  CHECK(both.code == 2);

  RunResult product = run_cli("fixtures --name product-fourfold");
  REQUIRE(product.code == 0);
  auto product_path = write_file("product.json", product.out);
  RunResult built = run_cli("build-form --phi " + product_path);
  REQUIRE(built.code == 0);
  cupform::Form pf = cupform::form_from_json(Json::parse(built.out));
  cupform::Form expect(2, 4);
  expect.add_term(cupform::Monomial({1, 3}), cupform::Rational(4));
  CHECK(pf == expect);
}

TEST_CASE("search determinism over the wire") {
  auto phi_path = (work_dir() / "fermat2.json").string();
  auto form_path = (work_dir() / "fermat_form2.json").string();
  REQUIRE(run_cli("fixtures --name fermat-cubic --out " + phi_path).code == 0);
  REQUIRE(run_cli("build-form --phi " + phi_path + " --out " + form_path)
              .code == 0);

  RunResult a = run_cli("wf-search --form " + form_path + " --seed 5");
  RunResult b = run_cli("wf-search --form " + form_path + " --seed 5");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  RunResult c = run_cli("wf-search --form " + form_path + " --seed 6");
  REQUIRE(c.code == 0);
  CHECK(Json::parse(a.out)["certified_points"] ==
        Json::parse(c.out)["certified_points"]);

  // environment seed is picked up, flag still wins
  RunResult env = run_cli("wf-search --form " + form_path, "CUPFORM_SEED=9");
  REQUIRE(env.code == 0);
  CHECK(Json::parse(env.out)["seed"] == 9);
  RunResult flag =
      run_cli("wf-search --form " + form_path + " --seed 3", "CUPFORM_SEED=9");
  REQUIRE(flag.code == 0);
  CHECK(Json::parse(flag.out)["seed"] == 3);
}

TEST_CASE("modification subcommands") {
  RunResult fam = run_cli("fixtures --name modified-cubic-family");
  REQUIRE(fam.code == 0);
  Json fj = Json::parse(fam.out);
  REQUIRE(fj["family"].size() == 4);

  auto base_path = write_file("base.json", fj["base_form"].dump());
  Json spec;
  spec["k"] = 1;
  spec["a"] = "1/6";
  spec["R"] = Json::array();
  {
    cupform::Form r1(1, 1);
    r1.add_term(cupform::Monomial({1}), cupform::make_rational(1, 2));
    spec["R"].push_back(cupform::to_json(r1));
  }
  auto spec_path = write_file("spec.json", spec.dump());
  RunResult blown = run_cli("blowup --form " + base_path + " --spec " +
                            spec_path);
  REQUIRE(blown.code == 0);
  CHECK(cupform::form_from_json(Json::parse(blown.out)) ==
        cupform::form_from_json(fj["family"][1]["form"]));

  auto member_path = write_file("member.json", fj["family"][3]["form"].dump());
  RunResult rep = run_cli("exceptional-rank --form " + member_path + " --k 1");
  REQUIRE(rep.code == 0);
  Json rj = Json::parse(rep.out);
  CHECK(rj["lower"] == 2);
  CHECK(rj["exact"] == 2);

  RunResult badk = run_cli("exceptional-rank --form " + member_path + " --k 3");
  CHECK(badk.code == 1);
  CHECK(error_code_of(badk) == "BAD_SHAPE");

  auto cubes_path = [&] {
    cupform::Form cubes(2, 3);
    cubes.add_term(cupform::Monomial({3, 0}), cupform::Rational(1));
    cubes.add_term(cupform::Monomial({0, 3}), cupform::Rational(1));
    return write_file("cubes.json", cupform::to_json(cubes).dump());
  }();
  RunResult pt = run_cli("blowup-point --form " + cubes_path +
                         " --override-a 7/2");
  REQUIRE(pt.code == 0);
  cupform::Form fy = cupform::form_from_json(Json::parse(pt.out));
  CHECK(fy.coefficient(cupform::Monomial({3, 0, 0})) ==
        cupform::make_rational(7, 2));
}

TEST_CASE("tensor subcommands") {
  auto tensor_path = write_file(
      "tensor.json",
      R"({"shape":[2,2,2],"entries":["1","0","0","1","0","-1","1","0"]})");
  RunResult hd = run_cli("hyperdet --tensor " + tensor_path);
  REQUIRE(hd.code == 0);
  Json hj = Json::parse(hd.out);
  CHECK(hj["value"] == "-4");
  CHECK(hj["zero"] == false);

  RunResult tr = run_cli("tensor-rank --tensor " + tensor_path);
  REQUIRE(tr.code == 0);
  Json tj = Json::parse(tr.out);
  CHECK(tj["lower"] == 2);
  CHECK(tj["upper"] == 2);
}

TEST_CASE("input failures exit with code 2") {
  RunResult missing = run_cli("honest --form /no/such/file.json");
  CHECK(missing.code == 2);
  CHECK(error_code_of(missing) == "BAD_INPUT");

  auto broken_path = write_file("broken.json", "{oops");
  RunResult broken = run_cli("honest --form " + broken_path);
  CHECK(broken.code == 2);
  CHECK(error_code_of(broken) == "BAD_SCHEMA");

  auto tagged_path = write_file(
      "tagged.json", R"({"schema":"cupform/9","vars":1,"degree":3,"terms":[]})");
  RunResult tagged = run_cli("honest --form " + tagged_path);
  CHECK(tagged.code == 2);
  CHECK(error_code_of(tagged) == "BAD_SCHEMA");

  RunResult unknown = run_cli("frobnicate");
  CHECK(unknown.code == 2);
}

TEST_CASE("domain failures exit with code 1") {
  auto quad_path = write_file(
      "quadric.json",
      R"({"vars":2,"degree":2,"terms":[{"exps":[2,0],"coef":"1"}]})");
  RunResult r = run_cli("hessian --symbolic --form " + quad_path);
  CHECK(r.code == 1);
  CHECK(error_code_of(r) == "DEGREE_TOO_LOW");
}

TEST_CASE("reports can be written to files") {
  auto phi_path = (work_dir() / "fermat3.json").string();
  REQUIRE(run_cli("fixtures --name fermat-cubic --out " + phi_path).code == 0);
  auto out_path = (work_dir() / "report.json").string();
  RunResult r = run_cli("build-form --phi " + phi_path + " --out " + out_path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  Json j = Json::parse(in);
  CHECK(j["schema"] == "cupform/1");
  CHECK(j["command"] == "build-form");
}
