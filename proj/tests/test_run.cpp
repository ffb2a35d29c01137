#include <cmath>
#include <string>

#include "doctest.h"
#include "syskit/error.hpp"
#include "syskit/fixtures.hpp"
#include "syskit/report.hpp"
#include "syskit/run.hpp"

using namespace syskit;

namespace {

RunConfig config(std::initializer_list<std::pair<const char*, const char*>> kv) {
  RunConfig cfg;
  for (const auto& [k, v] : kv) set_config(cfg, k, v);
  return cfg;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("json floats carry 17 significant digits") {
  Json doc;
  doc["x"] = 0.1;
  doc["n"] = 3;
  doc["v"] = Json::array({1.0 / 3.0, 2});
  doc["bad"] = std::nan("");
  const std::string s = render_json(doc);
  CHECK(s.find("\"x\": 0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"n\": 3") != std::string::npos);
  CHECK(s.find("[0.33333333333333331, 2]") != std::string::npos);
  CHECK(s.find("\"bad\": null") != std::string::npos);
  CHECK(Json::parse(s)["x"].get<double>() == 0.1);
}

TEST_CASE("csv floats carry 12 significant digits") {
  Json doc;
  doc["a"]["b"] = 1.0 / 3.0;
  doc["list"] = Json::array({"x,y", 2});
  CHECK(render_csv(doc) == "a.b,0.333333333333\nlist.0,\"x,y\"\nlist.1,2\n");
  CHECK(render_csv_row({"calc", 0.1, true}) == "calc,0.1,true\n");
}

TEST_CASE("error objects are structured") {
  const auto e = error_object(ErrorCode::Parse, "cannot open x");
  CHECK(e["status"] == "error");
  CHECK(e["error"]["code"] == "PARSE");
  CHECK(e["error"]["value"] == 1);
}

TEST_CASE("config keys") {
  RunConfig cfg = config({{"ell", "4"}, {"eps", "max"}, {"const", "C0=2"}, {"log_base", "2"}, {"format", "csv"}});
  CHECK(*cfg.ell == 4.0);
  CHECK(*cfg.eps == "max");
  CHECK(cfg.consts.at("C0") == "2");
  CHECK(cfg.log_base == LogBase::Two);
  CHECK(cfg.format == ReportFormat::Csv);
  CHECK(code_of([&] { set_config(cfg, "ell", "four"); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { set_config(cfg, "const", "novalue"); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { set_config(cfg, "colour", "red"); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { set_config(cfg, "steiner", "9"); }) == ErrorCode::BadParams);
}

TEST_CASE("fixture generation") {
  const RunConfig cfg;
  const auto t = generate_fixture("flat-torus", {"4"}, cfg);
  CHECK(t.genus() == 1);
  CHECK(t.vertex_count() == 16);
  CHECK(t.area() == doctest::Approx(16.0));
  const auto ico = generate_fixture("sphere-subdiv", {"0"}, cfg);
  CHECK(ico.genus() == 0);
  CHECK(ico.face_count() == 20);
  CHECK(generate_fixture("hairy-torus", {"3", "0.1"}, cfg).genus() == 4);
  CHECK(generate_fixture("marked-sphere", {"8"}, cfg).marks().size() == 8);
  CHECK(code_of([&] { generate_fixture("flat-torus", {}, cfg); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { generate_fixture("klein-bottle", {"3"}, cfg); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { generate_fixture("pinched-genus2", {"0"}, cfg); }) == ErrorCode::BadParams);

  RunConfig j = config({{"seed", "11"}, {"const", "jitter=0.1"}});
  const auto a = generate_fixture("flat-torus", {"6"}, j);
  const auto b = generate_fixture("flat-torus", {"6"}, j);
  CHECK(a.edge(5).length == b.edge(5).length);
  CHECK(a.edge(5).length != 1.0);
}

TEST_CASE("short-loops report on the flat torus") {
  const auto m = flat_torus(8);
  RunInput in{&m, nullptr, "torus"};
  const auto out = run_command("short-loops", in, config({{"ell", "4"}, {"count", "2"}}));
  const auto& r = out.doc["result"];
  CHECK(out.doc["status"] == "ok");
  CHECK(r["rank"] == 2);
  CHECK(r["loops"].size() == 2);
  CHECK(r["bounds"].size() == 2);
  CHECK(r["loops"][0]["length"].get<double>() == 8.0);
  CHECK(out.flagged == 0);
  for (const auto& a : out.doc["audits"]) CHECK_FALSE(a["anchor"].get<std::string>().empty());
  CHECK(render(out, ReportFormat::Json) == render(run_command("short-loops", in, config({{"ell", "4"}, {"count", "2"}})),
                                                  ReportFormat::Json));
  CHECK(code_of([&] { run_command("short-loops", in, RunConfig{}); }) == ErrorCode::BadParams);
}

TEST_CASE("pants commands report valid decompositions") {
  const auto g2 = genus2_surface();
  RunInput in{&g2, nullptr, ""};
  for (const char* cmd : {"pants-reeb", "pants-full"}) {
    CAPTURE(cmd);
    const auto out = run_command(cmd, in, RunConfig{});
    const auto& d = out.doc["result"]["decomposition"];
    CHECK(d["valid"] == true);
    CHECK(d["loop_count"] == 3);
    CHECK(d["components"].size() == 2);
    CHECK(d["components"][0]["type"] == "pants");
    CHECK(out.flagged == 0);
  }
  const auto full = run_command("pants-full", in, RunConfig{});
  CHECK(full.doc["result"]["independent"].size() == 2);

  const auto s = marked_sphere(8);
  const auto sphere = run_command("pants-sphere", RunInput{&s, nullptr, ""}, RunConfig{});
  CHECK(sphere.doc["result"]["kappa"] == 4);
  CHECK(sphere.doc["result"]["decomposition"]["loop_count"] == 5);
  CHECK(sphere.flagged == 0);
}

TEST_CASE("calculators") {
  const RunInput none;
  const auto fat = run_command("calc-fat-torus", none, config({{"eps", "max"}}));
  CHECK(std::abs(fat.doc["result"]["a"].get<double>() - 0.91504) < 1e-4);
  CHECK(std::abs(fat.doc["result"]["h"].get<double>() - 1.16598) < 1e-4);
  CHECK(render(fat, ReportFormat::Csv).rfind("calc-fat-torus,1.76274717404,", 0) == 0);
  CHECK(code_of([&] { run_command("calc-fat-torus", none, config({{"eps", "3"}})); }) == ErrorCode::EpsOutOfRange);

  const auto plan = run_command("calc-plan", none, config({{"const", "h=3"}, {"const", "m=2"}, {"const", "ell=2.7"}}));
  CHECK(plan.doc["result"]["genus_formula"] == 87);
  CHECK(plan.doc["result"]["euler"]["triangles"] == 56);
  CHECK(plan.doc["result"]["euler"]["vertices"] == 24);
  CHECK(plan.doc["result"]["stated"]["consistent"] == false);

  const auto logh = run_command("calc-logh", none, config({{"const", "h=3"}, {"const", "m=2"}, {"const", "K=0.5"}}));
  CHECK(logh.doc["result"]["value"].get<double>() == doctest::Approx(1.4648).epsilon(1e-4));

  const auto bers = run_command("calc-bers", none, config({{"const", "g=2"}, {"const", "C=1"}}));
  CHECK(bers.doc["result"]["bp09_bound"].get<double>() == doctest::Approx(164.06).epsilon(1e-4));
  CHECK(bers.flagged == 1);

  const auto grid = run_command("hyp-fat-torus", none, RunConfig{});
  CHECK(grid.doc["result"]["violations"] == 0);
  CHECK(grid.flagged == 0);

  CHECK(code_of([&] { run_command("calc-logh", none, RunConfig{}); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { run_command("calc-nothing", none, RunConfig{}); }) == ErrorCode::BadParams);
}

TEST_CASE("graph calculators") {
  WeightedGraph k4(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.add_edge(u, v, 1.0);
  const RunInput in{nullptr, &k4, ""};
  const auto bst = run_command("calc-bst", in, RunConfig{});
  CHECK(bst.doc["result"]["systole"].get<double>() == 3.0);
  CHECK(bst.doc["result"]["bst_bound"].get<double>() == doctest::Approx(8.0 * std::log(4.0)));
  const auto greedy = run_command("calc-greedy", in, RunConfig{});
  const auto& steps = greedy.doc["result"]["steps"];
  REQUIRE(steps.size() == 3);
  CHECK(steps[0]["length"].get<double>() == 3.0);
  CHECK(steps[2]["length"].get<double>() == 3.0);
  CHECK(greedy.flagged == 0);
}

TEST_CASE("svg plot") {
  const auto svg = svg_plot("n,total\n4,1\n8,2\n", "a<b");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(code_of([] { svg_plot("n,total\n4\n", ""); }) == ErrorCode::Parse);
}
