#include "symconv/error.hpp"
#include "symconv/harness.hpp"
#include "symconv/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace symconv;

namespace {

const CheckResult* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

VerificationConfig small(const std::string& preset) {
  VerificationConfig c;
  c.preset = preset;
  c.samples = 2000;
  return c;
}

}  // namespace

TEST_CASE("empty report renders as an empty JSON document") {
  Report r;
  CHECK(render(r, Format::Json) == "{}\n");
  CHECK(Json::parse(render(r, Format::Json)).empty());
  CHECK(report_from_json(Json::object()).empty());
}

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    VerificationConfig c;
    mutate(c);
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("ConfigError"), Error);
  };
  bad([](VerificationConfig& c) { c.samples = 0; });
  bad([](VerificationConfig& c) { c.radii = {}; });
  bad([](VerificationConfig& c) { c.radii = {2.0, 1.0}; });
  bad([](VerificationConfig& c) { c.radii = {1.0, 1.0}; });
  bad([](VerificationConfig& c) { c.tol = 0; });
  bad([](VerificationConfig& c) { c.preset = "sl4"; });
  CHECK_THROWS_WITH_AS(parse_check("everything"), doctest::Contains("ConfigError"), Error);
  CHECK_THROWS_WITH_AS(parse_format("png"), doctest::Contains("ConfigError"), Error);
  for (auto c : all_checks()) CHECK(parse_check(check_name(c)) == c);
}

TEST_CASE("singular log a is only accepted by the limits check") {
  VerificationConfig c = small("sl3_so21");
  c.a_log = QVector{1, 2};  // on the alpha_12 wall
  CHECK_THROWS_WITH_AS(verify_main(c), doctest::Contains("ConfigError"), Error);
  c.checks = {Check::Limits};
  Report r = run(c);
  CHECK(r.pass());
}

TEST_CASE("limits at a = e") {
  SUBCASE("sigma = theta: everything at 0") {
    VerificationConfig c = small("kostant_sl2");
    c.a_log = QVector{0};
    c.checks = {Check::Limits};
    Report r = run(c);
    CHECK(r.pass());
    REQUIRE(r.omega_vertices.size() == 1);
    CHECK(r.omega_generators.empty());
    CHECK(find(r, "limits")->metrics.at("slack.limit") >= -1e-9);
  }
  SUBCASE("SL(2)/SO(1,1): the ray through H_alpha") {
    VerificationConfig c = small("sl2_so11");
    c.a_log = QVector{0};
    c.checks = {Check::Limits};
    CHECK(run(c).pass());
  }
}

TEST_CASE("main check passes on every preset and reports coverage") {
  for (const auto& preset : Realization::preset_names()) {
    CAPTURE(preset);
    VerificationConfig c = small(preset);
    if (preset == "sl3_so21") c.samples = 20000;
    c.checks = {Check::Main, Check::NoLine, Check::InclusionCone};
    Report r = run(c);
    CHECK(find(r, "main.inclusion")->pass);
    CHECK(find(r, "main.inclusion")->count == c.samples);
    CHECK(find(r, "no_line")->pass);
    CHECK(find(r, "inclusion_cone")->pass);
    CHECK(find(r, "main.cone_coverage")->pass);
    CHECK(r.samples.size() == c.samples);
  }
}

TEST_CASE("coverage metrics do not increase along the radius schedule") {
  VerificationConfig c = small("sl3_so21");
  c.radii = {1.0, 2.0, 4.0};
  Report r = verify_main(c);
  const auto& m = find(r, "main.vertices")->metrics;
  CHECK(m.at("vertex_distance.r1") <= m.at("vertex_distance.r0"));
  CHECK(m.at("vertex_distance.r2") <= m.at("vertex_distance.r1"));
  const auto& g = find(r, "main.cone_coverage")->metrics;
  CHECK(g.at("angle_gap.r1") <= g.at("angle_gap.r0"));
  CHECK(g.at("angle_gap.r2") <= g.at("angle_gap.r1"));
  CHECK(r.samples.size() == 3 * c.samples);
}

TEST_CASE("failures keep at most max_witnesses witnesses and the run continues") {
  VerificationConfig c = small("sl3_so21");
  c.vertex_bound = 1e-300;
  c.max_witnesses = 1;
  c.checks = {Check::Main, Check::NoLine};
  Report r = run(c);
  const auto* v = find(r, "main.vertices");
  CHECK(!v->pass);
  CHECK(v->failures == 2);
  CHECK(v->witnesses.size() == 1);
  CHECK(!v->witnesses[0].point.empty());
  CHECK(find(r, "no_line") != nullptr);
  CHECK(!r.pass());
}

TEST_CASE("determinism: identical configs give byte-identical JSON and CSV") {
  VerificationConfig c = small("group_sl2");
  c.checks = {Check::Main, Check::GK};
  c.samples = 500;
  Report a = run(c), b = run(c);
  CHECK(render(a, Format::Json) == render(b, Format::Json));
  CHECK(render(a, Format::Csv) == render(b, Format::Csv));
  c.seed = 2;
  CHECK(render(run(c), Format::Json) != render(a, Format::Json));
}

TEST_CASE("runtime appears only when timing is requested") {
  VerificationConfig c = small("sl2_so11");
  c.samples = 100;
  CHECK(!Json::parse(render(run(c), Format::Json)).contains("runtime_s"));
  c.timing = true;
  CHECK(Json::parse(render(run(c), Format::Json)).contains("runtime_s"));
}

TEST_CASE("CSV has one row per sample and a_q coordinates") {
  VerificationConfig c = small("sl3_so21");
  c.samples = 777;
  Report r = run(c);
  std::string csv = render(r, Format::Csv);
  CHECK(count_lines(csv) == 1 + 777);
  CHECK(csv.rfind("radius_index,q0,q1,slack\n", 0) == 0);
  VerificationConfig g = small("group_sl2");
  g.samples = 10;
  CHECK(render(run(g), Format::Csv).rfind("radius_index,q0,slack\n", 0) == 0);
}

TEST_CASE("SVG of an SL(3)/SO(2,1) run has the outline and the scatter") {
  VerificationConfig c = small("sl3_so21");
  c.samples = 300;
  std::string svg = render(run(c), Format::Svg);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 300);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("report JSON round trip") {
  VerificationConfig c = small("sl3_so21");
  c.samples = 200;
  c.checks = {Check::Main, Check::Hessian};
  c.hessian_X = 3;
  c.timing = true;
  Report r = run(c);
  std::string j = render(r, Format::Json);
  Report back = report_from_json(Json::parse(j));
  CHECK(render(back, Format::Json) == j);
  CHECK(render(back, Format::Csv) == render(r, Format::Csv));
}

TEST_CASE("emit_report writes files and reports IO errors") {
  Report r;
  std::string path = "symconv_test_report.json";
  emit_report(r, Format::Json, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "{}\n");
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(emit_report(r, Format::Json, "/nonexistent-dir/x.json"), doctest::Contains("IoError"), Error);
}

TEST_CASE("config JSON overlays the defaults") {
  auto c = config_from_json(Json::parse(R"({"preset": "sl2_so11", "a_log": ["-1/2"], "radius": [1, 2],
                                            "checks": ["main", "limits"], "seed": 9, "sampling": {"mode": "cartan"}})"));
  CHECK(c.preset == "sl2_so11");
  CHECK(*c.a_log == QVector{ratio(-1, 2)});
  CHECK(c.radii == std::vector<double>{1, 2});
  CHECK(c.checks == std::set<Check>{Check::Main, Check::Limits});
  CHECK(c.seed == 9);
  CHECK(c.sampling.mode == SamplingMode::Cartan);
  CHECK(c.samples == VerificationConfig{}.samples);
  CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"sample": 3})")), doctest::Contains("ConfigError"), Error);
  CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"samples": "many"})")), doctest::Contains("ConfigError"), Error);
}

TEST_CASE("closed forms, Gindikin-Karpelevic, Hessian and critical image checks pass on small runs") {
  for (const auto& preset : Realization::preset_names()) {
    CAPTURE(preset);
    VerificationConfig c = small(preset);
    c.samples = preset == "sl3_so21" ? 3000 : 300;  // gk coverage over 36 pairs
    c.hessian_X = 10;
    c.pattern_X = 3;
    c.checks = {Check::Kostant, Check::GK, Check::Hessian, Check::CriticalImage};
    Report r = run(c);
    for (const auto& ch : r.checks) {
      CAPTURE(ch.name);
      CHECK(ch.pass);
    }
    CHECK(find(r, "kostant")->skipped == (preset != "kostant_sl2" && preset != "sl2_so11"));
  }
}

TEST_CASE("bounded-preimage monitor") {
  auto monitored = [](const std::string& preset) {
    VerificationConfig c = small(preset);
    c.radii = {1, 2, 4, 8};
    return find(verify_main(c), "main.preimage")->metrics;
  };
  SUBCASE("compact quotients read zero") {
    for (const std::string p : {"kostant_sl2", "group_sl2"}) CHECK(monitored(p).at("max_distance.r3") == doctest::Approx(0).epsilon(1e-9));
  }
  SUBCASE("SL(2)/SO(1,1): the hyperbolic parameter saturates") {
    // |s| <= asinh(sqrt((e^{2y} - e^{2t}) / (2 cosh 2t))) with y the window in H_alpha units
    auto m = monitored("sl2_so11");
    const double y = m.at("window") / std::sqrt(8.0), t = 1;
    const double s_max = std::asinh(std::sqrt((std::exp(2 * y) - std::exp(2 * t)) / (2 * std::cosh(2 * t))));
    CHECK(m.at("max_distance.r3") - m.at("max_distance.r2") < 0.01);
    CHECK(m.at("max_distance.r3") > 0);
    CHECK(m.at("max_distance.r3") <= s_max + 1e-9);
    CHECK(m.at("max_distance.r3") >= s_max - 0.05);
  }
}
