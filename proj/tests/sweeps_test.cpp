#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "catchannel/analytic.hpp"
#include "catchannel/errors.hpp"
#include "catchannel/sweeps.hpp"

using namespace catchannel;

namespace {

constexpr double kPi = std::numbers::pi;

std::string csv_of(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

SweepSpec small_spec() {
  SweepSpec spec;
  spec.axes = {{AxisName::r, 0.0, 2.0, 9, Spacing::linear}, {AxisName::g, 1.0, 1.01, 3, Spacing::linear}};
  Series s;
  s.label = "a";
  s.cat.alpha0 = 5.0;
  s.ch.t = 0.999;
  spec.series = {s};
  spec.outputs = {Output::visibility, Output::idler_mean, Output::env_mean};
  return spec;
}

}  // namespace

TEST_CASE("axis parsing") {
  const Axis a = parse_axis("r:0:4:81");
  CHECK(a.name == AxisName::r);
  CHECK(a.points == 81);
  CHECK(a.values().front() == 0.0);
  CHECK(a.values().back() == 4.0);
  CHECK(a.values()[40] == doctest::Approx(2.0));

  const Axis l = parse_axis("alpha0:1:1000:4:log");
  CHECK(l.spacing == Spacing::log);
  const auto v = l.values();
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v[3] == doctest::Approx(1000.0));

  CHECK_THROWS_AS(parse_axis("r:0:4"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("q:0:4:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:0:4:1"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:4:0:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:x:4:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("g:0.5:2:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("t:0:1:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("t:0.5:1.5:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("alpha0:0:1:5:log"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:0:1:5:cubic"), InvalidArgument);
}

TEST_CASE("spec validation") {
  SweepSpec spec = small_spec();
  spec.outputs = {Output::optimal_r};
  CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
  spec = small_spec();
  spec.axes.push_back(spec.axes[0]);
  CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
  spec = small_spec();
  spec.series.clear();
  CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
  spec = small_spec();
  spec.outputs.clear();
  CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
  CHECK(parse_output("visibility") == Output::visibility);
  CHECK_FALSE(parse_output("nonsense"));
}

TEST_CASE("row order and values") {
  const SweepSpec spec = small_spec();
  const Table t = run_sweep(spec);
  REQUIRE(t.rows.size() == 27);
  CHECK(t.columns == sweep_columns(spec));
  const auto r = t.numeric_column("r");
  const auto g = t.numeric_column("g");
  CHECK(r[0] == 0.0);
  CHECK(r[2] == 0.0);
  CHECK(r[3] == doctest::Approx(0.25));
  CHECK(g[1] == doctest::Approx(1.005));
  const auto v = t.numeric_column("visibility");
  const auto lv = t.numeric_column("log10_visibility");
  const auto xi = t.numeric_column("xi");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CatParams cat;
    cat.alpha0 = 5.0;
    const ChannelParams ch{r[i], default_xi(cat), 0.999, g[i]};
    CHECK(xi[i] == doctest::Approx(kPi));
    CHECK(v[i] == visibility(cat, ch).visibility);
    CHECK(lv[i] == doctest::Approx(std::log10(v[i])));
    CHECK(std::get<std::string>(t.rows[i].back()).empty());
  }
}

TEST_CASE("output is deterministic and thread-count independent") {
  SweepSpec spec = small_spec();
  spec.threads = 1;
  const std::string one = csv_of(run_sweep(spec));
  spec.threads = 4;
  const std::string four = csv_of(run_sweep(spec));
  CHECK(one == four);
  CHECK(one == csv_of(run_sweep(spec)));
}

TEST_CASE("degenerate two-point sweep") {
  SweepSpec spec;
  spec.axes = {{AxisName::r, 0.0, 1.0, 2, Spacing::linear}};
  Series s;
  s.cat.alpha0 = 0.0;
  spec.series = {s};
  const Table t = run_sweep(spec);
  REQUIRE(t.rows.size() == 2);
  for (double v : t.numeric_column("visibility")) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("failing points become error rows") {
  SweepSpec spec;
  spec.axes = {{AxisName::alpha0, 1.0, 10.0, 2, Spacing::linear}};
  Series s;
  s.ch.r = 0.2;
  s.ch.g = 1.01;
  spec.series = {s};
  spec.outputs = {Output::visibility, Output::oracle_visibility};
  const Table t = run_sweep(spec);
  REQUIRE(t.rows.size() == 2);
  const auto ov = t.numeric_column("oracle_visibility");
  const auto v = t.numeric_column("visibility");
  CHECK(std::isfinite(ov[0]));
  CHECK(std::abs(ov[0] - v[0]) < 1e-8);
  CHECK(std::isnan(ov[1]));
  CHECK(std::isnan(v[1]));
  CHECK(std::get<std::string>(t.rows[0].back()).empty());
  CHECK(std::get<std::string>(t.rows[1].back()).find("fock-oracle") == 0);
}

TEST_CASE("optimal r") {
  CatParams cat;
  cat.alpha0 = 10.0;
  ChannelParams ch{0.0, kPi, 1.0, 1.0};
  // flat in r: ties go to r = 0
  const OptimumR flat = optimize_r(cat, ch);
  CHECK(flat.r_opt == 0.0);
  CHECK(flat.visibility == doctest::Approx(1.0));

  ch.g = 1.01;
  const OptimumR o = optimize_r(cat, ch);
  CHECK(o.r_opt > 0.0);
  CHECK_FALSE(o.non_unimodal);
  for (double dr : {-0.01, 0.01}) {
    ch.r = o.r_opt + dr;
    CHECK(visibility(cat, ch).log_visibility <= o.log_visibility + 1e-12);
  }
  CHECK_THROWS_AS(optimize_r(cat, ch, 0.0), InvalidArgument);
}

TEST_CASE("csv format") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, std::string("x,y")}, {0.1, std::string()}, {std::nan(""), std::string("q\"")}};
  t.notes = {{"k", "v"}};
  const std::string s = csv_of(t);
  CHECK(s ==
        "# catchannel v0.1.0\n"
        "a,b\n"
        "1,\"x,y\"\n"
        "0.10000000000000001,\n"
        "nan,\"q\"\"\"\n"
        "# k: v\n");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(format_number(kPi)) == kPi);
}

TEST_CASE("json format") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{2.5, std::string("x")}, {std::nan(""), std::string()}};
  std::ostringstream os;
  write_json(os, t);
  const auto j = nlohmann::json::parse(os.str());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["a"] == 2.5);
  CHECK(j[0]["b"] == "x");
  CHECK(j[1]["a"].is_null());
}

TEST_CASE("figure presets") {
  for (std::string_view f : figure_names()) {
    const SweepSpec spec = figure_preset(f);
    CHECK_NOTHROW(spec.validate());
  }
  CHECK_THROWS_AS(figure_preset("12"), InvalidArgument);
  const SweepSpec five = figure_preset("5");
  CHECK(five.series.size() == 3);
  CHECK(five.axes[0].points == 81);
}
