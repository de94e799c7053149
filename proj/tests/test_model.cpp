#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "tmd/box.hpp"
#include "tmd/error.hpp"
#include "tmd/params.hpp"
#include "tmd/system.hpp"
#include "tmd/units.hpp"

using namespace tmd;

TEST_SUITE_BEGIN("model");

TEST_CASE("builtin silicon table") {
  const ParamTable t = builtin_silicon();
  REQUIRE(t.species_count() == 1);
  CHECK(t.species_names()[0] == "Si");
  const TersoffEntry& e = t.entry(0, 0, 0);
  CHECK(e.m == 3);
  CHECK(e.gamma == 1.0);
  CHECK(e.lambda3 == 1.3258);
  CHECK(e.c == 4.8381);
  CHECK(e.d == 2.0417);
  CHECK(e.h == 0.0);
  CHECK(e.eta == 22.956);
  CHECK(e.beta == 0.33675);
  CHECK(e.lambda2 == 1.3258);
  CHECK(e.big_b == 95.373);
  CHECK(e.big_r == 3.0);
  CHECK(e.big_d == 0.2);
  CHECK(e.lambda1 == 3.2394);
  CHECK(e.big_a == 3264.7);
  CHECK(e.cutoff() == 3.2);
  CHECK(t.r_cut_max() == 3.2);
}

TEST_CASE("parser handles comments and line wraps") {
  const char* text =
      "# a comment line\n"
      "Xx Xx Xx 1 1.2 0.9 1.5   # trailing comment\n"
      "0.8 -0.3 0.9 0.4 1.7 12.0\n"
      "3.0 0.2 2.1 25.0\n";
  const ParamTable t = parse_param_text(text, "<test>");
  REQUIRE(t.species_count() == 1);
  CHECK(t.entry(0, 0, 0).m == 1);
  CHECK(t.entry(0, 0, 0).big_r == 3.0);
  CHECK(t.entry(0, 0, 0).big_a == 25.0);
}

TEST_CASE("serialize then reparse is field-identical") {
  const ParamTable t = builtin_silicon();
  const std::string text = serialize_param_table(t);
  const ParamTable back = parse_param_text(text, "<roundtrip>");
  REQUIRE(back.entries().size() == t.entries().size());
  const TersoffEntry& a = t.entry(0, 0, 0);
  const TersoffEntry& b = back.entry(0, 0, 0);
  CHECK(a.m == b.m);
  CHECK(a.gamma == b.gamma);
  CHECK(a.lambda3 == b.lambda3);
  CHECK(a.c == b.c);
  CHECK(a.d == b.d);
  CHECK(a.h == b.h);
  CHECK(a.eta == b.eta);
  CHECK(a.beta == b.beta);
  CHECK(a.lambda2 == b.lambda2);
  CHECK(a.big_b == b.big_b);
  CHECK(a.big_r == b.big_r);
  CHECK(a.big_d == b.big_d);
  CHECK(a.lambda1 == b.lambda1);
  CHECK(a.big_a == b.big_a);
  CHECK(serialize_param_table(back) == text);
}

TEST_CASE("parser rejects broken input") {
  const char* base =
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n";
  CHECK_THROWS_AS(parse_param_text("", "<t>"), ParseError);
  // truncated: 16 tokens instead of 17
  CHECK_THROWS_AS(parse_param_text(
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2\n", "<t>"),
      ParseError);
  // m outside {1, 3}
  CHECK_THROWS_AS(parse_param_text(
      "Xx Xx Xx 2 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      "<t>"), ParseError);
  // non-numeric field
  CHECK_THROWS_AS(parse_param_text(
      "Xx Xx Xx 3 huh 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      "<t>"), ParseError);
  // duplicate triplet
  CHECK_THROWS_AS(parse_param_text(std::string(base) + base, "<t>"), ParseError);
  // two species but only 2 of the 8 required triplets
  CHECK_THROWS_AS(parse_param_text(
      std::string(base) +
          "Yy Yy Yy 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 "
          "3264.7\n",
      "<t>"), ParseError);
}

TEST_CASE("entry constraints") {
  TersoffEntry e = testing::test_entry();
  CHECK_NOTHROW(e.validate("t"));
  TersoffEntry bad = e;
  bad.d = 0.0;
  CHECK_THROWS_AS(bad.validate("t"), ParseError);
  bad = e;
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate("t"), ParseError);
  bad = e;
  bad.big_r = 0.3;  // ramp would start below zero separation
  bad.big_d = 0.5;
  CHECK_THROWS_AS(bad.validate("t"), ParseError);
  bad = e;
  bad.big_d = -0.1;
  CHECK_THROWS_AS(bad.validate("t"), ParseError);
  bad = e;
  bad.beta = -1.0;
  CHECK_THROWS_AS(bad.validate("t"), ParseError);
}

TEST_CASE("load_param_file round trips through a stream") {
  std::istringstream in(serialize_param_table(builtin_silicon()));
  const ParamTable t = load_param_file(in, "<stream>");
  CHECK(t.species_count() == 1);
  CHECK(t.r_cut_max() == 3.2);
}

TEST_CASE("element masses") {
  REQUIRE(units::element_mass("Si").has_value());
  CHECK(*units::element_mass("Si") == doctest::Approx(28.0855).epsilon(1e-6));
  CHECK(units::element_mass("C").has_value());
  CHECK(units::element_mass("Ge").has_value());
  CHECK(!units::element_mass("Xx").has_value());
}

TEST_CASE("minimum image pinned values") {
  SimulationBox box{10.0, 10.0, 10.0, true, true, true};
  CHECK(minimum_image({0.0, 0.0, 0.0}, box).x == 0.0);
  CHECK(minimum_image({9.0, 0.0, 0.0}, box).x == -1.0);
  CHECK(minimum_image({-9.0, 0.0, 0.0}, box).x == 1.0);
  // +L/2 maps to -L/2 so each image is counted once
  CHECK(minimum_image({5.0, 0.0, 0.0}, box).x == -5.0);
  CHECK(minimum_image({-5.0, 0.0, 0.0}, box).x == -5.0);
  CHECK(minimum_image_1d(23.0, 10.0) == 3.0);
  // open axes pass displacements through untouched
  SimulationBox open_box{10.0, 10.0, 10.0, false, true, true};
  CHECK(minimum_image({9.0, 0.0, 0.0}, open_box).x == 9.0);
}

TEST_CASE("minimum image is idempotent") {
  for (double d : {-14.99, -5.0, -0.1, 0.0, 0.1, 4.999, 5.0, 12.345}) {
    const double m = minimum_image_1d(d, 10.0);
    CHECK(m >= -5.0);
    CHECK(m < 5.0);
    CHECK(minimum_image_1d(m, 10.0) == m);
  }
}

TEST_CASE("wrap keeps coordinates inside the box") {
  for (double x : {-25.0, -10.0, -0.5, 0.0, 3.0, 9.999, 10.0, 31.4}) {
    const double w = wrap_1d(x, 10.0);
    CHECK(w >= 0.0);
    CHECK(w < 10.0);
    const double q = (x - w) / 10.0;
    CHECK(std::abs(q - std::round(q)) < 1e-12);
  }
  SimulationBox box{10.0, 10.0, 10.0, true, true, false};
  const Vec3 p = wrap_position({12.0, -1.0, 17.0}, box);
  CHECK(p.x == 2.0);
  CHECK(p.y == 9.0);
  CHECK(p.z == 17.0);  // open axis untouched
}

TEST_CASE("box validation") {
  SimulationBox box{10.0, 0.0, 10.0, true, true, true};
  CHECK_THROWS_AS(box.validate(), ConfigError);
}

TEST_CASE("kinetic energy, temperature, momentum") {
  AtomSystem sys = testing::open_system({{0, 0, 0}, {5, 0, 0}}, 2.0);
  sys.velocities[0] = {3.0, 0.0, 0.0};
  sys.velocities[1] = {-1.0, 2.0, 0.0};
  const double ke = kinetic_energy(sys);
  CHECK(ke == doctest::Approx(14.0 * units::mvv2e).epsilon(1e-15));
  CHECK(temperature(sys) ==
        doctest::Approx(2.0 * ke / (3.0 * 2 * units::k_boltzmann)).epsilon(1e-15));
  const Vec3 p = total_momentum(sys);
  CHECK(p.x == 4.0);
  CHECK(p.y == 4.0);
  CHECK(p.z == 0.0);
}

TEST_CASE("system validation") {
  AtomSystem sys = testing::open_system({{0, 0, 0}});
  CHECK_NOTHROW(sys.validate());
  AtomSystem bad = sys;
  bad.species[0] = 5;  // no such species id
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = sys;
  bad.velocities.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = sys;
  bad.species_masses = {0.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_SUITE_END();
