#include <catch2/catch_amalgamated.hpp>

#include "nst/schedule.hpp"

using nst::Index;
using nst::Schedule;

TEST_CASE("constant schedule ignores k", "[schedule]") {
  const Schedule s = Schedule::constant(7);
  CHECK(s.eval(1) == 7);
  CHECK(s.eval(99) == 7);
}

TEST_CASE("quadratic schedule", "[schedule]") {
  const Schedule s = Schedule::quadratic();
  CHECK(s.eval(1) == 1);
  CHECK(s.eval(4) == 16);
  CHECK(s.eval(30) == 900);
}

TEST_CASE("cap binds", "[schedule]") {
  const Schedule s = Schedule::linear(6).with_cap(15);
  CHECK(s.eval(1) == 6);
  CHECK(s.eval(2) == 12);
  CHECK(s.eval(3) == 15);
  CHECK(s.eval(1000) == 15);
}

TEST_CASE("eval rejects k = 0", "[schedule]") {
  CHECK_THROWS_AS(Schedule::quadratic().eval(0), std::invalid_argument);
}

TEST_CASE("built-in schedules are non-decreasing and never exceed the cap", "[schedule]") {
  for (const Schedule& s : {Schedule::constant(4), Schedule::linear(3),
                            Schedule::quadratic(), Schedule::custom({1, 4, 9, 12})}) {
    const Schedule capped = s.with_cap(50);
    Index prev = 0;
    for (Index k = 1; k <= 200; ++k) {
      const Index f = capped.eval(k);
      CHECK(f >= 1);
      CHECK(f <= 50);
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("custom table holds its last value", "[schedule]") {
  const Schedule s = Schedule::custom({2, 5, 11});
  CHECK(s.eval(1) == 2);
  CHECK(s.eval(3) == 11);
  CHECK(s.eval(10) == 11);
}

TEST_CASE("config-string parsing", "[schedule]") {
  CHECK(Schedule::parse("const:5").eval(3) == 5);
  CHECK(Schedule::parse("lin:2").eval(3) == 6);
  CHECK(Schedule::parse("quad").eval(5) == 25);
  CHECK(Schedule::parse("custom:1,4,9").eval(2) == 4);

  CHECK_THROWS_AS(Schedule::parse("cubic"), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::parse("const:0"), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::parse("const:x"), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::parse("quad:3"), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::parse("custom:"), std::invalid_argument);
}

TEST_CASE("parse round-trips through to_string", "[schedule]") {
  for (const std::string text : {"const:5", "lin:2", "quad", "custom:1,4,9"}) {
    CHECK(Schedule::parse(text).to_string() == text);
  }
}
