#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ifmlab/engine.hpp"

using namespace ifmlab;

namespace {

const double kRt2 = 1.0 / std::sqrt(2.0);

// Tuned interferometer over {upper, lower, boom}; photon enters upper, an
// optional object sits in the lower arm. Built by hand so these tests do
// not depend on the scenario constructors.
Circuit mzi(bool object) {
  Basis b;
  b.add_system("photon", {"upper", "lower", "boom"});
  BeamSplitter bs{{"photon", "upper"}, {"photon", "lower"}, 0.5};
  Circuit c{b, {{bs}}};
  if (object) c.stages.push_back({Absorb{{"photon", "lower"}, "boom", AbsorbKind::bomb}});
  c.stages.push_back({bs});
  return c;
}

DetectorMap mzi_detectors() {
  DetectorMap d;
  d.add("explosion", {2});
  d.add("D1", {1});
  d.add("D2", {0});
  return d;
}

StateVector photon_in_upper() { return StateVector::basis_state(3, 0); }

}  // namespace

TEST_CASE("empty circuit leaves the state unchanged", "[engine]") {
  Basis b;
  b.add_system("photon", {"a", "b"});
  Circuit c{b, {}};
  StateVector init(2);
  init[0] = Amplitude(0.6, 0.0);
  init[1] = Amplitude(0.0, 0.8);
  StateVector out = evolve(c, init);
  CHECK(out[0] == init[0]);
  CHECK(out[1] == init[1]);
}

TEST_CASE("tuned interferometer sends everything to the bright port", "[engine]") {
  OutcomeDistribution dist = outcome_distribution(evolve(mzi(false), photon_in_upper()), mzi_detectors());
  CHECK(dist.at("D1") == Catch::Approx(1.0).margin(1e-12));
  CHECK(dist.at("D2") == Catch::Approx(0.0).margin(1e-12));
  CHECK(dist.at("explosion") == 0.0);
  CHECK(dist.at("other") == 0.0);
}

TEST_CASE("object in the lower arm: frozen final amplitudes", "[engine]") {
  // hand amplitude chase: upper -> (1/2)|upper> + (i/2)|lower> + (i/rt2)|boom>
  StateVector out = evolve(mzi(true), photon_in_upper());
  CHECK(std::abs(out[0] - Amplitude(0.5, 0.0)) <= 1e-15);
  CHECK(std::abs(out[1] - Amplitude(0.0, 0.5)) <= 1e-15);
  CHECK(std::abs(out[2] - Amplitude(0.0, kRt2)) <= 1e-15);

  OutcomeDistribution dist = outcome_distribution(out, mzi_detectors());
  CHECK(dist.at("explosion") == Catch::Approx(0.5).margin(1e-12));
  CHECK(dist.at("D1") == Catch::Approx(0.25).margin(1e-12));
  CHECK(dist.at("D2") == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("evolve validates its input", "[engine]") {
  CHECK_THROWS_AS(evolve(mzi(false), StateVector::basis_state(5, 0)), DimensionError);
  StateVector unnormalized(3);
  unnormalized[0] = 0.5;
  CHECK_THROWS_AS(evolve(mzi(false), unnormalized), ValidationError);
}

TEST_CASE("postselect", "[engine]") {
  StateVector out = evolve(mzi(true), photon_in_upper());

  SECTION("probability matches the distribution entry") {
    auto [state, p] = postselect(out, mzi_detectors(), "D2");
    CHECK(p == Catch::Approx(0.25).margin(1e-12));
    CHECK(std::abs(state.norm2() - 1.0) <= 1e-12);
    CHECK(std::norm(state[0]) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("zero-probability outcome") {
    StateVector tuned = evolve(mzi(false), photon_in_upper());
    CHECK_THROWS_AS(postselect(tuned, mzi_detectors(), "D2"), ZeroProbabilityError);
  }
  SECTION("unknown outcome") { CHECK_THROWS_AS(postselect(out, mzi_detectors(), "D7"), ValidationError); }
}

TEST_CASE("detector maps must be disjoint and unreserved", "[engine]") {
  StateVector s = photon_in_upper();
  DetectorMap overlap;
  overlap.add("A", {0, 1});
  overlap.add("B", {1});
  CHECK_THROWS_AS(outcome_distribution(s, overlap), ValidationError);

  DetectorMap reserved;
  reserved.add("other", {0});
  CHECK_THROWS_AS(outcome_distribution(s, reserved), ValidationError);

  DetectorMap dup;
  dup.add("A", {0});
  dup.add("A", {1});
  CHECK_THROWS_AS(outcome_distribution(s, dup), ValidationError);
}

TEST_CASE("insert_measurement with the trivial partition reproduces the plain run", "[engine]") {
  Circuit c = mzi(true);
  DetectorMap d = mzi_detectors();
  Partition all{{"all", {0, 1, 2}}};
  JointStats stats = insert_measurement(c, 1, all, photon_in_upper(), d);
  OutcomeDistribution plain = outcome_distribution(evolve(c, photon_in_upper()), d);
  for (const auto& [label, p] : plain.entries()) CHECK(stats.at("all", label) == Catch::Approx(p).margin(1e-12));
}

TEST_CASE("insert_measurement validates its arguments", "[engine]") {
  Circuit c = mzi(true);
  DetectorMap d = mzi_detectors();
  CHECK_THROWS_AS(insert_measurement(c, 9, {{"all", {0, 1, 2}}}, photon_in_upper(), d), DimensionError);
  CHECK_THROWS_AS(insert_measurement(c, 1, {{"a", {0, 1}}, {"b", {1, 2}}}, photon_in_upper(), d),
                  ValidationError);
  // auto-added rest label needs the name free
  CHECK_THROWS_AS(insert_measurement(c, 1, {{"rest", {0}}}, photon_in_upper(), d), ValidationError);
}

TEST_CASE("insert_measurement branches decohere", "[engine]") {
  // measuring the arm after the first splitter kills the interference:
  // the tuned interferometer then shows 1/4 D2, 1/4 D1 per arm branch
  Circuit c = mzi(false);
  DetectorMap d = mzi_detectors();
  Partition arms{{"upper", {0}}, {"lower", {1}}};
  JointStats stats = insert_measurement(c, 1, arms, photon_in_upper(), d);
  CHECK(stats.at("upper", "D1") == Catch::Approx(0.25).margin(1e-12));
  CHECK(stats.at("upper", "D2") == Catch::Approx(0.25).margin(1e-12));
  CHECK(stats.at("lower", "D1") == Catch::Approx(0.25).margin(1e-12));
  CHECK(stats.at("lower", "D2") == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("conditional distributions", "[engine]") {
  SECTION("uniform joint stays uniform") {
    JointStats j;
    j.intermediate_labels = {"x", "y"};
    j.final_labels = {"f", "g"};
    j.probs = {0.25, 0.25, 0.25, 0.25};
    OutcomeDistribution dist = conditional(j, "g");
    CHECK(dist.at("x") == Catch::Approx(0.5));
    CHECK(dist.at("y") == Catch::Approx(0.5));
  }
  SECTION("conditioning on an absent label") {
    JointStats j;
    j.intermediate_labels = {"x"};
    j.final_labels = {"f"};
    j.probs = {1.0};
    CHECK_THROWS_AS(conditional(j, "nope"), ValidationError);
  }
  SECTION("conditioning on a zero-probability outcome") {
    JointStats j;
    j.intermediate_labels = {"x"};
    j.final_labels = {"f", "g"};
    j.probs = {1.0, 0.0};
    CHECK_THROWS_AS(conditional(j, "g"), ZeroProbabilityError);
  }
}

TEST_CASE("sampling", "[engine]") {
  OutcomeDistribution ev = outcome_distribution(evolve(mzi(true), photon_in_upper()), mzi_detectors());

  SECTION("zero shots") {
    for (const auto& [label, n] : sample(ev, 0, 42)) CHECK(n == 0);
  }
  SECTION("certain outcome takes every shot") {
    OutcomeDistribution sure({{"A", 1.0}});
    auto counts = sample(sure, 1000, 7);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].second == 1000);
  }
  SECTION("identical seeds reproduce identical counts") {
    auto a = sample(ev, 20000, 123456789);
    auto b = sample(ev, 20000, 123456789);
    CHECK(a == b);
    auto c = sample(ev, 20000, 987654321);
    CHECK(a != c);  // astronomically unlikely to collide
  }
  SECTION("frequencies concentrate at 4 sigma") {
    const std::uint64_t shots = 100000;
    auto counts = sample(ev, shots, 2024);
    for (const auto& [label, n] : counts) {
      const double p = ev.at(label);
      const double bound = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
      CHECK(std::abs(static_cast<double>(n) / shots - p) <= bound + 1e-12);
    }
  }
}

TEST_CASE("probability clamping", "[engine]") {
  OutcomeDistribution d({{"a", 1.0}, {"b", -5e-13}});
  CHECK(d.at("b") == 0.0);
  CHECK_THROWS_AS(OutcomeDistribution({{"a", 1.0}, {"b", -1e-9}}), InternalError);
}
