#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifmlab/core.hpp"
#include "ifmlab/engine.hpp"
#include "ifmlab/optics.hpp"

namespace ifmlab {

/// A ready-to-run experiment: circuit, initial state, detectors, and (when
/// known in closed form) the expected outcome distribution with a short
/// physics note per entry.
struct Scenario {
  std::string name;
  std::string description;
  Circuit circuit;
  StateVector init{1};
  DetectorMap detectors;
  std::optional<OutcomeDistribution> expected;
  std::vector<std::pair<std::string, std::string>> notes;
};

enum class EvObject { absent, bomb, opaque };
enum class BombState { live, dud };

namespace detail {

/// Index of a mode in a single-system basis.
inline std::size_t mode_index(const Basis& b, std::string_view system, std::string_view mode) {
  return b.marginal_indices({std::string(system), std::string(mode)}).front();
}

inline StateVector basis_init(const Basis& b, std::size_t index) {
  return StateVector::basis_state(b.dim(), index);
}

}  // namespace detail

/// Mach-Zehnder interferometer with an optional absorbing object in the
/// lower arm. The photon enters the upper arm; with nothing in the way the
/// two 50/50 splitters route it entirely to D1 (the lower output port), so
/// D2 is the dark port. An object in the lower arm breaks the interference:
/// it absorbs half the amplitude and leaves 1/4 at each detector; a D2
/// click then certifies the object without touching it.
inline Scenario ev_bomb_test(EvObject object) {
  Scenario sc;
  std::vector<std::string> modes = {"upper", "lower"};
  if (object != EvObject::absent) modes.push_back(object == EvObject::bomb ? "boom" : "wall");
  sc.circuit.basis.add_system("photon", modes);

  const BeamSplitter bs{{"photon", "upper"}, {"photon", "lower"}, 0.5};
  sc.circuit.stages.push_back({bs});
  if (object == EvObject::bomb)
    sc.circuit.stages.push_back({Absorb{{"photon", "lower"}, "boom", AbsorbKind::bomb}});
  else if (object == EvObject::opaque)
    sc.circuit.stages.push_back({Absorb{{"photon", "lower"}, "wall", AbsorbKind::opaque}});
  sc.circuit.stages.push_back({bs});

  const Basis& b = sc.circuit.basis;
  sc.init = detail::basis_init(b, detail::mode_index(b, "photon", "upper"));

  if (object == EvObject::bomb) {
    sc.name = "ev-bomb";
    sc.description = "bomb tester: Mach-Zehnder interferometer with an ultra-sensitive bomb in the lower arm";
    sc.detectors.add("explosion", {detail::mode_index(b, "photon", "boom")});
  } else if (object == EvObject::opaque) {
    sc.name = "ev-bomb:opaque";
    sc.description = "Mach-Zehnder interferometer with a non-transparent object in the lower arm";
    sc.detectors.add("blocked", {detail::mode_index(b, "photon", "wall")});
  } else {
    sc.name = "ev-bomb:absent";
    sc.description = "tuned Mach-Zehnder interferometer with nothing in either arm";
  }
  sc.detectors.add("D1", {detail::mode_index(b, "photon", "lower")});
  sc.detectors.add("D2", {detail::mode_index(b, "photon", "upper")});

  if (object == EvObject::absent) {
    sc.expected = OutcomeDistribution({{"D1", 1.0}, {"D2", 0.0}});
    sc.notes = {{"D1", "constructive interference sends every photon to the bright port"},
                {"D2", "dark port: the two paths cancel exactly"}};
  } else {
    const std::string hit = object == EvObject::bomb ? "explosion" : "blocked";
    sc.expected = OutcomeDistribution({{hit, 0.5}, {"D1", 0.25}, {"D2", 0.25}});
    sc.notes = {{hit, "the object intercepts the lower-arm amplitude, |i/sqrt(2)|^2"},
                {"D1", "no interference left; the surviving upper-arm wave splits evenly"},
                {"D2", "a click here certifies the object while no photon reached it"}};
  }
  return sc;
}

/// Delayed-choice interferometer. With the second splitter absent the two
/// arms run straight into the detectors (D2 sees only the upper arm); with
/// it present the device is the tuned interferometer again.
inline Scenario wheeler(bool second_splitter) {
  Scenario sc;
  sc.circuit.basis.add_system("photon", {"upper", "lower"});
  const BeamSplitter bs{{"photon", "upper"}, {"photon", "lower"}, 0.5};
  sc.circuit.stages.push_back({bs});
  if (second_splitter) sc.circuit.stages.push_back({bs});

  const Basis& b = sc.circuit.basis;
  sc.init = detail::basis_init(b, detail::mode_index(b, "photon", "upper"));
  sc.detectors.add("D1", {detail::mode_index(b, "photon", "lower")});
  sc.detectors.add("D2", {detail::mode_index(b, "photon", "upper")});

  if (second_splitter) {
    sc.name = "wheeler:present";
    sc.description = "delayed choice, second splitter inserted: the tuned interferometer";
    sc.expected = OutcomeDistribution({{"D1", 1.0}, {"D2", 0.0}});
    sc.notes = {{"D1", "bright port of the tuned interferometer"}, {"D2", "dark port"}};
  } else {
    sc.name = "wheeler";
    sc.description = "delayed choice, second splitter removed: each arm feeds its own detector";
    sc.expected = OutcomeDistribution({{"D1", 0.5}, {"D2", 0.5}});
    sc.notes = {{"D1", "lower-arm amplitude lands here, |i/sqrt(2)|^2"},
                {"D2", "upper-arm amplitude lands here; a D2 photon left no trace in the lower arm"}};
  }
  return sc;
}

/// Bomb-testing interferometer where the bomb itself is the lower-arm
/// mirror. A live bomb cannot reflect (any photon on its trigger explodes
/// it); a dud's mirror is locked to the body and reflects normally, so the
/// interferometer stays tuned and D2 never clicks.
inline Scenario penrose(BombState bomb) {
  Scenario sc;
  sc.circuit.basis.add_system("photon", {"upper", "lower", "boom"});
  const BeamSplitter bs{{"photon", "upper"}, {"photon", "lower"}, 0.5};
  const AbsorbKind kind = bomb == BombState::live ? AbsorbKind::bomb : AbsorbKind::dud;
  sc.circuit.stages.push_back({bs});
  sc.circuit.stages.push_back({Absorb{{"photon", "lower"}, "boom", kind}});
  sc.circuit.stages.push_back({bs});

  const Basis& b = sc.circuit.basis;
  sc.init = detail::basis_init(b, detail::mode_index(b, "photon", "upper"));
  sc.detectors.add("explosion", {detail::mode_index(b, "photon", "boom")});
  sc.detectors.add("D1", {detail::mode_index(b, "photon", "lower")});
  sc.detectors.add("D2", {detail::mode_index(b, "photon", "upper")});

  if (bomb == BombState::live) {
    sc.name = "penrose";
    sc.description = "bomb quality test: the lower-arm mirror is a live bomb's trigger";
    sc.expected = OutcomeDistribution({{"explosion", 0.5}, {"D1", 0.25}, {"D2", 0.25}});
    sc.notes = {{"explosion", "a live mirror absorbs the lower-arm wave"},
                {"D1", "half of the surviving amplitude"},
                {"D2", "sometimes clicks: certifies a live bomb without exploding it"}};
  } else {
    sc.name = "penrose:dud";
    sc.description = "bomb quality test with a dud: its locked mirror reflects normally";
    sc.expected = OutcomeDistribution({{"explosion", 0.0}, {"D1", 1.0}, {"D2", 0.0}});
    sc.notes = {{"explosion", "a dud never fires"},
                {"D1", "the interferometer works, every photon exits bright"},
                {"D2", "never clicks when the mirror is a dud"}};
  }
  return sc;
}

/// Nested interferometers for a photon and a particle whose meeting arms
/// cross at W, where the two annihilate if they meet. Each interferometer
/// alone is tuned dark towards its D2. Sent together, both D2 detectors can
/// click (probability 1/16); conditioned on that, each system separately is
/// localized at W with certainty, yet a joint search at W fails with
/// certainty. The per-system "W" outcome labels cover the structurally
/// possible stuck-at-W results; with mutual annihilation they stay empty.
inline Scenario hardy() {
  Scenario sc;
  sc.name = "hardy";
  sc.description = "nested interaction-free measurements: photon and particle interferometers crossing at W";
  sc.circuit.basis.add_system("photon", {"upper", "lower", "w"});
  sc.circuit.basis.add_system("particle", {"upper", "lower", "w"});
  sc.circuit.basis.add_joint_sink("annihilation");

  const BeamSplitter bs_photon{{"photon", "upper"}, {"photon", "lower"}, 0.5};
  const BeamSplitter bs_particle{{"particle", "upper"}, {"particle", "lower"}, 0.5};
  sc.circuit.stages.push_back({bs_photon, bs_particle});
  sc.circuit.stages.push_back({JointSinkElement{{"photon", "lower"}, {"particle", "upper"}, "annihilation"}});
  sc.circuit.stages.push_back({bs_photon, bs_particle});

  const Basis& b = sc.circuit.basis;
  // Photon enters its upper arm (the lower one crosses W); the particle
  // enters its lower arm (the upper one crosses W).
  auto idx = [&](std::string_view pm, std::string_view rm) {
    auto pa = *b.mode_position({"photon", std::string(pm)});
    auto pb = *b.mode_position({"particle", std::string(rm)});
    std::size_t per_system[2] = {pa.second, pb.second};
    return b.composite_index(per_system);
  };
  sc.init = detail::basis_init(b, idx("upper", "lower"));

  sc.detectors.add("bothD1", {idx("lower", "upper")});
  sc.detectors.add("D1D2", {idx("lower", "lower")});
  sc.detectors.add("D1W", {idx("lower", "w")});
  sc.detectors.add("D2D1", {idx("upper", "upper")});
  sc.detectors.add("bothD2", {idx("upper", "lower")});
  sc.detectors.add("D2W", {idx("upper", "w")});
  sc.detectors.add("WD1", {idx("w", "upper")});
  sc.detectors.add("WD2", {idx("w", "lower")});
  sc.detectors.add("bothW", {idx("w", "w")});
  sc.detectors.add("annihilation", {*b.find_joint_sink("annihilation")});

  sc.expected = OutcomeDistribution({{"bothD1", 9.0 / 16.0},
                                     {"D1D2", 1.0 / 16.0},
                                     {"D1W", 0.0},
                                     {"D2D1", 1.0 / 16.0},
                                     {"bothD2", 1.0 / 16.0},
                                     {"D2W", 0.0},
                                     {"WD1", 0.0},
                                     {"WD2", 0.0},
                                     {"bothW", 0.0},
                                     {"annihilation", 0.25}});
  sc.notes = {{"bothD2", "both dark ports click; each system is then separately localized at W"},
              {"annihilation", "photon and particle met at W and consumed each other"},
              {"bothW", "never populated: a joint search at W fails with certainty"}};
  return sc;
}

struct EvObjectOptions {
  bool opaque = false;  // block the photon instead of consuming both
  std::vector<Amplitude> internal_state = {1.0};  // internal label riding along with the particle
};

/// Interaction-free localization of a quantum object: the photon
/// interferometer's left arm crosses the region where a particle sits in a
/// superposition of "in" (on the photon's path) and "out". A D2 click
/// collapses the particle onto "in" without touching its internal state.
/// Internal levels >1 split each particle position (and each sink) into one
/// mode per level so the meeting stays unitary level by level.
inline Scenario ev_quantum_object(const EvObjectOptions& opts = {}) {
  const std::size_t levels = opts.internal_state.size();
  if (levels == 0) throw ValidationError("ev-object: internal state must have at least one level");
  double internal_norm2 = 0.0;
  for (const Amplitude& a : opts.internal_state) internal_norm2 += std::norm(a);
  if (std::abs(internal_norm2 - 1.0) > 1e-9)
    throw ValidationError("ev-object: internal state must be normalized");

  auto leveled = [&](std::string_view stem, std::size_t j) {
    return levels == 1 ? std::string(stem) : std::string(stem) + "_" + std::to_string(j);
  };
  const std::string sink_stem = opts.opaque ? "blocked" : "absorbed";

  Scenario sc;
  sc.name = opts.opaque ? "ev-object:block" : "ev-object";
  sc.description = opts.opaque
                       ? "interaction-free localization; the meeting blocks the photon in place"
                       : "interaction-free localization of a particle spread over two places";

  sc.circuit.basis.add_system("photon", {"right", "left"});
  std::vector<std::string> particle_modes;
  for (std::size_t j = 0; j < levels; ++j) particle_modes.push_back(leveled("in", j));
  for (std::size_t j = 0; j < levels; ++j) particle_modes.push_back(leveled("out", j));
  sc.circuit.basis.add_system("particle", particle_modes);
  for (std::size_t j = 0; j < levels; ++j) sc.circuit.basis.add_joint_sink(leveled(sink_stem, j));

  const BeamSplitter bs{{"photon", "right"}, {"photon", "left"}, 0.5};
  sc.circuit.stages.push_back({bs});
  // One meeting per internal level; separate stages keep each stage's mode
  // sets disjoint (they all involve photon.left).
  for (std::size_t j = 0; j < levels; ++j)
    sc.circuit.stages.push_back(
        {JointSinkElement{{"photon", "left"}, {"particle", leveled("in", j)}, leveled(sink_stem, j)}});
  sc.circuit.stages.push_back({bs});

  const Basis& b = sc.circuit.basis;
  StateVector photon_init = StateVector::basis_state(2, 0);  // right
  StateVector particle_init(2 * levels);
  for (std::size_t j = 0; j < levels; ++j) {
    particle_init[j] = opts.internal_state[j] / std::sqrt(2.0);           // in_j
    particle_init[levels + j] = opts.internal_state[j] / std::sqrt(2.0);  // out_j
  }
  StateVector tensor_part = tensor(photon_init, particle_init);
  sc.init = StateVector(b.dim());
  for (std::size_t i = 0; i < tensor_part.dim(); ++i) sc.init[i] = tensor_part[i];

  sc.detectors.add("D1", b.marginal_indices({"photon", "left"}));
  sc.detectors.add("D2", b.marginal_indices({"photon", "right"}));
  std::vector<std::size_t> sink_ix;
  for (std::size_t j = 0; j < levels; ++j) sink_ix.push_back(*b.find_joint_sink(leveled(sink_stem, j)));
  sc.detectors.add(opts.opaque ? "blocked" : "absorbed", sink_ix);

  sc.expected = OutcomeDistribution(
      {{"D1", 5.0 / 8.0}, {"D2", 1.0 / 8.0}, {opts.opaque ? "blocked" : "absorbed", 0.25}});
  sc.notes = {{"D1", "bright port; both particle positions contribute"},
              {"D2", "dark-port click: collapses the particle onto the interaction region"},
              {opts.opaque ? "blocked" : "absorbed", "photon met the particle in the left arm"}};
  return sc;
}

/// Negative-result projection: a detector covering part of an extended wave
/// fires nothing, and the state collapses onto the uncovered remainder.
/// Returns the renormalized post state and the no-click probability.
inline std::pair<StateVector, double> renninger(std::size_t bins, const std::vector<std::size_t>& covered,
                                                const StateVector& init) {
  if (bins < 2) throw ValidationError("renninger: need at least 2 bins");
  if (init.dim() != bins) throw DimensionError("renninger: init dimension must equal the bin count");
  if (covered.empty()) throw ValidationError("renninger: covered set must be nonempty");
  detail::check_normalized(init, "initial state");
  StateVector post(init);
  for (std::size_t i : covered) {
    if (i >= bins) throw DimensionError("renninger: covered index out of range");
    post[i] = 0.0;
  }
  const double p = post.norm2();
  if (p < 1e-14) throw ZeroProbabilityError("renninger: the detector covers the entire wave");
  return {post.normalized(), p};
}

/// Canonical negative-result instance: a wave spread uniformly over four
/// angular bins, a detector covering bin 0.
inline Scenario renninger_scenario() {
  Scenario sc;
  sc.name = "renninger";
  sc.description = "negative-result measurement: silent detector over one of four wave bins";
  sc.circuit.basis.add_system("photon", {"bin0", "bin1", "bin2", "bin3"});
  StateVector init(4);
  for (std::size_t i = 0; i < 4; ++i) init[i] = 0.5;
  sc.init = init;
  sc.detectors.add("click", {0});
  sc.detectors.add("no_click", {1, 2, 3});
  sc.expected = OutcomeDistribution({{"click", 0.25}, {"no_click", 0.75}});
  sc.notes = {{"click", "the detector absorbs what reaches it"},
              {"no_click", "silence still reshapes the wave: the covered bin empties"}};
  return sc;
}

struct DickeResult {
  StateVector post{1};
  double p_negative = 0.0;
  double e_before = 0.0;
  double e_after = 0.0;
};

/// Negative-result measurement on a trapped atom: a radiation pulse
/// illuminates part of the well and no scattered photon is seen. The atom
/// is projected off the illuminated region; its energy expectation under
/// the supplied observable rises although "nothing happened".
inline DickeResult dicke(const StateVector& init, const std::vector<std::size_t>& illuminated,
                         const Operator& observable) {
  if (observable.dim() != init.dim()) throw DimensionError("dicke: observable dimension mismatch");
  if (!is_self_adjoint(observable, kDefaultTol))
    throw ValidationError("dicke: observable must be self-adjoint");
  detail::check_normalized(init, "initial state");
  DickeResult r;
  r.e_before = expectation(observable, init);
  StateVector projected(init);
  for (std::size_t i : illuminated) {
    if (i >= init.dim()) throw DimensionError("dicke: illuminated index out of range");
    projected[i] = 0.0;
  }
  r.p_negative = projected.norm2();
  if (r.p_negative < 1e-14) throw ZeroProbabilityError("dicke: the light covers the atom's entire support");
  r.post = projected.normalized();
  r.e_after = expectation(observable, r.post);
  return r;
}

/// Discretized potential well on three sites: 2 on the diagonal, -1 on the
/// couplings. Its ground state is (1/2, 1/sqrt(2), 1/2).
inline Operator dicke_well_hamiltonian() {
  Operator h(3);
  for (std::size_t i = 0; i < 3; ++i) h.at(i, i) = 2.0;
  h.at(0, 1) = h.at(1, 0) = -1.0;
  h.at(1, 2) = h.at(2, 1) = -1.0;
  return h;
}

/// Canonical atom-in-a-well instance: ground state, light on site 0.
inline Scenario dicke_scenario() {
  Scenario sc;
  sc.name = "dicke";
  sc.description = "negative-result measurement on a trapped atom: light on one well site, no scattering seen";
  sc.circuit.basis.add_system("atom", {"site0", "site1", "site2"});
  StateVector init(3);
  init[0] = 0.5;
  init[1] = std::numbers::sqrt2 / 2.0;
  init[2] = 0.5;
  sc.init = init;
  sc.detectors.add("scatter", {0});
  sc.detectors.add("no_scatter", {1, 2});
  sc.expected = OutcomeDistribution({{"scatter", 0.25}, {"no_scatter", 0.75}});
  sc.notes = {{"scatter", "the atom was in the illuminated site"},
              {"no_scatter", "projection off site 0 raises the energy expectation"}};
  return sc;
}

/// Closed form for the chained-rotation bomb test: after N rotate-and-test
/// cycles of angle pi/(2N) against a live bomb, the explosion probability
/// is 1 - cos(pi/(2N))^(2N); it falls towards zero as N grows.
inline double zeno_explosion_closed_form(std::size_t cycles) {
  if (cycles == 0) throw ValidationError("zeno: need at least one cycle");
  const double c = std::cos(std::numbers::pi / (2.0 * static_cast<double>(cycles)));
  return 1.0 - std::pow(c, 2.0 * static_cast<double>(cycles));
}

/// Circuit form of the chained-rotation scheme: per cycle, rotate the
/// polarization by pi/(2N) and let the object test the rotated component
/// (each cycle gets its own sink so the explosion record stays unitary).
inline Scenario zeno_scenario(std::size_t cycles, BombState bomb) {
  if (cycles == 0) throw ValidationError("zeno: need at least one cycle");
  Scenario sc;
  sc.name = bomb == BombState::live ? "zeno" : "zeno:dud";
  sc.description = "chained small rotations testing a bomb; explosion risk shrinks with the cycle count";

  std::vector<std::string> modes = {"h", "v"};
  for (std::size_t k = 1; k <= cycles; ++k) modes.push_back("boom_" + std::to_string(k));
  sc.circuit.basis.add_system("photon", modes);

  const double theta = std::numbers::pi / (2.0 * static_cast<double>(cycles));
  const AbsorbKind kind = bomb == BombState::live ? AbsorbKind::bomb : AbsorbKind::dud;
  for (std::size_t k = 1; k <= cycles; ++k) {
    sc.circuit.stages.push_back({Rotate{{"photon", "h"}, {"photon", "v"}, theta}});
    sc.circuit.stages.push_back({Absorb{{"photon", "v"}, "boom_" + std::to_string(k), kind}});
  }

  const Basis& b = sc.circuit.basis;
  sc.init = detail::basis_init(b, detail::mode_index(b, "photon", "h"));
  std::vector<std::size_t> booms;
  for (std::size_t k = 1; k <= cycles; ++k) booms.push_back(detail::mode_index(b, "photon", "boom_" + std::to_string(k)));
  sc.detectors.add("explosion", booms);
  sc.detectors.add("original", {detail::mode_index(b, "photon", "h")});
  sc.detectors.add("rotated", {detail::mode_index(b, "photon", "v")});

  if (bomb == BombState::live) {
    const double p = zeno_explosion_closed_form(cycles);
    sc.expected = OutcomeDistribution({{"explosion", p}, {"original", 1.0 - p}, {"rotated", 0.0}});
    sc.notes = {{"explosion", "one of the cycles triggered the bomb"},
                {"original", "the live bomb keeps resetting the rotation: verdict 'live'"},
                {"rotated", "unreachable with a live bomb"}};
  } else {
    sc.expected = OutcomeDistribution({{"explosion", 0.0}, {"original", 0.0}, {"rotated", 1.0}});
    sc.notes = {{"explosion", "a dud never fires"},
                {"original", "unreachable: the rotations accumulate freely"},
                {"rotated", "fully rotated polarization: verdict 'dud'"}};
  }
  return sc;
}

struct ZenoResult {
  double p_explosion = 0.0;
  double p_detect_live = 0.0;   // run ends unexploded with the original polarization
  double p_identify_dud = 0.0;  // run ends with the fully rotated polarization
  std::vector<StateVector> per_cycle_states;  // boundary states, one per completed cycle (plus the start)
};

/// Cycle-by-cycle simulation of the chained-rotation bomb test.
inline ZenoResult zeno_ifm(std::size_t cycles, BombState bomb) {
  Scenario sc = zeno_scenario(cycles, bomb);
  ZenoResult r;
  r.per_cycle_states.push_back(sc.init);
  StateVector s = sc.init;
  for (std::size_t k = 0; k < cycles; ++k) {
    s = detail::apply_stages(sc.circuit, s, 2 * k, 2 * (k + 1));
    r.per_cycle_states.push_back(s);
  }
  OutcomeDistribution dist = outcome_distribution(s, sc.detectors);
  r.p_explosion = dist.at("explosion");
  r.p_detect_live = dist.at("original");
  r.p_identify_dud = dist.at("rotated");
  return r;
}

// ----- registry ---------------------------------------------------------

/// Stable scenario identifiers accepted by the command-line tools.
inline std::vector<std::string> scenario_names() {
  return {"ev-bomb", "wheeler", "penrose", "hardy", "ev-object", "renninger", "dicke", "zeno"};
}

/// All accepted spellings, including variants.
inline std::vector<std::string> scenario_variants() {
  return {"ev-bomb",  "ev-bomb:absent", "ev-bomb:opaque", "wheeler", "wheeler:present",
          "penrose",  "penrose:dud",    "hardy",          "ev-object", "ev-object:block",
          "renninger", "dicke",         "zeno",           "zeno:dud"};
}

/// Builds a scenario from its CLI identifier ("name" or "name:variant").
inline Scenario make_scenario(std::string_view id) {
  if (id == "ev-bomb" || id == "ev-bomb:bomb") return ev_bomb_test(EvObject::bomb);
  if (id == "ev-bomb:absent") return ev_bomb_test(EvObject::absent);
  if (id == "ev-bomb:opaque") return ev_bomb_test(EvObject::opaque);
  if (id == "wheeler" || id == "wheeler:absent") return wheeler(false);
  if (id == "wheeler:present") return wheeler(true);
  if (id == "penrose" || id == "penrose:live") return penrose(BombState::live);
  if (id == "penrose:dud") return penrose(BombState::dud);
  if (id == "hardy") return hardy();
  if (id == "ev-object") return ev_quantum_object();
  if (id == "ev-object:block") return ev_quantum_object({.opaque = true});
  if (id == "renninger") return renninger_scenario();
  if (id == "dicke") return dicke_scenario();
  if (id == "zeno" || id == "zeno:live") return zeno_scenario(10, BombState::live);
  if (id == "zeno:dud") return zeno_scenario(10, BombState::dud);
  throw ValidationError("unknown scenario '" + std::string(id) + "'");
}

inline bool is_scenario_name(std::string_view id) {
  for (const std::string& v : scenario_variants())
    if (v == id) return true;
  return id == "ev-bomb:bomb" || id == "wheeler:absent" || id == "penrose:live" || id == "zeno:live";
}

}  // namespace ifmlab
