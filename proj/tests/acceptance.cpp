// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = failure count.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ifmlab/ifmlab.hpp"
#include "oracles.hpp"

using namespace ifmlab;

namespace {

int failures = 0;

void criterion(int num, const std::string& title, const std::function<void()>& body) {
  try {
    body();
    std::printf("PASS criterion %2d: %s\n", num, title.c_str());
  } catch (const std::exception& e) {
    ++failures;
    std::printf("FAIL criterion %2d: %s\n    %s\n", num, title.c_str(), e.what());
  }
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol))
    throw std::runtime_error(what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
}

OutcomeDistribution run_scenario(const Scenario& sc) {
  return outcome_distribution(evolve(sc.circuit, sc.init), sc.detectors);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main() {
  criterion(1, "bomb tester: {explosion 1/2, D1 1/4, D2 1/4}; empty device: {D1 1, D2 0}", [] {
    OutcomeDistribution bomb = run_scenario(ev_bomb_test(EvObject::bomb));
    require_close(bomb.at("explosion"), 0.5, 1e-12, "explosion");
    require_close(bomb.at("D1"), 0.25, 1e-12, "D1");
    require_close(bomb.at("D2"), 0.25, 1e-12, "D2");
    OutcomeDistribution absent = run_scenario(ev_bomb_test(EvObject::absent));
    require_close(absent.at("D1"), 1.0, 1e-12, "absent D1");
    require_close(absent.at("D2"), 0.0, 1e-12, "absent D2");
  });

  criterion(2, "crossed interferometers: 10-outcome distribution against the path-sum oracle", [] {
    OutcomeDistribution dist = run_scenario(hardy());
    double total = 0.0;
    for (const auto& [label, p] : dist.entries()) total += p;
    require_close(total, 1.0, 1e-10, "total probability");
    require_close(dist.at("annihilation"), 0.25, 1e-12, "annihilation");
    require_close(dist.at("bothD2"), 1.0 / 16.0, 1e-12, "bothD2");
    require_close(dist.at("bothD1"), 9.0 / 16.0, 1e-12, "bothD1");
    const oracles::CrossedResult oracle = oracles::crossed_interferometers();
    require_close(dist.at("annihilation"), oracle.p_annihilation, 1e-12, "oracle annihilation");
    require_close(dist.at("bothD2"), oracle.p_final[0][1], 1e-12, "oracle bothD2");
    require_close(dist.at("bothD1"), oracle.p_final[1][0], 1e-12, "oracle bothD1");
    require_close(dist.at("D1D2"), oracle.p_final[1][1], 1e-12, "oracle D1D2");
    require_close(dist.at("D2D1"), oracle.p_final[0][0], 1e-12, "oracle D2D1");
  });

  criterion(3, "crossed interferometers: W conditionals by branch insertion and the ABL rule", [] {
    Scenario sc = hardy();
    const Basis& b = sc.circuit.basis;
    auto composite = [&](const char* pm, const char* rm) {
      std::size_t parts[2] = {b.mode_position({"photon", pm})->second,
                              b.mode_position({"particle", rm})->second};
      return b.composite_index(parts);
    };
    const Partition particle_w{{"W", b.marginal_indices({"particle", "upper"})}};
    const Partition photon_w{{"W", b.marginal_indices({"photon", "lower"})}};
    const Partition both_w{{"W", {composite("lower", "upper")}}};
    const double want[3] = {1.0, 1.0, 0.0};
    const Partition* parts[3] = {&particle_w, &photon_w, &both_w};
    for (int q = 0; q < 3; ++q) {
      OutcomeDistribution branch =
          conditional(insert_measurement(sc.circuit, 2, *parts[q], sc.init, sc.detectors), "bothD2");
      OutcomeDistribution via_abl =
          abl_at_boundary(sc.circuit, 2, sc.init, *parts[q], sc.detectors, "bothD2");
      require_close(branch.at("W"), want[q], 1e-10, "branch W probe " + std::to_string(q));
      require_close(via_abl.at("W"), want[q], 1e-10, "abl W probe " + std::to_string(q));
      for (const auto& [label, p] : branch.entries())
        require_close(p, via_abl.at(label), 1e-10, "branch/abl agreement on " + label);
    }
  });

  criterion(4, "two-state traces: dark-port photon leaves no lower-arm presence; constant bridge", [] {
    const char* ids[2] = {"ev-bomb", "wheeler"};
    for (const char* id : ids) {
      Scenario sc = make_scenario(id);
      TwoStateTrace t = trace(sc.circuit, sc.init, sc.detectors, "D2");
      const Amplitude bridge = inner(t.backward[0], t.forward[0]);
      for (std::size_t k = 0; k < t.boundaries(); ++k) {
        require(std::abs(presence(t, {"photon", "lower"}, k)) <= 1e-12,
                std::string(id) + ": lower-arm presence at boundary " + std::to_string(k));
        require(std::abs(inner(t.backward[k], t.forward[k]) - bridge) <= 1e-12,
                std::string(id) + ": bridge drift at boundary " + std::to_string(k));
      }
    }
  });

  criterion(5, "chained rotations: closed form = simulation; decreasing; p(1000) < 0.0025", [] {
    for (std::size_t n : {1, 2, 5, 10, 50})
      require_close(zeno_ifm(n, BombState::live).p_explosion, zeno_explosion_closed_form(n), 1e-12,
                    "N=" + std::to_string(n));
    for (std::size_t n = 1; n < 100; ++n)
      require(zeno_explosion_closed_form(n + 1) < zeno_explosion_closed_form(n),
              "not strictly decreasing at N=" + std::to_string(n));
    require(zeno_explosion_closed_form(1000) < 0.0025, "p(1000) too large");
  });

  criterion(6, "negative-result projections; silent pulse raises the well energy", [] {
    StateVector uniform(4);
    for (int i = 0; i < 4; ++i) uniform[i] = 0.5;
    auto [post, p] = renninger(4, {0}, uniform);
    require_close(p, 0.75, 1e-12, "no-click probability");
    for (int i = 1; i < 4; ++i)
      require_close(std::abs(post[i]), 1.0 / std::sqrt(3.0), 1e-12, "projected amplitude");
    bool threw = false;
    try {
      renninger(4, {0, 1, 2, 3}, uniform);
    } catch (const ZeroProbabilityError&) {
      threw = true;
    }
    require(threw, "covering the whole wave must fail");

    StateVector skewed(3);
    skewed[0] = std::sqrt(0.5);
    skewed[1] = std::sqrt(0.25);
    skewed[2] = std::sqrt(0.25);
    auto [post2, p2] = renninger(3, {0}, skewed);
    require_close(p2, 0.5, 1e-12, "skewed no-click probability");
    require_close(post2[1].real(), 1.0 / std::sqrt(2.0), 1e-12, "skewed projected amplitude");

    auto [e0, vec] = oracles::jacobi_ground<3>({{{2.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 2.0}}});
    StateVector ground(3);
    for (int i = 0; i < 3; ++i) ground[i] = std::abs(vec[i]);
    DickeResult r = dicke(ground, {0}, dicke_well_hamiltonian());
    require_close(r.e_before, e0, 1e-12, "ground energy against direct diagonalization");
    require(r.e_after - r.e_before > 0.0, "energy must strictly increase");

    StateVector corner(3);
    corner[0] = 1.0;
    DickeResult untouched = dicke(corner, {1, 2}, dicke_well_hamiltonian());
    require_close(untouched.p_negative, 1.0, 1e-12, "disjoint light leaves p_negative = 1");
    require_close(std::abs(untouched.post[0]), 1.0, 1e-12, "disjoint light leaves the state");
  });

  criterion(7, "localization: D2 collapses the particle onto 'in'; internal state untouched", [] {
    Scenario sc = ev_quantum_object();
    auto [state, p] = postselect(evolve(sc.circuit, sc.init), sc.detectors, "D2");
    double p_in = 0.0;
    for (std::size_t i : sc.circuit.basis.marginal_indices({"particle", "in"})) p_in += std::norm(state[i]);
    require_close(p_in, 1.0, 1e-12, "P(particle at 'in' | D2)");

    const Amplitude alpha(0.6, 0.0), beta(0.0, 0.8);
    Scenario tagged = ev_quantum_object({.internal_state = {alpha, beta}});
    auto [tstate, tp] = postselect(evolve(tagged.circuit, tagged.init), tagged.detectors, "D2");
    const Basis& b = tagged.circuit.basis;
    std::size_t right = b.mode_position({"photon", "right"})->second;
    std::size_t in0 = b.mode_position({"particle", "in_0"})->second;
    std::size_t in1 = b.mode_position({"particle", "in_1"})->second;
    std::size_t parts0[2] = {right, in0}, parts1[2] = {right, in1};
    const Amplitude a0 = tstate[b.composite_index(parts0)], a1 = tstate[b.composite_index(parts1)];
    require_close(std::sqrt(std::norm(a0) + std::norm(a1)), 1.0, 1e-12, "internal sector norm");
    require_close(std::abs(std::conj(alpha) * a0 + std::conj(beta) * a1), 1.0, 1e-12,
                  "internal state overlap");
  });

  criterion(8, "1000 random circuits: unitary elements, norm-preserving evolution", [] {
    std::mt19937_64 rng(0xacceff);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int round = 0; round < 1000; ++round) {
      const std::size_t n_modes = 2 + rng() % 5;
      std::vector<std::string> modes;
      for (std::size_t m = 0; m < n_modes; ++m) modes.push_back("m" + std::to_string(m));
      Basis b;
      b.add_system("sys", modes);
      Circuit c{b, {}};
      const std::size_t n_stages = 1 + rng() % 5;
      for (std::size_t st = 0; st < n_stages; ++st) {
        Stage stage;
        std::vector<std::size_t> free;
        for (std::size_t m = 0; m < n_modes; ++m) free.push_back(m);
        std::shuffle(free.begin(), free.end(), rng);
        while (free.size() >= 2) {
          const std::size_t a = free.back();
          free.pop_back();
          const std::size_t z = free.back();
          free.pop_back();
          ModeLabel la{"sys", modes[a]}, lb{"sys", modes[z]};
          switch (rng() % 6) {
            case 0: stage.push_back(BeamSplitter{la, lb, unit(rng)}); break;
            case 1: stage.push_back(PhaseShift{la, unit(rng) * 6.283185307}); break;
            case 2: stage.push_back(SwapModes{la, lb}); break;
            case 3: stage.push_back(Absorb{la, modes[z], AbsorbKind::bomb}); break;
            case 4: stage.push_back(Absorb{la, modes[z], AbsorbKind::dud}); break;
            case 5: stage.push_back(Rotate{la, lb, unit(rng) * 6.283185307}); break;
          }
          if (rng() % 3 == 0) break;
        }
        c.stages.push_back(std::move(stage));
      }
      require(validate(c).empty(), "random circuit must validate");
      for (const Stage& st : c.stages)
        for (const Element& e : st)
          require(is_unitary(element_operator(e, b), 1e-12), "element operator not unitary");
      StateVector init = StateVector::basis_state(b.dim(), rng() % b.dim());
      require(std::abs(evolve(c, init).norm2() - 1.0) <= 1e-10, "evolved norm drifted");
    }
  });

  criterion(9, "sampler: 4-sigma binomial windows at 1e5 shots; bit-identical reruns", [] {
    OutcomeDistribution ev = run_scenario(ev_bomb_test(EvObject::bomb));
    const std::uint64_t shots = 100000;
    auto counts = sample(ev, shots, 99);
    for (const auto& [label, n] : counts) {
      const double p = ev.at(label);
      const double bound = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
      require(std::abs(static_cast<double>(n) / shots - p) <= bound + 1e-12,
              "frequency of '" + label + "' outside the 4-sigma window");
    }
    require(sample(ev, shots, 99) == counts, "identical seed must reproduce identical counts");
  });

  criterion(10, "parser: shipped files round-trip and match scenarios; 10000-case fuzz", [] {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"ev-bomb.exp", "ev-bomb"},     {"wheeler.exp", "wheeler"},
        {"penrose.exp", "penrose"},     {"penrose-dud.exp", "penrose:dud"},
        {"hardy.exp", "hardy"},         {"ev-object.exp", "ev-object"},
        {"renninger.exp", "renninger"}, {"dicke.exp", "dicke"},
        {"zeno.exp", "zeno"},
    };
    for (const auto& [file, scenario_id] : pairs) {
      ExperimentDoc doc = parse(read_file(std::string(IFMLAB_EXPERIMENTS_DIR) + "/" + file));
      require(structurally_equal(parse(serialize(doc)), doc), file + " does not round-trip");
      OutcomeDistribution from_file =
          outcome_distribution(evolve(to_circuit(doc), initial_state(doc)), doc.detectors);
      OutcomeDistribution from_library = run_scenario(make_scenario(scenario_id));
      for (const auto& [label, p] : from_library.entries())
        require_close(from_file.at(label), p, 1e-12, file + " label " + label);
    }

    std::mt19937_64 rng(0xf0220a);
    const std::vector<std::string> atoms = {
        "[system photon]", "[system q]", "[jointsinks]", "[init]", "[stage]", "[detect]", "[post]",
        "BS", "PHASE", "SWAP", "ABSORB", "JOINT", "ROT", "photon.a", "photon.b", "q.x", "a", "b",
        "->", "=", "T=0.5", "T=2", "phi=pi/3", "theta=pi", "kind=bomb", "kind=dud", "1,0", "0.5,0.5",
        "pi/4", "-1", "*", ",", "[", "]", "#x",
    };
    for (int round = 0; round < 10000; ++round) {
      std::string text;
      if (round % 4 == 0) {
        const std::size_t len = rng() % (round % 211 == 0 ? 65536 : 300);
        text.reserve(len);
        for (std::size_t i = 0; i < len; ++i) text += static_cast<char>(rng() % 256);
      } else {
        const std::size_t lines = rng() % 25;
        for (std::size_t l = 0; l < lines; ++l) {
          const std::size_t tokens = rng() % 6;
          for (std::size_t t = 0; t < tokens; ++t) {
            text += atoms[rng() % atoms.size()];
            text += ' ';
          }
          text += '\n';
        }
      }
      try {
        ExperimentDoc doc = parse(text);
        require(validate(to_circuit(doc)).empty(), "fuzz: parsed document fails validation");
        require(std::abs(initial_state(doc).norm2() - 1.0) <= 1e-12, "fuzz: init not normalized");
      } catch (const ParseError& e) {
        require(!e.diagnostics().empty(), "fuzz: ParseError without diagnostics");
        for (const ParseDiagnostic& d : e.diagnostics()) {
          require(d.line >= 1, "fuzz: diagnostic without a line number");
          require(!d.message.empty(), "fuzz: diagnostic without a message");
        }
      }
      // any other exception type escapes and fails the criterion
    }
  });

  if (failures == 0) std::printf("all acceptance criteria passed\n");
  return failures;
}
