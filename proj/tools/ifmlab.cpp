#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifmlab/ifmlab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct LoadedExperiment {
  std::string title;
  ifmlab::Circuit circuit;
  ifmlab::StateVector init{1};
  ifmlab::DetectorMap detectors;
  std::optional<std::string> postselect;
};

std::string format_prob(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", p);
  return buf;
}

/// Scenario names win over file paths; a ./ or absolute prefix forces file
/// interpretation.
LoadedExperiment load_input(const std::string& input) {
  const bool force_file = input.starts_with("./") || input.starts_with("/");
  if (!force_file && ifmlab::is_scenario_name(input)) {
    ifmlab::Scenario sc = ifmlab::make_scenario(input);
    return {sc.name, std::move(sc.circuit), std::move(sc.init), std::move(sc.detectors), std::nullopt};
  }
  std::ifstream file(input, std::ios::binary);
  if (!file) throw ifmlab::ParseError({{ifmlab::DiagnosticKind::missing_section, 1, "cannot open file '" + input + "'"}});
  std::stringstream buffer;
  buffer << file.rdbuf();
  ifmlab::ExperimentDoc doc = ifmlab::parse(buffer.str());
  return {input, ifmlab::to_circuit(doc), ifmlab::initial_state(doc), doc.detectors, doc.postselect};
}

void write_csv(const std::string& path, const ifmlab::OutcomeDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ifmlab::Error("cannot write '" + path + "'");
  out << "outcome,probability\n";
  for (const auto& [label, p] : dist.entries()) out << label << "," << format_prob(p) << "\n";
}

int cmd_run(const std::string& input, bool branches, const std::string& csv) {
  LoadedExperiment exp = load_input(input);
  ifmlab::StateVector final_state = ifmlab::evolve(exp.circuit, exp.init);
  ifmlab::OutcomeDistribution dist = ifmlab::outcome_distribution(final_state, exp.detectors);
  if (!csv.empty()) {
    write_csv(csv, dist);
    std::cout << "wrote " << csv << "\n";
    return kExitOk;
  }
  for (const auto& [label, p] : dist.entries()) std::cout << label << " " << format_prob(p) << "\n";
  if (branches) {
    std::cout << "branches:\n";
    for (const auto& [label, indices] : exp.detectors.assignments)
      for (std::size_t i : indices)
        std::cout << label << " " << exp.circuit.basis.index_label(i) << " "
                  << format_prob(final_state[i].real()) << " " << format_prob(final_state[i].imag()) << "\n";
  }
  return kExitOk;
}

int cmd_sample(const std::string& input, std::uint64_t shots, std::uint64_t seed) {
  LoadedExperiment exp = load_input(input);
  ifmlab::OutcomeDistribution dist =
      ifmlab::outcome_distribution(ifmlab::evolve(exp.circuit, exp.init), exp.detectors);
  auto counts = ifmlab::sample(dist, shots, seed);
  for (const auto& [label, n] : counts) {
    const double freq = shots ? static_cast<double>(n) / static_cast<double>(shots) : 0.0;
    std::cout << label << " " << n << " " << format_prob(freq) << "\n";
  }
  return kExitOk;
}

std::string resolve_post(const LoadedExperiment& exp, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (exp.postselect) return *exp.postselect;
  throw ifmlab::ValidationError("no post-selection label: pass --post or add a [post] section");
}

int cmd_trace(const std::string& input, const std::string& post_flag) {
  LoadedExperiment exp = load_input(input);
  const std::string post = resolve_post(exp, post_flag);
  ifmlab::TwoStateTrace t = ifmlab::trace(exp.circuit, exp.init, exp.detectors, post);
  std::cout << "post " << post << " p " << format_prob(t.post_probability) << "\n";
  for (std::size_t k = 0; k < t.boundaries(); ++k) {
    for (std::size_t i = 0; i < exp.circuit.basis.dim(); ++i) {
      const ifmlab::Amplitude fwd = t.forward[k][i];
      const ifmlab::Amplitude bwd = t.backward[k][i];
      const ifmlab::Amplitude pres = std::conj(bwd) * fwd;
      std::cout << "boundary " << k << " " << exp.circuit.basis.index_label(i) << " "
                << format_prob(fwd.real()) << " " << format_prob(fwd.imag()) << " "
                << format_prob(bwd.real()) << " " << format_prob(bwd.imag()) << " "
                << format_prob(pres.real()) << " " << format_prob(pres.imag()) << "\n";
    }
  }
  return kExitOk;
}

/// --partition syntax: comma-separated "label=term[+term...]" groups; terms
/// are detector terms (sink labels, system.mode references, '*' products).
/// Uncovered indices are auto-labeled "rest".
ifmlab::Partition parse_partition(const std::string& spec, const ifmlab::Basis& basis) {
  ifmlab::Partition parts;
  std::istringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ',')) {
    std::size_t eq = group.find('=');
    if (eq == std::string::npos)
      throw ifmlab::ValidationError("bad partition group '" + group + "': expected label=modes");
    std::string label = group.substr(0, eq);
    std::string terms = group.substr(eq + 1);
    label.erase(0, label.find_first_not_of(" \t"));
    label.erase(label.find_last_not_of(" \t") + 1);
    std::vector<std::size_t> indices;
    std::istringstream term_list(terms);
    std::string term;
    while (std::getline(term_list, term, '+')) {
      term.erase(0, term.find_first_not_of(" \t"));
      term.erase(term.find_last_not_of(" \t") + 1);
      if (term.empty()) throw ifmlab::ValidationError("empty partition term in '" + group + "'");
      if (term.find('.') == std::string::npos) {
        auto sink = basis.find_joint_sink(term);
        if (!sink) throw ifmlab::ValidationError("unknown sink label '" + term + "'");
        indices.push_back(*sink);
        continue;
      }
      std::vector<ifmlab::ModeLabel> refs;
      std::istringstream pieces(term);
      std::string piece;
      while (std::getline(pieces, piece, '*')) {
        std::size_t dot = piece.find('.');
        if (dot == std::string::npos)
          throw ifmlab::ValidationError("bad mode reference '" + piece + "'");
        ifmlab::ModeLabel m{piece.substr(0, dot), piece.substr(dot + 1)};
        if (!basis.has_mode(m)) throw ifmlab::ValidationError("unknown mode '" + to_string(m) + "'");
        refs.push_back(std::move(m));
      }
      for (std::size_t i = 0; i < basis.tensor_dim(); ++i) {
        std::vector<std::size_t> decomposed = basis.decompose(i);
        bool match = true;
        for (const ifmlab::ModeLabel& m : refs) {
          auto [sys, mode] = *basis.mode_position(m);
          if (decomposed[sys] != mode) {
            match = false;
            break;
          }
        }
        if (match) indices.push_back(i);
      }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    parts.emplace_back(label, std::move(indices));
  }
  if (parts.empty()) throw ifmlab::ValidationError("empty partition spec");
  return parts;
}

double abl_crosscheck_tolerance() {
  if (const char* env = std::getenv("IFMLAB_TOLERANCE")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end && *end == '\0' && v > 0.0) return v;
    std::cerr << "ignoring malformed IFMLAB_TOLERANCE '" << env << "'\n";
  }
  return 1e-10;
}

int cmd_abl(const std::string& input, const std::string& post_flag, std::size_t boundary,
            const std::string& partition_spec) {
  LoadedExperiment exp = load_input(input);
  const std::string post = resolve_post(exp, post_flag);
  ifmlab::Partition parts = parse_partition(partition_spec, exp.circuit.basis);

  ifmlab::OutcomeDistribution abl_dist =
      ifmlab::abl_at_boundary(exp.circuit, boundary, exp.init, parts, exp.detectors, post);
  ifmlab::JointStats joint =
      ifmlab::insert_measurement(exp.circuit, boundary, parts, exp.init, exp.detectors);
  ifmlab::OutcomeDistribution branch_dist = ifmlab::conditional(joint, post);

  for (const auto& [label, p] : abl_dist.entries()) std::cout << label << " " << format_prob(p) << "\n";
  double worst = 0.0;
  for (const auto& [label, p] : branch_dist.entries()) {
    std::cout << "crosscheck " << label << " " << format_prob(p) << "\n";
    worst = std::max(worst, std::abs(p - abl_dist.at(label)));
  }
  if (worst > abl_crosscheck_tolerance()) {
    std::cerr << "internal error: ABL and branch conditionals disagree by " << worst << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_zeno(std::size_t nmax, const std::string& csv) {
  std::ostringstream rows;
  for (std::size_t n = 1; n <= nmax; ++n) {
    const double closed = ifmlab::zeno_explosion_closed_form(n);
    const double sim = ifmlab::zeno_ifm(n, ifmlab::BombState::live).p_explosion;
    char delta[32];
    std::snprintf(delta, sizeof delta, "%.12e", closed - sim);
    rows << n << "," << format_prob(closed) << "," << format_prob(sim) << "," << delta << "\n";
  }
  if (!csv.empty()) {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw ifmlab::Error("cannot write '" + csv + "'");
    out << "N,p_closed,p_sim,delta\n" << rows.str();
    std::cout << "wrote " << csv << "\n";
    return kExitOk;
  }
  std::cout << "N p_closed p_sim delta\n";
  std::istringstream lines(rows.str());
  std::string line;
  while (std::getline(lines, line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::cout << line << "\n";
  }
  return kExitOk;
}

int cmd_scenario(const std::string& name) {
  if (name.empty()) {
    for (const std::string& id : ifmlab::scenario_variants()) {
      ifmlab::Scenario sc = ifmlab::make_scenario(id);
      std::cout << id << " dim " << sc.circuit.basis.dim() << " stages " << sc.circuit.stages.size()
                << " : " << sc.description << "\n";
    }
    return kExitOk;
  }
  ifmlab::Scenario sc = ifmlab::make_scenario(name);
  std::cout << sc.name << ": " << sc.description << "\n";
  std::cout << "dim " << sc.circuit.basis.dim() << ", stages " << sc.circuit.stages.size() << "\n";
  if (sc.expected) {
    std::cout << "expected:\n";
    for (const auto& [label, p] : sc.expected->entries()) {
      std::cout << "  " << label << " " << format_prob(p);
      for (const auto& [l, note] : sc.notes)
        if (l == label) std::cout << "  # " << note;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const std::string& input) {
  LoadedExperiment exp = load_input(input);
  std::vector<ifmlab::CircuitDiagnostic> diags = ifmlab::validate(exp.circuit);
  for (const ifmlab::CircuitDiagnostic& d : diags)
    std::cerr << "stage " << d.stage << " element " << d.element << ": " << d.message << "\n";
  if (!diags.empty()) return kExitValidation;
  std::cout << "ok: dim " << exp.circuit.basis.dim() << ", " << exp.circuit.stages.size() << " stages, "
            << exp.detectors.assignments.size() << " outcome labels\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ifmlab: interferometer and interaction-free measurement simulator"};
  app.require_subcommand(1);

  std::string input, csv, post, partition_spec, scenario_name;
  bool branches = false;
  std::uint64_t shots = 0, seed = 0;
  std::size_t boundary = 0, nmax = 1;

  CLI::App* run = app.add_subcommand("run", "compute the outcome distribution");
  run->add_option("input", input, "scenario name or .exp file")->required();
  run->add_flag("--branches", branches, "also list final amplitudes per outcome");
  run->add_option("--csv", csv, "write outcome,probability rows to a file");

  CLI::App* sample = app.add_subcommand("sample", "draw deterministic finite-shot counts");
  sample->add_option("input", input)->required();
  sample->add_option("--shots", shots, "number of shots")->required();
  sample->add_option("--seed", seed, "RNG seed (default 0)");

  CLI::App* trace_cmd = app.add_subcommand("trace", "two-state (forward/backward) trace per boundary");
  trace_cmd->add_option("input", input)->required();
  trace_cmd->add_option("--post", post, "post-selection outcome label");

  CLI::App* abl_cmd = app.add_subcommand("abl", "pre- and post-selected intermediate probabilities");
  abl_cmd->add_option("input", input)->required();
  abl_cmd->add_option("--post", post, "post-selection outcome label");
  abl_cmd->add_option("--boundary", boundary, "stage boundary of the measurement")->required();
  abl_cmd->add_option("--partition", partition_spec, "label=modes groups, comma separated")->required();

  CLI::App* zeno_cmd = app.add_subcommand("zeno", "explosion-probability scan of the chained-rotation test");
  zeno_cmd->add_option("--nmax", nmax, "scan N=1..nmax")->required()->check(CLI::PositiveNumber);
  zeno_cmd->add_option("--csv", csv, "write N,p_closed,p_sim,delta rows to a file");

  CLI::App* scenario_cmd = app.add_subcommand("scenario", "list built-in scenarios or describe one");
  scenario_cmd->add_option("name", scenario_name, "scenario identifier");

  CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate an experiment");
  validate_cmd->add_option("input", input)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(input, branches, csv);
    if (sample->parsed()) return cmd_sample(input, shots, seed);
    if (trace_cmd->parsed()) return cmd_trace(input, post);
    if (abl_cmd->parsed()) return cmd_abl(input, post, boundary, partition_spec);
    if (zeno_cmd->parsed()) return cmd_zeno(nmax, csv);
    if (scenario_cmd->parsed()) return cmd_scenario(scenario_name);
    if (validate_cmd->parsed()) return cmd_validate(input);
  } catch (const ifmlab::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const ifmlab::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ifmlab::DimensionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ifmlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
