#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ifmlab/core.hpp"
#include "ifmlab/engine.hpp"
#include "ifmlab/optics.hpp"

namespace ifmlab {

enum class DiagnosticKind {
  unknown_section,
  missing_section,
  malformed_line,
  malformed_number,
  duplicate_name,
  unresolved_label,
  invalid_value,
  empty_init,
  non_normalized_init,
};

inline std::string_view to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::unknown_section: return "unknown-section";
    case DiagnosticKind::missing_section: return "missing-section";
    case DiagnosticKind::malformed_line: return "malformed-line";
    case DiagnosticKind::malformed_number: return "malformed-number";
    case DiagnosticKind::duplicate_name: return "duplicate-name";
    case DiagnosticKind::unresolved_label: return "unresolved-label";
    case DiagnosticKind::invalid_value: return "invalid-value";
    case DiagnosticKind::empty_init: return "empty-init";
    case DiagnosticKind::non_normalized_init: return "non-normalized-init";
  }
  return "unknown";
}

struct ParseDiagnostic {
  DiagnosticKind kind;
  std::size_t line;  // 1-based
  std::string message;
};

class ParseError : public Error {
public:
  explicit ParseError(std::vector<ParseDiagnostic> diags) : Error(format(diags)), diags_(std::move(diags)) {}

  const std::vector<ParseDiagnostic>& diagnostics() const { return diags_; }

private:
  static std::string format(const std::vector<ParseDiagnostic>& diags) {
    std::ostringstream out;
    for (std::size_t i = 0; i < diags.size(); ++i) {
      if (i) out << '\n';
      out << "line " << diags[i].line << ": " << to_string(diags[i].kind) << ": " << diags[i].message;
    }
    return out.str();
  }

  std::vector<ParseDiagnostic> diags_;
};

/// A parsed experiment description. The initial state is kept in the file's
/// factored form: one amplitude list per system (the composite initial
/// state is their tensor product) plus explicit joint-sink amplitudes.
struct ExperimentDoc {
  Basis basis;
  std::vector<std::vector<Amplitude>> system_init;
  std::vector<Amplitude> sink_init;
  std::vector<Stage> stages;
  DetectorMap detectors;
  std::optional<std::string> postselect;
};

inline Circuit to_circuit(const ExperimentDoc& doc) { return Circuit{doc.basis, doc.stages}; }

/// Composite initial state, exactly renormalized.
inline StateVector initial_state(const ExperimentDoc& doc) {
  if (doc.system_init.size() != doc.basis.systems().size() ||
      doc.sink_init.size() != doc.basis.joint_sinks().size())
    throw DimensionError("initial_state: document init lists do not match its basis");
  for (std::size_t s = 0; s < doc.system_init.size(); ++s)
    if (doc.system_init[s].size() != doc.basis.systems()[s].modes.size())
      throw DimensionError("initial_state: document init lists do not match its basis");
  StateVector product(1);
  product[0] = 1.0;
  for (const std::vector<Amplitude>& sys : doc.system_init) product = tensor(product, StateVector(sys));
  StateVector out(doc.basis.dim());
  for (std::size_t i = 0; i < product.dim(); ++i) out[i] = product[i];
  for (std::size_t j = 0; j < doc.sink_init.size(); ++j) out[doc.basis.tensor_dim() + j] = doc.sink_init[j];
  const double n = out.norm();
  if (n != 1.0) {
    StateVector scaled(out.dim());
    for (std::size_t i = 0; i < out.dim(); ++i) scaled[i] = out[i] / n;
    return scaled;
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool strict_name(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) return false;
  }
  return true;
}

/// Decimal literal or pi form ("pi", "pi/4", "-pi/2").
inline std::optional<double> parse_real(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  double sign = 1.0;
  if (token.front() == '-') {
    sign = -1.0;
    token.remove_prefix(1);
  } else if (token.front() == '+') {
    token.remove_prefix(1);
  }
  if (token == "pi") return sign * std::numbers::pi;
  if (token.starts_with("pi/")) {
    std::string_view den = token.substr(3);
    unsigned long long n = 0;
    auto [ptr, ec] = std::from_chars(den.data(), den.data() + den.size(), n);
    if (ec != std::errc{} || ptr != den.data() + den.size() || n == 0) return std::nullopt;
    return sign * std::numbers::pi / static_cast<double>(n);
  }
  if (token.front() == 'i' || token.front() == 'n' || token.front() == 'I' || token.front() == 'N')
    return std::nullopt;  // reject inf/nan spellings
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) return std::nullopt;
  return sign * value;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string render_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string render_amplitude(Amplitude a) {
  return render_real(a.real()) + "," + render_real(a.imag());
}

}  // namespace detail

/// Parses the textual experiment format. Line-oriented; '#' starts a
/// comment; blank lines are ignored. Sections:
///   [system <name>]  one mode name per body line
///   [jointsinks]     one joint sink label per body line
///   [init]           <system>.<mode> = <re>,<im>   (or <sinklabel> = ...)
///   [stage]          one element per body line:
///       BS <a> <b> T=<real> | PHASE <a> phi=<real> | SWAP <a> <b>
///       | ABSORB <a> -> <sink> kind=<bomb|opaque|dud>
///       | JOINT <a> <b> -> <sinklabel> | ROT <a> <b> theta=<real>
///   [detect]         <label> = <term>[, ...]; a term is a joint sink label,
///                    a <system>.<mode> reference (all matching composite
///                    states), or a '*'-joined product of mode references
///   [post]           one outcome label
/// Reals accept decimal and pi/<int> forms. All errors carry 1-based line
/// numbers; on any error a ParseError with the full diagnostic list is
/// thrown, so a returned document is always valid.
inline ExperimentDoc parse(std::string_view text) {
  std::vector<ParseDiagnostic> diags;
  auto fail = [&](DiagnosticKind kind, std::size_t line, std::string message) {
    diags.push_back({kind, line, std::move(message)});
  };

  struct RawSystem {
    std::string name;
    std::size_t line;
    std::vector<std::pair<std::string, std::size_t>> modes;
  };
  struct RawLine {
    std::string text;
    std::size_t line;
  };
  std::vector<RawSystem> systems;
  std::vector<std::pair<std::string, std::size_t>> sinks;
  std::vector<RawLine> init_lines, detect_lines, post_lines;
  std::vector<std::vector<RawLine>> stage_lines;
  std::size_t init_section_line = 0;

  enum class Section { none, system, jointsinks, init, stage, detect, post, skip };
  Section section = Section::none;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (std::size_t hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(DiagnosticKind::malformed_line, line_no, "unterminated section header");
        section = Section::skip;
        continue;
      }
      std::string_view header = detail::trim(line.substr(1, line.size() - 2));
      if (header.starts_with("system")) {
        std::string_view name = detail::trim(header.substr(6));
        if (!detail::strict_name(name)) {
          fail(DiagnosticKind::malformed_line, line_no, "bad system declaration '" + std::string(line) + "'");
          section = Section::skip;
          continue;
        }
        for (const RawSystem& s : systems)
          if (s.name == name) fail(DiagnosticKind::duplicate_name, line_no, "duplicate system '" + std::string(name) + "'");
        systems.push_back({std::string(name), line_no, {}});
        section = Section::system;
      } else if (header == "jointsinks") {
        section = Section::jointsinks;
      } else if (header == "init") {
        section = Section::init;
        if (init_section_line == 0) init_section_line = line_no;
      } else if (header == "stage") {
        stage_lines.emplace_back();
        section = Section::stage;
      } else if (header == "detect") {
        section = Section::detect;
      } else if (header == "post") {
        section = Section::post;
      } else {
        fail(DiagnosticKind::unknown_section, line_no, "unknown section '[" + std::string(header) + "]'");
        section = Section::skip;
      }
      continue;
    }

    switch (section) {
      case Section::none:
        fail(DiagnosticKind::malformed_line, line_no, "content before the first section header");
        break;
      case Section::skip:
        break;
      case Section::system: {
        if (!detail::strict_name(line)) {
          fail(DiagnosticKind::malformed_line, line_no, "bad mode name '" + std::string(line) + "'");
          break;
        }
        RawSystem& sys = systems.back();
        for (const auto& [m, l] : sys.modes)
          if (m == line) fail(DiagnosticKind::duplicate_name, line_no, "duplicate mode '" + sys.name + "." + std::string(line) + "'");
        sys.modes.emplace_back(std::string(line), line_no);
        break;
      }
      case Section::jointsinks: {
        if (!detail::strict_name(line)) {
          fail(DiagnosticKind::malformed_line, line_no, "bad joint sink label '" + std::string(line) + "'");
          break;
        }
        for (const auto& [s, l] : sinks)
          if (s == line) fail(DiagnosticKind::duplicate_name, line_no, "duplicate joint sink '" + std::string(line) + "'");
        sinks.emplace_back(std::string(line), line_no);
        break;
      }
      case Section::init:
        init_lines.push_back({std::string(line), line_no});
        break;
      case Section::stage:
        stage_lines.back().push_back({std::string(line), line_no});
        break;
      case Section::detect:
        detect_lines.push_back({std::string(line), line_no});
        break;
      case Section::post:
        post_lines.push_back({std::string(line), line_no});
        break;
    }
  }

  if (systems.empty()) fail(DiagnosticKind::missing_section, 1, "no [system] section declared");

  ExperimentDoc doc;
  bool basis_ok = !systems.empty();
  for (const RawSystem& s : systems) {
    if (s.modes.empty()) {
      fail(DiagnosticKind::missing_section, s.line, "system '" + s.name + "' declares no modes");
      basis_ok = false;
    }
  }
  if (basis_ok && diags.empty()) {
    for (const RawSystem& s : systems) {
      std::vector<std::string> modes;
      for (const auto& [m, l] : s.modes) modes.push_back(m);
      doc.basis.add_system(s.name, std::move(modes));
    }
    for (const auto& [s, l] : sinks) doc.basis.add_joint_sink(s);
  } else {
    // structural problems already recorded; nothing below can resolve
    throw ParseError(std::move(diags));
  }
  const Basis& basis = doc.basis;

  auto parse_mode_ref = [&](std::string_view token, std::size_t line) -> std::optional<ModeLabel> {
    std::size_t dot = token.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == token.size()) {
      fail(DiagnosticKind::malformed_line, line, "expected <system>.<mode>, got '" + std::string(token) + "'");
      return std::nullopt;
    }
    ModeLabel m{std::string(token.substr(0, dot)), std::string(token.substr(dot + 1))};
    if (!basis.has_mode(m)) {
      fail(DiagnosticKind::unresolved_label, line, "unknown mode '" + to_string(m) + "'");
      return std::nullopt;
    }
    return m;
  };

  // --- init --------------------------------------------------------------
  doc.system_init.resize(basis.systems().size());
  for (std::size_t s = 0; s < basis.systems().size(); ++s)
    doc.system_init[s].assign(basis.systems()[s].modes.size(), 0.0);
  doc.sink_init.assign(basis.joint_sinks().size(), 0.0);
  std::vector<std::vector<char>> init_seen(doc.system_init.size());
  for (std::size_t s = 0; s < doc.system_init.size(); ++s) init_seen[s].assign(doc.system_init[s].size(), 0);
  std::vector<char> sink_seen(doc.sink_init.size(), 0);

  for (const RawLine& rl : init_lines) {
    std::size_t eq = rl.text.find('=');
    if (eq == std::string::npos) {
      fail(DiagnosticKind::malformed_line, rl.line, "expected '<ref> = <re>,<im>'");
      continue;
    }
    std::string_view ref = detail::trim(std::string_view(rl.text).substr(0, eq));
    std::string_view value = detail::trim(std::string_view(rl.text).substr(eq + 1));
    std::vector<std::string_view> comps = detail::split_on(value, ',');
    if (comps.size() != 2) {
      fail(DiagnosticKind::malformed_line, rl.line, "amplitude needs exactly '<re>,<im>'");
      continue;
    }
    std::optional<double> re = detail::parse_real(comps[0]);
    std::optional<double> im = detail::parse_real(comps[1]);
    if (!re || !im) {
      fail(DiagnosticKind::malformed_number, rl.line, "bad amplitude component in '" + std::string(value) + "'");
      continue;
    }
    if (ref.find('.') != std::string_view::npos) {
      std::optional<ModeLabel> m = parse_mode_ref(ref, rl.line);
      if (!m) continue;
      auto [sys, mode] = *basis.mode_position(*m);
      if (init_seen[sys][mode]) {
        fail(DiagnosticKind::duplicate_name, rl.line, "duplicate init entry for '" + to_string(*m) + "'");
        continue;
      }
      init_seen[sys][mode] = 1;
      doc.system_init[sys][mode] = Amplitude(*re, *im);
    } else if (auto sink = basis.find_joint_sink(ref)) {
      std::size_t j = *sink - basis.tensor_dim();
      if (sink_seen[j]) {
        fail(DiagnosticKind::duplicate_name, rl.line, "duplicate init entry for '" + std::string(ref) + "'");
        continue;
      }
      sink_seen[j] = 1;
      doc.sink_init[j] = Amplitude(*re, *im);
    } else {
      fail(DiagnosticKind::unresolved_label, rl.line, "unknown init reference '" + std::string(ref) + "'");
    }
  }

  if (init_lines.empty()) {
    fail(DiagnosticKind::empty_init, init_section_line ? init_section_line : 1,
         init_section_line ? "empty [init] section" : "missing [init] section");
  } else {
    for (std::size_t s = 0; s < doc.system_init.size(); ++s) {
      double n2 = 0.0;
      for (const Amplitude& a : doc.system_init[s]) n2 += std::norm(a);
      if (n2 < 1e-28)
        fail(DiagnosticKind::empty_init, init_section_line,
             "system '" + basis.systems()[s].name + "' has no initial amplitude");
    }
    double norm2 = doc.system_init.empty() ? 0.0 : 1.0;
    for (const std::vector<Amplitude>& sys : doc.system_init) {
      double n2 = 0.0;
      for (const Amplitude& a : sys) n2 += std::norm(a);
      norm2 *= n2;
    }
    for (const Amplitude& a : doc.sink_init) norm2 += std::norm(a);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
      fail(DiagnosticKind::non_normalized_init, init_section_line,
           "initial state norm is " + detail::render_real(std::sqrt(norm2)) + ", expected 1");
  }

  // --- stages -------------------------------------------------------------
  auto keyed_real = [&](std::string_view token, std::string_view key, std::size_t line) -> std::optional<double> {
    if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=') {
      fail(DiagnosticKind::malformed_line, line,
           "expected '" + std::string(key) + "=<real>', got '" + std::string(token) + "'");
      return std::nullopt;
    }
    std::optional<double> v = detail::parse_real(token.substr(key.size() + 1));
    if (!v) fail(DiagnosticKind::malformed_number, line, "bad number in '" + std::string(token) + "'");
    return v;
  };

  std::vector<std::vector<std::size_t>> element_lines(stage_lines.size());
  for (std::size_t st = 0; st < stage_lines.size(); ++st) {
    doc.stages.emplace_back();
    for (const RawLine& rl : stage_lines[st]) {
      std::vector<std::string_view> tok = detail::split_ws(rl.text);
      std::optional<Element> element;
      const std::string_view kw = tok.empty() ? std::string_view{} : tok[0];
      if (kw == "BS" && tok.size() == 4) {
        auto a = parse_mode_ref(tok[1], rl.line), b = parse_mode_ref(tok[2], rl.line);
        auto t = keyed_real(tok[3], "T", rl.line);
        if (a && b && t) element = BeamSplitter{*a, *b, *t};
      } else if (kw == "PHASE" && tok.size() == 3) {
        auto a = parse_mode_ref(tok[1], rl.line);
        auto phi = keyed_real(tok[2], "phi", rl.line);
        if (a && phi) element = PhaseShift{*a, *phi};
      } else if (kw == "SWAP" && tok.size() == 3) {
        auto a = parse_mode_ref(tok[1], rl.line), b = parse_mode_ref(tok[2], rl.line);
        if (a && b) element = SwapModes{*a, *b};
      } else if (kw == "ABSORB" && tok.size() == 5 && tok[2] == "->") {
        auto a = parse_mode_ref(tok[1], rl.line);
        std::optional<AbsorbKind> kind;
        if (tok[4] == "kind=bomb") kind = AbsorbKind::bomb;
        else if (tok[4] == "kind=opaque") kind = AbsorbKind::opaque;
        else if (tok[4] == "kind=dud") kind = AbsorbKind::dud;
        else fail(DiagnosticKind::invalid_value, rl.line, "bad absorber kind '" + std::string(tok[4]) + "'");
        if (a && kind) element = Absorb{*a, std::string(tok[3]), *kind};
      } else if (kw == "JOINT" && tok.size() == 5 && tok[3] == "->") {
        auto a = parse_mode_ref(tok[1], rl.line), b = parse_mode_ref(tok[2], rl.line);
        if (a && b) element = JointSinkElement{*a, *b, std::string(tok[4])};
      } else if (kw == "ROT" && tok.size() == 4) {
        auto a = parse_mode_ref(tok[1], rl.line), b = parse_mode_ref(tok[2], rl.line);
        auto theta = keyed_real(tok[3], "theta", rl.line);
        if (a && b && theta) element = Rotate{*a, *b, *theta};
      } else {
        fail(DiagnosticKind::malformed_line, rl.line, "unrecognized element '" + rl.text + "'");
      }
      if (!element) continue;
      if (std::string err = detail::check_element(*element, basis); !err.empty()) {
        DiagnosticKind kind = err.find("unknown") != std::string::npos ? DiagnosticKind::unresolved_label
                                                                       : DiagnosticKind::invalid_value;
        fail(kind, rl.line, err);
        continue;
      }
      doc.stages[st].push_back(*element);
      element_lines[st].push_back(rl.line);
    }
  }

  // stage disjointness, reported on the second offending element's line
  for (const CircuitDiagnostic& cd : validate(Circuit{basis, doc.stages})) {
    std::size_t line = 1;
    if (cd.stage >= 1 && cd.stage <= element_lines.size() && cd.element >= 1 &&
        cd.element <= element_lines[cd.stage - 1].size())
      line = element_lines[cd.stage - 1][cd.element - 1];
    fail(DiagnosticKind::invalid_value, line, cd.message);
  }

  // --- detect --------------------------------------------------------------
  std::vector<char> claimed(basis.dim(), 0);
  for (const RawLine& rl : detect_lines) {
    std::size_t eq = rl.text.find('=');
    if (eq == std::string::npos) {
      fail(DiagnosticKind::malformed_line, rl.line, "expected '<label> = <term>[, ...]'");
      continue;
    }
    std::string label(detail::trim(std::string_view(rl.text).substr(0, eq)));
    std::string_view terms = detail::trim(std::string_view(rl.text).substr(eq + 1));
    if (!detail::strict_name(label)) {
      fail(DiagnosticKind::malformed_line, rl.line, "bad outcome label '" + label + "'");
      continue;
    }
    if (label == kOtherLabel) {
      fail(DiagnosticKind::invalid_value, rl.line, "outcome label 'other' is reserved");
      continue;
    }
    if (doc.detectors.find(label)) {
      fail(DiagnosticKind::duplicate_name, rl.line, "duplicate outcome label '" + label + "'");
      continue;
    }
    std::vector<std::size_t> indices;
    bool ok = true;
    for (std::string_view term : detail::split_on(terms, ',')) {
      term = detail::trim(term);
      if (term.empty()) {
        fail(DiagnosticKind::malformed_line, rl.line, "empty detector term");
        ok = false;
        continue;
      }
      if (term.find('.') == std::string_view::npos) {
        if (auto sink = basis.find_joint_sink(term)) {
          indices.push_back(*sink);
        } else {
          fail(DiagnosticKind::unresolved_label, rl.line, "unknown sink label '" + std::string(term) + "'");
          ok = false;
        }
        continue;
      }
      std::vector<ModeLabel> refs;
      bool term_ok = true;
      for (std::string_view piece : detail::split_on(term, '*')) {
        std::optional<ModeLabel> m = parse_mode_ref(detail::trim(piece), rl.line);
        if (!m) {
          term_ok = false;
          continue;
        }
        for (const ModeLabel& prev : refs)
          if (prev.system == m->system) {
            fail(DiagnosticKind::invalid_value, rl.line,
                 "term references system '" + m->system + "' more than once");
            term_ok = false;
          }
        refs.push_back(*m);
      }
      if (!term_ok) {
        ok = false;
        continue;
      }
      // all tensor indices compatible with every reference in the term
      for (std::size_t i = 0; i < basis.tensor_dim(); ++i) {
        std::vector<std::size_t> parts = basis.decompose(i);
        bool match = true;
        for (const ModeLabel& m : refs) {
          auto [sys, mode] = *basis.mode_position(m);
          if (parts[sys] != mode) {
            match = false;
            break;
          }
        }
        if (match) indices.push_back(i);
      }
    }
    if (!ok) continue;
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    bool overlap = false;
    for (std::size_t i : indices) {
      if (claimed[i]) {
        fail(DiagnosticKind::invalid_value, rl.line,
             "detector '" + label + "' overlaps an earlier assignment at " + basis.index_label(i));
        overlap = true;
        break;
      }
    }
    if (overlap) continue;
    for (std::size_t i : indices) claimed[i] = 1;
    doc.detectors.add(label, std::move(indices));
  }

  // --- post ----------------------------------------------------------------
  if (post_lines.size() > 1)
    fail(DiagnosticKind::duplicate_name, post_lines[1].line, "multiple post-selection labels");
  if (post_lines.size() == 1) {
    const std::string& label = post_lines[0].text;
    if (!doc.detectors.find(label) && label != kOtherLabel)
      fail(DiagnosticKind::unresolved_label, post_lines[0].line,
           "post-selection label '" + label + "' matches no detector");
    else
      doc.postselect = label;
  }

  if (!diags.empty()) throw ParseError(std::move(diags));
  return doc;
}

/// Canonical rendering: declaration order, reals at 15 significant digits.
/// parse(serialize(doc)) is structurally equal to doc; spelling (e.g. a
/// pi/4 literal) is canonicalized, values are not.
inline std::string serialize(const ExperimentDoc& doc) {
  std::ostringstream out;
  const Basis& basis = doc.basis;
  for (const Basis::System& sys : basis.systems()) {
    out << "[system " << sys.name << "]\n";
    for (const std::string& m : sys.modes) out << m << "\n";
    out << "\n";
  }
  if (!basis.joint_sinks().empty()) {
    out << "[jointsinks]\n";
    for (const std::string& s : basis.joint_sinks()) out << s << "\n";
    out << "\n";
  }
  out << "[init]\n";
  for (std::size_t s = 0; s < doc.system_init.size(); ++s)
    for (std::size_t m = 0; m < doc.system_init[s].size(); ++m)
      if (doc.system_init[s][m] != Amplitude{})
        out << basis.systems()[s].name << "." << basis.systems()[s].modes[m] << " = "
            << detail::render_amplitude(doc.system_init[s][m]) << "\n";
  for (std::size_t j = 0; j < doc.sink_init.size(); ++j)
    if (doc.sink_init[j] != Amplitude{})
      out << basis.joint_sinks()[j] << " = " << detail::render_amplitude(doc.sink_init[j]) << "\n";
  for (const Stage& stage : doc.stages) {
    out << "\n[stage]\n";
    for (const Element& e : stage) {
      if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
        out << "BS " << to_string(bs->a) << " " << to_string(bs->b) << " T="
            << detail::render_real(bs->transmission) << "\n";
      } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
        out << "PHASE " << to_string(ph->a) << " phi=" << detail::render_real(ph->phi) << "\n";
      } else if (const auto* sw = std::get_if<SwapModes>(&e)) {
        out << "SWAP " << to_string(sw->a) << " " << to_string(sw->b) << "\n";
      } else if (const auto* ab = std::get_if<Absorb>(&e)) {
        const char* kind = ab->kind == AbsorbKind::bomb ? "bomb" : ab->kind == AbsorbKind::opaque ? "opaque" : "dud";
        out << "ABSORB " << to_string(ab->a) << " -> " << ab->sink << " kind=" << kind << "\n";
      } else if (const auto* js = std::get_if<JointSinkElement>(&e)) {
        out << "JOINT " << to_string(js->a) << " " << to_string(js->b) << " -> " << js->sink << "\n";
      } else if (const auto* rot = std::get_if<Rotate>(&e)) {
        out << "ROT " << to_string(rot->a) << " " << to_string(rot->b) << " theta="
            << detail::render_real(rot->theta) << "\n";
      }
    }
  }
  if (!doc.detectors.assignments.empty()) {
    out << "\n[detect]\n";
    for (const auto& [label, indices] : doc.detectors.assignments) {
      out << label << " = ";
      for (std::size_t k = 0; k < indices.size(); ++k) {
        if (k) out << ", ";
        out << basis.index_label(indices[k]);
      }
      out << "\n";
    }
  }
  if (doc.postselect) out << "\n[post]\n" << *doc.postselect << "\n";
  return out.str();
}

namespace detail {

inline bool near_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool element_equal(const Element& a, const Element& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<BeamSplitter>(&a)) {
    const auto* y = std::get_if<BeamSplitter>(&b);
    return x->a == y->a && x->b == y->b && near_equal(x->transmission, y->transmission, tol);
  }
  if (const auto* x = std::get_if<PhaseShift>(&a)) {
    const auto* y = std::get_if<PhaseShift>(&b);
    return x->a == y->a && near_equal(x->phi, y->phi, tol);
  }
  if (const auto* x = std::get_if<SwapModes>(&a)) {
    const auto* y = std::get_if<SwapModes>(&b);
    return x->a == y->a && x->b == y->b;
  }
  if (const auto* x = std::get_if<Absorb>(&a)) {
    const auto* y = std::get_if<Absorb>(&b);
    return x->a == y->a && x->sink == y->sink && x->kind == y->kind;
  }
  if (const auto* x = std::get_if<JointSinkElement>(&a)) {
    const auto* y = std::get_if<JointSinkElement>(&b);
    return x->a == y->a && x->b == y->b && x->sink == y->sink;
  }
  const auto* x = std::get_if<Rotate>(&a);
  const auto* y = std::get_if<Rotate>(&b);
  return x->a == y->a && x->b == y->b && near_equal(x->theta, y->theta, tol);
}

}  // namespace detail

/// Structural equality: identical structure and labels, numeric values
/// within tol (canonical 15-digit rendering keeps round-trip drift far
/// below the default).
inline bool structurally_equal(const ExperimentDoc& a, const ExperimentDoc& b, double tol = 1e-12) {
  if (!(a.basis == b.basis)) return false;
  if (a.system_init.size() != b.system_init.size()) return false;
  for (std::size_t s = 0; s < a.system_init.size(); ++s) {
    if (a.system_init[s].size() != b.system_init[s].size()) return false;
    for (std::size_t m = 0; m < a.system_init[s].size(); ++m)
      if (std::abs(a.system_init[s][m] - b.system_init[s][m]) > tol) return false;
  }
  if (a.sink_init.size() != b.sink_init.size()) return false;
  for (std::size_t j = 0; j < a.sink_init.size(); ++j)
    if (std::abs(a.sink_init[j] - b.sink_init[j]) > tol) return false;
  if (a.stages.size() != b.stages.size()) return false;
  for (std::size_t st = 0; st < a.stages.size(); ++st) {
    if (a.stages[st].size() != b.stages[st].size()) return false;
    for (std::size_t e = 0; e < a.stages[st].size(); ++e)
      if (!detail::element_equal(a.stages[st][e], b.stages[st][e], tol)) return false;
  }
  if (a.detectors.assignments != b.detectors.assignments) return false;
  return a.postselect == b.postselect;
}

}  // namespace ifmlab
