#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ifmlab/core.hpp"

namespace ifmlab {

/// A mode of one declared system, e.g. {"photon", "upper"}.
struct ModeLabel {
  std::string system;
  std::string mode;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

inline std::string to_string(const ModeLabel& m) { return m.system + "." + m.mode; }

namespace detail {
inline bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char ch : name) {
    if (ch == '.' || ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') return false;
  }
  return true;
}
}  // namespace detail

/// Ordered mode basis of a multi-system experiment. The composite basis is
/// the tensor product of the per-system mode lists (first system's index is
/// the major one), followed by the joint-sink elements.
class Basis {
public:
  struct System {
    std::string name;
    std::vector<std::string> modes;
  };

  void add_system(std::string name, std::vector<std::string> modes) {
    if (!detail::valid_name(name)) throw ValidationError("invalid system name '" + name + "'");
    if (find_system(name)) throw ValidationError("duplicate system name '" + name + "'");
    if (modes.empty()) throw ValidationError("system '" + name + "' declares no modes");
    for (const std::string& m : modes) {
      if (!detail::valid_name(m)) throw ValidationError("invalid mode name '" + m + "'");
      if (std::count(modes.begin(), modes.end(), m) != 1)
        throw ValidationError("duplicate mode '" + m + "' in system '" + name + "'");
    }
    systems_.push_back({std::move(name), std::move(modes)});
  }

  void add_joint_sink(std::string label) {
    if (!detail::valid_name(label)) throw ValidationError("invalid joint sink label '" + label + "'");
    if (std::find(joint_sinks_.begin(), joint_sinks_.end(), label) != joint_sinks_.end())
      throw ValidationError("duplicate joint sink label '" + label + "'");
    joint_sinks_.push_back(std::move(label));
  }

  const std::vector<System>& systems() const { return systems_; }
  const std::vector<std::string>& joint_sinks() const { return joint_sinks_; }

  std::size_t tensor_dim() const {
    std::size_t d = 1;
    for (const System& s : systems_) d *= s.modes.size();
    return systems_.empty() ? 0 : d;
  }

  std::size_t dim() const { return tensor_dim() + joint_sinks_.size(); }

  std::optional<std::size_t> find_system(std::string_view name) const {
    for (std::size_t i = 0; i < systems_.size(); ++i)
      if (systems_[i].name == name) return i;
    return std::nullopt;
  }

  bool has_mode(const ModeLabel& m) const { return mode_position(m).has_value(); }

  /// (system index, mode index within the system), if the label resolves.
  std::optional<std::pair<std::size_t, std::size_t>> mode_position(const ModeLabel& m) const {
    auto sys = find_system(m.system);
    if (!sys) return std::nullopt;
    const auto& modes = systems_[*sys].modes;
    auto it = std::find(modes.begin(), modes.end(), m.mode);
    if (it == modes.end()) return std::nullopt;
    return std::make_pair(*sys, static_cast<std::size_t>(it - modes.begin()));
  }

  std::optional<std::size_t> find_joint_sink(std::string_view label) const {
    for (std::size_t i = 0; i < joint_sinks_.size(); ++i)
      if (joint_sinks_[i] == label) return tensor_dim() + i;
    return std::nullopt;
  }

  /// Composite index of one mode choice per system.
  std::size_t composite_index(std::span<const std::size_t> mode_per_system) const {
    std::size_t idx = 0;
    for (std::size_t s = 0; s < systems_.size(); ++s) idx = idx * systems_[s].modes.size() + mode_per_system[s];
    return idx;
  }

  /// Per-system mode indices of a tensor-part basis index.
  std::vector<std::size_t> decompose(std::size_t tensor_index) const {
    std::vector<std::size_t> out(systems_.size());
    for (std::size_t s = systems_.size(); s-- > 0;) {
      out[s] = tensor_index % systems_[s].modes.size();
      tensor_index /= systems_[s].modes.size();
    }
    return out;
  }

  /// All tensor-part indices whose `m.system` component is mode `m.mode`.
  std::vector<std::size_t> marginal_indices(const ModeLabel& m) const {
    auto pos = mode_position(m);
    if (!pos) throw ValidationError("unknown mode '" + to_string(m) + "'");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tensor_dim(); ++i)
      if (decompose(i)[pos->first] == pos->second) out.push_back(i);
    return out;
  }

  /// Human-readable label of a basis index: "photon.upper" for a single
  /// system, "photon.upper*particle.lower" for composites, the bare sink
  /// label for joint sinks.
  std::string index_label(std::size_t index) const {
    if (index >= dim()) throw DimensionError("basis index out of range");
    if (index >= tensor_dim()) return joint_sinks_[index - tensor_dim()];
    std::vector<std::size_t> parts = decompose(index);
    std::string out;
    for (std::size_t s = 0; s < systems_.size(); ++s) {
      if (s) out += '*';
      out += systems_[s].name + "." + systems_[s].modes[parts[s]];
    }
    return out;
  }

  friend bool operator==(const Basis& a, const Basis& b) {
    if (a.joint_sinks_ != b.joint_sinks_ || a.systems_.size() != b.systems_.size()) return false;
    for (std::size_t i = 0; i < a.systems_.size(); ++i)
      if (a.systems_[i].name != b.systems_[i].name || a.systems_[i].modes != b.systems_[i].modes) return false;
    return true;
  }

private:
  std::vector<System> systems_;
  std::vector<std::string> joint_sinks_;
};

// ----- optical elements ------------------------------------------------

/// Two-port beam splitter with transmission T, acting on the (a,b) plane as
/// [[sqrt(T), i*sqrt(1-T)], [i*sqrt(1-T), sqrt(T)]]. The matrix is symmetric,
/// so outcome probabilities do not depend on the argument order.
struct BeamSplitter {
  ModeLabel a, b;
  double transmission = 0.5;
};

/// Multiplies mode a by exp(i*phi).
struct PhaseShift {
  ModeLabel a;
  double phi = 0.0;
};

/// Relabels two modes of one system.
struct SwapModes {
  ModeLabel a, b;
};

enum class AbsorbKind { bomb, opaque, dud };

/// An absorbing object in mode a. The bomb and opaque kinds move amplitude
/// into a sink mode of the same system (a permutation, so evolution stays
/// unitary on the enlarged space); a dud is inert and compiles to identity.
struct Absorb {
  ModeLabel a;
  std::string sink;
  AbsorbKind kind = AbsorbKind::bomb;
};

/// Mutual absorption: the composite element (a,b) of two different systems
/// is exchanged with a dedicated joint-sink basis element.
struct JointSinkElement {
  ModeLabel a, b;
  std::string sink;
};

/// Real rotation by theta in the (a,b) plane: [[cos, -sin], [sin, cos]].
struct Rotate {
  ModeLabel a, b;
  double theta = 0.0;
};

using Element = std::variant<BeamSplitter, PhaseShift, SwapModes, Absorb, JointSinkElement, Rotate>;

using Stage = std::vector<Element>;

/// Ordered stages of elements over a declared basis. Within one stage the
/// elements must touch disjoint mode sets.
struct Circuit {
  Basis basis;
  std::vector<Stage> stages;
};

struct CircuitDiagnostic {
  std::size_t stage = 0;    // 1-based; 0 when not tied to a stage
  std::size_t element = 0;  // 1-based within the stage
  std::string message;
};

namespace detail {

inline std::string element_kind(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::string {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) return "BS";
        else if constexpr (std::is_same_v<T, PhaseShift>) return "PHASE";
        else if constexpr (std::is_same_v<T, SwapModes>) return "SWAP";
        else if constexpr (std::is_same_v<T, Absorb>) return "ABSORB";
        else if constexpr (std::is_same_v<T, JointSinkElement>) return "JOINT";
        else return "ROT";
      },
      e);
}

/// Modes (and sinks) an element acts on, as rendered labels. Disjointness
/// of these sets is what makes elements of one stage commute; a dud still
/// claims its modes. Joint sinks are keyed by their bare label.
inline std::vector<std::string> touched_modes(const Element& e) {
  std::vector<std::string> out;
  if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
    out = {to_string(bs->a), to_string(bs->b)};
  } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
    out = {to_string(ph->a)};
  } else if (const auto* sw = std::get_if<SwapModes>(&e)) {
    out = {to_string(sw->a), to_string(sw->b)};
  } else if (const auto* ab = std::get_if<Absorb>(&e)) {
    out = {to_string(ab->a), ab->a.system + "." + ab->sink};
  } else if (const auto* js = std::get_if<JointSinkElement>(&e)) {
    out = {to_string(js->a), to_string(js->b), js->sink};
  } else if (const auto* rot = std::get_if<Rotate>(&e)) {
    out = {to_string(rot->a), to_string(rot->b)};
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Validates one element against the basis; empty string when fine.
inline std::string check_element(const Element& e, const Basis& basis) {
  auto need_mode = [&](const ModeLabel& m) -> std::string {
    if (!basis.has_mode(m)) return "unknown mode '" + to_string(m) + "'";
    return {};
  };
  auto need_pair_same_system = [&](const ModeLabel& a, const ModeLabel& b) -> std::string {
    if (auto err = need_mode(a); !err.empty()) return err;
    if (auto err = need_mode(b); !err.empty()) return err;
    if (a.system != b.system) return "modes '" + to_string(a) + "' and '" + to_string(b) + "' belong to different systems";
    if (a.mode == b.mode) return "element needs two distinct modes, got '" + to_string(a) + "' twice";
    return {};
  };
  if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
    if (auto err = need_pair_same_system(bs->a, bs->b); !err.empty()) return err;
    if (!(bs->transmission >= 0.0 && bs->transmission <= 1.0))
      return "beam splitter transmission must lie in [0,1]";
  } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
    if (auto err = need_mode(ph->a); !err.empty()) return err;
    if (!std::isfinite(ph->phi)) return "phase must be finite";
  } else if (const auto* sw = std::get_if<SwapModes>(&e)) {
    if (auto err = need_pair_same_system(sw->a, sw->b); !err.empty()) return err;
  } else if (const auto* ab = std::get_if<Absorb>(&e)) {
    if (auto err = need_mode(ab->a); !err.empty()) return err;
    if (auto err = need_mode({ab->a.system, ab->sink}); !err.empty())
      return "unknown sink mode '" + ab->a.system + "." + ab->sink + "'";
    if (ab->sink == ab->a.mode) return "absorber sink must differ from the absorbed mode";
  } else if (const auto* js = std::get_if<JointSinkElement>(&e)) {
    if (auto err = need_mode(js->a); !err.empty()) return err;
    if (auto err = need_mode(js->b); !err.empty()) return err;
    if (js->a.system == js->b.system) return "joint sink modes must belong to different systems";
    if (!basis.find_joint_sink(js->sink)) return "unknown joint sink '" + js->sink + "'";
    if (basis.systems().size() != 2)
      return "joint sink elements need exactly two declared systems";
  } else if (const auto* rot = std::get_if<Rotate>(&e)) {
    if (auto err = need_pair_same_system(rot->a, rot->b); !err.empty()) return err;
    if (!std::isfinite(rot->theta)) return "rotation angle must be finite";
  }
  return {};
}

}  // namespace detail

/// Unitary of a single element on the full enlarged space.
inline Operator element_operator(const Element& e, const Basis& basis) {
  if (auto err = detail::check_element(e, basis); !err.empty()) throw ValidationError(err);
  Operator op = Operator::identity(basis.dim());

  auto paired_indices = [&](const ModeLabel& a, const ModeLabel& b) {
    // Tensor-index pairs (i,j) that differ only in a<->b of their shared system.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    auto pa = *basis.mode_position(a);
    auto pb = *basis.mode_position(b);
    for (std::size_t i : basis.marginal_indices(a)) {
      std::vector<std::size_t> parts = basis.decompose(i);
      parts[pa.first] = pb.second;
      pairs.emplace_back(i, basis.composite_index(parts));
    }
    return pairs;
  };

  if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
    const double t = std::sqrt(bs->transmission);
    const Amplitude r = Amplitude(0.0, std::sqrt(1.0 - bs->transmission));
    for (auto [i, j] : paired_indices(bs->a, bs->b)) {
      op.at(i, i) = t;
      op.at(j, j) = t;
      op.at(i, j) = r;
      op.at(j, i) = r;
    }
  } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
    const Amplitude f = std::polar(1.0, ph->phi);
    for (std::size_t i : basis.marginal_indices(ph->a)) op.at(i, i) = f;
  } else if (const auto* sw = std::get_if<SwapModes>(&e)) {
    for (auto [i, j] : paired_indices(sw->a, sw->b)) {
      op.at(i, i) = 0.0;
      op.at(j, j) = 0.0;
      op.at(i, j) = 1.0;
      op.at(j, i) = 1.0;
    }
  } else if (const auto* ab = std::get_if<Absorb>(&e)) {
    if (ab->kind != AbsorbKind::dud) {
      for (auto [i, j] : paired_indices(ab->a, {ab->a.system, ab->sink})) {
        op.at(i, i) = 0.0;
        op.at(j, j) = 0.0;
        op.at(i, j) = 1.0;
        op.at(j, i) = 1.0;
      }
    }
  } else if (const auto* js = std::get_if<JointSinkElement>(&e)) {
    auto pa = *basis.mode_position(js->a);
    auto pb = *basis.mode_position(js->b);
    std::vector<std::size_t> parts(basis.systems().size());
    parts[pa.first] = pa.second;
    parts[pb.first] = pb.second;
    const std::size_t i = basis.composite_index(parts);
    const std::size_t j = *basis.find_joint_sink(js->sink);
    op.at(i, i) = 0.0;
    op.at(j, j) = 0.0;
    op.at(i, j) = 1.0;
    op.at(j, i) = 1.0;
  } else if (const auto* rot = std::get_if<Rotate>(&e)) {
    const double c = std::cos(rot->theta), s = std::sin(rot->theta);
    for (auto [i, j] : paired_indices(rot->a, rot->b)) {
      op.at(i, i) = c;
      op.at(j, j) = c;
      op.at(i, j) = -s;
      op.at(j, i) = s;
    }
  }
  return op;
}

/// Diagnostics for every violated circuit invariant; empty means valid.
inline std::vector<CircuitDiagnostic> validate(const Circuit& c) {
  std::vector<CircuitDiagnostic> out;
  if (c.basis.systems().empty()) {
    out.push_back({0, 0, "circuit declares no systems"});
    return out;
  }
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    std::vector<std::vector<std::string>> touched;
    for (std::size_t e = 0; e < c.stages[s].size(); ++e) {
      const Element& el = c.stages[s][e];
      if (auto err = detail::check_element(el, c.basis); !err.empty()) {
        out.push_back({s + 1, e + 1, detail::element_kind(el) + ": " + err});
        continue;
      }
      touched.push_back(detail::touched_modes(el));
      for (std::size_t prev = 0; prev + 1 < touched.size(); ++prev) {
        std::vector<std::string> overlap;
        std::set_intersection(touched[prev].begin(), touched[prev].end(), touched.back().begin(),
                              touched.back().end(), std::back_inserter(overlap));
        if (!overlap.empty()) {
          out.push_back({s + 1, e + 1,
                         detail::element_kind(el) + ": touches " + overlap.front() +
                             " already used by another element in this stage"});
          break;
        }
      }
    }
  }
  return out;
}

inline void require_valid(const Circuit& c) {
  std::vector<CircuitDiagnostic> diags = validate(c);
  if (diags.empty()) return;
  std::ostringstream msg;
  msg << "invalid circuit:";
  for (const CircuitDiagnostic& d : diags) {
    msg << " [stage " << d.stage << " element " << d.element << "] " << d.message << ";";
  }
  throw ValidationError(msg.str());
}

/// Product of all element operators of one stage (order within the stage is
/// irrelevant by the disjointness invariant).
inline Operator stage_operator(const Circuit& c, std::size_t stage_index) {
  Operator op = Operator::identity(c.basis.dim());
  for (const Element& e : c.stages.at(stage_index)) op = compose(element_operator(e, c.basis), op);
  return op;
}

/// Product of stage operators, later stages applied after earlier ones.
inline Operator circuit_operator(const Circuit& c) {
  require_valid(c);
  Operator op = Operator::identity(c.basis.dim());
  for (std::size_t s = 0; s < c.stages.size(); ++s) op = compose(stage_operator(c, s), op);
  return op;
}

}  // namespace ifmlab
