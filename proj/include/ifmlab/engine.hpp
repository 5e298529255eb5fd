#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ifmlab/core.hpp"
#include "ifmlab/optics.hpp"

namespace ifmlab {

/// Label reserved for probability mass on basis indices no detector claims.
inline constexpr const char* kOtherLabel = "other";

/// Ordered assignment of outcome labels to disjoint basis index sets. The
/// union may be a strict subset of the basis; unassigned indices report
/// under the implicit "other" outcome.
struct DetectorMap {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> assignments;

  void add(std::string label, std::vector<std::size_t> indices) {
    assignments.emplace_back(std::move(label), std::move(indices));
  }

  const std::vector<std::size_t>* find(std::string_view label) const {
    for (const auto& [l, ix] : assignments)
      if (l == label) return &ix;
    return nullptr;
  }
};

namespace detail {

inline void check_detectors(const DetectorMap& d, std::size_t dim) {
  std::vector<char> seen(dim, 0);
  for (const auto& [label, indices] : d.assignments) {
    if (label.empty()) throw ValidationError("empty outcome label");
    if (label == kOtherLabel) throw ValidationError("outcome label 'other' is reserved");
    for (const auto& [other_label, other_ix] : d.assignments) {
      if (&other_label != &label && other_label == label)
        throw ValidationError("duplicate outcome label '" + label + "'");
    }
    for (std::size_t i : indices) {
      if (i >= dim) throw DimensionError("detector index out of range for '" + label + "'");
      if (seen[i]) throw ValidationError("overlapping detector assignments at index " + std::to_string(i));
      seen[i] = 1;
    }
  }
}

/// Probabilities in [-1e-12, 0) are rounding noise and clamp to zero;
/// anything lower means a broken invariant upstream.
inline double clamp_probability(double p) {
  if (p >= 0.0) return p;
  if (p >= -1e-12) return 0.0;
  throw InternalError("probability " + std::to_string(p) + " below -1e-12");
}

}  // namespace detail

/// Outcome label -> probability, in canonical (declaration) order.
class OutcomeDistribution {
public:
  OutcomeDistribution() = default;

  explicit OutcomeDistribution(std::vector<std::pair<std::string, double>> probs, bool check_sum = true)
      : probs_(std::move(probs)) {
    double total = 0.0;
    for (auto& [label, p] : probs_) {
      p = detail::clamp_probability(p);
      if (!std::isfinite(p)) throw InternalError("non-finite probability for '" + label + "'");
      total += p;
    }
    if (check_sum && std::abs(total - 1.0) > 1e-10)
      throw InternalError("outcome probabilities sum to " + std::to_string(total));
  }

  const std::vector<std::pair<std::string, double>>& entries() const { return probs_; }

  double at(std::string_view label) const {
    for (const auto& [l, p] : probs_)
      if (l == label) return p;
    throw ValidationError("unknown outcome label '" + std::string(label) + "'");
  }

  bool has(std::string_view label) const {
    for (const auto& [l, p] : probs_)
      if (l == label) return true;
    return false;
  }

private:
  std::vector<std::pair<std::string, double>> probs_;
};

/// Joint (intermediate outcome, final outcome) probabilities from a
/// measurement inserted mid-circuit.
struct JointStats {
  std::vector<std::string> intermediate_labels;
  std::vector<std::string> final_labels;
  std::vector<double> probs;  // row-major: intermediate index * finals + final index

  double at(std::string_view intermediate, std::string_view final_label) const {
    auto find = [](const std::vector<std::string>& labels, std::string_view want) {
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == want) return i;
      throw ValidationError("unknown outcome label '" + std::string(want) + "'");
    };
    return probs[find(intermediate_labels, intermediate) * final_labels.size() + find(final_labels, final_label)];
  }
};

namespace detail {

/// Applies stages [first, last) to a state, element by element. No
/// normalization preconditions; used on projected branches too.
inline StateVector apply_stages(const Circuit& c, StateVector s, std::size_t first, std::size_t last) {
  for (std::size_t k = first; k < last; ++k)
    for (const Element& e : c.stages[k]) s = apply(element_operator(e, c.basis), s);
  return s;
}

inline StateVector project_onto(const StateVector& s, const std::vector<std::size_t>& indices) {
  StateVector out(s.dim());
  for (std::size_t i : indices) out[i] = s[i];
  return out;
}

inline void check_normalized(const StateVector& s, const char* what) {
  if (std::abs(s.norm2() - 1.0) > kDefaultTol)
    throw ValidationError(std::string(what) + " is not normalized (|norm^2 - 1| > 1e-12)");
}

}  // namespace detail

/// Runs the circuit on a normalized initial state.
inline StateVector evolve(const Circuit& c, const StateVector& init) {
  require_valid(c);
  if (init.dim() != c.basis.dim()) throw DimensionError("evolve: state dimension does not match basis");
  detail::check_normalized(init, "initial state");
  StateVector out = detail::apply_stages(c, init, 0, c.stages.size());
  if (std::abs(out.norm2() - 1.0) > kDefaultTol) throw InternalError("evolved state lost normalization");
  return out;
}

/// Measurement statistics of a normalized state under a detector map. Mass
/// on unassigned indices is reported under "other" (always present, even
/// at probability zero, so downstream tables have stable columns).
inline OutcomeDistribution outcome_distribution(const StateVector& s, const DetectorMap& d) {
  detail::check_detectors(d, s.dim());
  detail::check_normalized(s, "state");
  std::vector<std::pair<std::string, double>> probs;
  std::vector<char> assigned(s.dim(), 0);
  for (const auto& [label, indices] : d.assignments) {
    double p = 0.0;
    for (std::size_t i : indices) {
      p += std::norm(s[i]);
      assigned[i] = 1;
    }
    probs.emplace_back(label, p);
  }
  double rest = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (!assigned[i]) rest += std::norm(s[i]);
  probs.emplace_back(kOtherLabel, rest);
  return OutcomeDistribution(std::move(probs));
}

namespace detail {

/// Index set of an outcome label; "other" resolves to the unassigned rest.
inline std::vector<std::size_t> resolve_outcome(const DetectorMap& d, std::size_t dim,
                                                std::string_view outcome) {
  if (const std::vector<std::size_t>* indices = d.find(outcome)) return *indices;
  if (outcome != kOtherLabel) throw ValidationError("unknown outcome label '" + std::string(outcome) + "'");
  std::vector<char> assigned(dim, 0);
  for (const auto& [label, ix] : d.assignments)
    for (std::size_t i : ix) assigned[i] = 1;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dim; ++i)
    if (!assigned[i]) rest.push_back(i);
  return rest;
}

}  // namespace detail

/// Projects onto one outcome's index set and renormalizes. Returns the
/// conditional state and the pre-normalization probability.
inline std::pair<StateVector, double> postselect(const StateVector& s, const DetectorMap& d,
                                                 std::string_view outcome) {
  detail::check_detectors(d, s.dim());
  std::vector<std::size_t> indices = detail::resolve_outcome(d, s.dim(), outcome);
  StateVector projected = detail::project_onto(s, indices);
  double p = projected.norm2();
  if (p < 1e-14)
    throw ZeroProbabilityError("post-selection on '" + std::string(outcome) + "' has probability ~0");
  return {projected.normalized(), p};
}

/// An ordered partition of basis indices used for projective measurements.
using Partition = std::vector<std::pair<std::string, std::vector<std::size_t>>>;

namespace detail {

/// Checks disjointness and, when indices are uncovered, appends a "rest"
/// label for the complement.
inline Partition complete_partition(Partition parts, std::size_t dim) {
  std::vector<char> seen(dim, 0);
  for (const auto& [label, indices] : parts) {
    if (label.empty()) throw ValidationError("empty partition label");
    for (const auto& [other_label, other_ix] : parts)
      if (&other_label != &label && other_label == label)
        throw ValidationError("duplicate partition label '" + label + "'");
    for (std::size_t i : indices) {
      if (i >= dim) throw DimensionError("partition index out of range for '" + label + "'");
      if (seen[i]) throw ValidationError("partition sets overlap at index " + std::to_string(i));
      seen[i] = 1;
    }
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dim; ++i)
    if (!seen[i]) rest.push_back(i);
  if (!rest.empty()) {
    for (const auto& [label, indices] : parts)
      if (label == "rest") throw ValidationError("partition does not cover the basis and 'rest' is taken");
    parts.emplace_back("rest", std::move(rest));
  }
  return parts;
}

}  // namespace detail

/// Evolves through stages 1..after_stage, collapses by the given projectors
/// (one branch per label), evolves each branch through the remaining stages
/// and tabulates joint (intermediate, final) probabilities.
inline JointStats insert_measurement(const Circuit& c, std::size_t after_stage, const Partition& projector_sets,
                                     const StateVector& init, const DetectorMap& d) {
  require_valid(c);
  if (after_stage > c.stages.size()) throw DimensionError("insert_measurement: stage index out of range");
  if (init.dim() != c.basis.dim()) throw DimensionError("insert_measurement: state dimension mismatch");
  detail::check_detectors(d, c.basis.dim());
  detail::check_normalized(init, "initial state");
  Partition parts = detail::complete_partition(projector_sets, c.basis.dim());

  JointStats stats;
  for (const auto& [label, ignored] : parts) stats.intermediate_labels.push_back(label);
  for (const auto& [label, ignored] : d.assignments) stats.final_labels.push_back(label);
  stats.final_labels.push_back(kOtherLabel);
  stats.probs.assign(stats.intermediate_labels.size() * stats.final_labels.size(), 0.0);

  StateVector mid = detail::apply_stages(c, init, 0, after_stage);
  for (std::size_t a = 0; a < parts.size(); ++a) {
    StateVector branch = detail::project_onto(mid, parts[a].second);
    if (branch.norm2() < 1e-30) continue;  // empty branch contributes nothing
    StateVector final_state = detail::apply_stages(c, branch, after_stage, c.stages.size());
    std::vector<char> assigned(final_state.dim(), 0);
    for (std::size_t f = 0; f + 1 < stats.final_labels.size(); ++f) {
      double p = 0.0;
      for (std::size_t i : d.assignments[f].second) {
        p += std::norm(final_state[i]);
        assigned[i] = 1;
      }
      stats.probs[a * stats.final_labels.size() + f] = p;
    }
    double rest = 0.0;
    for (std::size_t i = 0; i < final_state.dim(); ++i)
      if (!assigned[i]) rest += std::norm(final_state[i]);
    stats.probs[a * stats.final_labels.size() + stats.final_labels.size() - 1] = rest;
  }

  double total = 0.0;
  for (double p : stats.probs) total += p;
  if (std::abs(total - 1.0) > 1e-10) throw InternalError("joint statistics sum to " + std::to_string(total));
  return stats;
}

/// Distribution over intermediate outcomes conditioned on a final outcome.
inline OutcomeDistribution conditional(const JointStats& j, std::string_view given_final) {
  std::size_t f = 0;
  for (; f < j.final_labels.size(); ++f)
    if (j.final_labels[f] == given_final) break;
  if (f == j.final_labels.size())
    throw ValidationError("unknown final outcome label '" + std::string(given_final) + "'");
  double total = 0.0;
  for (std::size_t a = 0; a < j.intermediate_labels.size(); ++a)
    total += j.probs[a * j.final_labels.size() + f];
  if (total < 1e-14)
    throw ZeroProbabilityError("conditioning on final outcome '" + std::string(given_final) +
                               "' of probability ~0");
  std::vector<std::pair<std::string, double>> probs;
  for (std::size_t a = 0; a < j.intermediate_labels.size(); ++a)
    probs.emplace_back(j.intermediate_labels[a], j.probs[a * j.final_labels.size() + f] / total);
  return OutcomeDistribution(std::move(probs));
}

/// Deterministic inverse-CDF sampling: labels are scanned in canonical
/// distribution order against uniform doubles drawn from a std::mt19937_64
/// seeded with `seed` (each draw maps the top 53 bits into [0,1)). Counts
/// are a pure function of (dist, shots, seed) on any platform.
inline std::vector<std::pair<std::string, std::uint64_t>> sample(const OutcomeDistribution& dist,
                                                                 std::uint64_t shots, std::uint64_t seed) {
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& [label, p] : dist.entries()) {
    acc += p;
    cumulative.push_back(acc);
  }
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  for (const auto& [label, p] : dist.entries()) counts.emplace_back(label, 0);
  if (counts.empty()) {
    if (shots > 0) throw ValidationError("cannot sample from an empty distribution");
    return counts;
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t pick = cumulative.size() - 1;  // absorb rounding shortfall in the last label
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
      if (u < cumulative[i]) {
        pick = i;
        break;
      }
    }
    ++counts[pick].second;
  }
  return counts;
}

}  // namespace ifmlab
