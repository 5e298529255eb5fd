#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ifmlab/core.hpp"
#include "ifmlab/engine.hpp"
#include "ifmlab/optics.hpp"

namespace ifmlab {

/// Forward- and backward-evolving states between pre- and post-selection,
/// one per stage boundary. Boundary k sits after stage k, so boundary 0 is
/// the pre-selected state and boundary n the final one. Backward states are
/// stored normalized; the post-selection probability is kept separately, so
/// inner(backward[k], forward[k]) is the same complex number at every
/// boundary (its value is sqrt(post_probability) for the outcome's own
/// projection).
struct TwoStateTrace {
  Basis basis;
  std::vector<StateVector> forward;
  std::vector<StateVector> backward;
  std::string post_label;
  double post_probability = 0.0;

  std::size_t boundaries() const { return forward.size(); }
};

/// Two-state trace of a circuit between a pre-selected initial state and a
/// post-selected detector outcome.
inline TwoStateTrace trace(const Circuit& c, const StateVector& init, const DetectorMap& d,
                           std::string_view post_label) {
  require_valid(c);
  if (init.dim() != c.basis.dim()) throw DimensionError("trace: state dimension does not match basis");
  detail::check_normalized(init, "initial state");

  TwoStateTrace t;
  t.basis = c.basis;
  t.post_label = std::string(post_label);

  t.forward.push_back(init);
  for (std::size_t k = 0; k < c.stages.size(); ++k)
    t.forward.push_back(detail::apply_stages(c, t.forward.back(), k, k + 1));

  auto [post_state, p] = postselect(t.forward.back(), d, post_label);
  t.post_probability = p;
  t.backward.assign(t.forward.size(), post_state);
  for (std::size_t k = c.stages.size(); k-- > 0;)
    t.backward[k] = apply(stage_operator(c, k).adjoint(), t.backward[k + 1]);

  // both sequences bridge the same transition amplitude at every boundary
  const Amplitude bridge = inner(t.backward.back(), t.forward.back());
  for (std::size_t k = 0; k < t.boundaries(); ++k)
    if (std::abs(inner(t.backward[k], t.forward[k]) - bridge) > kDefaultTol)
      throw InternalError("two-state bridge amplitude drifted across boundaries");
  return t;
}

/// Presence overlap <backward| P_mode |forward> at a boundary. A zero
/// modulus certifies that no physical trace can be left at that mode; it
/// does not assert that the system is absent there.
inline Amplitude presence(const TwoStateTrace& t, const ModeLabel& mode, std::size_t boundary) {
  if (boundary >= t.boundaries()) throw DimensionError("presence: boundary index out of range");
  Amplitude acc = 0.0;
  for (std::size_t i : t.basis.marginal_indices(mode))
    acc += std::conj(t.backward[boundary][i]) * t.forward[boundary][i];
  return acc;
}

/// Conditional probabilities of an intermediate projective measurement given
/// both the pre-selected state and the post-selected outcome:
///   P(a) = ||P_post U_post P_a U_pre |init>||^2 / sum over a' of the same.
inline OutcomeDistribution abl(const Circuit& c_pre, const Circuit& c_post, const StateVector& init,
                               const Partition& projector_sets, const DetectorMap& d,
                               std::string_view post_label) {
  require_valid(c_pre);
  require_valid(c_post);
  if (!(c_pre.basis == c_post.basis)) throw ValidationError("abl: circuits use different bases");
  if (init.dim() != c_pre.basis.dim()) throw DimensionError("abl: state dimension does not match basis");
  detail::check_normalized(init, "initial state");
  detail::check_detectors(d, c_pre.basis.dim());
  Partition parts = detail::complete_partition(projector_sets, c_pre.basis.dim());

  std::vector<std::size_t> post_indices = detail::resolve_outcome(d, c_pre.basis.dim(), post_label);

  StateVector mid = detail::apply_stages(c_pre, init, 0, c_pre.stages.size());
  std::vector<std::pair<std::string, double>> weights;
  double total = 0.0;
  for (const auto& [label, indices] : parts) {
    StateVector branch = detail::apply_stages(c_post, detail::project_onto(mid, indices), 0,
                                              c_post.stages.size());
    double w = 0.0;
    for (std::size_t i : post_indices) w += std::norm(branch[i]);
    weights.emplace_back(label, w);
    total += w;
  }
  if (total < 1e-14)
    throw ZeroProbabilityError("post-selection on '" + std::string(post_label) +
                               "' has probability ~0 in every branch");
  for (auto& [label, w] : weights) w /= total;
  return OutcomeDistribution(std::move(weights));
}

/// abl() over one circuit split at a stage boundary (boundary k is after
/// stage k).
inline OutcomeDistribution abl_at_boundary(const Circuit& c, std::size_t boundary, const StateVector& init,
                                           const Partition& projector_sets, const DetectorMap& d,
                                           std::string_view post_label) {
  if (boundary > c.stages.size()) throw DimensionError("abl: boundary index out of range");
  Circuit pre{c.basis, {c.stages.begin(), c.stages.begin() + boundary}};
  Circuit post{c.basis, {c.stages.begin() + boundary, c.stages.end()}};
  return abl(pre, post, init, projector_sets, d, post_label);
}

}  // namespace ifmlab
