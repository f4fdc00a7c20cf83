#pragma once

#include "evfi/errors.hpp"
#include "evfi/flow_mask.hpp"
#include "evfi/types.hpp"

#include <utility>

namespace evfi {

/// How the mask enters the intermediate-flow blend.
///   weighted  : mask times the linear time factors (1 - tau) and tau
///   mask_only : mean of the two one-sided estimates; experimental
enum class SynthesisMode { weighted, mask_only };

template <typename Scalar>
struct IntermediateFlowsT {
  FlowFieldT<Scalar> to0;  // F_{tau->0}
  FlowFieldT<Scalar> to1;  // F_{tau->1}
};
using IntermediateFlows = IntermediateFlowsT<double>;

namespace detail {

template <typename Scalar>
void check_flow_inputs(const FlowFieldT<Scalar>& f01, const FlowFieldT<Scalar>& f10, const FlowMask& mask) {
  if (!same_shape(f01.u, f01.v) || !same_shape(f10.u, f10.v) || !same_shape(f01.u, f10.u) ||
      !same_shape(f01.u, mask.omega_0t_u))
    throw ArgumentError("flow and mask dimensions differ");
  if (!(mask.tau > 0.0 && mask.tau < 1.0)) throw ArgumentError("mask tau must lie in (0,1)");
}

// One axis of the blend. w0/w1 are omega_0t/omega_1t for that axis.
template <typename Scalar>
std::pair<Plane<Scalar>, Plane<Scalar>> blend_axis(const Plane<Scalar>& f01, const Plane<Scalar>& f10,
                                                   const Plane<double>& w0, const Plane<double>& w1, double tau,
                                                   SynthesisMode mode) {
  const Plane<Scalar> a0 = w0.cast<Scalar>();
  const Plane<Scalar> a1 = w1.cast<Scalar>();
  if (mode == SynthesisMode::mask_only) {
    const Scalar half(0.5);
    return {half * (a0 * f10 - a0 * f01), half * (a1 * f01 - a1 * f10)};
  }
  const Scalar t(tau);
  const Scalar s(1.0 - tau);
  Plane<Scalar> to0 = -(s * a0 * f01) + t * a0 * f10;
  Plane<Scalar> to1 = s * a1 * f01 - t * a1 * f10;
  return {std::move(to0), std::move(to1)};
}

}  // namespace detail

/// Anisotropic intermediate flows, per axis:
///   F_{tau->0} = -(1 - tau) w_0t F_{0->1} + tau w_0t F_{1->0}
///   F_{tau->1} =  (1 - tau) w_1t F_{0->1} - tau w_1t F_{1->0}
/// With the linear mask this is the constant-velocity blend.
template <typename Scalar>
IntermediateFlowsT<Scalar> intermediate_flows(const FlowFieldT<Scalar>& f01, const FlowFieldT<Scalar>& f10,
                                              const FlowMask& mask, SynthesisMode mode = SynthesisMode::weighted) {
  detail::check_flow_inputs(f01, f10, mask);
  auto [u0, u1] = detail::blend_axis(f01.u, f10.u, mask.omega_0t_u, mask.omega_1t_u, mask.tau, mode);
  auto [v0, v1] = detail::blend_axis(f01.v, f10.v, mask.omega_0t_v, mask.omega_1t_v, mask.tau, mode);
  return {{std::move(u0), std::move(v0)}, {std::move(u1), std::move(v1)}};
}

enum class FlowSource { forward01, backward10 };
enum class TargetPeriod { to0, to1 };

/// Un-blended one-sided estimates:
///   F_{tau->0} = w_0t F_{1->0}  or  -w_0t F_{0->1}
///   F_{tau->1} = w_1t F_{0->1}  or  -w_1t F_{1->0}
template <typename Scalar>
FlowFieldT<Scalar> single_source_intermediate(const FlowFieldT<Scalar>& f, const FlowMask& mask, FlowSource source,
                                              TargetPeriod target) {
  if (!same_shape(f.u, f.v) || !same_shape(f.u, mask.omega_0t_u))
    throw ArgumentError("flow and mask dimensions differ");
  const bool to0 = target == TargetPeriod::to0;
  const Plane<Scalar> wu = (to0 ? mask.omega_0t_u : mask.omega_1t_u).template cast<Scalar>();
  const Plane<Scalar> wv = (to0 ? mask.omega_0t_v : mask.omega_1t_v).template cast<Scalar>();
  // Same-direction source keeps its sign; the opposite one is negated.
  const bool negate = to0 == (source == FlowSource::forward01);
  const Scalar sign = negate ? Scalar(-1) : Scalar(1);
  return {sign * wu * f.u, sign * wv * f.v};
}

/// Constant-velocity reference: -(1 - tau) tau F_{0->1} + tau^2 F_{1->0} and
/// (1 - tau)^2 F_{0->1} - tau (1 - tau) F_{1->0}.
template <typename Scalar>
IntermediateFlowsT<Scalar> linear_intermediate_flows(const FlowFieldT<Scalar>& f01, const FlowFieldT<Scalar>& f10,
                                                     double tau) {
  const Scalar t(tau);
  const Scalar s(1.0 - tau);
  auto to0 = [&](const Plane<Scalar>& a, const Plane<Scalar>& b) -> Plane<Scalar> { return -(s * t * a) + t * t * b; };
  auto to1 = [&](const Plane<Scalar>& a, const Plane<Scalar>& b) -> Plane<Scalar> { return s * s * a - t * s * b; };
  return {{to0(f01.u, f10.u), to0(f01.v, f10.v)}, {to1(f01.u, f10.u), to1(f01.v, f10.v)}};
}

}  // namespace evfi
