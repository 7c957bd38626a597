#pragma once

// Combined control-point / momentum / shape state of the geodesic ODE, its
// discrete steps, and the vector-Jacobian product used by the discrete adjoint.

#include "symladder/geodesics.hpp"

namespace symladder::detail {

struct FlowState {
  Matrix c;
  Matrix mu;
  Matrix x; // zero rows when no shape is advected
};

/// (dc/dt, dmu/dt, dx/dt) at `y`.
FlowState rates(const FlowState &y, const KernelParams &k);

/// One step of size h. When `mid` is non-null and the scheme is RK2, the
/// midpoint stage is stored there.
FlowState step(const FlowState &y, double h, Scheme scheme, const KernelParams &k,
               FlowState *mid = nullptr);

/// accum += J_rates(y)^T cot
void rates_vjp(const FlowState &y, const FlowState &cot, const KernelParams &k, FlowState &accum);

/// Blow-up guard: throws NonFiniteState if any coordinate is non-finite or
/// exceeds `bound` in magnitude.
void check_state(const FlowState &y, double bound, int step_index);

/// 1e6 x max(bounding-box diagonal of all initial points, sigma).
double blowup_bound(const FlowState &y0, const KernelParams &k);

} // namespace symladder::detail
