#pragma once

#include <vector>

#include "symladder/symmetric_ops.hpp"

namespace symladder {

/// Intermediate shapes of one pole-ladder rung transporting [B, B'] to D.
struct LadderRung {
  Mesh destination;   ///< D, the point the deformation is carried to
  Mesh midpoint;      ///< M = midpoint(D, B)
  Mesh reflected;     ///< T'' = s_M(B')
  Mesh result;        ///< s_D(T'')
  bool midpoint_converged = false;
  bool reflect_converged = false;
  bool result_converged = false;
};

struct PoleLadderTrace {
  std::vector<LadderRung> rungs;
  std::vector<Mesh> subdivision;  ///< points along [T, S], T first, S last
  int midpoints = 0;              ///< rung midpoints computed
  int symmetries = 0;             ///< rung symmetries computed
  bool all_converged() const;
};

struct PoleLadderResult {
  Mesh transported;               ///< T'
  PoleLadderTrace trace;
};

/// Symmetric pole ladder: transports the deformation S -> S' along the
/// geodesic from S to T. With one rung,
///   M = midpoint(T, S),  T'' = s_M(S'),  T' = s_T(T'').
/// With n_rungs = 2^k rungs, [T, S] is first subdivided by recursive
/// residual-corrected midpoints and the deformation is carried one segment
/// at a time, starting at S.
PoleLadderResult pole_ladder(const Mesh &templ, const Mesh &subject, const Mesh &followup,
                             Registrar &registrar, Variant variant, int n_rungs = 1);
PoleLadderResult pole_ladder(const Mesh &templ, const Mesh &subject, const Mesh &followup,
                             const RegistrationConfig &cfg, Variant variant, int n_rungs = 1);

/// Log_T(T') of a transported shape, by a final registration T -> T'.
RegistrationResult transported_log(const Mesh &templ, const Mesh &transported,
                                   Registrar &registrar);

/// Fanning-scheme transport of the tangent vector `w` (momenta at the
/// initial control points of `base`) along base's geodesic.
///
/// Reconstruction of the Jacobi-field method: at each of the n_steps steps
/// the geodesic is re-shot over one step with momenta mu +/- eps w; the
/// central difference of the perturbed control points approximates the
/// Jacobi field J, and the new momenta solve K(c_{t+h}) w' = J / h. The
/// H-norm of w is renormalized to its initial value after every step.
///
/// Returns (c_1, w_1): the endpoint control points and transported momenta.
ControlSystem fanning_transport_vector(const RegistrationResult &base, const MomentaSet &w,
                                       const RegistrationConfig &cfg);

/// `templ` (the shape at the end of base's geodesic) deformed by shooting the
/// transported vector from the geodesic's endpoint control points.
Mesh fanning_transport(const Mesh &templ, const RegistrationResult &base, const MomentaSet &w,
                       const RegistrationConfig &cfg);

} // namespace symladder
