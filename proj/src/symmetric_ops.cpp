#include "symladder/symmetric_ops.hpp"

#include <string>

namespace symladder {

std::string_view variant_name(Variant v) {
  return v == Variant::with_residual ? "with_residual" : "without_residual";
}

Variant parse_variant(std::string_view name) {
  if (name == "with_residual" || name == "residual")
    return Variant::with_residual;
  if (name == "without_residual" || name == "no_residual")
    return Variant::without_residual;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

Mesh midpoint_from(const Mesh &base, const RegistrationResult &reg, const RegistrationConfig &cfg,
                   Variant variant) {
  const int half_steps = (cfg.n_steps + 1) / 2;
  Mesh m = exponential(base, reg.system, half_steps, 0.5, cfg.scheme);
  if (variant == Variant::with_residual)
    m.vertices += 0.5 * reg.delta;
  return m;
}

Mesh symmetry_from(const Mesh &center, const RegistrationResult &reg,
                   const RegistrationConfig &cfg, Variant variant) {
  const ControlSystem reversed{reg.system.points, -reg.system.momenta, reg.system.kernel};
  Mesh s = exponential(center, reversed, cfg.n_steps, 1.0, cfg.scheme);
  if (variant == Variant::with_residual)
    s.vertices -= reg.delta;
  return s;
}

MidpointOutcome midpoint(const Mesh &base, const Mesh &other, Registrar &registrar,
                         Variant variant) {
  RegistrationResult reg = registrar(base, other);
  Mesh m = midpoint_from(base, reg, registrar.config(), variant);
  return MidpointOutcome{std::move(m), std::move(reg), variant};
}

MidpointOutcome midpoint(const Mesh &base, const Mesh &other, const RegistrationConfig &cfg,
                         Variant variant) {
  Registrar registrar(cfg);
  return midpoint(base, other, registrar, variant);
}

SymmetryOutcome symmetry(const Mesh &center, const Mesh &subject, Registrar &registrar,
                         Variant variant) {
  RegistrationResult reg = registrar(center, subject);
  Mesh s = symmetry_from(center, reg, registrar.config(), variant);
  return SymmetryOutcome{std::move(s), std::move(reg), variant};
}

SymmetryOutcome symmetry(const Mesh &center, const Mesh &subject, const RegistrationConfig &cfg,
                         Variant variant) {
  Registrar registrar(cfg);
  return symmetry(center, subject, registrar, variant);
}

} // namespace symladder
