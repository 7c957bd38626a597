#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "symladder/config.hpp"
#include "symladder/diagnostics.hpp"
#include "symladder/synthetic.hpp"
#include "symladder/transport.hpp"

namespace symladder {

/// CSV columns `index,x,y,z,mx,my,mz` (`index,x,y,mx,my` in 2D).
void write_control_system_csv(const ControlSystem &sys, std::ostream &out);
void save_control_system_csv(const ControlSystem &sys, const std::filesystem::path &path);
ControlSystem load_control_system_csv(const std::filesystem::path &path, const KernelParams &kernel);

/// CSV columns `index,dx,dy,dz`.
void save_displacement_csv(const DisplacementField &delta, const std::filesystem::path &path);

/// CSV columns `index,x,y,z,las`: the strain map as a scalar field on the mesh.
void save_strain_csv(const Mesh &mesh, const std::vector<double> &las, const std::filesystem::path &path);

/// One row per subject x alpha^2 x variant x error type:
/// `subject_id,alpha_squared,variant,error_type,value,converged`.
void write_error_csv(const ErrorReport &report, std::ostream &out);
void save_error_csv(const ErrorReport &report, const std::filesystem::path &path);

/// Per (alpha^2, variant, error type): count, mean, median, quartiles,
/// min, max; plus per-cell failures.
std::string error_summary_json(const ErrorReport &report, const std::vector<double> &alphas,
                               const std::vector<Variant> &variants);

std::string registration_json(const RegistrationResult &r, const RegistrationConfig &cfg);

/// Population directory layout: template.off, subject_NNN_S.off, subject_NNN_S2.off.
void save_population(const Population &pop, const std::filesystem::path &dir);
Population load_population(const std::filesystem::path &dir);

void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace symladder
