#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "symladder/symmetric_ops.hpp"

namespace symladder {

/// sqrt(mean_i |a_i - b_i|^2) over corresponded vertices.
double shape_rms(const Mesh &a, const Mesh &b);

/// shape_rms(midpoint(T, S), midpoint(S, T))
double midpoint_distance_error(const Mesh &T, const Mesh &S, Registrar &registrar, Variant variant);

/// shape_rms(s_M(T), S) with M = midpoint(T, S).
double centrality_error(const Mesh &T, const Mesh &S, Registrar &registrar, Variant variant);

/// shape_rms(s_M(s_M(S2)), S2) with M = midpoint(T, S).
double involutivity_error(const Mesh &T, const Mesh &S, const Mesh &S2, Registrar &registrar,
                          Variant variant);

/// shape_rms(s_T(s_M(S2)), s_M(s_S(S2))) with M = midpoint(T, S).
double transvectivity_error(const Mesh &T, const Mesh &S, const Mesh &S2, Registrar &registrar,
                            Variant variant);

/// shape_rms(psi_1(phi_1(T)), T) where phi registers T -> S and psi S -> T,
/// both applied without residuals.
double inverse_consistency_error(const Mesh &T, const Mesh &S, Registrar &registrar);

enum class ErrorType {
  midpoint_distance,
  centrality,
  involutivity,
  transvectivity,
  inverse_consistency,
  registration_error, ///< shape_rms(phi_1(T), S) for T -> S
  registration_norm,  ///< |v0|_H of T -> S (Hilbert-metric units)
};

inline constexpr std::size_t kErrorTypeCount = 7;
inline constexpr std::array<ErrorType, kErrorTypeCount> kAllErrorTypes = {
    ErrorType::midpoint_distance, ErrorType::centrality,         ErrorType::involutivity,
    ErrorType::transvectivity,    ErrorType::inverse_consistency, ErrorType::registration_error,
    ErrorType::registration_norm};

std::string_view error_type_name(ErrorType t);

struct ErrorValue {
  double value = 0.0;
  bool converged = false; ///< every registration behind the value converged
  bool ok = false;        ///< false when the computation threw
  std::string failure;
};

/// One (subject, alpha^2, variant) cell of the error table.
struct ErrorCell {
  std::size_t subject = 0;
  double alpha_squared = 0.0;
  Variant variant = Variant::with_residual;
  std::array<ErrorValue, kErrorTypeCount> errors;

  const ErrorValue &operator[](ErrorType t) const { return errors[static_cast<std::size_t>(t)]; }
};

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0, median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

struct ErrorReport {
  std::vector<ErrorCell> cells; ///< subject-major, then alpha, then variant

  /// Statistics over subjects for one (alpha^2, variant, error) group; failed cells are skipped.
  SummaryStats summary(double alpha_squared, Variant variant, ErrorType type) const;
  double mean(double alpha_squared, Variant variant, ErrorType type) const {
    return summary(alpha_squared, variant, type).mean;
  }
};

struct SubjectPair {
  Mesh S;  ///< subject at the first time point
  Mesh S2; ///< same subject at the second time point
};

struct SuiteOptions {
  std::size_t threads = 0; ///< 0: hardware concurrency
  bool cache_registrations = true;
};

/// Every error for every subject x alpha^2 x variant. `cfg` supplies all
/// registration settings except alpha_squared. Cells are evaluated
/// independently (possibly concurrently) and stored by index, so the report
/// does not depend on scheduling.
ErrorReport run_suite(const std::vector<SubjectPair> &population, const Mesh &T,
                      const std::vector<double> &alphas_squared, const std::vector<Variant> &variants,
                      const RegistrationConfig &cfg, const SuiteOptions &options = {});

/// Computes one (subject, alpha^2) group for all variants with a shared registrar.
std::vector<ErrorCell> evaluate_cells(const SubjectPair &pair, std::size_t subject_id, const Mesh &T,
                                      const std::vector<Variant> &variants, Registrar &registrar);

} // namespace symladder
