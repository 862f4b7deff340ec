#pragma once

// Theorem-level experiments on generated instances and their reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmult/io.hpp"
#include "qmult/norms.hpp"
#include "qmult/qubit.hpp"

namespace qmult {

enum class CaseStatus { passed, failed, rejected };

struct VerificationReport {
  std::string case_id;
  std::string theorem_tag;  // thm1 | thm2 | thm4 | wh | ep_hat
  std::vector<ChannelDescriptor> channels;
  std::optional<std::string> p;  // Schatten exponent text, thm1 only
  std::optional<int> t;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;  // lhs / rhs when rhs > 0
  double tolerance = 0.0;
  CaseStatus status = CaseStatus::rejected;
  bool converged = true;
  int reruns = 0;
  std::string diagnostic;
  json extra = json::object();  // tag-specific values, e.g. "violated"
  double wall_time = 0.0;       // seconds; serialized only on request

  [[nodiscard]] bool passed() const { return status == CaseStatus::passed; }
};

json report_to_json(const VerificationReport& r, bool include_timing = false);
VerificationReport report_from_json(const json& j);

/// Relative tolerance for optimizer-based equalities.
inline constexpr double kOptimizerTolerance = 1e-3;
/// Tolerance for closed-form comparisons.
inline constexpr double kClosedFormTolerance = 1e-9;

/// ||K (x) L||_{p->2t} <= ||K||_{2->2t} ||L||_{p->2t} for EP K and 1 <= p <= 2,
/// with equality at p = 2.
VerificationReport check_theorem1(const DescribedChannel& k, const DescribedChannel& l, SchattenExponent p, int t,
                                  const OptimizerConfig& cfg, double tol = kOptimizerTolerance);

/// nu_t(Phi (x) Omega) = nu_t(Phi) nu_t(Omega) for CP and EP Phi, CP Omega.
VerificationReport check_theorem2(const DescribedChannel& phi, const DescribedChannel& omega, int t,
                                  const OptimizerConfig& cfg, double tol = kOptimizerTolerance);

/// nu_2t(Phi (x) Omega) = nu_2t(Phi) nu_2t(Omega) for EP Phi, 2-positive Omega.
VerificationReport check_theorem4(const DescribedChannel& phi, const DescribedChannel& omega, int t,
                                  const OptimizerConfig& cfg, double tol = kOptimizerTolerance);

/// Werner-Holevo witness: ||(Phi (x) Phi)(P+)||_t against nu_t(Phi)^2 in closed
/// form. `extra.violated` is true when the witness beats the product.
VerificationReport wh_violation(int d, int t);

/// Closed form (d - 1)^((1 - t) / t) of nu_t for the Werner-Holevo map.
double werner_holevo_nu(int d, double t);

struct EpHatProbe {
  /// Phi^ o Phi in the orthonormal basis (E11, E12, E21, E22).
  Eigen::Matrix4d unit_basis;
  /// 2 * unit_basis: the normalization with the common factor 1/2 pulled out,
  /// in which b(1, 2) = lambda1^2 - lambda2^2.
  Eigen::Matrix4d b;
  bool ep_hat = false;
};

EpHatProbe ep_hat_probe(const QubitDiagonalParams& params);

struct SuiteConfig {
  std::string theorem = "thm2";  // thm1 | thm2 | thm4 | wh | ep_hat
  int cases = 0;
  std::vector<int> t_values{2, 3};
  std::vector<double> p_values{1.0, 1.5, 2.0};
  int max_dim = 3;
  int wh_dim = 3;
  std::uint64_t master_seed = 0;
  OptimizerConfig optimizer;
  double tolerance = kOptimizerTolerance;

  void validate() const;
};

struct SuiteSummary {
  std::string theorem;
  int cases = 0;
  int passed = 0;
  int failed = 0;
  int rejected = 0;
  int non_converged = 0;
  double pass_rate = 0.0;
  std::optional<double> worst_ratio;  // largest |ratio - 1|, reported as the ratio itself
  double total_runtime = 0.0;
};

struct SuiteResult {
  std::vector<VerificationReport> reports;  // sorted by case_id
  SuiteSummary summary;
};

SuiteResult run_suite(const SuiteConfig& cfg);

json summary_to_json(const SuiteSummary& s, bool include_timing = false);
std::string summary_csv(const SuiteSummary& s, bool include_timing = false);
std::string reports_jsonl(const std::vector<VerificationReport>& reports, bool include_timing = false);
void write_text_file(const std::string& path, const std::string& content);

std::string to_string(CaseStatus s);

}  // namespace qmult
