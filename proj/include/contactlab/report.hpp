#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace contactlab {

/// Identity labels carried by every check so a reader can trace it to the relation it tests.
namespace anchor {
inline constexpr const char* phi_eta_xi = "eq-phi-eta-xi";
inline constexpr const char* metric_1 = "eq-metric-1";
inline constexpr const char* metric_2 = "eq-metric-2";
inline constexpr const char* contact_condition = "contact-metric-condition";
inline constexpr const char* characteristic = "characteristic-vector-field";
inline constexpr const char* cont_h = "eq-cont-h";
inline constexpr const char* cont_del_xi = "eq-cont-del-xi";
inline constexpr const char* normality = "nijenhuis-normality";
inline constexpr const char* sasakian = "eq-Sas-2";
inline constexpr const char* km = "eq-km";
inline constexpr const char* q_xi = "ricci-operator-xi";
inline constexpr const char* h_squared = "h-squared";
inline constexpr const char* derivative_h = "eq-derivative-h";
inline constexpr const char* q_1 = "eq-Q-1";
inline constexpr const char* der_phi_sq = "eq-der-phi-sq";
inline constexpr const char* q_der = "eq-Q-der";
inline constexpr const char* ric_curvature = "eq-Ric-curvature";
inline constexpr const char* scalar = "eq-scalar";
inline constexpr const char* boeckx = "boeckx-invariant";
inline constexpr const char* deformation = "d-homothetic-deformation";
inline constexpr const char* example_3_1 = "example-3.1";
inline constexpr const char* ricci_soliton = "eq-Ricci-soliton";
inline constexpr const char* ricci_soliton_grad = "eq-Ricci-soliton-grad";
inline constexpr const char* r_df = "eq-R(X,Y)Df";
inline constexpr const char* q_der_xi = "eq-Q-der-xi";
inline constexpr const char* df = "eq-Df";
inline constexpr const char* xi_alpha = "eq-xi-alpha";
inline constexpr const char* d_alpha = "eq-d-alpha";
inline constexpr const char* ric_04 = "eq-Ric-04";
inline constexpr const char* einstein = "einstein";
inline constexpr const char* plumbing = "plumbing";

/// Every label above; reports must only use these.
const std::vector<std::string>& all();
}  // namespace anchor

struct Check {
  std::string check_id;
  std::string paper_anchor;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int samples = 0;
  std::uint64_t seed = 0;
};

struct ReportSummary {
  int passed = 0;
  int failed = 0;
  std::int64_t runtime_ms = 0;
};

/// Per-identity residuals with pass/fail against tolerances, plus auxiliary named values
/// (fitted parameters, labels). `pass` is always max_residual <= tolerance.
struct VerificationReport {
  int schema_version = 1;
  std::string structure_name;
  std::vector<Check> checks;
  nlohmann::json values = nlohmann::json::object();
  ReportSummary summary;

  void add(std::string check_id, std::string anchor_label, double max_residual, double tolerance,
           int samples, std::uint64_t seed);
  void merge(const VerificationReport& other, const std::string& prefix = "");
  /// Sorts checks by id and recomputes the summary counts.
  void finalize();
  bool all_pass() const;
  const Check* find(const std::string& check_id) const;
};

enum class ReportFormat { json, text };

/// JSON output is canonical: sorted keys, every real rounded to 12 significant digits, two-space
/// indentation and a trailing newline. Identical reports give identical bytes.
std::string emit_report(const VerificationReport& report, ReportFormat format);
nlohmann::json report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

/// Rounds to 12 significant digits; non-finite values become the strings "nan"/"inf"/"-inf".
nlohmann::json canonical_number(double v);

/// Writes to `path`, or to standard output when path is empty or "-". Throws IoError.
void write_output(const std::string& text, const std::string& path);

}  // namespace contactlab
