#include "contactlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "contactlab/errors.hpp"

namespace contactlab {

const std::vector<std::string>& anchor::all() {
  static const std::vector<std::string> labels{
      phi_eta_xi, metric_1, metric_2, contact_condition, characteristic, cont_h, cont_del_xi,
      normality, sasakian, km, q_xi, h_squared, derivative_h, q_1, der_phi_sq, q_der,
      ric_curvature, scalar, boeckx, deformation, example_3_1, ricci_soliton,
      ricci_soliton_grad, r_df, q_der_xi, df, xi_alpha, d_alpha, ric_04, einstein, plumbing};
  return labels;
}

void VerificationReport::add(std::string check_id, std::string anchor_label, double max_residual,
                             double tolerance, int samples, std::uint64_t seed) {
  Check c;
  c.check_id = std::move(check_id);
  c.paper_anchor = std::move(anchor_label);
  c.max_residual = max_residual;
  c.tolerance = tolerance;
  c.pass = max_residual <= tolerance;  // false for NaN
  c.samples = samples;
  c.seed = seed;
  checks.push_back(std::move(c));
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (Check c : other.checks) {
    c.check_id = prefix + c.check_id;
    checks.push_back(std::move(c));
  }
  for (auto it = other.values.begin(); it != other.values.end(); ++it) values[prefix + it.key()] = it.value();
}

void VerificationReport::finalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const Check& a, const Check& b) { return a.check_id < b.check_id; });
  summary.passed = 0;
  summary.failed = 0;
  for (const Check& c : checks) (c.pass ? summary.passed : summary.failed)++;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& check_id) const {
  for (const Check& c : checks)
    if (c.check_id == check_id) return &c;
  return nullptr;
}

nlohmann::json canonical_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double rounded = std::strtod(buf, nullptr);
  if (rounded == 0.0) rounded = 0.0;  // drop negative zero
  return rounded;
}

namespace {

nlohmann::json canonicalize(const nlohmann::json& j) {
  if (j.is_number_float()) return canonical_number(j.get<double>());
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : j) out.push_back(canonicalize(e));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonicalize(it.value());
    return out;
  }
  return j;
}

double number_from(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  return j.get<double>();
}

}  // namespace

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"check_id", c.check_id},
                      {"paper_anchor", c.paper_anchor},
                      {"max_residual", canonical_number(c.max_residual)},
                      {"tolerance", canonical_number(c.tolerance)},
                      {"pass", c.pass},
                      {"samples", c.samples},
                      {"seed", c.seed}});
  }
  return {{"schema_version", report.schema_version},
          {"structure_name", report.structure_name},
          {"checks", checks},
          {"values", canonicalize(report.values)},
          {"summary",
           {{"passed", report.summary.passed},
            {"failed", report.summary.failed},
            {"runtime_ms", report.summary.runtime_ms}}}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.structure_name = j.at("structure_name").get<std::string>();
  for (const auto& c : j.at("checks")) {
    Check ck;
    ck.check_id = c.at("check_id").get<std::string>();
    ck.paper_anchor = c.at("paper_anchor").get<std::string>();
    ck.max_residual = number_from(c.at("max_residual"));
    ck.tolerance = number_from(c.at("tolerance"));
    ck.pass = c.at("pass").get<bool>();
    ck.samples = c.at("samples").get<int>();
    ck.seed = c.at("seed").get<std::uint64_t>();
    r.checks.push_back(std::move(ck));
  }
  r.values = j.value("values", nlohmann::json::object());
  const auto& s = j.at("summary");
  r.summary.passed = s.at("passed").get<int>();
  r.summary.failed = s.at("failed").get<int>();
  r.summary.runtime_ms = s.at("runtime_ms").get<std::int64_t>();
  return r;
}

namespace {

std::string text_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";

  std::ostringstream out;
  out << "structure: " << report.structure_name << "\n";
  std::size_t width = 8;
  for (const Check& c : report.checks) width = std::max(width, c.check_id.size());
  out << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(14)
      << "residual" << std::setw(12) << "tolerance" << "result   anchor\n";
  for (const Check& c : report.checks) {
    char res[32], tol[32];
    std::snprintf(res, sizeof res, "%.3e", c.max_residual);
    std::snprintf(tol, sizeof tol, "%.1e", c.tolerance);
    out << std::left << std::setw(static_cast<int>(width) + 2) << c.check_id << std::setw(14) << res
        << std::setw(12) << tol << (c.pass ? "pass     " : "FAIL     ") << c.paper_anchor << "\n";
  }
  if (!report.values.empty()) {
    out << "values:\n";
    const nlohmann::json values = canonicalize(report.values);
    for (auto it = values.begin(); it != values.end(); ++it)
      out << "  " << it.key() << " = " << text_value(it.value()) << "\n";
  }
  out << "passed " << report.summary.passed << ", failed " << report.summary.failed << "\n";
  return out.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace contactlab
