#include "contactlab/soliton.hpp"

#include <cmath>
#include <numeric>

#include "contactlab/errors.hpp"
#include "contactlab/geometry.hpp"

namespace contactlab {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

SolitonSpec soliton_from_spec(const LoadedSpec& loaded, const std::string& name) {
  for (const SolitonEntry& e : loaded.spec.solitons) {
    if (e.name != name) continue;
    SolitonSpec s;
    s.name = e.name;
    s.lambda = e.lambda;
    if (e.vector_field) s.vector_field = build_vector_field(loaded.spec, *e.vector_field);
    if (e.potential) s.potential = build_scalar_field(loaded.spec, *e.potential);
    return s;
  }
  throw SchemaError("spec '" + loaded.spec.name + "' has no soliton named '" + name + "'");
}

const char* kind_name(SolitonKind kind) {
  switch (kind) {
    case SolitonKind::shrinking: return "shrinking";
    case SolitonKind::steady: return "steady";
    case SolitonKind::expanding: return "expanding";
  }
  return "";
}

SolitonKind classify_soliton(double lambda) {
  if (lambda < 0.0) return SolitonKind::shrinking;
  if (lambda > 0.0) return SolitonKind::expanding;
  return SolitonKind::steady;
}

VectorField soliton_vector_field(const ChartedModel& model, const SolitonSpec& spec,
                                 const DifferentiationConfig& cfg) {
  if (spec.vector_field.has_value() == spec.potential.has_value())
    throw PreconditionFailed("soliton '" + spec.name + "' needs exactly one of V and potential");
  if (spec.vector_field) return *spec.vector_field;
  const VectorField df = gradient_field(model, *spec.potential, cfg);
  return VectorField{[df](const Point& p) { return Vector(-df(p)); }};
}

double soliton_residual(const ChartedModel& model, const SolitonSpec& spec,
                        const DifferentiationConfig& cfg) {
  const VectorField v = soliton_vector_field(model, spec, cfg);
  const FieldLevel level = spec.potential ? FieldLevel::derived : FieldLevel::primary;
  double worst = 0.0;
  for (const Point& p : model.sample_points(cfg)) {
    const Matrix lie = lie_derivative_metric(model, v, p, cfg, level);
    const RicciData ric = ricci_and_scalar(model, p, cfg);
    const double r = max_abs(lie + 2.0 * ric.ricci + 2.0 * spec.lambda * model.metric(p));
    if (!(worst >= r)) worst = r;
  }
  return worst;
}

double gradient_soliton_residual(const ChartedModel& model, const ScalarField& f, double lambda,
                                 const DifferentiationConfig& cfg) {
  double worst = 0.0;
  for (const Point& p : model.sample_points(cfg)) {
    const GradientHessian gh = gradient_and_hessian(model, f, p, cfg);
    const RicciData ric = ricci_and_scalar(model, p, cfg);
    const double r = max_abs(gh.hessian - ric.ricci - lambda * model.metric(p));
    if (!(worst >= r)) worst = r;
  }
  return worst;
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw Error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g == 0 ? 0 : n / g;
  den = g == 0 ? 1 : d / g;
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}
Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
Rational operator*(const Rational& a, const Rational& b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(const Rational& a, const Rational& b) { return {a.num * b.den, a.den * b.num}; }
Rational operator-(const Rational& a) { return {-a.num, a.den}; }

CollinearReport collinear_soliton_constraints(int n) {
  if (n < 1) throw BadN("collinear constraints need n >= 1, got " + std::to_string(n));
  CollinearReport r;
  r.n = n;
  const Rational nn(n);
  const Rational two(2);

  // Contracting the soliton equation with xi gives xi(alpha) + 2nk + lambda = 0, and the
  // horizontal part gives d alpha = (2nk + lambda) eta. Since d(d alpha) = 0 and d eta != 0,
  // 2nk + lambda = 0 and alpha is constant.
  r.alpha_constant = true;
  r.notes.push_back("[" + std::string(anchor::xi_alpha) + "] xi(alpha) + 2nk + lambda = 0");
  r.notes.push_back("[" + std::string(anchor::d_alpha) +
                    "] d alpha = (2nk + lambda) eta, so lambda = -2nk and alpha is constant");

  // Comparing Ric = 2nk g + alpha g(phi h ., .) with the N(k) Ricci tensor after X -> phi X:
  //   (2nk - 2(n-1)) phi + alpha h + 2(n-1) phi h = 0 on the contact distribution.
  // phi is skew; h and phi h are symmetric and independent while h != 0.
  const Rational skew_k = two * nn;        // coefficient of k in the skew part
  const Rational skew_c = -two * (nn - 1);  // constant term of the skew part
  const Rational k = -skew_c / skew_k;
  const Rational phi_h_coefficient = two * (nn - 1);

  if (n == 1) {
    r.consistent = false;
    r.symmetric_part_consistent = false;
    r.notes.push_back("[" + std::string(anchor::ric_04) +
                      "] n = 1: the skew part gives k = 0 and the symmetric part gives alpha h = 0; "
                      "with alpha != 0 this is h=0, a contradiction with the non-Sasakian "
                      "hypothesis");
    r.notes.push_back("n = 1, alpha = 0: V = 0, k = 0 and lambda = 0, a trivial steady soliton "
                      "on a Ricci-flat structure rather than a collinear one");
    return r;
  }

  r.consistent = true;
  r.forced_k = k;
  r.forced_lambda = -two * nn * k;
  r.kind = classify_soliton(r.forced_lambda->value());
  r.notes.push_back("[" + std::string(anchor::ric_04) + "] skew part: nk - n + 1 = 0, so k = " +
                    k.to_string());
  r.notes.push_back("lambda = -2nk = " + r.forced_lambda->to_string() + ", a " +
                    kind_name(*r.kind) + " soliton");
  r.symmetric_part_consistent = phi_h_coefficient == Rational(0);
  r.notes.push_back("symmetric part: alpha h + " + phi_h_coefficient.to_string() +
                    " phi h = 0, which forces h = 0 when h and phi h are independent; the skew "
                    "part alone does not close the system");
  return r;
}

VerificationReport collinear_report(const CollinearReport& r) {
  VerificationReport report;
  report.structure_name = "collinear-n" + std::to_string(r.n);
  report.values["n"] = r.n;
  report.values["consistent"] = r.consistent;
  report.values["alpha_constant"] = r.alpha_constant;
  report.values["symmetric_part_consistent"] = r.symmetric_part_consistent;
  report.values["forced_k"] = r.forced_k ? nlohmann::json(r.forced_k->to_string()) : nlohmann::json();
  report.values["forced_lambda"] =
      r.forced_lambda ? nlohmann::json(r.forced_lambda->to_string()) : nlohmann::json();
  report.values["kind"] = r.kind ? nlohmann::json(kind_name(*r.kind)) : nlohmann::json();
  report.values["notes"] = r.notes;
  if (r.forced_k && r.forced_lambda) {
    // Substitute back: lambda + 2nk = 0 and nk - n + 1 = 0, exactly.
    const Rational nn(r.n);
    const Rational e1 = *r.forced_lambda + Rational(2) * nn * *r.forced_k;
    const Rational e2 = nn * *r.forced_k - nn + Rational(1);
    report.add("collinear.lambda_constraint", anchor::d_alpha, std::abs(e1.value()), 0.0, 0, 0);
    report.add("collinear.skew_constraint", anchor::ric_04, std::abs(e2.value()), 0.0, 0, 0);
  }
  report.finalize();
  return report;
}

CollinearFit fit_collinear_soliton(const ContactStructure& s, double lambda,
                                   const DifferentiationConfig& cfg) {
  std::vector<Matrix> lie, rest;
  double ll = 0.0;
  double la = 0.0;
  for (const Point& p : s.model.sample_points(cfg)) {
    lie.push_back(lie_derivative_metric(s.model, s.xi, p, cfg));
    rest.push_back(2.0 * ricci_and_scalar(s.model, p, cfg).ricci + 2.0 * lambda * s.model.metric(p));
    ll += lie.back().squaredNorm();
    la += (lie.back().array() * rest.back().array()).sum();
  }
  CollinearFit out;
  out.alpha = ll > 1e-24 ? -la / ll : 0.0;
  for (std::size_t i = 0; i < lie.size(); ++i)
    out.residual = std::max(out.residual, max_abs(out.alpha * lie[i] + rest[i]));
  return out;
}

VerificationReport grad_soliton_audit(const ChartedModel& model, const ScalarField& f,
                                      double lambda, const DifferentiationConfig& cfg,
                                      const ContactStructure* structure,
                                      const AuditTolerances& tol) {
  const double pre = gradient_soliton_residual(model, f, lambda, cfg);
  if (!(pre <= tol.precondition))
    throw PreconditionFailed("gradient soliton residual " + std::to_string(pre) +
                             " exceeds " + std::to_string(tol.precondition) +
                             "; the audit identities do not apply");
  const int m = model.dim();
  const Tensor11Field q = ricci_operator_field(model, cfg);
  const std::vector<Point> points = model.sample_points(cfg);
  double r_df = 0.0;
  double q_xi = 0.0;
  double df_xi = 0.0;
  for (const Point& p : points) {
    const Curvature r = riemann(model, p, cfg);
    const Vector df = gradient_and_hessian(model, f, p, cfg).gradient;
    const std::vector<Matrix> nq = covariant_derivative_t11_all(model, q, p, cfg, FieldLevel::curvature);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const Vector lhs = curvature_apply(r, Vector::Unit(m, i), Vector::Unit(m, j), df);
        const Vector rhs = nq[static_cast<std::size_t>(i)].col(j) - nq[static_cast<std::size_t>(j)].col(i);
        r_df = std::max(r_df, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    if (structure) {
      const Vector xi = structure->xi(p);
      const Matrix g = model.metric(p);
      Matrix nq_xi = Matrix::Zero(m, m);
      for (int k = 0; k < m; ++k) nq_xi += xi[k] * nq[static_cast<std::size_t>(k)];
      for (int j = 0; j < m; ++j) {
        const Vector v = nq_xi.col(j) - nq[static_cast<std::size_t>(j)] * xi;
        q_xi = std::max(q_xi, std::abs(xi.dot(g * v)));
      }
      const double xi_f = xi.dot(g * df);
      df_xi = std::max(df_xi, (df - xi_f * xi).cwiseAbs().maxCoeff());
    }
  }
  VerificationReport report;
  report.structure_name = structure ? structure->name : "riemannian";
  const int samples = static_cast<int>(points.size());
  report.add("audit.gradient_soliton", anchor::ricci_soliton_grad, pre, tol.precondition, samples,
             cfg.seed);
  report.add("audit.R_Df", anchor::r_df, r_df, tol.identity, samples, cfg.seed);
  if (structure) {
    report.add("audit.Q_der_xi", anchor::q_der_xi, q_xi, tol.identity, samples, cfg.seed);
    report.values["Df_minus_xi_f_xi"] = df_xi;
  }
  report.values["lambda"] = lambda;
  report.values["kind"] = kind_name(classify_soliton(lambda));
  report.finalize();
  return report;
}

EinsteinFit einstein_fit(const ChartedModel& model, const DifferentiationConfig& cfg, double tol) {
  std::vector<Matrix> ric, met;
  double rg = 0.0;
  double gg = 0.0;
  for (const Point& p : model.sample_points(cfg)) {
    ric.push_back(ricci_and_scalar(model, p, cfg).ricci);
    met.push_back(model.metric(p));
    rg += (ric.back().array() * met.back().array()).sum();
    gg += met.back().squaredNorm();
  }
  EinsteinFit out;
  out.a = rg / gg;
  for (std::size_t i = 0; i < ric.size(); ++i)
    out.residual = std::max(out.residual, max_abs(ric[i] - out.a * met[i]));
  out.is_einstein = out.residual <= tol;
  return out;
}

}  // namespace contactlab
