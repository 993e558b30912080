#include "contactlab/nullity.hpp"

#include <charconv>
#include <cmath>

#include "contactlab/differentiation.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

NullityFit fit_nullity(const ContactStructure& s, const DifferentiationConfig& cfg) {
  const int m = s.dim();
  const std::vector<Point> points = s.model.sample_points(cfg);

  // Rows: R(d_i, d_j) xi = k v + mu h v with v = eta_j d_i - eta_i d_j, one row per component.
  std::vector<double> col_k, col_mu, rhs;
  double h_norm = 0.0;
  for (const Point& p : points) {
    const Curvature r = riemann(s.model, p, cfg);
    const Vector xi = s.xi(p);
    const Vector eta = s.eta(p);
    const Matrix h = compute_h(s, p, cfg);
    h_norm = std::max(h_norm, max_abs(h));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const Vector ei = Vector::Unit(m, i);
        const Vector ej = Vector::Unit(m, j);
        const Vector lhs = curvature_apply(r, ei, ej, xi);
        const Vector v = eta[j] * ei - eta[i] * ej;
        const Vector hv = h * v;
        for (int a = 0; a < m; ++a) {
          col_k.push_back(v[a]);
          col_mu.push_back(hv[a]);
          rhs.push_back(lhs[a]);
        }
      }
  }

  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  for (std::size_t r = 0; r < rhs.size(); ++r) {
    normal(0, 0) += col_k[r] * col_k[r];
    normal(0, 1) += col_k[r] * col_mu[r];
    normal(1, 1) += col_mu[r] * col_mu[r];
    target[0] += col_k[r] * rhs[r];
    target[1] += col_mu[r] * rhs[r];
  }
  normal(1, 0) = normal(0, 1);
  if (!(normal(0, 0) > 1e-20)) throw DegenerateFit("nullity fit: the k column vanishes");

  const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(normal).eigenvalues();
  NullityFit fit;
  fit.samples = static_cast<int>(points.size());
  fit.h_norm = h_norm;
  fit.condition = std::sqrt(std::max(eig[0], 0.0) / eig[1]);
  fit.mu_identifiable = fit.condition >= 1e-6 && h_norm > 1e-5;
  double mu = 0.0;
  if (fit.mu_identifiable) {
    const Eigen::Vector2d sol = normal.ldlt().solve(target);
    fit.k = sol[0];
    mu = sol[1];
    fit.mu = mu;
  } else {
    fit.k = target[0] / normal(0, 0);
  }
  for (std::size_t r = 0; r < rhs.size(); ++r)
    fit.residual = std::max(fit.residual, std::abs(rhs[r] - fit.k * col_k[r] - mu * col_mu[r]));
  return fit;
}

bool fit_accepted(const NullityFit& fit, const FitAcceptance& acceptance) {
  return fit.residual <= acceptance.residual && fit.k <= 1.0 + acceptance.k_slack;
}

const char* identity_name(KmIdentity id) {
  switch (id) {
    case KmIdentity::q_xi: return "Q_XI";
    case KmIdentity::h_squared: return "H_SQUARED";
    case KmIdentity::nabla_h: return "NABLA_H";
    case KmIdentity::q_formula: return "Q_FORMULA";
    case KmIdentity::der_phi_sq: return "DER_PHI_SQ";
    case KmIdentity::q_skew: return "Q_SKEW";
    case KmIdentity::ric_formula: return "RIC_FORMULA";
    case KmIdentity::scalar: return "SCALAR";
  }
  return "";
}

std::optional<KmIdentity> identity_from_name(const std::string& name) {
  for (KmIdentity id : all_km_identities)
    if (name == identity_name(id)) return id;
  return std::nullopt;
}

bool requires_non_sasakian(KmIdentity id) {
  return id == KmIdentity::q_formula || id == KmIdentity::ric_formula ||
         id == KmIdentity::scalar || id == KmIdentity::q_skew;
}

namespace {

const char* identity_anchor(KmIdentity id) {
  switch (id) {
    case KmIdentity::q_xi: return anchor::q_xi;
    case KmIdentity::h_squared: return anchor::h_squared;
    case KmIdentity::nabla_h: return anchor::derivative_h;
    case KmIdentity::q_formula: return anchor::q_1;
    case KmIdentity::der_phi_sq: return anchor::der_phi_sq;
    case KmIdentity::q_skew: return anchor::q_der;
    case KmIdentity::ric_formula: return anchor::ric_curvature;
    case KmIdentity::scalar: return anchor::scalar;
  }
  return anchor::plumbing;
}

}  // namespace

QCoefficients q_coefficients(int n, double k, double mu, CoefficientSet set) {
  const double sign = set == CoefficientSet::consistent ? -1.0 : 1.0;
  return {2.0 * n * k, 2.0 * (n - 1) + mu, -(2.0 * (n - 1) - n * mu + sign * 2.0 * n * k)};
}

QSkewCoefficients q_skew_coefficients(int n, double k, double mu, CoefficientSet set) {
  if (set == CoefficientSet::printed)
    return {2.0 * (n + 1) * mu - 4.0 * (2 * n - 1) * k - 2.0 * k * mu,
            2.0 * (2 * n - 1) * k - (n + 1) * mu + k * mu, (mu + 3.0 * n - 1.0) * mu - 2.0 * n * k};
  return {2.0 * (n + 1) * mu + 4.0 * k - 2.0 * k * mu, -2.0 * k - (n + 1) * mu + k * mu,
          mu * mu + (n - 3.0) * mu - 2.0 * n * k};
}

KmTolerances KmTolerances::for_config(const DifferentiationConfig& cfg) {
  KmTolerances t;
  t.third = cfg.richardson ? 1e-3 : 1e-2;
  return t;
}

namespace {

struct PointData {
  Matrix g, phi, h;
  Vector xi, eta;
};

PointData point_data(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg) {
  return {s.model.metric(p), s.phi(p), compute_h(s, p, cfg), s.xi(p), s.eta(p)};
}

double identity_residual(const ContactStructure& s, KmIdentity id, const Point& p,
                         const DifferentiationConfig& cfg, double k, double mu,
                         CoefficientSet set) {
  const int m = s.dim();
  const int n = s.n();
  const Matrix id_m = Matrix::Identity(m, m);
  const PointData d = point_data(s, p, cfg);
  const Matrix phih = d.phi * d.h;

  switch (id) {
    case KmIdentity::q_xi: {
      const RicciData ric = ricci_and_scalar(s.model, p, cfg);
      return max_abs(ric.operator_ * d.xi - 2.0 * n * k * d.xi);
    }
    case KmIdentity::h_squared:
      return max_abs(d.h * d.h - (k - 1.0) * d.phi * d.phi);
    case KmIdentity::q_formula: {
      const RicciData ric = ricci_and_scalar(s.model, p, cfg);
      const QCoefficients c = q_coefficients(n, k, mu, set);
      return max_abs(ric.operator_ - c.identity * id_m - c.h * d.h - c.phi_squared * d.phi * d.phi);
    }
    case KmIdentity::ric_formula: {
      const RicciData ric = ricci_and_scalar(s.model, p, cfg);
      const Matrix gh = d.g * d.h;
      const Matrix expected = (2.0 * (n - 1) - n * mu) * d.g + (2.0 * (n - 1) + mu) * gh +
                              (2.0 * (1 - n) + n * (2.0 * k + mu)) * d.eta * d.eta.transpose();
      return max_abs(ric.ricci - expected);
    }
    case KmIdentity::scalar: {
      const RicciData ric = ricci_and_scalar(s.model, p, cfg);
      return std::abs(ric.scalar - 2.0 * n * (2.0 * n - 2.0 + k - n * mu));
    }
    case KmIdentity::der_phi_sq: {
      const Tensor11Field phi = s.phi;
      const Tensor11Field phi2{[phi](const Point& q) {
        const Matrix f = phi(q);
        return Matrix(f * f);
      }};
      const std::vector<Matrix> nphi2 =
          covariant_derivative_t11_all(s.model, phi2, p, cfg, FieldLevel::primary);
      const Tensor3 gamma = christoffel(s.model, p, cfg);
      const std::vector<Vector> deta = fd::gradient(s.eta.eval, p, cfg.step_first);
      const Matrix dxi = -(d.phi + phih);  // nabla xi
      double worst = 0.0;
      for (int a = 0; a < m; ++a) {
        // (nabla_a eta)_j = d_a eta_j - Gamma^b_{aj} eta_b
        Vector neta = deta[static_cast<std::size_t>(a)];
        for (int j = 0; j < m; ++j)
          for (int b = 0; b < m; ++b) neta[j] -= gamma(b, a, j) * d.eta[b];
        const Matrix expected = d.xi * neta.transpose() + dxi.col(a) * d.eta.transpose();
        worst = std::max(worst, max_abs(nphi2[static_cast<std::size_t>(a)] - expected));
      }
      return worst;
    }
    case KmIdentity::nabla_h: {
      const std::vector<Matrix> nh =
          covariant_derivative_t11_all(s.model, h_field(s, cfg), p, cfg, FieldLevel::derived);
      const double sign = set == CoefficientSet::consistent ? -1.0 : 1.0;
      const Matrix gphi = d.g * d.phi;
      const Matrix gphih = d.g * phih;
      const Matrix hphi_sum = d.h * d.phi + d.h * phih;
      double worst = 0.0;
      for (int a = 0; a < m; ++a) {
        const Vector row = (1.0 - k) * gphi.row(a).transpose() + sign * gphih.row(a).transpose();
        const Matrix expected = d.xi * row.transpose() +
                                hphi_sum.col(a) * d.eta.transpose() - mu * d.eta[a] * phih;
        worst = std::max(worst, max_abs(nh[static_cast<std::size_t>(a)] - expected));
      }
      return worst;
    }
    case KmIdentity::q_skew: {
      const std::vector<Matrix> nq = covariant_derivative_t11_all(
          s.model, ricci_operator_field(s.model, cfg), p, cfg, FieldLevel::curvature);
      const Matrix deta = d_eta(s, p, cfg);
      const QSkewCoefficients c = q_skew_coefficients(n, k, mu, set);
      double worst = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          const Vector lhs = nq[static_cast<std::size_t>(i)].col(j) - nq[static_cast<std::size_t>(j)].col(i);
          const Vector rhs = c.d_eta * deta(i, j) * d.xi +
                             c.phi * (d.eta[j] * d.phi.col(i) - d.eta[i] * d.phi.col(j)) +
                             c.phi_h * (d.eta[j] * phih.col(i) - d.eta[i] * phih.col(j));
          worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
      return worst;
    }
  }
  return 0.0;
}

double identity_tolerance(KmIdentity id, const KmTolerances& tol) {
  switch (id) {
    case KmIdentity::h_squared: return tol.h_squared;
    case KmIdentity::der_phi_sq: return tol.first;
    case KmIdentity::nabla_h:
    case KmIdentity::q_skew: return tol.third;
    default: return tol.curvature;
  }
}

}  // namespace

VerificationReport verify_km_identity(const ContactStructure& s, const NullityFit& fit,
                                      KmIdentity id, const DifferentiationConfig& cfg,
                                      const KmTolerances& tol,
                                      std::optional<StructureLabel> label, CoefficientSet set) {
  if (!fit_accepted(fit))
    throw PreconditionFailed("nullity fit not accepted (residual " + std::to_string(fit.residual) +
                             ", k " + std::to_string(fit.k) + ")");
  if (requires_non_sasakian(id)) {
    if (!label) label = classify_structure(s, cfg).label;
    if (*label == StructureLabel::sasakian)
      throw HypothesisViolated(std::string(identity_name(id)) +
                               " holds only on non-Sasakian structures");
  }
  const double mu = fit.mu.value_or(0.0);
  const std::vector<Point> points = s.model.sample_points(cfg);
  double worst = 0.0;
  for (const Point& p : points) {
    const double r = identity_residual(s, id, p, cfg, fit.k, mu, set);
    if (!(worst >= r)) worst = r;
  }
  VerificationReport report;
  report.structure_name = s.name;
  std::string check_id = std::string("km.") + identity_name(id);
  if (set == CoefficientSet::printed) check_id += ".printed";
  report.add(check_id, identity_anchor(id), worst, identity_tolerance(id, tol),
             static_cast<int>(points.size()), cfg.seed);
  report.finalize();
  return report;
}

double boeckx_invariant(double k, double mu) {
  if (!(k < 1.0 - 1e-9)) throw SasakianDomain("Boeckx invariant needs k < 1");
  return (1.0 - mu / 2.0) / std::sqrt(1.0 - k);
}

DeformedParameters deformation_map(double k, std::optional<double> mu, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionFailed("deformation needs a > 0");
  DeformedParameters out;
  out.k = (k + a * a - 1.0) / (a * a);
  if (mu) out.mu = (*mu + 2.0 * a - 2.0) / a;
  return out;
}

std::string deformed_name(const std::string& name, double a) { return name + "-a" + shortest(a); }

ContactStructure d_homothetic_deform(const ContactStructure& s, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionFailed("deformation needs a > 0");
  const ChartedModel base = s.model;
  const CovectorField eta = s.eta;
  const VectorField xi = s.xi;
  ChartedModel model(base.coordinate_names(), base.chart_box(), [base, eta, a](const Point& p) {
    const Vector e = eta(p);
    return Matrix(a * base.metric(p) + a * (a - 1.0) * e * e.transpose());
  });
  return ContactStructure{
      deformed_name(s.name, a), model, s.phi,
      VectorField{[xi, a](const Point& p) { return Vector(xi(p) / a); }},
      CovectorField{[eta, a](const Point& p) { return Vector(a * eta(p)); }}};
}

StructureSpec deform_spec(const StructureSpec& spec, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionFailed("deformation needs a > 0");
  if (!spec.has_contact()) throw SchemaError("spec '" + spec.name + "' has no phi/xi/eta");
  const int m = spec.dim();
  const dsl::Expression la(a);
  const dsl::Expression lb(a * (a - 1.0));
  StructureSpec out = spec;
  out.name = deformed_name(spec.name, a);
  out.solitons.clear();
  const auto& eta = *spec.eta;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const auto i = static_cast<std::size_t>(r * m + c);
      if (c < r) {
        out.metric[i] = out.metric[static_cast<std::size_t>(c * m + r)];
        continue;
      }
      out.metric[i] = la * spec.metric[i] +
                      lb * (eta[static_cast<std::size_t>(r)] * eta[static_cast<std::size_t>(c)]);
    }
  for (auto& v : *out.xi) v = v / la;
  for (auto& v : *out.eta) v = la * v;
  return out;
}

const char* branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

std::array<Example31Solution, 2> solve_example31(int n) {
  if (n <= 1) throw BadN("example31 needs n > 1, got " + std::to_string(n));
  const double rn = std::sqrt(static_cast<double>(n));
  std::array<Example31Solution, 2> out;
  for (Branch b : {Branch::plus, Branch::minus}) {
    const double s = b == Branch::plus ? rn + 1.0 : rn - 1.0;
    Example31Solution sol;
    sol.n = n;
    sol.branch = b;
    sol.c = s * s / (n - 1.0);
    sol.a = 1.0 + sol.c;
    out[b == Branch::plus ? 0 : 1] = sol;
  }
  return out;
}

double example31_residual(const Example31Solution& s) {
  const double k = s.c * (2.0 - s.c);
  const double mu = -2.0 * s.c;
  const double a2 = s.a * s.a;
  return std::max(std::abs(1.0 - 1.0 / s.n - (k + a2 - 1.0) / a2),
                  std::abs((mu + 2.0 * s.a - 2.0) / s.a));
}

}  // namespace contactlab
