#include "contactlab/contact.hpp"

#include <algorithm>
#include <cmath>

#include "contactlab/differentiation.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Matrix d_eta(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg) {
  const std::vector<Vector> de = fd::gradient(s.eta.eval, p, cfg.step_first);
  const int m = s.dim();
  Matrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out(i, j) = 0.5 * (de[static_cast<std::size_t>(i)][j] - de[static_cast<std::size_t>(j)][i]);
  return out;
}

Vector lie_bracket(const VectorField& a, const VectorField& b, const Point& p, double step) {
  const Vector av = a(p);
  const Vector bv = b(p);
  Vector out = Vector::Zero(p.size());
  for (int k = 0; k < p.size(); ++k) {
    out += av[k] * fd::central(b.eval, p, k, step);
    out -= bv[k] * fd::central(a.eval, p, k, step);
  }
  return out;
}

Matrix compute_h(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg) {
  // Column j of L_xi phi is [xi, phi d_j] - phi [xi, d_j], expanded in partials.
  const int m = s.dim();
  const std::vector<Matrix> dphi = fd::gradient(s.phi.eval, p, cfg.step_first);
  const std::vector<Vector> dxi = fd::gradient(s.xi.eval, p, cfg.step_first);
  const Vector xi = s.xi(p);
  const Matrix phi = s.phi(p);
  Matrix jac(m, m);  // jac(i, k) = d_k xi^i
  for (int k = 0; k < m; ++k) jac.col(k) = dxi[static_cast<std::size_t>(k)];
  Matrix lie = phi * jac - jac * phi;
  for (int k = 0; k < m; ++k) lie += xi[k] * dphi[static_cast<std::size_t>(k)];
  return 0.5 * lie;
}

Tensor11Field h_field(const ContactStructure& s, const DifferentiationConfig& cfg) {
  return Tensor11Field{[s, cfg](const Point& p) { return compute_h(s, p, cfg); }};
}

Matrix nabla_xi(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg) {
  const int m = s.dim();
  const Tensor3 gamma = christoffel(s.model, p, cfg);
  const std::vector<Vector> dxi = fd::gradient(s.xi.eval, p, cfg.step_first);
  const Vector xi = s.xi(p);
  Matrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v = dxi[static_cast<std::size_t>(j)][i];
      for (int a = 0; a < m; ++a) v += gamma(i, j, a) * xi[a];
      out(i, j) = v;
    }
  return out;
}

double sasakian_condition_residual(const ContactStructure& s, const Point& p,
                                   const DifferentiationConfig& cfg, double sign) {
  const int m = s.dim();
  const std::vector<Matrix> nphi =
      covariant_derivative_t11_all(s.model, s.phi, p, cfg, FieldLevel::primary);
  const Matrix g = s.model.metric(p);
  const Vector xi = s.xi(p);
  const Vector eta = s.eta(p);
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    // expected (i, j) = g_kj xi^i - eta_j delta^i_k
    Matrix expected = xi * g.row(k);
    expected.row(k) -= eta.transpose();
    worst = std::max(worst, max_abs(nphi[static_cast<std::size_t>(k)] - sign * expected));
  }
  return worst;
}

namespace {

/// [phi, phi](d_i, d_j) + 2 d eta(d_i, d_j) xi for every pair, using phi and its partials.
double nijenhuis_coordinate_max(const Matrix& phi, const std::vector<Matrix>& dphi,
                                const Matrix& deta, const Vector& xi) {
  const int m = static_cast<int>(phi.rows());
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Vector n = 2.0 * deta(i, j) * xi;
      for (int k = 0; k < m; ++k) {
        n += phi(k, i) * dphi[static_cast<std::size_t>(k)].col(j);
        n -= phi(k, j) * dphi[static_cast<std::size_t>(k)].col(i);
      }
      n += phi * dphi[static_cast<std::size_t>(j)].col(i);
      n -= phi * dphi[static_cast<std::size_t>(i)].col(j);
      worst = std::max(worst, n.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

Vector nijenhuis_torsion(const ContactStructure& s, const VectorField& x, const VectorField& y,
                         const Point& p, const DifferentiationConfig& cfg) {
  const double h = cfg.step_first;
  const Tensor11Field phi = s.phi;
  const VectorField phix{[phi, x](const Point& q) { return Vector(phi(q) * x(q)); }};
  const VectorField phiy{[phi, y](const Point& q) { return Vector(phi(q) * y(q)); }};
  const Matrix ph = phi(p);
  Vector out = ph * (ph * lie_bracket(x, y, p, h)) + lie_bracket(phix, phiy, p, h) -
               ph * lie_bracket(phix, y, p, h) - ph * lie_bracket(x, phiy, p, h);
  const double de = x(p).dot(d_eta(s, p, cfg) * y(p));
  return out + 2.0 * de * s.xi(p);
}

double nijenhuis_max(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg) {
  const std::vector<Matrix> dphi = fd::gradient(s.phi.eval, p, cfg.step_first);
  return nijenhuis_coordinate_max(s.phi(p), dphi, d_eta(s, p, cfg), s.xi(p));
}

std::vector<AxiomResidual> axiom_residuals(const ContactStructure& s, const Point& p,
                                           const DifferentiationConfig& cfg) {
  const int m = s.dim();
  const Matrix id = Matrix::Identity(m, m);
  const Matrix g = s.model.metric(p);
  const Matrix phi = s.phi(p);
  const Vector xi = s.xi(p);
  const Vector eta = s.eta(p);
  const Matrix h = compute_h(s, p, cfg);
  const Matrix gh = g * h;
  const Matrix gphi = g * phi;

  std::vector<AxiomResidual> out;
  auto add = [&out](const char* id_, const char* anchor_label, double r, bool diff = false) {
    out.push_back({id_, anchor_label, r, diff});
  };
  add("almost_contact.phi_squared", anchor::phi_eta_xi, max_abs(phi * phi + id - xi * eta.transpose()));
  add("almost_contact.eta_xi", anchor::phi_eta_xi, std::abs(eta.dot(xi) - 1.0));
  add("almost_contact.phi_xi", anchor::phi_eta_xi, max_abs(phi * xi));
  add("almost_contact.eta_phi", anchor::phi_eta_xi, max_abs(phi.transpose() * eta));
  add("metric.compatibility", anchor::metric_1,
      max_abs(phi.transpose() * g * phi - g + eta * eta.transpose()));
  add("metric.eta_dual", anchor::metric_2, max_abs(g * xi - eta));
  add("metric.phi_skew", anchor::metric_2, max_abs(gphi + gphi.transpose()));
  const Matrix de = d_eta(s, p, cfg);
  add("contact.condition", anchor::contact_condition, max_abs(gphi - de));
  add("contact.xi_kernel", anchor::characteristic, max_abs(de.transpose() * xi));
  add("structure_tensor.h_xi", anchor::cont_h, max_abs(h * xi));
  add("structure_tensor.h_anticommutes", anchor::cont_h, max_abs(h * phi + phi * h));
  add("structure_tensor.h_symmetric", anchor::cont_h, max_abs(gh - gh.transpose()));
  add("structure_tensor.h_trace", anchor::cont_h, std::abs(h.trace()));
  add("structure_tensor.nabla_xi", anchor::cont_del_xi,
      max_abs(nabla_xi(s, p, cfg) + phi + phi * h), true);
  return out;
}

VerificationReport verify_contact_axioms(const ContactStructure& s,
                                         const DifferentiationConfig& cfg,
                                         const AxiomTolerances& tol) {
  const std::vector<Point> points = s.model.sample_points(cfg);
  std::vector<AxiomResidual> worst;
  for (const Point& p : points) {
    std::vector<AxiomResidual> r = axiom_residuals(s, p, cfg);
    if (worst.empty()) {
      worst = std::move(r);
      continue;
    }
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!(worst[i].residual >= r[i].residual)) worst[i].residual = r[i].residual;
  }
  VerificationReport report;
  report.structure_name = s.name;
  for (const AxiomResidual& a : worst)
    report.add(a.check_id, a.anchor, a.residual, a.differential ? tol.differential : tol.algebraic,
               static_cast<int>(points.size()), cfg.seed);
  report.finalize();
  return report;
}

void smoke_test(const ContactStructure& s, const DifferentiationConfig& cfg, double threshold) {
  for (const AxiomResidual& a : axiom_residuals(s, s.model.center(), cfg))
    if (!(a.residual <= threshold)) throw AxiomError(a.check_id + " [" + a.anchor + "]", a.residual);
}

const char* label_name(StructureLabel label) {
  switch (label) {
    case StructureLabel::sasakian: return "Sasakian";
    case StructureLabel::k_contact_non_sasakian: return "K-contact-non-Sasakian";
    case StructureLabel::contact_metric: return "contact-metric";
    case StructureLabel::invalid: return "invalid";
  }
  return "invalid";
}

StructureClass classify_structure(const ContactStructure& s, const DifferentiationConfig& cfg,
                                  double eps, const AxiomTolerances& tol) {
  StructureClass out;
  out.evidence = verify_contact_axioms(s, cfg, tol);
  for (const Point& p : s.model.sample_points(cfg)) {
    out.h_norm = std::max(out.h_norm, max_abs(compute_h(s, p, cfg)));
    out.nijenhuis_norm = std::max(out.nijenhuis_norm, nijenhuis_max(s, p, cfg));
  }
  const bool h_zero = out.h_norm <= eps;
  const bool normal = out.nijenhuis_norm <= eps;
  if (!out.evidence.all_pass())
    out.label = StructureLabel::invalid;
  else if (h_zero && normal)
    out.label = StructureLabel::sasakian;
  else if (!h_zero)
    out.label = StructureLabel::contact_metric;
  else if (s.dim() > 3)
    out.label = StructureLabel::k_contact_non_sasakian;
  else
    out.label = StructureLabel::invalid;  // K-contact in dimension 3 is Sasakian
  out.evidence.values["h_norm"] = out.h_norm;
  out.evidence.values["nijenhuis_norm"] = out.nijenhuis_norm;
  out.evidence.values["label"] = label_name(out.label);
  out.evidence.values["classification_eps"] = eps;
  return out;
}

}  // namespace contactlab
