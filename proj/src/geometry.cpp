#include "contactlab/geometry.hpp"

#include <cmath>

#include "contactlab/differentiation.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix inverse_metric(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw SingularMetric("metric factorization failed");
  return llt.solve(Matrix::Identity(g.rows(), g.cols()));
}

MetricJet metric_jet(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg) {
  MetricJet jet;
  auto g = [&model](const Point& q) { return model.metric(q); };
  jet.g = g(p);
  jet.g_inv = inverse_metric(jet.g);
  jet.dg = fd::gradient(g, p, cfg.step_first);
  return jet;
}

namespace {

/// Gamma_{m,ij} = 1/2 (d_i g_mj + d_j g_mi - d_m g_ij)
Tensor3 christoffel_first_kind(const std::vector<Matrix>& dg, int m) {
  Tensor3 out(m);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double v = 0.5 * (dg[i](a, j) + dg[j](a, i) - dg[a](i, j));
        out(a, i, j) = v;
        out(a, j, i) = v;
      }
  return out;
}

Tensor3 raise_first(const Matrix& g_inv, const Tensor3& low) {
  const int m = low.dim();
  Tensor3 out(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (int a = 0; a < m; ++a) s += g_inv(k, a) * low(a, i, j);
        out(k, i, j) = s;
        out(k, j, i) = s;
      }
  return out;
}

}  // namespace

Tensor3 christoffel(const MetricJet& jet) {
  const int m = static_cast<int>(jet.g.rows());
  return raise_first(jet.g_inv, christoffel_first_kind(jet.dg, m));
}

Tensor3 christoffel(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg) {
  return christoffel(metric_jet(model, p, cfg));
}

Curvature riemann(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg,
                  bool extrapolate) {
  const int m = model.dim();
  const MetricJet jet = metric_jet(model, p, cfg);
  auto g = [&model](const Point& q) { return model.metric(q); };
  std::vector<Matrix> d2g = fd::hessian(g, p, cfg.step_second);
  if (extrapolate) {
    const std::vector<Matrix> wide = fd::hessian(g, p, 2.0 * cfg.step_second);
    for (std::size_t i = 0; i < d2g.size(); ++i) d2g[i] = (4.0 * d2g[i] - wide[i]) / 3.0;
  }

  const Tensor3 low = christoffel_first_kind(jet.dg, m);
  const Tensor3 gamma = raise_first(jet.g_inv, low);

  // d_l Gamma^k_ij = (d_l g^{ka}) Gamma_{a,ij} + g^{ka} d_l Gamma_{a,ij}
  std::vector<Tensor3> dgamma;
  dgamma.reserve(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    const Matrix dginv = -jet.g_inv * jet.dg[static_cast<std::size_t>(l)] * jet.g_inv;
    auto second = [&](int a, int b) -> const Matrix& {
      return d2g[static_cast<std::size_t>(a * m + b)];
    };
    Tensor3 dlow(m);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          dlow(a, i, j) = 0.5 * (second(l, i)(a, j) + second(l, j)(a, i) - second(l, a)(i, j));
    Tensor3 d(m);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double s = 0.0;
          for (int a = 0; a < m; ++a) s += dginv(k, a) * low(a, i, j) + jet.g_inv(k, a) * dlow(a, i, j);
          d(k, i, j) = s;
        }
    dgamma.push_back(std::move(d));
  }

  Curvature out{Tensor4(m), Tensor4(m), jet.g};
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double v = dgamma[static_cast<std::size_t>(i)](l, j, k) -
                     dgamma[static_cast<std::size_t>(j)](l, i, k);
          for (int a = 0; a < m; ++a) v += gamma(l, i, a) * gamma(a, j, k) - gamma(l, j, a) * gamma(a, i, k);
          out.up(l, k, i, j) = v;
        }
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double s = 0.0;
          for (int a = 0; a < m; ++a) s += jet.g(l, a) * out.up(a, k, i, j);
          out.down(l, k, i, j) = s;
        }
  return out;
}

Vector curvature_apply(const Curvature& r, const Vector& x, const Vector& y, const Vector& z) {
  const int m = r.up.dim();
  Vector out = Vector::Zero(m);
  for (int l = 0; l < m; ++l) {
    double s = 0.0;
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s += r.up(l, k, i, j) * z[k] * x[i] * y[j];
    out[l] = s;
  }
  return out;
}

double sectional_curvature(const Curvature& r, const Vector& x, const Vector& y) {
  const Vector ryy = curvature_apply(r, x, y, y);
  const double num = x.dot(r.g * ryy);
  const double gxx = x.dot(r.g * x);
  const double gyy = y.dot(r.g * y);
  const double gxy = x.dot(r.g * y);
  return num / (gxx * gyy - gxy * gxy);
}

RicciData ricci_from(const Curvature& r) {
  const int m = r.up.dim();
  RicciData out;
  out.ricci = Matrix::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += r.up(i, k, i, j);
      out.ricci(j, k) = s;
    }
  out.operator_ = inverse_metric(r.g) * out.ricci;
  out.scalar = out.operator_.trace();
  return out;
}

RicciData ricci_and_scalar(const ChartedModel& model, const Point& p,
                           const DifferentiationConfig& cfg, bool extrapolate) {
  return ricci_from(riemann(model, p, cfg, extrapolate));
}

Tensor11Field ricci_operator_field(const ChartedModel& model, const DifferentiationConfig& cfg) {
  DifferentiationConfig inner = cfg;
  inner.step_second = std::max(cfg.step_second, cfg.step_third);
  const bool extrapolate = cfg.richardson;
  return Tensor11Field{[model, inner, extrapolate](const Point& p) {
    return ricci_and_scalar(model, p, inner, extrapolate).operator_;
  }};
}

double level_step(const DifferentiationConfig& cfg, FieldLevel level) {
  switch (level) {
    case FieldLevel::primary: return cfg.step_first;
    case FieldLevel::derived: return cfg.step_second;
    case FieldLevel::curvature: return cfg.step_third;
  }
  return cfg.step_first;
}

bool level_richardson(const DifferentiationConfig& cfg, FieldLevel level) {
  return cfg.richardson && level != FieldLevel::primary;
}

namespace {

/// nabla_i V^k = d_i V^k + Gamma^k_{im} V^m, returned as a matrix (k, i).
Matrix nabla_vector(const Tensor3& gamma, const std::vector<Vector>& dv, const Vector& v) {
  const int m = gamma.dim();
  Matrix out(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      double s = dv[static_cast<std::size_t>(i)][k];
      for (int a = 0; a < m; ++a) s += gamma(k, i, a) * v[a];
      out(k, i) = s;
    }
  return out;
}

}  // namespace

Matrix lie_derivative_metric(const ChartedModel& model, const VectorField& v, const Point& p,
                             const DifferentiationConfig& cfg, FieldLevel level) {
  const MetricJet jet = metric_jet(model, p, cfg);
  const Tensor3 gamma = christoffel(jet);
  const std::vector<Vector> dv =
      fd::gradient(v.eval, p, level_step(cfg, level), level_richardson(cfg, level));
  const Matrix nv = nabla_vector(gamma, dv, v(p));
  // lowered: (nabla_i V_j) = g_jk nabla_i V^k
  const Matrix low = (jet.g * nv).transpose();
  return low + low.transpose();
}

GradientHessian gradient_and_hessian(const ChartedModel& model, const ScalarField& f,
                                     const Point& p, const DifferentiationConfig& cfg) {
  const int m = model.dim();
  const MetricJet jet = metric_jet(model, p, cfg);
  const Tensor3 gamma = christoffel(jet);
  Vector df(m);
  for (int k = 0; k < m; ++k) df[k] = fd::central(f.eval, p, k, cfg.step_first);
  const double h = level_step(cfg, FieldLevel::curvature);
  std::vector<double> d2f = fd::hessian(f.eval, p, h);
  if (level_richardson(cfg, FieldLevel::curvature)) {
    const std::vector<double> coarse = fd::hessian(f.eval, p, 2.0 * h);
    for (std::size_t i = 0; i < d2f.size(); ++i) d2f[i] = (4.0 * d2f[i] - coarse[i]) / 3.0;
  }
  GradientHessian out;
  out.gradient = jet.g_inv * df;
  out.hessian = Matrix(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      double s = d2f[static_cast<std::size_t>(i * m + j)];
      for (int k = 0; k < m; ++k) s -= gamma(k, i, j) * df[k];
      out.hessian(i, j) = s;
      out.hessian(j, i) = s;
    }
  return out;
}

VectorField gradient_field(const ChartedModel& model, const ScalarField& f,
                           const DifferentiationConfig& cfg) {
  return VectorField{[model, f, cfg](const Point& p) {
    Vector df(model.dim());
    for (int k = 0; k < model.dim(); ++k)
      df[k] = fd::derivative(f.eval, p, k, cfg.step_second, cfg.richardson);
    return Vector(inverse_metric(model.metric(p)) * df);
  }};
}

Vector covariant_derivative_vector(const ChartedModel& model, const VectorField& y,
                                   const Vector& x, const Point& p,
                                   const DifferentiationConfig& cfg) {
  const Tensor3 gamma = christoffel(model, p, cfg);
  const std::vector<Vector> dy = fd::gradient(y.eval, p, cfg.step_first);
  return nabla_vector(gamma, dy, y(p)) * x;
}

std::vector<Matrix> covariant_derivative_t11_all(const ChartedModel& model,
                                                 const Tensor11Field& t, const Point& p,
                                                 const DifferentiationConfig& cfg,
                                                 FieldLevel level) {
  const int m = model.dim();
  const Tensor3 gamma = christoffel(model, p, cfg);
  const std::vector<Matrix> dt =
      fd::gradient(t.eval, p, level_step(cfg, level), level_richardson(cfg, level));
  const Matrix t0 = t(p);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Matrix gk(m, m);  // Gamma^i_{k a} as (i, a)
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a) gk(i, a) = gamma(i, k, a);
    out.push_back(dt[static_cast<std::size_t>(k)] + gk * t0 - t0 * gk);
  }
  return out;
}

Matrix covariant_derivative_t11(const ChartedModel& model, const Tensor11Field& t,
                                const Vector& x, const Point& p,
                                const DifferentiationConfig& cfg, FieldLevel level) {
  const std::vector<Matrix> all = covariant_derivative_t11_all(model, t, p, cfg, level);
  Matrix out = Matrix::Zero(model.dim(), model.dim());
  for (int k = 0; k < model.dim(); ++k) out += x[k] * all[static_cast<std::size_t>(k)];
  return out;
}

Matrix covariant_derivative_t11(const ChartedModel& model, const Tensor11Field& t,
                                const VectorField& x, const Point& p,
                                const DifferentiationConfig& cfg, FieldLevel level) {
  return covariant_derivative_t11(model, t, x(p), p, cfg, level);
}

}  // namespace contactlab
