#pragma once

#include <vector>

#include "contactlab/model.hpp"

namespace contactlab {

/// How deeply nested the field being differentiated is, which picks the step size:
/// primary fields use step_first, fields built from first derivatives use step_second,
/// curvature-level fields use step_third. Richardson applies to the latter two when enabled.
enum class FieldLevel { primary, derived, curvature };

double level_step(const DifferentiationConfig& cfg, FieldLevel level);
bool level_richardson(const DifferentiationConfig& cfg, FieldLevel level);

/// Dense rank-3 array with every index running over [0, dim).
class Tensor3 {
 public:
  explicit Tensor3(int dim = 0) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}
  int dim() const { return dim_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

 private:
  std::size_t index(int a, int b, int c) const {
    return static_cast<std::size_t>((a * dim_ + b) * dim_ + c);
  }
  int dim_;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  explicit Tensor4(int dim = 0)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}
  int dim() const { return dim_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * dim_ + b) * dim_ + c) * dim_ + d);
  }
  int dim_;
  std::vector<double> data_;
};

/// Metric, its inverse and first partials at a point. Throws SingularMetric when the
/// Cholesky factorization of g fails.
struct MetricJet {
  Matrix g;
  Matrix g_inv;
  std::vector<Matrix> dg;  // dg[k] = d_k g
};

MetricJet metric_jet(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg);
Matrix inverse_metric(const Matrix& g);

/// Christoffel symbols of the second kind; gamma(k, i, j) = Gamma^k_{ij}.
Tensor3 christoffel(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg);
Tensor3 christoffel(const MetricJet& jet);

/// Riemann tensor with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
///   up(l, k, i, j)   = R^l_{kij}, the d_l component of R(d_i, d_j) d_k
///   down(l, k, i, j) = g_{lm} R^m_{kij}
struct Curvature {
  Tensor4 up;
  Tensor4 down;
  Matrix g;
};

/// `extrapolate` Richardson-extrapolates the metric Hessian from steps step_second and
/// 2 step_second.
Curvature riemann(const ChartedModel& model, const Point& p, const DifferentiationConfig& cfg,
                  bool extrapolate = false);

/// R(X,Y)Z at the point the curvature was evaluated.
Vector curvature_apply(const Curvature& r, const Vector& x, const Vector& y, const Vector& z);
double sectional_curvature(const Curvature& r, const Vector& x, const Vector& y);

struct RicciData {
  Matrix ricci;     // R_{ij}
  Matrix operator_; // Q^i_j = g^{ik} R_{kj}
  double scalar = 0.0;
};

RicciData ricci_and_scalar(const ChartedModel& model, const Point& p,
                           const DifferentiationConfig& cfg, bool extrapolate = false);
RicciData ricci_from(const Curvature& r);

/// The Ricci operator Q as a field over the chart, meant to be differentiated again. Its metric
/// Hessian uses step_third instead of step_second, extrapolated when cfg.richardson is set:
/// roundoff from the smaller step is not smooth and the outer derivative would amplify it.
Tensor11Field ricci_operator_field(const ChartedModel& model, const DifferentiationConfig& cfg);

/// (L_V g)_{ij} = nabla_i V_j + nabla_j V_i.
Matrix lie_derivative_metric(const ChartedModel& model, const VectorField& v, const Point& p,
                             const DifferentiationConfig& cfg,
                             FieldLevel level = FieldLevel::primary);

struct GradientHessian {
  Vector gradient;  // Df^i = g^{ij} d_j f
  Matrix hessian;   // (nabla nabla f)_{ij}
};

GradientHessian gradient_and_hessian(const ChartedModel& model, const ScalarField& f,
                                     const Point& p, const DifferentiationConfig& cfg);

/// Gradient field Df. Meant to be differentiated again, so it uses the derived-level stencil.
VectorField gradient_field(const ChartedModel& model, const ScalarField& f,
                           const DifferentiationConfig& cfg);

/// nabla_X Y.
Vector covariant_derivative_vector(const ChartedModel& model, const VectorField& y,
                                   const Vector& x, const Point& p,
                                   const DifferentiationConfig& cfg);

/// (nabla_X T) for a (1,1) field.
Matrix covariant_derivative_t11(const ChartedModel& model, const Tensor11Field& t,
                                const Vector& x, const Point& p,
                                const DifferentiationConfig& cfg,
                                FieldLevel level = FieldLevel::derived);

Matrix covariant_derivative_t11(const ChartedModel& model, const Tensor11Field& t,
                                const VectorField& x, const Point& p,
                                const DifferentiationConfig& cfg,
                                FieldLevel level = FieldLevel::derived);

/// nabla_k T for every coordinate direction k.
std::vector<Matrix> covariant_derivative_t11_all(const ChartedModel& model,
                                                 const Tensor11Field& t, const Point& p,
                                                 const DifferentiationConfig& cfg,
                                                 FieldLevel level = FieldLevel::derived);

}  // namespace contactlab
