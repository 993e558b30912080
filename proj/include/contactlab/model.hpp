#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace contactlab {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct ScalarField {
  std::function<double(const Point&)> eval;
  double operator()(const Point& p) const { return eval(p); }
};

/// Components in the coordinate frame.
struct VectorField {
  std::function<Vector(const Point&)> eval;
  Vector operator()(const Point& p) const { return eval(p); }
};

struct CovectorField {
  std::function<Vector(const Point&)> eval;
  Vector operator()(const Point& p) const { return eval(p); }
};

/// Mixed (1,1) components: row = upper index, column = lower index.
struct Tensor11Field {
  std::function<Matrix(const Point&)> eval;
  Matrix operator()(const Point& p) const { return eval(p); }
};

VectorField constant_vector_field(Vector v);
VectorField coordinate_field(int dim, int k);

struct DifferentiationConfig {
  double step_first = 1e-5;   // first derivatives of primary fields
  double step_second = 1e-4;  // second derivatives of the metric, derivatives of derived fields
  double step_third = 1e-3;   // derivatives of curvature-level fields
  bool richardson = true;
  std::uint64_t seed = 42;
  int sample_count = 100;

  /// Largest coordinate offset any stencil in the library can reach from a sample point.
  double stencil_reach() const;
  void validate() const;
};

/// A single coordinate patch carrying a Riemannian metric.
///
/// Metric evaluation is a pure function of the point. Points outside the chart box raise
/// OutOfChart, so every stencil is checked against the sampling domain.
class ChartedModel {
 public:
  using MetricFn = std::function<Matrix(const Point&)>;

  ChartedModel(std::vector<std::string> coordinate_names, std::vector<Interval> chart_box,
               MetricFn metric);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& coordinate_names() const { return names_; }
  const std::vector<Interval>& chart_box() const { return box_; }

  Matrix metric(const Point& p) const;
  bool contains(const Point& p) const;
  Point center() const;

  /// Deterministic seeded uniform points in the chart box shrunk by the stencil reach.
  std::vector<Point> sample_points(const DifferentiationConfig& cfg) const;

  /// Symmetry (1e-12) and positive definiteness of the metric at the center and every
  /// sample point. Throws SymmetryError / SingularMetric.
  void validate(const DifferentiationConfig& cfg) const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> box_;
  MetricFn metric_;
};

/// Uniform doubles built from raw mt19937_64 output, so the stream is identical on every
/// standard library (std::uniform_real_distribution is not).
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace contactlab
