#include "contactlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contactlab/errors.hpp"

namespace contactlab {

VectorField constant_vector_field(Vector v) {
  return VectorField{[v = std::move(v)](const Point&) { return v; }};
}

VectorField coordinate_field(int dim, int k) {
  Vector e = Vector::Zero(dim);
  e[k] = 1.0;
  return constant_vector_field(std::move(e));
}

double DifferentiationConfig::stencil_reach() const {
  const double largest = std::max({step_first, step_second, step_third});
  const double r = richardson ? 2.0 : 1.0;
  const double nested = r * step_third + r * std::max(step_second, step_third) + step_first;
  return std::max(2.0 * largest, nested);
}

void DifferentiationConfig::validate() const {
  if (!(step_first > 0.0) || !(step_second > 0.0) || !(step_third > 0.0)) {
    throw Error("differentiation steps must be positive");
  }
  if (sample_count < 1) throw Error("sample_count must be at least 1");
}

ChartedModel::ChartedModel(std::vector<std::string> coordinate_names,
                           std::vector<Interval> chart_box, MetricFn metric)
    : names_(std::move(coordinate_names)), box_(std::move(chart_box)), metric_(std::move(metric)) {
  if (names_.size() < 2) throw Error("a charted model needs at least two coordinates");
  if (box_.size() != names_.size()) {
    throw Error("chart box has " + std::to_string(box_.size()) + " intervals for " +
                std::to_string(names_.size()) + " coordinates");
  }
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (!(box_[i].hi > box_[i].lo)) {
      throw Error("chart box interval for '" + names_[i] + "' has non-positive width");
    }
  }
  if (!metric_) throw Error("charted model without a metric");
}

bool ChartedModel::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const Interval& iv = box_[static_cast<std::size_t>(i)];
    const double slack = 1e-12 * std::max(1.0, iv.width());
    if (!(p[i] >= iv.lo - slack && p[i] <= iv.hi + slack)) return false;
  }
  return true;
}

Matrix ChartedModel::metric(const Point& p) const {
  if (!contains(p)) {
    std::ostringstream msg;
    msg << "point (";
    for (int i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
    msg << ") lies outside the chart box";
    throw OutOfChart(msg.str());
  }
  return metric_(p);
}

Point ChartedModel::center() const {
  Point c(dim());
  for (int i = 0; i < dim(); ++i) {
    const Interval& iv = box_[static_cast<std::size_t>(i)];
    c[i] = 0.5 * (iv.lo + iv.hi);
  }
  return c;
}

std::vector<Point> ChartedModel::sample_points(const DifferentiationConfig& cfg) const {
  cfg.validate();
  const double margin = cfg.stencil_reach();
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (box_[i].width() <= 2.0 * margin) {
      throw OutOfChart("chart box interval for '" + names_[i] +
                       "' is narrower than the differentiation stencil");
    }
  }
  SeededSampler rng(cfg.seed);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(cfg.sample_count));
  for (int s = 0; s < cfg.sample_count; ++s) {
    Point p(dim());
    for (int i = 0; i < dim(); ++i) {
      const Interval& iv = box_[static_cast<std::size_t>(i)];
      p[i] = rng.uniform(iv.lo + margin, iv.hi - margin);
    }
    points.push_back(std::move(p));
  }
  return points;
}

namespace {

void check_metric(const Matrix& g, const Point& p) {
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw SymmetryError("metric asymmetric by " + std::to_string(asym));
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "metric is not positive definite at (";
    for (int i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
    msg << ")";
    throw SingularMetric(msg.str());
  }
}

}  // namespace

void ChartedModel::validate(const DifferentiationConfig& cfg) const {
  check_metric(metric(center()), center());
  for (const Point& p : sample_points(cfg)) check_metric(metric(p), p);
}

}  // namespace contactlab
