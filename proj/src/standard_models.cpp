#include "contactlab/standard_models.hpp"

#include <cmath>
#include <numbers>

#include "contactlab/errors.hpp"

namespace contactlab::models {

ChartedModel euclidean(int m, double half_width) {
  if (m < 2) throw Error("euclidean model needs m >= 2");
  std::vector<std::string> names;
  if (m <= 3) {
    const char* xyz[] = {"x", "y", "z"};
    for (int i = 0; i < m; ++i) names.emplace_back(xyz[i]);
  } else {
    for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i + 1));
  }
  std::vector<Interval> box(static_cast<std::size_t>(m), Interval{-half_width, half_width});
  return ChartedModel(std::move(names), std::move(box),
                      [m](const Point&) { return Matrix(Matrix::Identity(m, m)); });
}

ChartedModel round_sphere(int m, double c) {
  if (m < 2) throw Error("round sphere needs m >= 2");
  if (!(c > 0.0)) throw Error("round sphere needs positive curvature");
  constexpr double pi = std::numbers::pi;
  std::vector<std::string> names;
  std::vector<Interval> box;
  for (int i = 0; i + 1 < m; ++i) {
    names.push_back("a" + std::to_string(i + 1));
    box.push_back({0.1, pi - 0.1});
  }
  names.emplace_back("phi");
  box.push_back({-pi, pi});
  return ChartedModel(std::move(names), std::move(box), [m, c](const Point& p) {
    Matrix g = Matrix::Zero(m, m);
    double w = 1.0 / c;
    for (int i = 0; i < m; ++i) {
      g(i, i) = w;
      if (i + 1 < m) w *= std::sin(p[i]) * std::sin(p[i]);
    }
    return g;
  });
}

ScalarField sphere_height() {
  return ScalarField{[](const Point& p) { return std::cos(p[0]); }};
}

}  // namespace contactlab::models
