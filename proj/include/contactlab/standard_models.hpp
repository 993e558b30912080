#pragma once

#include "contactlab/model.hpp"

namespace contactlab::models {

/// Flat R^m with Cartesian coordinates on [-half_width, half_width]^m.
ChartedModel euclidean(int m, double half_width = 2.0);

/// Round sphere S^m of constant sectional curvature c > 0 in nested polar angles
/// (a_1, ..., a_{m-1}, azimuth):
///   g = (1/c) (da_1^2 + sin^2 a_1 da_2^2 + sin^2 a_1 sin^2 a_2 da_3^2 + ...)
/// Every polar angle is kept 0.1 away from 0 and pi.
ChartedModel round_sphere(int m, double c = 1.0);

/// Height function of the unit round S^2 embedded in R^3 (z = cos a_1).
ScalarField sphere_height();

}  // namespace contactlab::models
