#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "contactlab/expression.hpp"

// Zoo structures written once over a scalar type T: double for the numeric fields and
// dsl::Expression for the emitted spec documents.
namespace contactlab::zoo_detail {

template <class T>
struct Components {
  int dim = 0;
  std::vector<T> metric;  // row-major
  std::vector<T> phi;     // row-major, row = upper index
  std::vector<T> xi;
  std::vector<T> eta;
};

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

/// Coordinates (x_1..x_n, y_1..y_n, z):
///   eta = 1/2 (dz - sum y_i dx_i), xi = 2 d_z, g = eta (x) eta + 1/4 sum (dx_i^2 + dy_i^2),
///   phi d_x_i = -d_y_i, phi d_y_i = d_x_i + y_i d_z.
template <class T>
Components<T> sasakian(int n, const std::vector<T>& x) {
  const int m = 2 * n + 1;
  const auto at = [m](int r, int c) { return static_cast<std::size_t>(r * m + c); };
  Components<T> out;
  out.dim = m;
  out.eta.assign(static_cast<std::size_t>(m), T(0.0));
  out.xi.assign(static_cast<std::size_t>(m), T(0.0));
  out.phi.assign(static_cast<std::size_t>(m * m), T(0.0));
  out.metric.assign(static_cast<std::size_t>(m * m), T(0.0));
  for (int i = 0; i < n; ++i) out.eta[static_cast<std::size_t>(i)] = -(x[static_cast<std::size_t>(n + i)] / T(2.0));
  out.eta[static_cast<std::size_t>(2 * n)] = T(0.5);
  out.xi[static_cast<std::size_t>(2 * n)] = T(2.0);
  for (int i = 0; i < n; ++i) {
    out.phi[at(n + i, i)] = T(-1.0);
    out.phi[at(i, n + i)] = T(1.0);
    out.phi[at(2 * n, n + i)] = x[static_cast<std::size_t>(n + i)];
  }
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      T v = out.eta[static_cast<std::size_t>(r)] * out.eta[static_cast<std::size_t>(c)];
      if (r == c && r < 2 * n) v = v + T(0.25);
      out.metric[at(r, c)] = v;
    }
  return out;
}

/// Orthonormal-frame description of a unit tangent bundle chart over an m-dimensional base.
template <class T>
struct BaseFrame {
  int m = 0;
  std::vector<T> theta;               // diagonal coframe theta^a = theta[a] dx^a
  std::vector<std::vector<T>> omega;  // omega[k][a * m + b] = omega^a_b(d_k), skew in (a, b)
  std::vector<T> w;                   // fiber point, a unit vector in the frame
  std::vector<std::vector<T>> fiber;  // fiber[i] = d w / d s_i
  std::vector<T> fiber_norm2;         // |fiber[i]|^2
};

/// Contact metric structure on T_1 M from a base frame. A tangent vector is written in frame
/// components (a, b) = (theta(x'), M x' + J s') with M x' = sum_k x'^k omega_k w, J = dw/ds.
///   g = 1/4 (|a|^2 + |b|^2), eta = 1/2 <a, w>, xi = 2 (w, 0), phi (a, b) = (-b, a - <a, w> w).
template <class T>
Components<T> unit_tangent_bundle(const BaseFrame<T>& base) {
  const int m = base.m;
  const int dim = 2 * m - 1;
  const auto um = static_cast<std::size_t>(m);
  const auto at = [dim](int r, int c) { return static_cast<std::size_t>(r * dim + c); };

  // M_k = omega_k w
  std::vector<std::vector<T>> conn(um, std::vector<T>(um, T(0.0)));
  for (std::size_t k = 0; k < um; ++k)
    for (std::size_t a = 0; a < um; ++a) {
      T s(0.0);
      for (std::size_t b = 0; b < um; ++b) s = s + base.omega[k][a * um + b] * base.w[b];
      conn[k][a] = s;
    }

  // Frame image (a, b) of every coordinate vector.
  std::vector<std::vector<T>> fa(static_cast<std::size_t>(dim), std::vector<T>(um, T(0.0)));
  std::vector<std::vector<T>> fb(static_cast<std::size_t>(dim), std::vector<T>(um, T(0.0)));
  for (std::size_t k = 0; k < um; ++k) {
    fa[k][k] = base.theta[k];
    fb[k] = conn[k];
  }
  for (std::size_t i = 0; i + 1 < um; ++i) fb[um + i] = base.fiber[i];

  // Coordinate components of the tangent vector with frame components (a, b).
  const auto invert = [&](const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> out(static_cast<std::size_t>(dim), T(0.0));
    std::vector<T> r = b;
    for (std::size_t k = 0; k < um; ++k) {
      const T xk = a[k] / base.theta[k];
      out[k] = xk;
      for (std::size_t c = 0; c < um; ++c) r[c] = r[c] - xk * conn[k][c];
    }
    for (std::size_t i = 0; i + 1 < um; ++i)
      out[um + i] = dot(base.fiber[i], r) / base.fiber_norm2[i];
    return out;
  };

  Components<T> out;
  out.dim = dim;
  out.metric.assign(static_cast<std::size_t>(dim * dim), T(0.0));
  for (int r = 0; r < dim; ++r)
    for (int c = r; c < dim; ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      const T v = (dot(fa[ur], fa[uc]) + dot(fb[ur], fb[uc])) / T(4.0);
      out.metric[at(r, c)] = v;
      out.metric[at(c, r)] = v;
    }

  out.eta.assign(static_cast<std::size_t>(dim), T(0.0));
  for (std::size_t k = 0; k < um; ++k) out.eta[k] = base.theta[k] * base.w[k] / T(2.0);

  const std::vector<T> zero(um, T(0.0));
  out.xi = invert(base.w, zero);
  for (T& v : out.xi) v = T(2.0) * v;

  out.phi.assign(static_cast<std::size_t>(dim * dim), T(0.0));
  for (int c = 0; c < dim; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    std::vector<T> a(um, T(0.0));
    std::vector<T> b(um, T(0.0));
    const T aw = dot(fa[uc], base.w);
    for (std::size_t k = 0; k < um; ++k) {
      a[k] = -fb[uc][k];
      b[k] = fa[uc][k] - aw * base.w[k];
    }
    const std::vector<T> col = invert(a, b);
    for (int r = 0; r < dim; ++r) out.phi[at(r, c)] = col[static_cast<std::size_t>(r)];
  }
  return out;
}

/// Flat base R^2 in Cartesian coordinates (x, y); fiber angle t.
template <class T>
BaseFrame<T> flat_plane_frame(const std::vector<T>& x) {
  using std::cos;
  using std::sin;
  BaseFrame<T> b;
  b.m = 2;
  b.theta = {T(1.0), T(1.0)};
  b.omega.assign(2, std::vector<T>(4, T(0.0)));
  const T& t = x[2];
  b.w = {cos(t), sin(t)};
  b.fiber = {{-sin(t), cos(t)}};
  b.fiber_norm2 = {T(1.0)};
  return b;
}

/// S^2(c) in geodesic polar coordinates (u, v), g = du^2 + f(u)^2 dv^2 with
/// f = sin(sqrt(c) u) / sqrt(c); fiber angle t.
template <class T>
BaseFrame<T> sphere2_frame(double c, const std::vector<T>& x) {
  using std::cos;
  using std::sin;
  const double sc = std::sqrt(c);
  const T su = T(sc) * x[0];
  const T f = sin(su) / T(sc);
  const T fp = cos(su);
  BaseFrame<T> b;
  b.m = 2;
  b.theta = {T(1.0), f};
  b.omega.assign(2, std::vector<T>(4, T(0.0)));
  b.omega[1][2] = fp;   // omega^2_1(d_v)
  b.omega[1][1] = -fp;  // omega^1_2(d_v)
  const T& t = x[2];
  b.w = {cos(t), sin(t)};
  b.fiber = {{-sin(t), cos(t)}};
  b.fiber_norm2 = {T(1.0)};
  return b;
}

/// S^3(c) in coordinates (u, v, w), g = du^2 + f^2 (dv^2 + sin^2 v dw^2); fiber point
/// (cos al, sin al cos be, sin al sin be) in spherical angles (al, be).
template <class T>
BaseFrame<T> sphere3_frame(double c, const std::vector<T>& x) {
  using std::cos;
  using std::sin;
  const double sc = std::sqrt(c);
  const T su = T(sc) * x[0];
  const T f = sin(su) / T(sc);
  const T fp = cos(su);
  const T sv = sin(x[1]);
  const T cv = cos(x[1]);
  BaseFrame<T> b;
  b.m = 3;
  b.theta = {T(1.0), f, f * sv};
  b.omega.assign(3, std::vector<T>(9, T(0.0)));
  b.omega[1][1 * 3 + 0] = fp;
  b.omega[1][0 * 3 + 1] = -fp;
  b.omega[2][2 * 3 + 0] = fp * sv;
  b.omega[2][0 * 3 + 2] = -(fp * sv);
  b.omega[2][2 * 3 + 1] = cv;
  b.omega[2][1 * 3 + 2] = -cv;
  const T sa = sin(x[3]);
  const T ca = cos(x[3]);
  const T sb = sin(x[4]);
  const T cb = cos(x[4]);
  b.w = {ca, sa * cb, sa * sb};
  b.fiber = {{-sa, ca * cb, ca * sb}, {T(0.0), -(sa * sb), sa * cb}};
  b.fiber_norm2 = {T(1.0), sa * sa};
  return b;
}

}  // namespace contactlab::zoo_detail
