#pragma once

#include <type_traits>
#include <utility>
#include <vector>

#include "contactlab/model.hpp"

namespace contactlab::fd {

/// Central difference of f along coordinate k. Works for any f returning double or an Eigen
/// dense object.
template <class F>
auto central(F&& f, const Point& p, int k, double h) {
  using R = std::decay_t<decltype(f(p))>;
  Point plus = p;
  Point minus = p;
  plus[k] += h;
  minus[k] -= h;
  R fp = f(plus);
  R fm = f(minus);
  R out = (fp - fm) / (2.0 * h);
  return out;
}

/// Central difference, optionally Richardson-extrapolated from steps h and 2h:
/// (4 D(h) - D(2h)) / 3, which cancels the h^2 error term.
template <class F>
auto derivative(F&& f, const Point& p, int k, double h, bool richardson) {
  using R = std::decay_t<decltype(f(p))>;
  R d1 = central(f, p, k, h);
  if (!richardson) return d1;
  R d2 = central(f, p, k, 2.0 * h);
  R out = (4.0 * d1 - d2) / 3.0;
  return out;
}

/// Partial derivatives along every coordinate, in coordinate order.
template <class F>
auto gradient(F&& f, const Point& p, double h, bool richardson = false) {
  using R = std::decay_t<decltype(f(p))>;
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (int k = 0; k < p.size(); ++k) out.push_back(derivative(f, p, k, h, richardson));
  return out;
}

/// Second partial derivatives d_k d_l f, stored at [k * dim + l]. Diagonal entries use the
/// three-point stencil, mixed entries the four-corner stencil; the table is exactly symmetric.
template <class F>
auto hessian(F&& f, const Point& p, double h) {
  using R = std::decay_t<decltype(f(p))>;
  const int m = static_cast<int>(p.size());
  std::vector<R> out(static_cast<std::size_t>(m * m));
  R f0 = f(p);
  for (int k = 0; k < m; ++k) {
    Point a = p;
    Point b = p;
    a[k] += h;
    b[k] -= h;
    R v = (f(a) - 2.0 * f0 + f(b)) / (h * h);
    out[static_cast<std::size_t>(k * m + k)] = v;
    for (int l = k + 1; l < m; ++l) {
      Point pp = p, pm = p, mp = p, mm = p;
      pp[k] += h; pp[l] += h;
      pm[k] += h; pm[l] -= h;
      mp[k] -= h; mp[l] += h;
      mm[k] -= h; mm[l] -= h;
      R w = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      out[static_cast<std::size_t>(k * m + l)] = w;
      out[static_cast<std::size_t>(l * m + k)] = w;
    }
  }
  return out;
}

}  // namespace contactlab::fd
