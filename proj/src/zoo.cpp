#include "contactlab/zoo.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "contactlab/errors.hpp"
#include "zoo_components.hpp"

namespace contactlab::zoo {

namespace {

using zoo_detail::Components;
using dsl::Expression;
using ComponentFn = std::function<Components<double>(const std::vector<double>&)>;

std::vector<double> coords(const Point& p) { return {p.data(), p.data() + p.size()}; }

Matrix to_matrix(const std::vector<double>& v, int m) {
  Matrix out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out(r, c) = v[static_cast<std::size_t>(r * m + c)];
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ContactStructure numeric_structure(const std::string& name, std::vector<std::string> names,
                                   std::vector<Interval> box, ComponentFn fn) {
  const int m = static_cast<int>(names.size());
  ChartedModel model(std::move(names), std::move(box),
                     [fn, m](const Point& p) { return to_matrix(fn(coords(p)).metric, m); });
  return ContactStructure{
      name, model,
      Tensor11Field{[fn, m](const Point& p) { return to_matrix(fn(coords(p)).phi, m); }},
      VectorField{[fn](const Point& p) { return to_vector(fn(coords(p)).xi); }},
      CovectorField{[fn](const Point& p) { return to_vector(fn(coords(p)).eta); }}};
}

StructureSpec expression_spec(const std::string& name, int n, std::vector<std::string> names,
                              std::vector<Interval> box, const Components<Expression>& c) {
  StructureSpec s;
  s.name = name;
  s.n = n;
  s.coordinate_names = std::move(names);
  s.chart_box = std::move(box);
  s.metric = c.metric;
  s.phi = c.phi;
  s.xi = c.xi;
  s.eta = c.eta;
  return s;
}

std::vector<Expression> identifiers(const std::vector<std::string>& names) {
  std::vector<Expression> out;
  for (const auto& n : names) out.push_back(Expression::identifier(n));
  return out;
}

std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void check_margin(double polar_margin) {
  if (!(polar_margin >= 0.1) || !(polar_margin < std::numbers::pi / 2))
    throw PoleProximity("chart box must stay at least 0.1 from the coordinate poles (margin " +
                        number(polar_margin) + ")");
}

Interval polar(double margin, double scale) {
  return {margin / scale, (std::numbers::pi - margin) / scale};
}

}  // namespace

ZooEntry sasakian_standard(int n) {
  if (n < 1) throw BadN("sasakian_standard needs n >= 1");
  std::vector<std::string> names;
  for (const char* base : {"x", "y"})
    for (int i = 1; i <= n; ++i) names.push_back(n == 1 ? base : base + std::to_string(i));
  names.push_back("z");
  const std::vector<Interval> box(static_cast<std::size_t>(2 * n + 1), Interval{-1.0, 1.0});
  const std::string name = "sasakian-r" + std::to_string(2 * n + 1);

  ZooEntry e{name,
             numeric_structure(name, names, box,
                               [n](const std::vector<double>& x) {
                                 return zoo_detail::sasakian<double>(n, x);
                               }),
             expression_spec(name, n, names, box,
                             zoo_detail::sasakian<Expression>(n, identifiers(names))),
             1.0,
             std::nullopt,
             StructureLabel::sasakian,
             "standard Sasakian structure on R^" + std::to_string(2 * n + 1) +
                 ": k = 1, h = 0"};
  return e;
}

ZooEntry unit_tangent_bundle_sphere(double c, double polar_margin) {
  if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionFailed("curvature c must be positive");
  check_margin(polar_margin);
  const std::vector<std::string> names{"u", "v", "t"};
  const std::vector<Interval> box{polar(polar_margin, std::sqrt(c)), {-1.0, 1.0},
                                  {-std::numbers::pi, std::numbers::pi}};
  const std::string name = "t1s2-c" + number(c);
  const auto fn = [c](const std::vector<double>& x) {
    return zoo_detail::unit_tangent_bundle(zoo_detail::sphere2_frame<double>(c, x));
  };
  const bool sasakian = c == 1.0;
  return ZooEntry{
      name,
      numeric_structure(name, names, box, fn),
      expression_spec(name, 1, names, box,
                      zoo_detail::unit_tangent_bundle(
                          zoo_detail::sphere2_frame<Expression>(c, identifiers(names)))),
      c * (2.0 - c),
      sasakian ? std::nullopt : std::optional<double>(-2.0 * c),
      sasakian ? StructureLabel::sasakian : StructureLabel::contact_metric,
      "unit tangent bundle of a constant curvature c surface: k = c(2-c), mu = -2c"};
}

ZooEntry unit_tangent_bundle_sphere3(double c, double polar_margin) {
  if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionFailed("curvature c must be positive");
  check_margin(polar_margin);
  const std::vector<std::string> names{"u", "v", "w", "alpha", "beta"};
  const std::vector<Interval> box{polar(polar_margin, std::sqrt(c)), polar(polar_margin, 1.0),
                                  {-1.0, 1.0}, polar(polar_margin, 1.0), {-1.0, 1.0}};
  const std::string name = "t1s3-c" + number(c);
  const auto fn = [c](const std::vector<double>& x) {
    return zoo_detail::unit_tangent_bundle(zoo_detail::sphere3_frame<double>(c, x));
  };
  const bool sasakian = c == 1.0;
  return ZooEntry{
      name,
      numeric_structure(name, names, box, fn),
      expression_spec(name, 2, names, box,
                      zoo_detail::unit_tangent_bundle(
                          zoo_detail::sphere3_frame<Expression>(c, identifiers(names)))),
      c * (2.0 - c),
      sasakian ? std::nullopt : std::optional<double>(-2.0 * c),
      sasakian ? StructureLabel::sasakian : StructureLabel::contact_metric,
      "unit tangent bundle of a constant curvature c 3-sphere: k = c(2-c), mu = -2c"};
}

ZooEntry flat_three_dim() {
  const std::vector<std::string> names{"x", "y", "t"};
  const std::vector<Interval> box{{-1.0, 1.0}, {-1.0, 1.0}, {-std::numbers::pi, std::numbers::pi}};
  const std::string name = "flat-3d";
  const auto fn = [](const std::vector<double>& x) {
    return zoo_detail::unit_tangent_bundle(zoo_detail::flat_plane_frame<double>(x));
  };
  return ZooEntry{name,
                  numeric_structure(name, names, box, fn),
                  expression_spec(name, 1, names, box,
                                  zoo_detail::unit_tangent_bundle(
                                      zoo_detail::flat_plane_frame<Expression>(identifiers(names)))),
                  0.0,
                  0.0,
                  StructureLabel::contact_metric,
                  "unit tangent bundle of the flat plane: R(X,Y)xi = 0"};
}

ZooEntry deformed_example31(int n, Branch branch) {
  const auto solutions = solve_example31(n);
  if (n != 2)
    throw Unimplemented("no base chart of S^" + std::to_string(n + 1) + " is shipped");
  const Example31Solution& sol = solutions[branch == Branch::plus ? 0 : 1];
  const ZooEntry base = unit_tangent_bundle_sphere3(sol.c);
  const std::string name = "example31-n" + std::to_string(n) + "-" + branch_name(branch);
  ContactStructure structure = d_homothetic_deform(base.structure, sol.a);
  structure.name = name;
  StructureSpec spec = deform_spec(base.spec, sol.a);
  spec.name = name;
  return ZooEntry{name,
                  structure,
                  spec,
                  1.0 - 1.0 / n,
                  0.0,
                  StructureLabel::contact_metric,
                  "D_a deformation of T_1 S^" + std::to_string(n + 1) + "(c) with c = " +
                      number(sol.c) + ", a = " + number(sol.a) + ": k = 1 - 1/n, mu = 0"};
}

std::vector<std::string> names() {
  return {"sasakian-r3", "sasakian-r5", "t1s2-c0.5",         "t1s2-c1",           "t1s2-c2",
          "t1s3-c0.5",   "flat-3d",     "example31-n2-plus", "example31-n2-minus"};
}

ZooEntry by_name(const std::string& name) {
  if (name == "sasakian-r3") return sasakian_standard(1);
  if (name == "sasakian-r5") return sasakian_standard(2);
  if (name == "t1s2-c0.5") return unit_tangent_bundle_sphere(0.5);
  if (name == "t1s2-c1") return unit_tangent_bundle_sphere(1.0);
  if (name == "t1s2-c2") return unit_tangent_bundle_sphere(2.0);
  if (name == "t1s3-c0.5") return unit_tangent_bundle_sphere3(0.5);
  if (name == "flat-3d") return flat_three_dim();
  if (name == "example31-n2-plus") return deformed_example31(2, Branch::plus);
  if (name == "example31-n2-minus") return deformed_example31(2, Branch::minus);
  throw Error("unknown zoo entry '" + name + "'");
}

std::vector<ZooEntry> all() {
  std::vector<ZooEntry> out;
  for (const auto& n : names()) out.push_back(by_name(n));
  return out;
}

}  // namespace contactlab::zoo
