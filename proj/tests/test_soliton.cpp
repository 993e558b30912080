#include <doctest.h>

#include <cmath>

#include "contactlab/errors.hpp"
#include "contactlab/soliton.hpp"
#include "contactlab/standard_models.hpp"
#include "contactlab/structure_spec.hpp"
#include "contactlab/zoo.hpp"

using namespace contactlab;

namespace {

const std::string data_dir = CONTACTLAB_DATA_DIR;

DifferentiationConfig quick(int points = 20) {
  DifferentiationConfig cfg;
  cfg.sample_count = points;
  return cfg;
}

VectorField scaled_position(double s) {
  return VectorField{[s](const Point& p) { return Vector(s * p); }};
}

VectorField zero_field() {
  return VectorField{[](const Point& p) { return Vector(Vector::Zero(p.size())); }};
}

ScalarField constant(double c) {
  return ScalarField{[c](const Point&) { return c; }};
}

ScalarField half_square(double lambda) {
  return ScalarField{[lambda](const Point& p) { return 0.5 * lambda * p.squaredNorm(); }};
}

SolitonSpec with_v(VectorField v, double lambda) { return {"v", std::move(v), std::nullopt, lambda}; }
SolitonSpec with_f(ScalarField f, double lambda) { return {"f", std::nullopt, std::move(f), lambda}; }

}  // namespace

TEST_CASE("gaussian solitons on flat R^3") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel flat = models::euclidean(3);
  for (double lambda : {-1.0, 0.0, 1.0, 0.7}) {
    CAPTURE(lambda);
    CHECK(soliton_residual(flat, with_v(scaled_position(-lambda), lambda), cfg) <= 1e-8);
  }
  CHECK(soliton_residual(flat, with_v(scaled_position(1.0), 1.0), cfg) > 1.0);
}

TEST_CASE("adding a Killing field keeps a soliton") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel flat = models::euclidean(3);
  const VectorField v{[](const Point& p) {
    Vector out = -0.7 * p;
    out[0] -= p[1];
    out[1] += p[0];
    return out;
  }};
  CHECK(soliton_residual(flat, with_v(v, 0.7), cfg) <= 1e-8);
}

TEST_CASE("round S^3 is an Einstein soliton") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel s3 = models::round_sphere(3);
  CHECK(soliton_residual(s3, with_v(zero_field(), -2.0), cfg) <= 1e-4);
  CHECK(gradient_soliton_residual(s3, constant(1.0), -2.0, cfg) <= 1e-4);
  CHECK(soliton_residual(s3, with_v(zero_field(), 2.0), cfg) > 1.0);
}

TEST_CASE("sasakian R^3 with V = xi is not a soliton") {
  const DifferentiationConfig cfg = quick();
  const ContactStructure s = zoo::sasakian_standard(1).structure;
  CHECK(soliton_residual(s.model, with_v(s.xi, 0.0), cfg) > 0.1);
}

TEST_CASE("gradient solitons on flat space") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel flat = models::euclidean(3);
  for (double lambda : {-1.0, 0.5, 2.0}) {
    CAPTURE(lambda);
    CHECK(gradient_soliton_residual(flat, half_square(lambda), lambda, cfg) <= 1e-8);
  }
  const ScalarField z{[](const Point& p) { return p[2]; }};
  CHECK(gradient_soliton_residual(flat, z, 0.0, cfg) <= 1e-8);
}

TEST_CASE("gradient and general residuals agree up to the factor 2") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel s2 = models::round_sphere(2);
  const ScalarField h = models::sphere_height();
  const double general = soliton_residual(s2, with_f(h, 0.3), cfg);
  const double gradient = gradient_soliton_residual(s2, h, 0.3, cfg);
  CHECK(general > 0.1);
  CHECK(std::abs(general - 2.0 * gradient) <= 1e-6);
  const ChartedModel flat = models::euclidean(3);
  CHECK(std::abs(soliton_residual(flat, with_f(half_square(1.0), 0.5), cfg) -
                 2.0 * gradient_soliton_residual(flat, half_square(1.0), 0.5, cfg)) <= 1e-6);
}

TEST_CASE("soliton kinds") {
  CHECK(classify_soliton(-4.0) == SolitonKind::shrinking);
  CHECK(classify_soliton(0.0) == SolitonKind::steady);
  CHECK(classify_soliton(-0.0) == SolitonKind::steady);
  CHECK(classify_soliton(3.0) == SolitonKind::expanding);
  CHECK(std::string(kind_name(SolitonKind::steady)) == "steady");
}

TEST_CASE("solitons from spec files") {
  const DifferentiationConfig cfg = quick();
  const LoadedSpec flat = load_structure_spec_file(data_dir + "/examples/flat-r3-solitons.json", cfg);
  for (const char* name : {"gaussian-shrinking", "gaussian-steady", "gaussian-expanding",
                           "gaussian-rotating", "gaussian-gradient", "linear-potential"}) {
    CAPTURE(name);
    CHECK(soliton_residual(flat.model, soliton_from_spec(flat, name), cfg) <= 1e-6);
  }
  CHECK(soliton_residual(flat.model, soliton_from_spec(flat, "wrong-lambda"), cfg) > 1.0);
  CHECK_THROWS_AS(soliton_from_spec(flat, "missing"), SchemaError);
  const LoadedSpec s3 = load_structure_spec_file(data_dir + "/examples/sphere3-einstein.json", cfg);
  CHECK(soliton_residual(s3.model, soliton_from_spec(s3, "einstein"), cfg) <= 1e-4);
}

TEST_CASE("collinear constraints are exact rationals") {
  const CollinearReport two = collinear_soliton_constraints(2);
  CHECK(two.consistent);
  CHECK(two.alpha_constant);
  CHECK(*two.forced_k == Rational(1, 2));
  CHECK(*two.forced_lambda == Rational(-2));
  CHECK(*two.kind == SolitonKind::shrinking);
  CHECK_FALSE(two.symmetric_part_consistent);

  const CollinearReport five = collinear_soliton_constraints(5);
  CHECK(*five.forced_k == Rational(4, 5));
  CHECK(*five.forced_lambda == Rational(-8));
  CHECK(classify_soliton(five.forced_lambda->value()) == SolitonKind::shrinking);

  const CollinearReport one = collinear_soliton_constraints(1);
  CHECK_FALSE(one.consistent);
  CHECK_FALSE(one.forced_k.has_value());
  bool cites = false;
  for (const std::string& note : one.notes) cites = cites || note.find("h=0, a contradiction") != std::string::npos;
  CHECK(cites);
  CHECK_THROWS_AS(collinear_soliton_constraints(0), BadN);

  for (int n = 2; n <= 20; ++n) {
    const CollinearReport r = collinear_soliton_constraints(n);
    CHECK(*r.forced_k == Rational(n - 1, n));
    CHECK(*r.forced_lambda == Rational(2 * (1 - n)));
  }
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(-3, 6).to_string() == "-1/2");
  CHECK(Rational(4, 2).to_string() == "2");
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("no collinear soliton on the deformed example31 structures") {
  const DifferentiationConfig cfg = quick(10);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const ContactStructure s = zoo::deformed_example31(2, b).structure;
    CHECK(fit_collinear_soliton(s, -2.0, cfg).residual > 1.0);
  }
  CHECK(fit_collinear_soliton(zoo::flat_three_dim().structure, 0.0, cfg).residual < 1e-8);
}

TEST_CASE("gradient soliton audit") {
  const DifferentiationConfig cfg = quick();
  const ChartedModel flat = models::euclidean(3);
  const VerificationReport a = grad_soliton_audit(flat, half_square(1.0), 1.0, cfg);
  CHECK(a.find("audit.R_Df")->max_residual <= 1e-6);
  CHECK(a.all_pass());

  const ChartedModel s3 = models::round_sphere(3);
  const VerificationReport b = grad_soliton_audit(s3, constant(1.0), -2.0, cfg);
  CHECK(b.find("audit.R_Df")->max_residual <= 1e-3);

  const ContactStructure sas = zoo::sasakian_standard(1).structure;
  CHECK_THROWS_AS(grad_soliton_audit(sas.model, constant(1.0), -1.0, cfg, &sas), PreconditionFailed);
}

TEST_CASE("einstein fit") {
  const DifferentiationConfig cfg = quick();
  const EinsteinFit flat = einstein_fit(models::euclidean(3), cfg);
  CHECK(flat.is_einstein);
  CHECK(std::abs(flat.a) < 1e-8);
  const EinsteinFit s3 = einstein_fit(models::round_sphere(3), cfg);
  CHECK(s3.is_einstein);
  CHECK(std::abs(s3.a - 2.0) < 1e-4);
  const EinsteinFit bundle = einstein_fit(zoo::unit_tangent_bundle_sphere(0.5).structure.model, cfg);
  CHECK_FALSE(bundle.is_einstein);
  CHECK(bundle.residual > 0.05);
}
