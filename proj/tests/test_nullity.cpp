#include <doctest.h>

#include <cmath>
#include <random>

#include "contactlab/errors.hpp"
#include "contactlab/nullity.hpp"
#include "contactlab/zoo.hpp"

using namespace contactlab;

namespace {

DifferentiationConfig quick(int points = 20) {
  DifferentiationConfig cfg;
  cfg.sample_count = points;
  return cfg;
}

}  // namespace

TEST_CASE("fits recover the expected nullity constants") {
  const DifferentiationConfig cfg = quick();
  SUBCASE("sasakian R^5") {
    const NullityFit f = fit_nullity(zoo::sasakian_standard(2).structure, cfg);
    CHECK(f.k == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_FALSE(f.mu_identifiable);
    CHECK_FALSE(f.mu.has_value());
    CHECK(fit_accepted(f));
  }
  SUBCASE("T1 S^2(1/2)") {
    const NullityFit f = fit_nullity(zoo::unit_tangent_bundle_sphere(0.5).structure, cfg);
    CHECK(std::abs(f.k - 0.75) < 1e-3);
    REQUIRE(f.mu.has_value());
    CHECK(std::abs(*f.mu + 1.0) < 1e-3);
    CHECK(f.residual < 1e-3);
  }
  SUBCASE("T1 S^2(2)") {
    const NullityFit f = fit_nullity(zoo::unit_tangent_bundle_sphere(2.0).structure, cfg);
    CHECK(std::abs(f.k) < 1e-3);
    CHECK(std::abs(*f.mu + 4.0) < 1e-3);
  }
  SUBCASE("flat") {
    const NullityFit f = fit_nullity(zoo::flat_three_dim().structure, cfg);
    CHECK(std::abs(f.k) < 1e-3);
    CHECK(std::abs(*f.mu) < 1e-3);
  }
}

TEST_CASE("identity battery on T1 S^2(1/2)") {
  const DifferentiationConfig cfg = quick();
  const ContactStructure s = zoo::unit_tangent_bundle_sphere(0.5).structure;
  const NullityFit fit = fit_nullity(s, cfg);
  for (KmIdentity id : all_km_identities) {
    CAPTURE(identity_name(id));
    const VerificationReport r = verify_km_identity(s, fit, id, cfg, KmTolerances::for_config(cfg));
    CHECK(r.all_pass());
    CHECK(identity_from_name(identity_name(id)) == id);
  }
}

TEST_CASE("printed coefficient variants fail where the consistent ones pass") {
  const DifferentiationConfig cfg = quick(10);
  const ContactStructure s = zoo::unit_tangent_bundle_sphere(0.5).structure;
  const NullityFit fit = fit_nullity(s, cfg);
  const KmTolerances tol = KmTolerances::for_config(cfg);
  for (KmIdentity id : {KmIdentity::q_formula, KmIdentity::q_skew, KmIdentity::nabla_h}) {
    CAPTURE(identity_name(id));
    const VerificationReport good = verify_km_identity(s, fit, id, cfg, tol);
    const VerificationReport bad =
        verify_km_identity(s, fit, id, cfg, tol, std::nullopt, CoefficientSet::printed);
    CHECK(good.all_pass());
    REQUIRE(bad.checks.size() == 1);
    CHECK(bad.checks[0].check_id.find(".printed") != std::string::npos);
    CHECK(bad.checks[0].max_residual > 0.1);
  }
}

TEST_CASE("coefficient sets agree when the disputed terms vanish") {
  // the two Q sets differ by 4nk on phi^2
  const QCoefficients a = q_coefficients(2, 0.0, -1.0, CoefficientSet::consistent);
  const QCoefficients b = q_coefficients(2, 0.0, -1.0, CoefficientSet::printed);
  CHECK(a.identity == b.identity);
  CHECK(a.h == b.h);
  CHECK(a.phi_squared == doctest::Approx(b.phi_squared));
  const QCoefficients c = q_coefficients(1, 0.75, -1.0, CoefficientSet::consistent);
  CHECK(c.identity == doctest::Approx(1.5));
  CHECK(c.h == doctest::Approx(-1.0));
  CHECK(c.phi_squared == doctest::Approx(0.5));
}

TEST_CASE("Q_SKEW on the flat model vanishes on both sides") {
  const DifferentiationConfig cfg = quick();
  const ContactStructure s = zoo::flat_three_dim().structure;
  const NullityFit fit = fit_nullity(s, cfg);
  const VerificationReport r =
      verify_km_identity(s, fit, KmIdentity::q_skew, cfg, KmTolerances::for_config(cfg));
  CHECK(r.all_pass());
  CHECK(r.checks[0].max_residual < 1e-3);
}

TEST_CASE("identity preconditions") {
  const DifferentiationConfig cfg = quick(10);
  const ContactStructure sas = zoo::sasakian_standard(1).structure;
  const NullityFit fit = fit_nullity(sas, cfg);
  CHECK_THROWS_AS(verify_km_identity(sas, fit, KmIdentity::q_formula, cfg, {}), HypothesisViolated);
  CHECK(verify_km_identity(sas, fit, KmIdentity::q_xi, cfg, {}).all_pass());
  NullityFit bad = fit;
  bad.residual = 0.5;
  CHECK_THROWS_AS(verify_km_identity(sas, bad, KmIdentity::q_xi, cfg, {}), PreconditionFailed);
}

TEST_CASE("boeckx invariant") {
  CHECK(boeckx_invariant(0.75, -1.0) == doctest::Approx(3.0));
  CHECK(boeckx_invariant(0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(boeckx_invariant(1.0, 0.0), SasakianDomain);
  for (double c : {0.25, 0.5, 2.0, 3.0})
    CHECK(boeckx_invariant(c * (2 - c), -2 * c) == doctest::Approx((1 + c) / std::abs(1 - c)));
}

TEST_CASE("deformation map") {
  const DeformedParameters d = deformation_map(0.0, 0.0, 2.0);
  CHECK(d.k == doctest::Approx(0.75));
  CHECK(*d.mu == doctest::Approx(1.0));
  CHECK_FALSE(deformation_map(1.0, std::nullopt, 3.0).mu.has_value());
  CHECK(deformation_map(1.0, std::nullopt, 3.0).k == doctest::Approx(1.0));
  CHECK_THROWS_AS(deformation_map(0.5, 0.0, 0.0), PreconditionFailed);
  CHECK_THROWS_AS(deformation_map(0.5, 0.0, -1.0), PreconditionFailed);
  CHECK(deformed_name("flat-3d", 2.0) == "flat-3d-a2");
  CHECK(deformed_name("flat-3d", 0.5) == "flat-3d-a0.5");
}

TEST_CASE("property: boeckx invariant is preserved by the deformation map") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> k_dist(-3.0, 0.99);
  std::uniform_real_distribution<double> mu_dist(-4.0, 4.0);
  std::uniform_real_distribution<double> a_dist(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double k = k_dist(rng), mu = mu_dist(rng), a = a_dist(rng);
    const DeformedParameters d = deformation_map(k, mu, a);
    CHECK(std::abs(boeckx_invariant(d.k, *d.mu) - boeckx_invariant(k, mu)) <= 1e-12);
  }
}

TEST_CASE("re-fit after deformation matches the predicted map") {
  const DifferentiationConfig cfg = quick();
  for (const char* name : {"flat-3d", "t1s2-c0.5", "sasakian-r3"}) {
    const ContactStructure s = zoo::by_name(name).structure;
    const NullityFit before = fit_nullity(s, cfg);
    for (double a : {0.5, 2.0, 5.0}) {
      CAPTURE(name);
      CAPTURE(a);
      const ContactStructure d = d_homothetic_deform(s, a);
      CHECK(verify_contact_axioms(d, cfg).all_pass());
      const NullityFit after = fit_nullity(d, cfg);
      const DeformedParameters predicted = deformation_map(before.k, before.mu, a);
      CHECK(std::abs(after.k - predicted.k) < 1e-3);
      CHECK(after.mu.has_value() == predicted.mu.has_value());
      if (predicted.mu) CHECK(std::abs(*after.mu - *predicted.mu) < 1e-3);
    }
  }
}

TEST_CASE("symbolic deformation agrees with the numeric one") {
  const DifferentiationConfig cfg = quick(10);
  const ZooEntry e = zoo::unit_tangent_bundle_sphere(0.5);
  const LoadedSpec l = load_structure_spec(deform_spec(e.spec, 2.0), cfg);
  const ContactStructure d = d_homothetic_deform(e.structure, 2.0);
  CHECK(l.spec.name == "t1s2-c0.5-a2");
  for (const Point& p : l.model.sample_points(cfg)) {
    CHECK((l.model.metric(p) - d.model.metric(p)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((l.structure->xi(p) - d.xi(p)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((l.structure->eta(p) - d.eta(p)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("example31 parameters") {
  const auto sols = solve_example31(2);
  CHECK(sols[0].branch == Branch::plus);
  CHECK(sols[0].c == doctest::Approx(5.828427).epsilon(1e-6));
  CHECK(sols[0].a == doctest::Approx(6.828427).epsilon(1e-6));
  CHECK(sols[1].c == doctest::Approx(0.171573).epsilon(1e-5));
  for (int n : {2, 3, 4, 7}) {
    for (const Example31Solution& s : solve_example31(n)) {
      CAPTURE(n);
      CHECK(example31_residual(s) <= 1e-12);
      const DeformedParameters d = deformation_map(s.c * (2 - s.c), -2 * s.c, s.a);
      CHECK(d.k == doctest::Approx(1.0 - 1.0 / n));
      CHECK(std::abs(*d.mu) < 1e-12);
      CHECK(boeckx_invariant(d.k, *d.mu) == doctest::Approx(std::sqrt(n)));
    }
  }
  CHECK_THROWS_AS(solve_example31(1), BadN);
  CHECK_THROWS_AS(solve_example31(0), BadN);
}
