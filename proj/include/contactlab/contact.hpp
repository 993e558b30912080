#pragma once

#include <string>
#include <vector>

#include "contactlab/geometry.hpp"
#include "contactlab/model.hpp"
#include "contactlab/report.hpp"

namespace contactlab {

/// (phi, xi, eta, g) on a single chart of dimension 2n+1.
struct ContactStructure {
  std::string name;
  ChartedModel model;
  Tensor11Field phi;
  VectorField xi;
  CovectorField eta;

  int dim() const { return model.dim(); }
  int n() const { return (model.dim() - 1) / 2; }
};

/// (d eta)_{ij} = 1/2 (d_i eta_j - d_j eta_i), so d eta(X, Y) = X^i (d eta)_{ij} Y^j.
Matrix d_eta(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg);

/// [A, B] from central differences of both fields at `step`.
Vector lie_bracket(const VectorField& a, const VectorField& b, const Point& p, double step);

/// h = 1/2 L_xi phi, where (L_xi phi) X = [xi, phi X] - phi [xi, X].
Matrix compute_h(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg);
Tensor11Field h_field(const ContactStructure& s, const DifferentiationConfig& cfg);

/// nabla xi as a (1,1) tensor: column j holds nabla_{d_j} xi.
Matrix nabla_xi(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg);

/// (nabla_{d_k} phi) - (g(d_k, .) xi - eta(.) d_k), maximised over k. `sign` = -1 tests the
/// opposite convention eta(Y) X - g(X, Y) xi.
double sasakian_condition_residual(const ContactStructure& s, const Point& p,
                                   const DifferentiationConfig& cfg, double sign = 1.0);

/// N(X, Y) = [phi, phi](X, Y) + 2 d eta(X, Y) xi.
Vector nijenhuis_torsion(const ContactStructure& s, const VectorField& x, const VectorField& y,
                         const Point& p, const DifferentiationConfig& cfg);
/// Largest component of N over all coordinate pairs.
double nijenhuis_max(const ContactStructure& s, const Point& p, const DifferentiationConfig& cfg);

struct AxiomResidual {
  std::string check_id;
  std::string anchor;
  double residual = 0.0;
  bool differential = false;  // uses a derivative of xi; judged against the looser tolerance
};

/// Residual of every defining relation of a contact metric structure at one point.
std::vector<AxiomResidual> axiom_residuals(const ContactStructure& s, const Point& p,
                                           const DifferentiationConfig& cfg);

struct AxiomTolerances {
  double algebraic = 1e-6;
  double differential = 1e-4;
};

/// Max residual of every axiom over the seeded sample points.
VerificationReport verify_contact_axioms(const ContactStructure& s,
                                         const DifferentiationConfig& cfg,
                                         const AxiomTolerances& tol = {});

/// Cheap sanity check at the chart center. Throws AxiomError naming the first relation whose
/// residual exceeds `threshold`.
void smoke_test(const ContactStructure& s, const DifferentiationConfig& cfg,
                double threshold = 1e-4);

enum class StructureLabel { sasakian, k_contact_non_sasakian, contact_metric, invalid };
const char* label_name(StructureLabel label);

struct StructureClass {
  StructureLabel label = StructureLabel::invalid;
  double h_norm = 0.0;
  double nijenhuis_norm = 0.0;
  VerificationReport evidence;  // axiom checks; h_norm, nijenhuis_norm and label in values
};

/// Sasakian when the axioms hold and both h and N vanish (to eps); K-contact-non-Sasakian when
/// only h vanishes and dim > 3; contact-metric when h does not vanish; invalid otherwise.
StructureClass classify_structure(const ContactStructure& s, const DifferentiationConfig& cfg,
                                  double eps = 1e-4, const AxiomTolerances& tol = {});

}  // namespace contactlab
