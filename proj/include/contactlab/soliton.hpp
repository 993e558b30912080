#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contactlab/contact.hpp"
#include "contactlab/report.hpp"
#include "contactlab/structure_spec.hpp"

namespace contactlab {

/// Exactly one of `vector_field` / `potential` is set. A potential f gives V = -Df.
struct SolitonSpec {
  std::string name;
  std::optional<VectorField> vector_field;
  std::optional<ScalarField> potential;
  double lambda = 0.0;
};

/// Looks up a soliton entry of a loaded spec. Throws SchemaError for an unknown name.
SolitonSpec soliton_from_spec(const LoadedSpec& loaded, const std::string& name);

enum class SolitonKind { shrinking, steady, expanding };
const char* kind_name(SolitonKind kind);
/// Exact sign test on the user constant.
SolitonKind classify_soliton(double lambda);

/// The soliton field: V itself, or -Df for a potential.
VectorField soliton_vector_field(const ChartedModel& model, const SolitonSpec& spec,
                                 const DifferentiationConfig& cfg);

/// max over samples of |L_V g + 2 Ric + 2 lambda g|. A field built from a potential is
/// differentiated at the derived level.
double soliton_residual(const ChartedModel& model, const SolitonSpec& spec,
                        const DifferentiationConfig& cfg);

/// max over samples of |Hess f - Ric - lambda g|.
double gradient_soliton_residual(const ChartedModel& model, const ScalarField& f, double lambda,
                                 const DifferentiationConfig& cfg);

/// Exact fraction with positive denominator in lowest terms.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n, long long d = 1);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};
Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
Rational operator-(const Rational& a);

/// Constraint algebra for a Ricci soliton whose field is V = alpha xi on a non-Sasakian N(k)
/// structure of dimension 2n+1.
struct CollinearReport {
  int n = 1;
  bool consistent = false;  // the chain through the antisymmetric part closes
  std::optional<Rational> forced_k;
  std::optional<Rational> forced_lambda;
  bool alpha_constant = false;
  /// The symmetric part of the same Ricci comparison, alpha h + 2(n-1) phi h = 0, can hold
  /// with h != 0. It cannot: for every n it forces h = 0 or n = 1.
  bool symmetric_part_consistent = false;
  std::optional<SolitonKind> kind;
  std::vector<std::string> notes;
};

/// Throws BadN when n < 1.
CollinearReport collinear_soliton_constraints(int n);
VerificationReport collinear_report(const CollinearReport& r);

/// Best alpha for V = alpha xi at fixed lambda, by least squares over the sample points, and
/// the remaining max residual of the soliton equation.
struct CollinearFit {
  double alpha = 0.0;
  double residual = 0.0;
};
CollinearFit fit_collinear_soliton(const ContactStructure& s, double lambda,
                                   const DifferentiationConfig& cfg);

struct AuditTolerances {
  double precondition = 1e-3;  // gradient soliton residual needed before auditing
  double identity = 1e-3;
};

/// R(X,Y)Df = (nabla_X Q)Y - (nabla_Y Q)X over coordinate pairs. With a contact structure
/// also g((nabla_xi Q)Y - (nabla_Y Q)xi, xi) = 0, and the value |Df - (xi f) xi| is recorded.
/// Throws PreconditionFailed when the gradient soliton residual exceeds tol.precondition.
VerificationReport grad_soliton_audit(const ChartedModel& model, const ScalarField& f,
                                      double lambda, const DifferentiationConfig& cfg,
                                      const ContactStructure* structure = nullptr,
                                      const AuditTolerances& tol = {});

struct EinsteinFit {
  bool is_einstein = false;
  double a = 0.0;
  double residual = 0.0;
};

/// Least-squares a in Ric = a g over the samples; Einstein when the max residual <= tol.
EinsteinFit einstein_fit(const ChartedModel& model, const DifferentiationConfig& cfg,
                         double tol = 1e-3);

}  // namespace contactlab
