#pragma once

#include <array>
#include <optional>
#include <string>

#include "contactlab/contact.hpp"
#include "contactlab/report.hpp"
#include "contactlab/structure_spec.hpp"

namespace contactlab {

struct NullityFit {
  double k = 0.0;
  std::optional<double> mu;  // empty when mu is not identifiable from the data
  double residual = 0.0;     // max |R(X,Y)xi - (kI + mu h)(eta(Y)X - eta(X)Y)|
  bool mu_identifiable = false;
  double condition = 0.0;    // least over greatest singular value of the design matrix
  double h_norm = 0.0;
  int samples = 0;
};

struct FitAcceptance {
  double residual = 1e-3;
  double k_slack = 1e-3;  // accepted fits satisfy k <= 1 + k_slack
};

/// Least squares for (k, mu) over every ordered coordinate pair at every sample point.
/// mu is identifiable when condition >= 1e-6 and max |h| > 1e-5; otherwise k alone is fitted.
/// Throws DegenerateFit when the k column vanishes.
NullityFit fit_nullity(const ContactStructure& s, const DifferentiationConfig& cfg);
bool fit_accepted(const NullityFit& fit, const FitAcceptance& acceptance = {});

enum class KmIdentity { q_xi, h_squared, nabla_h, q_formula, der_phi_sq, q_skew, ric_formula, scalar };
inline constexpr std::array<KmIdentity, 8> all_km_identities{
    KmIdentity::q_xi,       KmIdentity::h_squared,  KmIdentity::nabla_h,
    KmIdentity::q_formula,  KmIdentity::der_phi_sq, KmIdentity::q_skew,
    KmIdentity::ric_formula, KmIdentity::scalar};

/// "Q_XI", "H_SQUARED", ...
const char* identity_name(KmIdentity id);
std::optional<KmIdentity> identity_from_name(const std::string& name);
bool requires_non_sasakian(KmIdentity id);

/// Which coefficient set an identity is evaluated with. `consistent` is derived from the
/// curvature identity together with the Ricci tensor formula; `printed` reproduces the
/// coefficients as commonly quoted, which disagree (see README).
enum class CoefficientSet { consistent, printed };

/// Q = 2nk I + b h + c phi^2.
struct QCoefficients {
  double identity, h, phi_squared;
};
QCoefficients q_coefficients(int n, double k, double mu, CoefficientSet set);

/// (nabla_X Q)Y - (nabla_Y Q)X = d_eta d eta(X,Y) xi + phi (eta(Y) phi X - eta(X) phi Y)
///                              + phi_h (eta(Y) phi h X - eta(X) phi h Y).
struct QSkewCoefficients {
  double d_eta, phi, phi_h;
};
QSkewCoefficients q_skew_coefficients(int n, double k, double mu, CoefficientSet set);

struct KmTolerances {
  double h_squared = 1e-4;
  double curvature = 1e-3;     // Q_XI, Q_FORMULA, RIC_FORMULA, SCALAR
  double first = 1e-4;         // DER_PHI_SQ
  double third = 1e-3;         // NABLA_H, Q_SKEW
  static KmTolerances for_config(const DifferentiationConfig& cfg);
};

/// Max residual of one identity over the sample points, at the fitted (k, mu); an
/// undetermined mu is taken as 0 (it multiplies h = 0). Throws PreconditionFailed when the fit
/// is not accepted, HypothesisViolated for a non-Sasakian-only identity on a Sasakian
/// structure. `label` skips the classification when already known.
VerificationReport verify_km_identity(const ContactStructure& s, const NullityFit& fit,
                                      KmIdentity id, const DifferentiationConfig& cfg,
                                      const KmTolerances& tol,
                                      std::optional<StructureLabel> label = std::nullopt,
                                      CoefficientSet set = CoefficientSet::consistent);

/// (1 - mu/2) / sqrt(1 - k). Throws SasakianDomain when k >= 1 - 1e-9.
double boeckx_invariant(double k, double mu);

struct DeformedParameters {
  double k = 0.0;
  std::optional<double> mu;
};
/// (k, mu) -> ((k + a^2 - 1) / a^2, (mu + 2a - 2) / a). Throws PreconditionFailed unless a > 0.
DeformedParameters deformation_map(double k, std::optional<double> mu, double a);

/// eta' = a eta, xi' = xi / a, phi' = phi, g' = a g + a (a - 1) eta (x) eta.
ContactStructure d_homothetic_deform(const ContactStructure& s, double a);
/// The same law applied to the expression document.
StructureSpec deform_spec(const StructureSpec& spec, double a);
std::string deformed_name(const std::string& name, double a);

enum class Branch { plus, minus };
const char* branch_name(Branch b);

struct Example31Solution {
  int n = 2;
  Branch branch = Branch::plus;
  double c = 0.0;
  double a = 0.0;
};

/// c = (sqrt(n) +- 1)^2 / (n - 1), a = 1 + c. Throws BadN when n <= 1.
std::array<Example31Solution, 2> solve_example31(int n);
/// Max violation of 1 - 1/n = (k + a^2 - 1)/a^2 and 0 = (mu + 2a - 2)/a with k = c(2-c),
/// mu = -2c.
double example31_residual(const Example31Solution& s);

}  // namespace contactlab
