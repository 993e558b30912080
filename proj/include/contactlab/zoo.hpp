#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contactlab/contact.hpp"
#include "contactlab/nullity.hpp"
#include "contactlab/structure_spec.hpp"

namespace contactlab {

/// A reference structure with known nullity parameters. `structure` evaluates the closed forms
/// directly; `spec` is the same structure as an expression document.
struct ZooEntry {
  std::string name;
  ContactStructure structure;
  StructureSpec spec;
  double expected_k = 0.0;
  std::optional<double> expected_mu;  // empty: undetermined (h = 0)
  StructureLabel expected_class = StructureLabel::invalid;
  std::string provenance;
};

namespace zoo {

/// Standard Sasakian structure on R^{2n+1}, chart [-1, 1]^{2n+1}.
ZooEntry sasakian_standard(int n);

/// Unit tangent bundle of S^2(c), coordinates (u, v, t). The polar coordinate keeps
/// `polar_margin` (in units of the angle sqrt(c) u) from the poles. Throws PoleProximity when
/// the margin is inside the 0.1 exclusion band.
ZooEntry unit_tangent_bundle_sphere(double c, double polar_margin = 0.5);

/// Five-dimensional unit tangent bundle of S^3(c), coordinates (u, v, w, alpha, beta).
ZooEntry unit_tangent_bundle_sphere3(double c, double polar_margin = 0.5);

/// Unit tangent bundle of the flat plane, coordinates (x, y, t).
ZooEntry flat_three_dim();

/// T_1 S^{n+1}(c) deformed with the example31 parameters. Only n = 2 has a base chart;
/// other n > 1 throw Unimplemented, n <= 1 throws BadN.
ZooEntry deformed_example31(int n, Branch branch);

std::vector<std::string> names();
/// Throws Error for an unknown name.
ZooEntry by_name(const std::string& name);
std::vector<ZooEntry> all();

}  // namespace zoo
}  // namespace contactlab
