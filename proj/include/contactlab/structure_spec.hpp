#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "contactlab/contact.hpp"
#include "contactlab/expression.hpp"
#include "contactlab/model.hpp"

namespace contactlab {

struct NamedVectorExpr {
  std::string name;
  std::vector<dsl::Expression> components;
};

struct NamedScalarExpr {
  std::string name;
  dsl::Expression expression;
};

/// A soliton candidate: exactly one of `vector_field` / `potential` is set.
struct SolitonEntry {
  std::string name;
  std::optional<std::vector<dsl::Expression>> vector_field;
  std::optional<dsl::Expression> potential;
  double lambda = 0.0;
};

/// Structure-spec document (schema_version 1). Matrices are row-major with the row as the
/// upper index for phi. phi, xi and eta are either all present (contact spec, dim = 2n+1) or
/// all absent (plain Riemannian spec).
struct StructureSpec {
  std::string name;
  int n = 0;
  std::vector<std::string> coordinate_names;
  std::vector<Interval> chart_box;
  std::vector<dsl::Expression> metric;
  std::optional<std::vector<dsl::Expression>> phi;
  std::optional<std::vector<dsl::Expression>> xi;
  std::optional<std::vector<dsl::Expression>> eta;
  std::vector<NamedVectorExpr> vector_fields;
  std::vector<NamedScalarExpr> scalar_fields;
  std::vector<SolitonEntry> solitons;

  int dim() const { return static_cast<int>(coordinate_names.size()); }
  bool has_contact() const { return phi.has_value(); }
};

inline constexpr int spec_schema_version = 1;

/// Structural decoding: key names, arities, identifier scoping and expression syntax.
/// Throws SchemaError, SyntaxError, UnknownIdentifier.
StructureSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const StructureSpec& spec);
/// Canonical text: sorted keys, two-space indentation, trailing newline.
std::string emit_spec(const StructureSpec& spec);

ChartedModel build_model(const StructureSpec& spec);
/// Throws SchemaError for a spec without phi/xi/eta.
ContactStructure build_structure(const StructureSpec& spec);
VectorField build_vector_field(const StructureSpec& spec, const std::vector<dsl::Expression>& c);
ScalarField build_scalar_field(const StructureSpec& spec, const dsl::Expression& e);

struct LoadedSpec {
  StructureSpec spec;
  ChartedModel model;
  std::optional<ContactStructure> structure;
};

/// Decodes, checks metric symmetry numerically (SymmetryError), validates the metric on the
/// chart and, for contact specs, runs smoke_test at the chart center (AxiomError).
LoadedSpec parse_structure_spec(std::string_view document, const DifferentiationConfig& cfg);
LoadedSpec load_structure_spec_file(const std::string& path, const DifferentiationConfig& cfg);
LoadedSpec load_structure_spec(const StructureSpec& spec, const DifferentiationConfig& cfg);

}  // namespace contactlab
