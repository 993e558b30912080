#include "contactlab/structure_spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

using nlohmann::json;
using dsl::Expression;

const std::set<std::string> known_keys{
    "schema_version", "name",          "n",           "coordinate_names", "chart_box",
    "metric",         "phi",           "xi",          "eta",         "vector_fields",
    "scalar_fields",  "solitons"};

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return !dsl::is_function_name(s);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(where + ": missing field '" + key + "'");
  return j.at(key);
}

Expression expression_from(const json& j, const std::vector<std::string>& names,
                           const std::string& where) {
  Expression e;
  if (j.is_string())
    e = dsl::parse_expression(j.get<std::string>());
  else if (j.is_number())
    e = Expression(j.get<double>());
  else
    throw SchemaError(where + ": expected an expression string");
  dsl::check_identifiers(e, names);
  return e;
}

std::vector<Expression> expression_list(const json& j, std::size_t size,
                                        const std::vector<std::string>& names,
                                        const std::string& where) {
  if (!j.is_array() || j.size() != size)
    throw SchemaError(where + ": expected a list of " + std::to_string(size) + " expressions");
  std::vector<Expression> out;
  for (std::size_t i = 0; i < size; ++i)
    out.push_back(expression_from(j[i], names, where + "[" + std::to_string(i) + "]"));
  return out;
}

/// Square matrix of expressions; with `lower_optional`, null below the diagonal mirrors the
/// upper triangle.
std::vector<Expression> expression_matrix(const json& j, int dim,
                                          const std::vector<std::string>& names,
                                          const std::string& where, bool lower_optional) {
  const auto m = static_cast<std::size_t>(dim);
  if (!j.is_array() || j.size() != m)
    throw SchemaError(where + ": expected " + std::to_string(dim) + " rows");
  std::vector<Expression> out(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    if (!j[r].is_array() || j[r].size() != m)
      throw SchemaError(where + ": row " + std::to_string(r) + " must have " +
                        std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < m; ++c) {
      const json& e = j[r][c];
      const std::string at = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (e.is_null()) {
        if (!lower_optional || c >= r) throw SchemaError(at + ": entry required");
        out[r * m + c] = out[c * m + r];
      } else {
        out[r * m + c] = expression_from(e, names, at);
      }
    }
  }
  return out;
}

json matrix_to_json(const std::vector<Expression>& e, int dim, bool symmetric) {
  json rows = json::array();
  for (int r = 0; r < dim; ++r) {
    json row = json::array();
    for (int c = 0; c < dim; ++c) {
      const Expression& v = e[static_cast<std::size_t>(r * dim + c)];
      if (symmetric && c < r && v == e[static_cast<std::size_t>(c * dim + r)])
        row.push_back(nullptr);
      else
        row.push_back(v.to_string());
    }
    rows.push_back(row);
  }
  return rows;
}

json list_to_json(const std::vector<Expression>& e) {
  json out = json::array();
  for (const Expression& v : e) out.push_back(v.to_string());
  return out;
}

std::vector<dsl::BoundExpression> bind_all(const std::vector<Expression>& e,
                                           const std::vector<std::string>& names) {
  std::vector<dsl::BoundExpression> out;
  out.reserve(e.size());
  for (const Expression& v : e) out.emplace_back(v, names);
  return out;
}

Matrix eval_matrix(const std::vector<dsl::BoundExpression>& b, int dim, const Point& p) {
  Matrix out(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out(r, c) = b[static_cast<std::size_t>(r * dim + c)](p);
  return out;
}

Vector eval_vector(const std::vector<dsl::BoundExpression>& b, const Point& p) {
  Vector out(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) out[static_cast<Eigen::Index>(i)] = b[i](p);
  return out;
}

}  // namespace

StructureSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("spec: document must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known_keys.count(it.key())) throw SchemaError("spec: unknown field '" + it.key() + "'");
  const json& version = require(j, "schema_version", "spec");
  if (!version.is_number_integer() || version.get<int>() != spec_schema_version)
    throw SchemaError("spec: unsupported schema_version (expected 1)");

  StructureSpec s;
  const json& name = require(j, "name", "spec");
  if (!name.is_string()) throw SchemaError("spec: name must be a string");
  s.name = name.get<std::string>();

  const json& coords = require(j, "coordinate_names", "spec");
  if (!coords.is_array() || coords.size() < 2)
    throw SchemaError("spec: coordinate_names must list at least two names");
  std::set<std::string> seen;
  for (const json& c : coords) {
    if (!c.is_string() || !valid_identifier(c.get<std::string>()))
      throw SchemaError("spec: invalid coordinate name " + c.dump());
    if (!seen.insert(c.get<std::string>()).second)
      throw SchemaError("spec: duplicate coordinate name " + c.dump());
    s.coordinate_names.push_back(c.get<std::string>());
  }
  const int dim = s.dim();
  const auto& names = s.coordinate_names;

  const json& box = require(j, "chart_box", "spec");
  if (!box.is_array() || static_cast<int>(box.size()) != dim)
    throw SchemaError("spec: chart_box must have one interval per coordinate");
  for (const json& iv : box) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw SchemaError("spec: chart_box entries must be [lo, hi]");
    Interval in{iv[0].get<double>(), iv[1].get<double>()};
    if (!std::isfinite(in.lo) || !std::isfinite(in.hi) || !(in.lo < in.hi))
      throw SchemaError("spec: chart_box interval must satisfy lo < hi");
    s.chart_box.push_back(in);
  }

  s.metric = expression_matrix(require(j, "metric", "spec"), dim, names, "metric", true);

  const int present = int(j.contains("phi")) + int(j.contains("xi")) + int(j.contains("eta"));
  if (present != 0 && present != 3)
    throw SchemaError("spec: phi, xi and eta must be given together");
  if (present == 3) {
    const json& n = require(j, "n", "spec");
    if (!n.is_number_integer() || n.get<int>() < 1)
      throw SchemaError("spec: n must be an integer >= 1");
    s.n = n.get<int>();
    if (dim != 2 * s.n + 1)
      throw SchemaError("spec: a contact spec needs 2n+1 = " + std::to_string(2 * s.n + 1) +
                        " coordinates, found " + std::to_string(dim));
    s.phi = expression_matrix(j.at("phi"), dim, names, "phi", false);
    s.xi = expression_list(j.at("xi"), static_cast<std::size_t>(dim), names, "xi");
    s.eta = expression_list(j.at("eta"), static_cast<std::size_t>(dim), names, "eta");
  } else if (j.contains("n")) {
    const json& n = j.at("n");
    if (!n.is_number_integer() || 2 * n.get<int>() + 1 != dim)
      throw SchemaError("spec: n does not match the coordinate count");
    s.n = n.get<int>();
  }

  std::set<std::string> field_names;
  if (j.contains("vector_fields")) {
    const json& vf = j.at("vector_fields");
    if (!vf.is_object()) throw SchemaError("spec: vector_fields must map names to lists");
    for (auto it = vf.begin(); it != vf.end(); ++it) {
      if (!field_names.insert(it.key()).second)
        throw SchemaError("spec: duplicate field name '" + it.key() + "'");
      s.vector_fields.push_back(
          {it.key(), expression_list(it.value(), static_cast<std::size_t>(dim), names,
                                     "vector_fields." + it.key())});
    }
  }
  if (j.contains("scalar_fields")) {
    const json& sf = j.at("scalar_fields");
    if (!sf.is_object()) throw SchemaError("spec: scalar_fields must map names to expressions");
    for (auto it = sf.begin(); it != sf.end(); ++it) {
      if (!field_names.insert(it.key()).second)
        throw SchemaError("spec: duplicate field name '" + it.key() + "'");
      s.scalar_fields.push_back(
          {it.key(), expression_from(it.value(), names, "scalar_fields." + it.key())});
    }
  }
  if (j.contains("solitons")) {
    const json& sol = j.at("solitons");
    if (!sol.is_array()) throw SchemaError("spec: solitons must be a list");
    std::set<std::string> soliton_names;
    for (const json& e : sol) {
      if (!e.is_object()) throw SchemaError("spec: soliton entries must be objects");
      for (auto it = e.begin(); it != e.end(); ++it)
        if (it.key() != "name" && it.key() != "V" && it.key() != "potential" &&
            it.key() != "lambda")
          throw SchemaError("spec: unknown soliton field '" + it.key() + "'");
      SolitonEntry entry;
      const json& sname = require(e, "name", "soliton");
      if (!sname.is_string()) throw SchemaError("soliton: name must be a string");
      entry.name = sname.get<std::string>();
      if (!soliton_names.insert(entry.name).second)
        throw SchemaError("spec: duplicate soliton '" + entry.name + "'");
      const std::string where = "soliton " + entry.name;
      if (e.contains("V") == e.contains("potential"))
        throw SchemaError(where + ": exactly one of V and potential is required");
      if (e.contains("V"))
        entry.vector_field =
            expression_list(e.at("V"), static_cast<std::size_t>(dim), names, where + ".V");
      else
        entry.potential = expression_from(e.at("potential"), names, where + ".potential");
      const json& lambda = require(e, "lambda", where);
      if (!lambda.is_number() || !std::isfinite(lambda.get<double>()))
        throw SchemaError(where + ": lambda must be a finite number");
      entry.lambda = lambda.get<double>();
      s.solitons.push_back(std::move(entry));
    }
  }
  return s;
}

json spec_to_json(const StructureSpec& s) {
  const int dim = s.dim();
  json j = {{"schema_version", spec_schema_version},
            {"name", s.name},
            {"coordinate_names", s.coordinate_names},
            {"metric", matrix_to_json(s.metric, dim, true)}};
  json box = json::array();
  for (const Interval& iv : s.chart_box) box.push_back({iv.lo, iv.hi});
  j["chart_box"] = box;
  if (s.n > 0) j["n"] = s.n;
  if (s.has_contact()) {
    j["phi"] = matrix_to_json(*s.phi, dim, false);
    j["xi"] = list_to_json(*s.xi);
    j["eta"] = list_to_json(*s.eta);
  }
  if (!s.vector_fields.empty()) {
    json vf = json::object();
    for (const auto& f : s.vector_fields) vf[f.name] = list_to_json(f.components);
    j["vector_fields"] = vf;
  }
  if (!s.scalar_fields.empty()) {
    json sf = json::object();
    for (const auto& f : s.scalar_fields) sf[f.name] = f.expression.to_string();
    j["scalar_fields"] = sf;
  }
  if (!s.solitons.empty()) {
    json sol = json::array();
    for (const auto& e : s.solitons) {
      json entry = {{"name", e.name}, {"lambda", e.lambda}};
      if (e.vector_field) entry["V"] = list_to_json(*e.vector_field);
      if (e.potential) entry["potential"] = e.potential->to_string();
      sol.push_back(entry);
    }
    j["solitons"] = sol;
  }
  return j;
}

std::string emit_spec(const StructureSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

ChartedModel build_model(const StructureSpec& spec) {
  const int dim = spec.dim();
  // Only the upper triangle is evaluated, so the model is exactly symmetric.
  std::vector<Expression> upper;
  for (int r = 0; r < dim; ++r)
    for (int c = r; c < dim; ++c) upper.push_back(spec.metric[static_cast<std::size_t>(r * dim + c)]);
  auto bound = std::make_shared<const std::vector<dsl::BoundExpression>>(
      bind_all(upper, spec.coordinate_names));
  return ChartedModel(spec.coordinate_names, spec.chart_box, [bound, dim](const Point& p) {
    Matrix g(dim, dim);
    std::size_t k = 0;
    for (int r = 0; r < dim; ++r)
      for (int c = r; c < dim; ++c) {
        g(r, c) = (*bound)[k++](p);
        g(c, r) = g(r, c);
      }
    return g;
  });
}

VectorField build_vector_field(const StructureSpec& spec, const std::vector<Expression>& c) {
  auto bound = std::make_shared<const std::vector<dsl::BoundExpression>>(
      bind_all(c, spec.coordinate_names));
  return VectorField{[bound](const Point& p) { return eval_vector(*bound, p); }};
}

ScalarField build_scalar_field(const StructureSpec& spec, const Expression& e) {
  auto bound = std::make_shared<const dsl::BoundExpression>(e, spec.coordinate_names);
  return ScalarField{[bound](const Point& p) { return (*bound)(p); }};
}

ContactStructure build_structure(const StructureSpec& spec) {
  if (!spec.has_contact()) throw SchemaError("spec '" + spec.name + "' has no phi/xi/eta");
  const int dim = spec.dim();
  auto phi = std::make_shared<const std::vector<dsl::BoundExpression>>(
      bind_all(*spec.phi, spec.coordinate_names));
  auto eta = std::make_shared<const std::vector<dsl::BoundExpression>>(
      bind_all(*spec.eta, spec.coordinate_names));
  return ContactStructure{
      spec.name, build_model(spec),
      Tensor11Field{[phi, dim](const Point& p) { return eval_matrix(*phi, dim, p); }},
      build_vector_field(spec, *spec.xi),
      CovectorField{[eta](const Point& p) { return eval_vector(*eta, p); }}};
}

LoadedSpec load_structure_spec(const StructureSpec& spec, const DifferentiationConfig& cfg) {
  const int dim = spec.dim();
  ChartedModel model = build_model(spec);

  // Declared lower-triangle entries must agree with the upper triangle numerically.
  std::vector<Point> points{model.center()};
  for (const Point& p : model.sample_points(cfg)) points.push_back(p);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < r; ++c) {
      const Expression& lo = spec.metric[static_cast<std::size_t>(r * dim + c)];
      const Expression& up = spec.metric[static_cast<std::size_t>(c * dim + r)];
      if (lo == up) continue;
      const dsl::BoundExpression blo(lo, spec.coordinate_names);
      const dsl::BoundExpression bup(up, spec.coordinate_names);
      for (const Point& p : points) {
        const double a = blo(p);
        const double b = bup(p);
        if (!(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)))) {
          std::ostringstream msg;
          msg << "metric entries [" << r << "][" << c << "] and [" << c << "][" << r
              << "] differ (" << a << " vs " << b << ")";
          throw SymmetryError(msg.str());
        }
      }
    }
  model.validate(cfg);

  LoadedSpec out{spec, model, std::nullopt};
  if (spec.has_contact()) {
    out.structure = build_structure(spec);
    smoke_test(*out.structure, cfg);
  }
  return out;
}

LoadedSpec parse_structure_spec(std::string_view document, const DifferentiationConfig& cfg) {
  json j;
  try {
    j = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("spec: malformed JSON: ") + e.what());
  }
  return load_structure_spec(spec_from_json(j), cfg);
}

LoadedSpec load_structure_spec_file(const std::string& path, const DifferentiationConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_structure_spec(buf.str(), cfg);
}

}  // namespace contactlab
