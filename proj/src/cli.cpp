#include "contactlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "contactlab/contact.hpp"
#include "contactlab/errors.hpp"
#include "contactlab/nullity.hpp"
#include "contactlab/soliton.hpp"
#include "contactlab/structure_spec.hpp"
#include "contactlab/zoo.hpp"

namespace contactlab {

namespace {

DifferentiationConfig diff_config(const RunConfig& rc) {
  DifferentiationConfig cfg;
  cfg.sample_count = rc.points;
  cfg.seed = rc.seed;
  cfg.richardson = rc.richardson;
  cfg.validate();
  return cfg;
}

AxiomTolerances axiom_tolerances(const RunConfig& rc) { return {rc.tol_first, rc.tol_derived}; }

KmTolerances km_tolerances(const RunConfig& rc) {
  KmTolerances t;
  t.h_squared = rc.tol_derived;
  t.first = rc.tol_derived;
  t.curvature = rc.tol_curvature;
  t.third = rc.third();
  return t;
}

/// A spec path or zoo:NAME.
struct Target {
  std::string name;
  std::optional<StructureSpec> spec;  // the document, for deformation and export
  ChartedModel model;
  std::optional<ContactStructure> structure;
  std::optional<LoadedSpec> loaded;
};

Target load_target(const std::string& ref, const DifferentiationConfig& cfg) {
  if (ref.rfind("zoo:", 0) == 0) {
    ZooEntry e = zoo::by_name(ref.substr(4));
    return Target{e.name, e.spec, e.structure.model, e.structure, std::nullopt};
  }
  LoadedSpec loaded = load_structure_spec_file(ref, cfg);
  return Target{loaded.spec.name, loaded.spec, loaded.model, loaded.structure, loaded};
}

const ContactStructure& require_structure(const Target& t) {
  if (!t.structure) throw SchemaError("'" + t.name + "' has no phi/xi/eta");
  return *t.structure;
}

void add_fit_values(VerificationReport& r, const NullityFit& fit, const std::string& prefix = "") {
  r.values[prefix + "k"] = fit.k;
  r.values[prefix + "mu"] = fit.mu ? nlohmann::json(*fit.mu) : nlohmann::json("undetermined");
  r.values[prefix + "mu_identifiable"] = fit.mu_identifiable;
  r.values[prefix + "fit_residual"] = fit.residual;
  r.values[prefix + "condition"] = fit.condition;
}

void add_fit_checks(VerificationReport& r, const NullityFit& fit, const DifferentiationConfig& cfg,
                    double tol, const std::string& prefix = "") {
  r.add(prefix + "nullity.fit_residual", anchor::km, fit.residual, tol, fit.samples, cfg.seed);
  r.add(prefix + "nullity.k_bound", anchor::h_squared, std::max(0.0, fit.k - 1.0), tol,
        fit.samples, cfg.seed);
}

VerificationReport cmd_verify(const Target& t, const RunConfig& rc) {
  const DifferentiationConfig cfg = diff_config(rc);
  if (!t.structure) {
    VerificationReport r;
    r.structure_name = t.name;
    const EinsteinFit e = einstein_fit(t.model, cfg, rc.tol_curvature);
    r.values["is_einstein"] = e.is_einstein;
    r.values["einstein_constant"] = e.a;
    r.values["einstein_residual"] = e.residual;
    return r;
  }
  StructureClass c = classify_structure(*t.structure, cfg, 1e-4, axiom_tolerances(rc));
  return c.evidence;
}

VerificationReport cmd_fit(const Target& t, const RunConfig& rc) {
  const DifferentiationConfig cfg = diff_config(rc);
  const ContactStructure& s = require_structure(t);
  VerificationReport r;
  r.structure_name = t.name;
  const NullityFit fit = fit_nullity(s, cfg);
  add_fit_values(r, fit);
  add_fit_checks(r, fit, cfg, rc.tol_curvature);
  if (!fit_accepted(fit, {rc.tol_curvature, rc.tol_curvature})) return r;

  const StructureLabel label = classify_structure(s, cfg).label;
  r.values["label"] = label_name(label);
  nlohmann::json skipped = nlohmann::json::array();
  for (KmIdentity id : all_km_identities) {
    if (requires_non_sasakian(id) && label == StructureLabel::sasakian) {
      skipped.push_back(identity_name(id));
      continue;
    }
    r.merge(verify_km_identity(s, fit, id, cfg, km_tolerances(rc), label));
  }
  if (!skipped.empty()) r.values["skipped_sasakian"] = skipped;
  if (fit.mu && fit.k < 1.0 - 1e-9) r.values["boeckx_invariant"] = boeckx_invariant(fit.k, *fit.mu);
  return r;
}

VerificationReport cmd_soliton(const Target& t, const std::string& name, const RunConfig& rc) {
  const DifferentiationConfig cfg = diff_config(rc);
  if (!t.loaded) throw SchemaError("solitons are read from spec files, not zoo entries");
  const SolitonSpec spec = soliton_from_spec(*t.loaded, name);
  VerificationReport r;
  r.structure_name = t.name + ":" + name;
  const int samples = cfg.sample_count;
  r.add("soliton.residual", anchor::ricci_soliton, soliton_residual(t.model, spec, cfg),
        rc.tol_curvature, samples, cfg.seed);
  if (spec.potential)
    r.add("soliton.gradient_residual", anchor::ricci_soliton_grad,
          gradient_soliton_residual(t.model, *spec.potential, spec.lambda, cfg), rc.tol_curvature,
          samples, cfg.seed);
  r.values["lambda"] = spec.lambda;
  r.values["kind"] = kind_name(classify_soliton(spec.lambda));
  return r;
}

VerificationReport cmd_deform(const Target& t, double a, const std::string& spec_output,
                              const RunConfig& rc) {
  const DifferentiationConfig cfg = diff_config(rc);
  const ContactStructure& s = require_structure(t);
  if (!t.spec) throw SchemaError("'" + t.name + "' has no spec document");
  const NullityFit before = fit_nullity(s, cfg);
  const DeformedParameters predicted = deformation_map(before.k, before.mu, a);

  const StructureSpec deformed = deform_spec(*t.spec, a);
  const LoadedSpec loaded = load_structure_spec(deformed, cfg);
  VerificationReport r = verify_contact_axioms(*loaded.structure, cfg, axiom_tolerances(rc));
  r.structure_name = deformed.name;
  const NullityFit after = fit_nullity(*loaded.structure, cfg);
  add_fit_values(r, after);
  add_fit_checks(r, after, cfg, rc.tol_curvature);
  r.values["a"] = a;
  r.values["predicted_k"] = predicted.k;
  r.values["predicted_mu"] = predicted.mu ? nlohmann::json(*predicted.mu) : nlohmann::json("undetermined");
  r.add("deform.k_prediction", anchor::deformation, std::abs(after.k - predicted.k),
        rc.tol_curvature, after.samples, cfg.seed);
  if (predicted.mu && after.mu)
    r.add("deform.mu_prediction", anchor::deformation, std::abs(*after.mu - *predicted.mu),
          rc.tol_curvature, after.samples, cfg.seed);
  if (before.mu && before.k < 1.0 - 1e-9) {
    r.values["boeckx_before"] = boeckx_invariant(before.k, *before.mu);
    r.values["boeckx_predicted"] = boeckx_invariant(predicted.k, *predicted.mu);
  }
  if (spec_output.empty())
    r.values["deformed_spec"] = spec_to_json(deformed);
  else
    write_output(emit_spec(deformed), spec_output);
  return r;
}

VerificationReport cmd_example31(int n, const RunConfig& rc) {
  const DifferentiationConfig cfg = diff_config(rc);
  VerificationReport r;
  r.structure_name = "example31-n" + std::to_string(n);
  for (const Example31Solution& sol : solve_example31(n)) {
    const std::string b = branch_name(sol.branch);
    r.values[b + ".c"] = sol.c;
    r.values[b + ".a"] = sol.a;
    r.add(b + ".equations", anchor::example_3_1, example31_residual(sol), 1e-12, 0, 0);
    const DeformedParameters kp = deformation_map(sol.c * (2.0 - sol.c), -2.0 * sol.c, sol.a);
    r.values[b + ".boeckx_invariant"] = boeckx_invariant(kp.k, *kp.mu);
    r.add(b + ".boeckx_sqrt_n", anchor::boeckx,
          std::abs(boeckx_invariant(kp.k, *kp.mu) - std::sqrt(static_cast<double>(n))), 1e-12, 0, 0);
    try {
      const ZooEntry e = zoo::deformed_example31(n, sol.branch);
      const NullityFit fit = fit_nullity(e.structure, cfg);
      add_fit_values(r, fit, b + ".");
      add_fit_checks(r, fit, cfg, rc.tol_curvature, b + ".");
      r.add(b + ".fit_k", anchor::example_3_1, std::abs(fit.k - (1.0 - 1.0 / n)), rc.tol_curvature,
            fit.samples, cfg.seed);
      r.add(b + ".fit_mu", anchor::example_3_1, std::abs(fit.mu.value_or(NAN)), rc.tol_curvature,
            fit.samples, cfg.seed);
      if (fit.mu)
        r.add(b + ".fit_boeckx", anchor::boeckx,
              std::abs(boeckx_invariant(fit.k, *fit.mu) - std::sqrt(static_cast<double>(n))),
              rc.tol_curvature, fit.samples, cfg.seed);
    } catch (const Unimplemented& ex) {
      r.values[b + ".deformed_structure"] = ex.what();
    }
  }
  return r;
}

std::string zoo_listing(ReportFormat format) {
  std::vector<ZooEntry> entries = zoo::all();
  if (format == ReportFormat::json) {
    nlohmann::json list = nlohmann::json::array();
    for (const ZooEntry& e : entries)
      list.push_back({{"name", e.name},
                      {"dimension", e.structure.dim()},
                      {"expected_k", canonical_number(e.expected_k)},
                      {"expected_mu", e.expected_mu ? canonical_number(*e.expected_mu)
                                                    : nlohmann::json("undetermined")},
                      {"expected_class", label_name(e.expected_class)},
                      {"provenance", e.provenance}});
    return list.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const ZooEntry& e : entries) {
    out << e.name << "  dim " << e.structure.dim() << "  k " << canonical_number(e.expected_k).dump()
        << "  mu " << (e.expected_mu ? canonical_number(*e.expected_mu).dump() : "undetermined")
        << "  " << label_name(e.expected_class) << "\n";
  }
  return out.str();
}

void zoo_emit(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  for (const ZooEntry& e : zoo::all())
    write_output(emit_spec(e.spec), (std::filesystem::path(dir) / (e.name + ".json")).string());
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  if (const char* env = std::getenv("CONTACTLAB_SEED")) {
    try {
      rc.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: CONTACTLAB_SEED must be a non-negative integer\n";
      return 1;
    }
  }

  CLI::App app{"Numerical checks for contact metric structures, (k, mu)-nullity and Ricci solitons",
               "contactlab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  double tol_third = 0.0;
  bool no_richardson = false;
  app.add_option("--points", rc.points, "sample points per check")->check(CLI::PositiveNumber);
  app.add_option("--seed", rc.seed, "sampler seed (default 42 or $CONTACTLAB_SEED)");
  app.add_option("--tol-first", rc.tol_first, "algebraic axiom tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-derived", rc.tol_derived, "first-derivative identity tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-curvature", rc.tol_curvature, "curvature identity tolerance")
      ->check(CLI::PositiveNumber);
  auto* third_opt = app.add_option("--tol-third", tol_third, "third-derivative identity tolerance")
                        ->check(CLI::PositiveNumber);
  app.add_flag("--no-richardson", no_richardson, "plain central differences");
  app.add_option("--output,-o", rc.output, "report path (default standard output)");
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--timing", rc.timing, "record the real runtime in the report");

  std::string target;
  auto* verify = app.add_subcommand("verify", "contact axioms and classification");
  verify->add_option("target", target, "spec file or zoo:NAME")->required();
  auto* fit = app.add_subcommand("fit", "(k, mu) fit and the nullity identities");
  fit->add_option("target", target, "spec file or zoo:NAME")->required();
  std::string soliton_name;
  auto* soliton = app.add_subcommand("soliton", "soliton residual and kind");
  soliton->add_option("target", target, "spec file")->required();
  soliton->add_option("--name", soliton_name, "soliton entry")->required();
  double a = 0.0;
  std::string spec_output;
  auto* deform = app.add_subcommand("deform", "D_a deformation, re-verified and re-fitted");
  deform->add_option("target", target, "spec file or zoo:NAME")->required();
  deform->add_option("--a", a, "deformation constant")->required()->check(CLI::PositiveNumber);
  deform->add_option("--spec-output", spec_output, "write the deformed spec here");
  int n = 0;
  auto* example31 = app.add_subcommand("example31", "deformation parameters giving (k, mu) = (1 - 1/n, 0), and the deformed fit");
  example31->add_option("--n", n, "dimension 2n+1, n > 1")->required();
  auto* collinear = app.add_subcommand("collinear", "constraints for V collinear with xi");
  collinear->add_option("--n", n, "dimension 2n+1")->required();
  auto* zoo_cmd = app.add_subcommand("zoo", "reference structures");
  zoo_cmd->require_subcommand(1);
  auto* zoo_list = zoo_cmd->add_subcommand("list", "list the zoo");
  std::string emit_dir;
  auto* zoo_emit_cmd = zoo_cmd->add_subcommand("emit", "write every zoo spec document");
  zoo_emit_cmd->add_option("dir", emit_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  rc.richardson = !no_richardson;
  if (third_opt->count() > 0) rc.tol_third = tol_third;
  rc.format = format == "text" ? ReportFormat::text : ReportFormat::json;

  const auto start = std::chrono::steady_clock::now();
  try {
    if (zoo_list->parsed()) {
      const std::string text = zoo_listing(rc.format);
      if (rc.output.empty()) out << text;
      else write_output(text, rc.output);
      return 0;
    }
    if (zoo_emit_cmd->parsed()) {
      zoo_emit(emit_dir);
      return 0;
    }

    VerificationReport report;
    if (verify->parsed()) {
      report = cmd_verify(load_target(target, diff_config(rc)), rc);
    } else if (fit->parsed()) {
      report = cmd_fit(load_target(target, diff_config(rc)), rc);
    } else if (soliton->parsed()) {
      report = cmd_soliton(load_target(target, diff_config(rc)), soliton_name, rc);
    } else if (deform->parsed()) {
      report = cmd_deform(load_target(target, diff_config(rc)), a, spec_output, rc);
    } else if (example31->parsed()) {
      report = cmd_example31(n, rc);
    } else if (collinear->parsed()) {
      report = collinear_report(collinear_soliton_constraints(n));
    }
    report.finalize();
    if (rc.timing)
      report.summary.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
    const std::string text = emit_report(report, rc.format);
    if (rc.output.empty()) out << text;
    else write_output(text, rc.output);
    return report.all_pass() ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace contactlab
