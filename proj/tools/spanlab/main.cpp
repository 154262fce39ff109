#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "runner.hpp"
#include "spanlab/errors.hpp"

using nlohmann::json;
namespace sc = spanlab::cli;

namespace {

struct Common {
  std::string base = "finset:2";
  int bound = 3;
  std::uint64_t seed = sc::default_seed;
  std::string out;
};

int emit(const json& report, const std::string& out) {
  const std::string text = sc::dump(report);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return 3;
    }
    f << text;
  }
  return spanlab::exit_code(sc::report_verdict(report));
}

json inline_or_file(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw spanlab::SchemaError(std::string("inline JSON does not parse: ") + e.what());
    }
  }
  return sc::load_json_file(text);
}

void add_base(CLI::App* app, Common& c) {
  app->add_option("--base", c.base, "finset:N or a category JSON file");
  app->add_option("--bound", c.bound, "largest object size enumerated");
}

void add_out(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "write the report here instead of stdout");
  app->add_option("--seed", c.seed, "seed for sampled batteries");
}

int run_suite(const std::string& path, const std::string& out_dir, unsigned workers) {
  const auto result = sc::run_suite(sc::load_json_file(path), workers);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "%03zu.json", i);
      std::ofstream(std::filesystem::path(out_dir) / name, std::ios::binary) << sc::dump(result.reports[i]);
    }
    std::ofstream(std::filesystem::path(out_dir) / "summary.json", std::ios::binary) << sc::dump(result.summary);
  }
  std::cout << sc::dump(result.summary);
  return spanlab::exit_code(result.verdict);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite models of iterated span categories"};
  app.set_version_flag("--version", sc::tool_version());
  app.require_subcommand(1);
  Common c;
  json request;

  // shapes
  auto* shapes = app.add_subcommand("shapes", "emit a shape poset as JSON");
  std::string shape_kind;
  std::vector<std::size_t> shape_arities;
  shapes->add_option("kind", shape_kind, "sigma, lambda or wedge")->required()->check(
      CLI::IsMember({"sigma", "lambda", "wedge"}));
  shapes->add_option("arities", shape_arities, "arities n1 n2 ...")->required();
  add_out(shapes, c);
  shapes->callback([&] { request = {{"check", "shapes"}, {"kind", shape_kind}, {"arities", shape_arities}}; });

  // level
  auto* level = app.add_subcommand("level", "enumerate a level of Cartesian diagrams");
  std::vector<std::size_t> arities{1};
  bool with_objects = false;
  add_base(level, c);
  add_out(level, c);
  level->add_option("--arities", arities, "arities of the shape")->delimiter(',');
  level->add_flag("--json,--objects", with_objects, "list every class");
  level->callback([&] {
    request = {{"check", "level"}, {"base", c.base}, {"arities", arities}, {"bound", c.bound}, {"objects", with_objects}};
  });

  // check
  auto* check = app.add_subcommand("check", "structural checks of the span levels");
  check->require_subcommand(1);
  auto* segal = check->add_subcommand("segal", "Segal condition in every direction");
  bool corrupt = false;
  add_base(segal, c);
  add_out(segal, c);
  segal->add_option("--arities", arities, "arities of the level")->delimiter(',');
  segal->add_flag("--corrupt", corrupt, "damage one class first");
  segal->callback([&] {
    request = {{"check", "segal"}, {"base", c.base}, {"arities", arities}, {"bound", c.bound}, {"corrupt", corrupt}};
  });
  auto* complete = check->add_subcommand("complete", "Rezk completeness");
  add_base(complete, c);
  add_out(complete, c);
  complete->callback([&] { request = {{"check", "complete"}, {"base", c.base}, {"bound", c.bound}}; });
  auto* invertible = check->add_subcommand("invertible", "invertible spans against iso legs");
  add_base(invertible, c);
  add_out(invertible, c);
  invertible->callback([&] { request = {{"check", "invertible"}, {"base", c.base}, {"bound", c.bound}}; });
  auto* mapping = check->add_subcommand("mapping", "mapping categories against slices");
  std::string mx;
  std::string my;
  std::vector<std::size_t> mm;
  add_base(mapping, c);
  add_out(mapping, c);
  mapping->add_option("--x", mx, "first object (all pairs when omitted)");
  mapping->add_option("--y", my, "second object");
  mapping->add_option("--m", mm, "remaining arities")->delimiter(',');
  mapping->callback([&] {
    request = {{"check", "mapping"}, {"base", c.base}, {"bound", c.bound}, {"m", mm}};
    if (!mx.empty()) {
      request["x"] = mx;
    }
    if (!my.empty()) {
      request["y"] = my;
    }
  });

  // certify
  auto* certify = app.add_subcommand("certify", "adjunction and duality witnesses");
  certify->require_subcommand(1);
  auto* adjoint = certify->add_subcommand("adjoint", "triangle identities for the reversed span");
  std::string span_text;
  int samples = 50;
  add_base(adjoint, c);
  add_out(adjoint, c);
  adjoint->add_option("--span", span_text, "span as inline JSON or a file");
  adjoint->add_option("--samples", samples, "random spans when no span is given");
  adjoint->callback([&] {
    request = {{"check", "adjoint"}, {"base", c.base}};
    if (!span_text.empty()) {
      request["span"] = inline_or_file(span_text);
    } else {
      request["bound"] = c.bound;
      request["samples"] = samples;
      request["seed"] = c.seed;
    }
  });
  auto* dual = certify->add_subcommand("dual", "zigzag identities for an object");
  std::string object;
  add_base(dual, c);
  add_out(dual, c);
  dual->add_option("--object", object, "object label (all objects when omitted)");
  dual->callback([&] {
    request = {{"check", "dual"}, {"base", c.base}};
    if (!object.empty()) {
      request["object"] = object;
    }
  });

  // locsys
  auto* locsys = app.add_subcommand("locsys", "spans with local systems");
  locsys->require_subcommand(1);
  auto* lcheck = locsys->add_subcommand("check", "run one local-system property");
  std::string coefficients = "cyclic:2";
  std::string property = "composition";
  int arity = 2;
  int lx = -1;
  int ly = -1;
  std::vector<std::size_t> xi;
  std::vector<std::size_t> eta;
  int lsamples = 100;
  add_base(lcheck, c);
  add_out(lcheck, c);
  lcheck->add_option("--coefficients", coefficients, "discrete:N, cyclic:N, arrow, terminal or a JSON file");
  lcheck->add_option("--property", property, "composition, segal, equivalence, mapping or dual");
  lcheck->add_option("--arity", arity, "Segal arity");
  lcheck->add_option("--x", lx, "first foot size");
  lcheck->add_option("--y", ly, "second foot size");
  lcheck->add_option("--xi", xi, "labels of the first foot")->delimiter(',');
  lcheck->add_option("--eta", eta, "labels of the second foot")->delimiter(',');
  lcheck->add_option("--span", span_text, "labelled span as inline JSON or a file");
  lcheck->add_option("--samples", lsamples, "associativity samples");
  lcheck->callback([&] {
    request = {{"check", "locsys"},   {"base", c.base},       {"bound", lcheck->count("--bound") ? c.bound : 1},
               {"property", property}, {"coefficients", coefficients}};
    if (property == "segal") {
      request["arity"] = arity;
    }
    if (property == "composition") {
      request["samples"] = lsamples;
      request["seed"] = c.seed;
    }
    if (lx >= 0 || ly >= 0) {
      request["x"] = lx;
      request["y"] = ly;
      request["xi"] = xi;
      request["eta"] = eta;
    }
    if (!span_text.empty()) {
      request["span"] = inline_or_file(span_text);
    }
  });

  // lag
  auto* lag = app.add_subcommand("lag", "linear Lagrangian correspondences");
  lag->require_subcommand(1);
  auto* lagcheck = lag->add_subcommand("check", "certify, compose, closure or zigzag");
  std::string lag_json;
  bool closure = false;
  std::vector<std::size_t> zigzag;
  int max_dim = 12;
  int lag_samples = 100;
  add_out(lagcheck, c);
  lagcheck->add_option("--json", lag_json, "correspondence, or {\"compose\": [L1, L2]}");
  lagcheck->add_flag("--closure", closure, "seeded closure battery");
  lagcheck->add_option("--zigzag", zigzag, "dimensions for the zigzag check")->delimiter(',');
  lagcheck->add_option("--samples", lag_samples, "closure samples");
  lagcheck->add_option("--max-dim", max_dim, "largest dim X + dim Y + dim Z");
  lagcheck->callback([&] {
    if (!lag_json.empty()) {
      const json in = sc::load_json_file(lag_json);
      request = {{"check", "lag"}, {"property", in.contains("compose") ? "compose" : "certify"}, {"input", in}};
    } else if (!zigzag.empty()) {
      request = {{"check", "lag"}, {"property", "zigzag"}, {"dims", zigzag}};
    } else {
      request = {{"check", "lag"},
                 {"property", "closure"},
                 {"samples", lag_samples},
                 {"max_total_dim", max_dim},
                 {"seed", c.seed}};
      (void)closure;
    }
  });

  // suite
  auto* suite = app.add_subcommand("suite", "run every request of a config file");
  std::string config;
  std::string out_dir;
  unsigned workers = 0;
  suite->add_option("config", config, "suite config JSON")->required();
  suite->add_option("--out", out_dir, "directory for the reports");
  suite->add_option("--jobs", workers, "worker threads (0: one per core)");

  try {
    app.parse(argc, argv);
    if (suite->parsed()) {
      return run_suite(config, out_dir, workers);
    }
    return emit(sc::run(request), c.out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const spanlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
