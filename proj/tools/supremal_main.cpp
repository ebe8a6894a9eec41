#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "supremal/core.hpp"
#include "supremal/scenario.hpp"

using nlohmann::json;

namespace {

std::string load_config(const std::string& ref) {
  if (supremal::is_builtin(ref)) return supremal::builtin_config(ref);
  std::ifstream in(ref);
  if (!in) throw supremal::ConfigError("cannot open config " + ref);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_csv_numbers(const std::string& text) {
  json arr = json::array();
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) arr.push_back(std::stod(tok));
  return arr;
}

json parse_point_arg(const std::string& text) {
  json arr = parse_csv_numbers(text);
  if (arr.size() == 1) return arr[0];
  return arr;
}

int finish(const supremal::Report& report, bool echo) {
  report.print(std::cout, echo);
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supremal: desk-scale experiments with supremal functionals"};
  app.require_subcommand(1);

  std::string config_ref, out_dir;
  uint64_t seed = 0;
  bool have_seed = false, echo = false;
  double tol = -1;
  app.add_flag("--echo-config", echo, "echo the configuration in reports");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "directory for CSV exports");
    cmd->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
      have_seed = true;
    });
    cmd->add_option("--tol", tol, "override per-operation tolerances");
  };

  CLI::App* list_cmd = app.add_subcommand("list", "list built-in scenarios");

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario config or builtin");
  run_cmd->add_option("config", config_ref, "config file path or builtin name")->required();
  add_common(run_cmd);

  std::string f_name, source_arg, method = "fast", export_name, field_csv, field_expr;
  double lambda = 1.0;
  CLI::App* dist_cmd = app.add_subcommand("distance", "single-source pseudo-distance field");
  dist_cmd->add_option("--config", config_ref, "config file or builtin")->required();
  dist_cmd->add_option("--f", f_name, "supremand name")->required();
  dist_cmd->add_option("--lambda", lambda, "level")->required();
  dist_cmd->add_option("--source", source_arg, "source point, e.g. 0.5 or 0.5,0.5")->required();
  dist_cmd->add_option("--method", method, "fast | oracle | both");
  dist_cmd->add_option("--export", export_name, "CSV file name");
  add_common(dist_cmd);

  std::string bracket_arg;
  double eps = -1, relax_tol = 1e-4;
  CLI::App* relax_cmd = app.add_subcommand("relax", "relaxed envelope value of a field");
  relax_cmd->add_option("--config", config_ref, "config file or builtin")->required();
  relax_cmd->add_option("--f", f_name, "supremand name")->required();
  relax_cmd->add_option("--field", field_csv, "field CSV (x[,y],value)");
  relax_cmd->add_option("--expr", field_expr, "field expression in x");
  relax_cmd->add_option("--bracket", bracket_arg, "lo,hi")->required();
  relax_cmd->add_option("--eps", eps, "level shift (default: tol/2)");
  relax_cmd->add_option("--rtol", relax_tol, "bisection tolerance");
  relax_cmd->add_option("--export", export_name, "CSV of (mu, R) probes");
  add_common(relax_cmd);

  std::string at_arg;
  double window = -1, dxi = -1;
  CLI::App* env_cmd = app.add_subcommand("envelope", "level-convex envelope of a profile");
  env_cmd->add_option("--config", config_ref, "config file or builtin")->required();
  env_cmd->add_option("--f", f_name, "supremand name")->required();
  env_cmd->add_option("--x", at_arg, "spatial point selecting the profile");
  env_cmd->add_option("--window", window, "gradient window half-width");
  env_cmd->add_option("--dxi", dxi, "gradient resolution");
  env_cmd->add_option("--export", export_name, "CSV file name");
  add_common(env_cmd);

  std::string example_name, xs_arg, xis_arg;
  int budget = 200;
  CLI::App* rep_cmd = app.add_subcommand("represent", "representation supremand values");
  rep_cmd->add_option("--example", example_name, "builtin whose represent ops to run");
  rep_cmd->add_option("--config", config_ref, "config file or builtin");
  rep_cmd->add_option("--f", f_name, "supremand name");
  rep_cmd->add_option("--xs", xs_arg, "comma-separated x samples");
  rep_cmd->add_option("--xis", xis_arg, "comma-separated gradient samples");
  rep_cmd->add_option("--budget", budget, "competitor budget");
  rep_cmd->add_option("--export", export_name, "CSV file name");
  add_common(rep_cmd);

  CLI11_PARSE(app, argc, argv);

  supremal::RunOptions opts;
  if (have_seed) opts.seed = seed;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (tol >= 0) opts.tol = tol;

  try {
    if (*list_cmd) {
      for (const std::string& name : supremal::list_builtins()) std::cout << name << "\n";
      return 0;
    }
    if (*run_cmd) {
      return finish(supremal::run_scenario_file(config_ref, opts), echo);
    }
    if (*dist_cmd) {
      json op{{"op", "distance"}, {"f", f_name}, {"lambda", lambda}, {"method", method}};
      op["source"] = parse_point_arg(source_arg);
      if (!export_name.empty()) op["export"] = export_name;
      return finish(
          supremal::run_scenario_with_ops(load_config(config_ref), config_ref, {op.dump()}, opts),
          echo);
    }
    if (*relax_cmd) {
      if (field_csv.empty() == field_expr.empty())
        throw supremal::ConfigError("relax needs exactly one of --field or --expr");
      json br = parse_csv_numbers(bracket_arg);
      if (br.size() != 2) throw supremal::ConfigError("--bracket expects lo,hi");
      json op{{"op", "relax"}, {"f", f_name}, {"bracket", br}, {"tol", relax_tol}};
      if (!field_csv.empty()) op["u_csv"] = field_csv;
      if (!field_expr.empty()) op["u"] = field_expr;
      if (eps >= 0) op["eps"] = eps;
      if (!export_name.empty()) op["export"] = export_name;
      return finish(
          supremal::run_scenario_with_ops(load_config(config_ref), config_ref, {op.dump()}, opts),
          echo);
    }
    if (*env_cmd) {
      json op{{"op", "envelope"}, {"f", f_name}};
      if (!at_arg.empty()) op["at"] = parse_point_arg(at_arg);
      if (window > 0) op["window"] = window;
      if (dxi > 0) op["dxi"] = dxi;
      if (!export_name.empty()) op["export"] = export_name;
      return finish(
          supremal::run_scenario_with_ops(load_config(config_ref), config_ref, {op.dump()}, opts),
          echo);
    }
    if (*rep_cmd) {
      if (!example_name.empty()) {
        if (!supremal::is_builtin(example_name) &&
            supremal::is_builtin("example-" + example_name))
          example_name = "example-" + example_name;
        // replay only the representation-flavored operations of the builtin
        json cfg = json::parse(supremal::builtin_config(example_name));
        std::vector<std::string> ops;
        for (const json& oj : cfg.at("operations")) {
          std::string kind = oj.at("op").get<std::string>();
          if (kind == "represent" || kind == "localized") ops.push_back(oj.dump());
        }
        if (ops.empty())
          throw supremal::ConfigError("builtin has no representation operations");
        return finish(supremal::run_scenario_with_ops(supremal::builtin_config(example_name),
                                                      example_name, ops, opts),
                      echo);
      }
      if (config_ref.empty() || f_name.empty() || xs_arg.empty() || xis_arg.empty())
        throw supremal::ConfigError("represent needs --example or --config/--f/--xs/--xis");
      json op{{"op", "represent"}, {"f", f_name}, {"budget", budget}};
      op["xs"] = parse_csv_numbers(xs_arg);
      op["xis"] = parse_csv_numbers(xis_arg);
      if (!export_name.empty()) op["export"] = export_name;
      return finish(
          supremal::run_scenario_with_ops(load_config(config_ref), config_ref, {op.dump()}, opts),
          echo);
    }
  } catch (const supremal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
