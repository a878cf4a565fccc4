#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "dsirs/adjusted_winner.hpp"
#include "dsirs/errors.hpp"
#include "dsirs/exact.hpp"
#include "dsirs/fptas.hpp"
#include "dsirs/json_io.hpp"
#include "dsirs/simulation.hpp"

namespace dsirs::cli {

namespace {

using nlohmann::json;

json names_json(const Instance& instance, const ResourceSet& set) { return names_of(instance, set); }

json welfare_json(const Plan& plan, const Instance& instance) {
  const WelfareReport w = welfare(plan, instance);
  return {{"w1", to_fraction_string(w.w1)},       {"w2", to_fraction_string(w.w2)},
          {"d", to_fraction_string(w.d)},         {"rho", w.rho.to_string()},
          {"envy1", to_fraction_string(w.envy1)}, {"envy2", to_fraction_string(w.envy2)},
          {"feasible", w.feasible}};
}

Instance read_valid_instance(const std::string& path) {
  Instance instance = load_instance(path);
  validate_instance(instance);
  return instance;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) out.push_back(name);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dispute settlement with indivisible resources and sale"};
  app.require_subcommand(1, 1);
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for parallel paths")->check(CLI::PositiveNumber);

  std::string instance_path;
  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("--instance", instance_path)->required();

  auto* aw = app.add_subcommand("aw", "Classic Adjusted Winner and the AW-derived plan");
  std::string sell;
  aw->add_option("--instance", instance_path)->required();
  aw->add_option("--sell", sell, "Comma-separated names of sold resources");

  auto* solve = app.add_subcommand("solve", "Exact AWNS solver over all sale sets");
  std::string objective_name;
  std::string threshold_text;
  std::size_t max_resources = 20;
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--objective", objective_name)->required()->check(CLI::IsMember({"d", "rho", "nw", "d-c", "rho-c"}));
  solve->add_option("--threshold", threshold_text);
  solve->add_option("--max-resources", max_resources);

  auto* fptas = app.add_subcommand("fptas", "FPTAS for the ratio variant");
  std::string eps_text = "1/10";
  bool exhaustive = false;
  std::string o2_mode = "net-gain";
  bool verbose = false;
  fptas->add_option("--instance", instance_path)->required();
  fptas->add_option("--epsilon", eps_text)->required();
  fptas->add_flag("--exhaustive-guesses", exhaustive, "Run all (n+1)^3 guesses");
  fptas->add_option("--o2", o2_mode)->check(CLI::IsMember({"net-gain", "price"}));
  fptas->add_flag("--verbose", verbose, "Print diagnostics to standard error");

  auto* oracle = app.add_subcommand("oracle", "Brute force over every tripartition");
  std::string criterion;
  bool any_q = false;
  oracle->add_option("--instance", instance_path)->required();
  oracle->add_option("--criterion", criterion)
      ->required()
      ->check(CLI::IsMember({"min-d", "min-rho", "envy-free", "max-nash"}));
  oracle->add_flag("--any-q", any_q, "Envy check over every share q, not only the derived one");

  auto* simulate = app.add_subcommand("simulate", "Run the budget sweep and write CSV files");
  std::string config_path;
  std::string data_path;
  std::size_t synthetic = 0;
  std::size_t first_n = 5000;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string sim_eps;
  auto* cfg_opt = simulate->add_option("--config", config_path, "JSON sweep configuration");
  auto* syn_opt = simulate->add_option("--synthetic", synthetic, "Number of synthetic matrices");
  simulate->add_option("--data", data_path, "Utility-matrix CSV");
  simulate->add_option("--instances", first_n, "Keep the first N accepted matrices");
  simulate->add_option("--out", out_dir)->required();
  simulate->add_option("--seed", seed);
  simulate->add_option("--epsilon", sim_eps);
  (void)cfg_opt;
  (void)syn_opt;

  auto* gen = app.add_subcommand("gen", "Write synthetic utility matrices");
  std::size_t count = 0;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  gen->add_option("--count", count)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("--out", gen_out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "ParseError: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (validate->parsed()) {
      const Instance instance = read_valid_instance(instance_path);
      std::int64_t total = 0;
      for (const auto& r : instance.resources) total += r.u1;
      out << json{{"valid", true}, {"resources", instance.size()}, {"total_utility", total}}.dump() << '\n';
    } else if (aw->parsed()) {
      const Instance instance = read_valid_instance(instance_path);
      const ResourceSet sold = set_from_names(instance, split_names(sell));
      json doc;
      try {
        const ClassicAwOutcome c = classic_aw(instance);
        json classic{{"s1", names_json(instance, c.s1)},
                     {"s2", names_json(instance, c.s2)},
                     {"transfers", names_json(instance, make_set(c.transfers))},
                     {"w1", to_fraction_string(c.w1)},
                     {"w2", to_fraction_string(c.w2)},
                     {"split", nullptr}};
        std::vector<std::string> order;
        for (auto i : c.transfers) order.push_back(instance.resources[i].name);
        classic["transfers"] = order;
        if (c.split) {
          classic["split"] = {{"resource", instance.resources[c.split->resource].name},
                              {"holder", static_cast<int>(c.split->holder)},
                              {"retained", to_fraction_string(c.split->retained)}};
        }
        doc["classic"] = classic;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroTotalUtility) throw;
        doc["classic"] = nullptr;
      }
      const AwSubplan sub = aw_subplan(sold, instance);
      const Plan plan = aw_derived_plan(sold, instance);
      doc["derived"] = {{"plan", plan_to_json(plan, instance)},
                        {"halted_by", std::string(to_string(sub.halted_by))},
                        {"welfare", welfare_json(plan, instance)}};
      out << doc.dump() << '\n';
    } else if (solve->parsed()) {
      const Instance instance = read_valid_instance(instance_path);
      Objective objective;
      if (objective_name == "d") objective = Objective::min_d();
      if (objective_name == "rho") objective = Objective::min_rho();
      if (objective_name == "nw") objective = Objective::max_nash();
      if (objective_name == "d-c" || objective_name == "rho-c") {
        if (threshold_text.empty()) throw Error(ErrorKind::InvalidArgument, "--threshold is required for " + objective_name);
        const Rational t = parse_rational(threshold_text);
        objective = objective_name == "d-c" ? Objective::min_cost_given_d(t) : Objective::min_cost_given_rho(t);
      } else if (!threshold_text.empty()) {
        throw Error(ErrorKind::InvalidArgument, "--threshold only applies to d-c and rho-c");
      }
      const SolveResult result = solve_awns_exact(instance, objective, ExactOptions{max_resources});
      out << solve_result_to_json(result, instance).dump() << '\n';
    } else if (fptas->parsed()) {
      const Instance instance = read_valid_instance(instance_path);
      FptasOptions options;
      options.exhaustive_guesses = exhaustive;
      options.o2_valuation = o2_mode == "price" ? O2Valuation::price : O2Valuation::net_gain;
      FptasDiagnostics diag;
      const SolveResult result = fptas_awns_rho(instance, parse_rational(eps_text), options, &diag);
      out << solve_result_to_json(result, instance).dump() << '\n';
      if (verbose) {
        err << "guesses=" << diag.guesses << " dp_passes=" << diag.dp_passes
            << " frontier_plans=" << diag.frontier_plans << " aw_plans=" << diag.aw_plans
            << " heavy=" << diag.heavy_resources << " best_from_aw_only=" << diag.best_from_aw_only << '\n';
      }
    } else if (oracle->parsed()) {
      const Instance instance = read_valid_instance(instance_path);
      const OracleCriterion crit = criterion == "min-d"     ? OracleCriterion::min_d
                                   : criterion == "min-rho" ? OracleCriterion::min_rho
                                   : criterion == "max-nash" ? OracleCriterion::max_nash
                                                             : OracleCriterion::exists_envy_free;
      OracleOptions options;
      options.share_mode = any_q ? ShareMode::any : ShareMode::derived;
      const OracleOutcome outcome = oracle_best_plan(instance, crit, options);
      if (const auto* report = std::get_if<EnvyFreeReport>(&outcome)) {
        json doc{{"exists", report->exists}, {"witness", nullptr}, {"plans_examined", report->plans_examined}};
        if (report->witness) doc["witness"] = plan_to_json(*report->witness, instance);
        out << doc.dump() << '\n';
      } else {
        out << solve_result_to_json(std::get<SolveResult>(outcome), instance).dump() << '\n';
      }
    } else if (simulate->parsed()) {
      SweepConfig config;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw Error(ErrorKind::ParseError, "cannot open " + config_path);
        json doc;
        try {
          doc = json::parse(f);
        } catch (const json::exception& e) {
          throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
        }
        config = sweep_config_from_json(doc);
        if (doc.contains("synthetic") && synthetic == 0) synthetic = doc.at("synthetic").get<std::size_t>();
        if (doc.contains("data") && data_path.empty()) data_path = doc.at("data").get<std::string>();
        if (doc.contains("instances")) first_n = doc.at("instances").get<std::size_t>();
      }
      if (seed) config.seed = *seed;
      if (!sim_eps.empty()) config.epsilon = parse_rational(sim_eps);
      if (config.epsilon <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
      config.jobs = jobs;
      std::vector<UtilityMatrix> matrices;
      if (!data_path.empty()) {
        MatrixFilter filter;
        filter.first_n = first_n;
        matrices = load_utility_matrices(data_path, filter);
      } else if (synthetic > 0) {
        matrices = synthesize_matrices(synthetic, config.seed);
      } else {
        throw Error(ErrorKind::InvalidArgument, "simulate needs --config, --data or --synthetic");
      }
      SweepStats stats;
      const auto records = run_sweep(matrices, config, &stats);
      std::filesystem::create_directories(out_dir);
      std::ostringstream results;
      write_results_csv(results, records);
      write_file(std::filesystem::path(out_dir) / "results.csv", results.str());
      std::ostringstream aggregates;
      write_aggregates_csv(aggregates, aggregate(records));
      write_file(std::filesystem::path(out_dir) / "aggregates.csv", aggregates.str());
      out << json{{"matrices", matrices.size()},
                  {"records", records.size()},
                  {"fptas_runs", stats.fptas_runs},
                  {"carried", stats.carried},
                  {"infeasible", stats.infeasible}}
                 .dump()
          << '\n';
    } else if (gen->parsed()) {
      std::ostringstream text;
      write_utility_matrices(text, synthesize_matrices(count, gen_seed));
      write_file(gen_out, text.str());
      out << json{{"count", count}, {"out", gen_out}}.dump() << '\n';
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.kind() == ErrorKind::Infeasible ? kInfeasible : kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "ParseError: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "InvalidArgument: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace dsirs::cli
