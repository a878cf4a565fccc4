#include "dsirs/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "dsirs/errors.hpp"

namespace dsirs {

using nlohmann::json;

namespace {

std::int64_t read_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) throw Error(ErrorKind::ParseError, where + " must be an integer");
  return node.get<std::int64_t>();
}

bool is_inf(const json& node) { return node.is_string() && node.get<std::string>() == "inf"; }

std::vector<std::string> read_names(const json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, std::string("plan field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& n : arr) {
    if (!n.is_string()) throw Error(ErrorKind::ParseError, std::string("plan field '") + key + "' holds a non-string");
    out.push_back(n.get<std::string>());
  }
  return out;
}

}  // namespace

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "instance must be a JSON object");
  if (!doc.contains("budget")) throw Error(ErrorKind::ParseError, "missing field 'budget'");
  if (!doc.contains("resources") || !doc.at("resources").is_array()) {
    throw Error(ErrorKind::ParseError, "missing array field 'resources'");
  }
  Instance inst;
  const json& budget = doc.at("budget");
  inst.budget = is_inf(budget) ? Budget::unlimited() : Budget(read_int(budget, "budget"));

  std::size_t k = 0;
  for (const auto& node : doc.at("resources")) {
    const std::string where = "resources[" + std::to_string(k++) + "]";
    if (!node.is_object()) throw Error(ErrorKind::ParseError, where + " must be an object");
    for (const char* field : {"name", "u1", "u2", "p", "c"}) {
      if (!node.contains(field)) throw Error(ErrorKind::ParseError, where + " is missing field '" + field + "'");
    }
    if (!node.at("name").is_string()) throw Error(ErrorKind::ParseError, where + ".name must be a string");
    Resource r;
    r.name = node.at("name").get<std::string>();
    r.u1 = read_int(node.at("u1"), where + ".u1");
    r.u2 = read_int(node.at("u2"), where + ".u2");
    r.price = read_int(node.at("p"), where + ".p");
    r.cost = is_inf(node.at("c")) ? Cost::unsellable() : Cost(read_int(node.at("c"), where + ".c"));
    inst.resources.push_back(std::move(r));
  }
  return inst;
}

json instance_to_json(const Instance& instance) {
  json resources = json::array();
  for (const auto& r : instance.resources) {
    json c = r.cost.is_unsellable() ? json("inf") : json(r.cost.units());
    resources.push_back({{"name", r.name}, {"u1", r.u1}, {"u2", r.u2}, {"p", r.price}, {"c", c}});
  }
  json budget = instance.budget.is_unlimited() ? json("inf") : json(instance.budget.units());
  return {{"budget", budget}, {"resources", resources}};
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

json plan_to_json(const Plan& plan, const Instance& instance) {
  return {{"s0", names_of(instance, plan.s0)},
          {"s1", names_of(instance, plan.s1)},
          {"s2", names_of(instance, plan.s2)},
          {"q", to_fraction_string(plan.q)}};
}

Plan plan_from_json(const json& doc, const Instance& instance) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "plan must be a JSON object");
  auto s0 = set_from_names(instance, read_names(doc, "s0"));
  auto s1 = set_from_names(instance, read_names(doc, "s1"));
  auto s2 = set_from_names(instance, read_names(doc, "s2"));
  if (doc.contains("q")) {
    if (!doc.at("q").is_string()) throw Error(ErrorKind::ParseError, "plan field 'q' must be a \"num/den\" string");
    return make_pinned_plan(instance, std::move(s0), std::move(s1), std::move(s2),
                            parse_rational(doc.at("q").get<std::string>()));
  }
  return make_plan(instance, std::move(s0), std::move(s1), std::move(s2));
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::exact_awns: return "exact-awns";
    case SolverKind::oracle: return "oracle";
    case SolverKind::fptas: return "fptas";
  }
  return "unknown";
}

json solve_result_to_json(const SolveResult& result, const Instance& instance) {
  json plans = json::array();
  for (const auto& p : result.plans) plans.push_back(plan_to_json(p, instance));
  json out = {{"plans", plans},
              {"objective", to_fraction_string(result.objective)},
              {"cost", result.cost},
              {"solver", std::string(to_string(result.solver))}};
  if (result.epsilon) out["epsilon"] = to_fraction_string(*result.epsilon);
  return out;
}

std::string canonical_plan_string(const Plan& plan, const Instance& instance) {
  return plan_to_json(plan, instance).dump();
}

SolveResult finalize_result(std::vector<Plan> plans, Rational objective, SolverKind solver,
                            const Instance& instance) {
  SolveResult out;
  out.plans = pareto_filter(plans, instance);
  std::vector<std::pair<std::string, Plan>> keyed;
  keyed.reserve(out.plans.size());
  for (auto& p : out.plans) keyed.emplace_back(canonical_plan_string(p, instance), std::move(p));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  out.plans.clear();
  for (auto& [key, plan] : keyed) out.plans.push_back(std::move(plan));
  out.objective = std::move(objective);
  out.solver = solver;
  out.cost = sum_cost(instance, out.plans.front().s0).value_or(0);
  return out;
}

}  // namespace dsirs
