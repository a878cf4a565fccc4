#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dsirs/instance.hpp"
#include "dsirs/solve_result.hpp"

namespace dsirs {

/// Parses {"budget": int|"inf", "resources": [{"name","u1","u2","p","c": int|"inf"}]}.
/// Structural problems throw Error(ParseError); values are not validated.
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
Instance load_instance(const std::filesystem::path& path);

/// {"s0":[names],"s1":[names],"s2":[names],"q":"num/den"}
nlohmann::json plan_to_json(const Plan& plan, const Instance& instance);
/// A missing "q" means a derived share; a present one is pinned.
Plan plan_from_json(const nlohmann::json& doc, const Instance& instance);

/// {"plans":[...],"objective":"num/den","cost":int,"solver":tag[, "epsilon":"num/den"]}
nlohmann::json solve_result_to_json(const SolveResult& result, const Instance& instance);

/// Canonical single-line serialization of a plan, used for deterministic ordering.
std::string canonical_plan_string(const Plan& plan, const Instance& instance);

}  // namespace dsirs
