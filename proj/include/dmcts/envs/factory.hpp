#pragma once

#include "dmcts/core/environment.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>

namespace dmcts::envs {

/// Builds a benchmark environment from its domain id and parsed config JSON.
/// Known ids: "risk-mdp", "fishwood", "redeed", "ddst".
std::unique_ptr<EnvironmentModel> make_environment(const std::string& domain,
                                                   const nlohmann::json& domain_config);

}  // namespace dmcts::envs
