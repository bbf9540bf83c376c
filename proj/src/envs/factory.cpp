#include "dmcts/envs/factory.hpp"

#include "dmcts/envs/ddst.hpp"
#include "dmcts/envs/fishwood.hpp"
#include "dmcts/envs/redeed.hpp"
#include "dmcts/envs/risk_mdp.hpp"

namespace dmcts::envs {

std::unique_ptr<EnvironmentModel> make_environment(const std::string& domain,
                                                   const nlohmann::json& domain_config) {
    const std::string text = domain_config.dump();
    if (domain == "risk-mdp") {
        return std::make_unique<RiskMdpEnv>(RiskMdpConfig::from_json_text(text));
    }
    if (domain == "fishwood") {
        return std::make_unique<FishwoodEnv>(FishwoodConfig::from_json_text(text));
    }
    if (domain == "redeed") {
        return std::make_unique<RedeedEnv>(RedeedConfig::from_json_text(text));
    }
    if (domain == "ddst") {
        return std::make_unique<DangerousDstEnv>(DdstMap::from_json_text(text));
    }
    throw contract_violation("unknown domain id '" + domain + "'");
}

}  // namespace dmcts::envs
