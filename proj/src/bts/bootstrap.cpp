#include "dmcts/bts/bootstrap.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace dmcts {

BootstrapDistribution::BootstrapDistribution(int replicate_count, Criterion mode,
                                             int objective_count, double alpha_prior)
    : mode_(mode), prior_(alpha_prior) {
    if (replicate_count < 1) {
        throw contract_violation("BootstrapDistribution: replicate count must be >= 1");
    }
    int n = (mode == Criterion::ESR) ? 1 : objective_count;
    if (n < 1) {
        throw contract_violation("BootstrapDistribution: objective count must be >= 1");
    }
    if (!(alpha_prior > 0.0)) {
        throw contract_violation("BootstrapDistribution: alpha prior must be positive");
    }
    alpha_ = Eigen::MatrixXd::Constant(replicate_count, n, alpha_prior);
    beta_ = Eigen::VectorXd::Ones(replicate_count);
}

void BootstrapDistribution::update(double observation, Rng& rng, FlipLog* log) {
    const int J = replicate_count();
    FlipLog flips(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) flips[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1 : 0;
    if (log) log->insert(log->end(), flips.begin(), flips.end());
    apply_flips(observation, flips);
}

void BootstrapDistribution::update(const ReturnVector& observation, Rng& rng, FlipLog* log) {
    const int J = replicate_count();
    FlipLog flips(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) flips[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1 : 0;
    if (log) log->insert(log->end(), flips.begin(), flips.end());
    apply_flips(observation, flips);
}

void BootstrapDistribution::apply_flips(double observation, std::span<const std::uint8_t> flips) {
    if (mode_ != Criterion::ESR) {
        throw dimension_mismatch("BootstrapDistribution: scalar observation fed to SER-mode distribution");
    }
    if (flips.size() != static_cast<std::size_t>(replicate_count())) {
        throw contract_violation("BootstrapDistribution: one flip per replicate required");
    }
    for (int j = 0; j < replicate_count(); ++j) {
        if (flips[static_cast<std::size_t>(j)]) {
            alpha_(j, 0) += observation;
            beta_[j] += 1.0;
        }
    }
    ++updates_;
}

void BootstrapDistribution::apply_flips(const ReturnVector& observation,
                                        std::span<const std::uint8_t> flips) {
    if (mode_ != Criterion::SER) {
        throw dimension_mismatch("BootstrapDistribution: vector observation fed to ESR-mode distribution");
    }
    if (observation.size() != alpha_.cols()) {
        throw dimension_mismatch("BootstrapDistribution: objective counts differ (" +
                                 std::to_string(observation.size()) + " vs " +
                                 std::to_string(alpha_.cols()) + ")");
    }
    if (flips.size() != static_cast<std::size_t>(replicate_count())) {
        throw contract_violation("BootstrapDistribution: one flip per replicate required");
    }
    for (int j = 0; j < replicate_count(); ++j) {
        if (flips[static_cast<std::size_t>(j)]) {
            alpha_.row(j) += observation.transpose();
            beta_[j] += 1.0;
        }
    }
    ++updates_;
}

void BootstrapDistribution::check_replicate(int j) const {
    if (j < 0 || j >= replicate_count()) {
        throw std::out_of_range("BootstrapDistribution: replicate index " + std::to_string(j) +
                                " out of range [0, " + std::to_string(replicate_count()) + ")");
    }
}

double BootstrapDistribution::replicate_mean(int j) const {
    check_replicate(j);
    return alpha_(j, 0) / beta_[j];
}

ReturnVector BootstrapDistribution::replicate_mean_vector(int j) const {
    check_replicate(j);
    return alpha_.row(j).transpose() / beta_[j];
}

double BootstrapDistribution::pooled_mean() const {
    return alpha_.col(0).sum() / beta_.sum();
}

ReturnVector BootstrapDistribution::pooled_mean_vector() const {
    return alpha_.colwise().sum().transpose() / beta_.sum();
}

double BootstrapDistribution::beta(int j) const {
    check_replicate(j);
    return beta_[j];
}

double BootstrapDistribution::alpha_scalar(int j) const {
    check_replicate(j);
    return alpha_(j, 0);
}

std::string BootstrapDistribution::to_json() const {
    nlohmann::json j;
    j["mode"] = (mode_ == Criterion::ESR) ? "esr" : "ser";
    j["prior"] = prior_;
    j["updates"] = updates_;
    nlohmann::json reps = nlohmann::json::array();
    for (int r = 0; r < replicate_count(); ++r) {
        nlohmann::json rep;
        if (mode_ == Criterion::ESR) {
            rep["alpha"] = alpha_(r, 0);
        } else {
            std::vector<double> a(alpha_.cols());
            for (Eigen::Index c = 0; c < alpha_.cols(); ++c) a[static_cast<std::size_t>(c)] = alpha_(r, c);
            rep["alpha"] = a;
        }
        rep["beta"] = beta_[r];
        reps.push_back(rep);
    }
    j["replicates"] = reps;
    return j.dump();
}

BootstrapDistribution BootstrapDistribution::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Criterion mode = (j.at("mode").get<std::string>() == "esr") ? Criterion::ESR : Criterion::SER;
    double prior = j.at("prior").get<double>();
    const auto& reps = j.at("replicates");
    if (reps.empty()) {
        throw contract_violation("BootstrapDistribution snapshot: empty replicate list");
    }
    int n = 1;
    if (mode == Criterion::SER) n = static_cast<int>(reps[0].at("alpha").size());
    BootstrapDistribution d(static_cast<int>(reps.size()), mode, n, prior);
    for (std::size_t r = 0; r < reps.size(); ++r) {
        if (mode == Criterion::ESR) {
            d.alpha_(static_cast<Eigen::Index>(r), 0) = reps[r].at("alpha").get<double>();
        } else {
            auto a = reps[r].at("alpha").get<std::vector<double>>();
            for (std::size_t c = 0; c < a.size(); ++c) {
                d.alpha_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[c];
            }
        }
        d.beta_[static_cast<Eigen::Index>(r)] = reps[r].at("beta").get<double>();
    }
    d.updates_ = j.value("updates", 0L);
    return d;
}

namespace {

double child_score_sampled(const BootstrapDistribution& d, const UtilityFunction* u, Rng& rng) {
    int j = rng.uniform_int(d.replicate_count());
    if (d.mode() == Criterion::ESR) {
        return d.replicate_mean(j);
    }
    return (*u)(d.replicate_mean_vector(j));
}

double child_score_pooled(const BootstrapDistribution& d, const UtilityFunction* u) {
    if (d.mode() == Criterion::ESR) {
        return d.pooled_mean();
    }
    return (*u)(d.pooled_mean_vector());
}

void check_children(std::span<const BootstrapDistribution* const> children,
                    const UtilityFunction* u, const char* where) {
    if (children.empty()) {
        throw contract_violation(std::string(where) + ": empty child list");
    }
    Criterion mode = children.front()->mode();
    for (const auto* c : children) {
        if (c->mode() != mode) {
            throw contract_violation(std::string(where) + ": mixed ESR/SER children");
        }
    }
    if (mode == Criterion::SER && u == nullptr) {
        throw contract_violation(std::string(where) + ": SER mode requires a utility function");
    }
    if (mode == Criterion::ESR && u != nullptr) {
        throw contract_violation(std::string(where) +
                                 ": ESR mode applies utility at update time, pass no utility here");
    }
}

}  // namespace

int thompson_select(std::span<const BootstrapDistribution* const> children,
                    const UtilityFunction* u, Rng& rng) {
    check_children(children, u, "thompson_select");
    int best = 0;
    double best_score = child_score_sampled(*children[0], u, rng);
    for (std::size_t i = 1; i < children.size(); ++i) {
        double s = child_score_sampled(*children[i], u, rng);
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int greedy_select(std::span<const BootstrapDistribution* const> children,
                  const UtilityFunction* u) {
    check_children(children, u, "greedy_select");
    int best = 0;
    double best_score = child_score_pooled(*children[0], u);
    for (std::size_t i = 1; i < children.size(); ++i) {
        double s = child_score_pooled(*children[i], u);
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace dmcts
