#include "ctmetric/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ctmetric/errors.hpp"

namespace ctmetric {

namespace {

constexpr int kGridCells = 1024;  // validation grid: k/1024 for k = 0..1024

std::string format_theta(double theta) {
    std::ostringstream os;
    os << theta;
    return os.str();
}

}  // namespace

void DiscreteDistribution::validate() const {
    if (support.size() != weights.size())
        throw validation_error("distribution: support/weight size mismatch");
    if (support.empty()) throw validation_error("distribution: empty support");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw validation_error("distribution: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw validation_error("distribution: weights sum to " + std::to_string(total) +
                               ", expected 1");
    std::set<std::size_t> seen(support.begin(), support.end());
    if (seen.size() != support.size())
        throw validation_error("distribution: duplicate support entry");
}

DiscountSpec DiscountSpec::from_factor(double c, double lambda) {
    if (!(c > 0.0 && c < 1.0))
        throw validation_error("discount: c must lie strictly in (0,1), got " + std::to_string(c));
    if (!(lambda > 0.0)) throw validation_error("discount: rate must be positive");
    return DiscountSpec{c, -std::log(c) / lambda};
}

void DiscountSpec::validate(double lambda) const {
    if (!(c > 0.0 && c < 1.0)) throw validation_error("discount: c outside (0,1)");
    if (std::abs(beta - (-std::log(c) / lambda)) > 1e-12)
        throw validation_error("discount: beta inconsistent with c and rate");
}

Model::Model(std::vector<std::string> state_names, std::vector<double> obs, double lambda,
             std::vector<KernelRow> kernel, bool discrete_time)
    : names_(std::move(state_names)),
      obs_(std::move(obs)),
      lambda_(lambda),
      kernel_(std::move(kernel)),
      discrete_time_(discrete_time) {
    validate();
}

std::optional<StateId> Model::state_index(std::string_view name) const {
    for (StateId s = 0; s < names_.size(); ++s)
        if (names_[s] == name) return s;
    return std::nullopt;
}

void Model::validate() const {
    const std::size_t n = names_.size();
    if (n == 0) throw validation_error("model: empty state list");
    if (obs_.size() != n) throw validation_error("model: obs length does not match state count");
    if (kernel_.size() != n)
        throw validation_error("model: kernel row count does not match state count");
    if (!(lambda_ > 0.0)) throw validation_error("model: rate lambda must be positive");

    for (StateId s = 0; s < n; ++s)
        if (!(obs_[s] >= 0.0 && obs_[s] <= 1.0))
            throw validation_error("model: obs(" + names_[s] + ") = " + std::to_string(obs_[s]) +
                                   " outside [0,1]");

    for (StateId s = 0; s < n; ++s) {
        const KernelRow& row = kernel_[s];
        if (row.empty()) throw validation_error("model: empty kernel row for state " + names_[s]);
        std::set<StateId> targets;
        for (const auto& [target, poly] : row) {
            if (target >= n)
                throw validation_error("model: kernel row for " + names_[s] +
                                       " references an unknown state index");
            if (!targets.insert(target).second)
                throw validation_error("model: duplicate kernel target " + names_[target] +
                                       " in row for " + names_[s]);
            if (poly.coefficients().empty())
                throw validation_error("model: empty polynomial in kernel row for " + names_[s]);
        }

        // Honesty and per-entry range on the validation grid.
        for (int k = 0; k <= kGridCells; ++k) {
            const double theta = static_cast<double>(k) / kGridCells;
            double sum = 0.0;
            for (const auto& [target, poly] : row) {
                const double p = poly(theta);
                if (p < -1e-12 || p > 1.0 + 1e-12)
                    throw validation_error("model: kernel entry " + names_[s] + " -> " +
                                           names_[target] + " = " + std::to_string(p) +
                                           " outside [0,1] at theta = " + format_theta(theta));
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw validation_error("model: honesty violated, kernel row for " + names_[s] +
                                       " sums to " + std::to_string(sum) +
                                       " at theta = " + format_theta(theta));
        }

        if (!discrete_time_) {
            // Identity at t = 0: theta = 1 must give the point mass on s.
            for (const auto& [target, poly] : row) {
                const double p = poly(1.0);
                const double expected = (target == s) ? 1.0 : 0.0;
                if (std::abs(p - expected) > 1e-12)
                    throw validation_error("model: identity at theta = 1 violated for state " +
                                           names_[s] + " (entry -> " + names_[target] + " is " +
                                           std::to_string(p) + ")");
            }
        }
    }
}

namespace {

Model model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("model: top level must be a JSON object");
    for (const std::string key : {"states", "obs", "lambda", "kernel"})
        if (!j.contains(key)) throw parse_error("model: missing field '" + key + "'");

    std::vector<std::string> names;
    for (const auto& s : j.at("states")) {
        if (!s.is_string()) throw parse_error("model: state names must be strings");
        names.push_back(s.get<std::string>());
    }
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) throw parse_error("model: duplicate state name");

    std::vector<double> obs;
    for (const auto& v : j.at("obs")) {
        if (!v.is_number()) throw parse_error("model: obs values must be numbers");
        obs.push_back(v.get<double>());
    }

    if (!j.at("lambda").is_number()) throw parse_error("model: lambda must be a number");
    const double lambda = j.at("lambda").get<double>();
    const bool discrete = j.value("discrete_time", false);

    auto index_of = [&](const std::string& name) -> StateId {
        for (StateId s = 0; s < names.size(); ++s)
            if (names[s] == name) return s;
        throw parse_error("model: kernel references unknown state '" + name + "'");
    };

    const auto& jker = j.at("kernel");
    if (!jker.is_object()) throw parse_error("model: kernel must be an object");
    std::vector<Model::KernelRow> kernel(names.size());
    std::vector<bool> filled(names.size(), false);
    for (const auto& [source, rows] : jker.items()) {
        const StateId s = index_of(source);
        if (filled[s]) throw parse_error("model: duplicate kernel row for '" + source + "'");
        filled[s] = true;
        if (!rows.is_array()) throw parse_error("model: kernel row for '" + source + "' must be an array");
        for (const auto& entry : rows) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_array())
                throw parse_error("model: kernel entries must be [target, coefficients] pairs");
            std::vector<double> coeffs;
            for (const auto& c : entry[1]) {
                if (!c.is_number()) throw parse_error("model: polynomial coefficients must be numbers");
                coeffs.push_back(c.get<double>());
            }
            kernel[s].emplace_back(index_of(entry[0].get<std::string>()),
                                   ThetaPolynomial(std::move(coeffs)));
        }
    }
    for (StateId s = 0; s < names.size(); ++s)
        if (!filled[s]) throw parse_error("model: missing kernel row for state '" + names[s] + "'");

    return Model(std::move(names), std::move(obs), lambda, std::move(kernel), discrete);
}

}  // namespace

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("model: cannot open file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("model: invalid JSON in " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

Model load_model_from_string(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("model: invalid JSON: ") + e.what());
    }
    return model_from_json(j);
}

DiscreteDistribution kernel_at(const Model& model, StateId x, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw precondition_error("kernel_at: theta must lie in (0,1], got " +
                                 std::to_string(theta));
    DiscreteDistribution d;
    for (const auto& [target, poly] : model.kernel_row(x)) {
        const double w = poly(theta);
        if (w > 0.0) {
            d.support.push_back(target);
            d.weights.push_back(w);
        }
    }
    return d;
}

PseudometricTable obs_metric(const Model& model) {
    const std::size_t n = model.state_count();
    PseudometricTable t(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = i + 1; j < n; ++j) t.set(i, j, std::abs(model.obs(i) - model.obs(j)));
    return t;
}

}  // namespace ctmetric
