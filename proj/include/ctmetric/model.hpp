#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctmetric/pseudometric.hpp"

namespace ctmetric {

/// Index into the owning model's state list.
using StateId = std::size_t;

/**
 * Polynomial in theta = exp(-lambda * t), coefficients lowest degree first.
 * Kernel entries are stored this way so that the time axis [0, inf) becomes
 * the compact interval (0, 1].
 */
class ThetaPolynomial {
  public:
    ThetaPolynomial() = default;
    explicit ThetaPolynomial(std::vector<double> coefficients)
        : coeffs_(std::move(coefficients)) {}

    double operator()(double theta) const {
        double v = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * theta + coeffs_[k];
        return v;
    }

    const std::vector<double>& coefficients() const { return coeffs_; }

  private:
    std::vector<double> coeffs_;
};

/// Finitely supported probability distribution over point indices.
struct DiscreteDistribution {
    std::vector<std::size_t> support;
    std::vector<double> weights;

    /// Throws validation_error unless weights are nonnegative, sum to 1
    /// within 1e-12 and support entries are distinct.
    void validate() const;
};

/**
 * Discount factor c in (0,1) together with beta = -ln(c)/lambda, so that
 * c^t = theta^beta under theta = exp(-lambda * t).
 */
struct DiscountSpec {
    double c = 0.0;
    double beta = 0.0;

    static DiscountSpec from_factor(double c, double lambda);
    void validate(double lambda) const;
};

/**
 * Finite-state continuous-time Markov process with a single global rate,
 * theta-polynomial kernels and an observable in [0,1] per state.
 */
class Model {
  public:
    using KernelRow = std::vector<std::pair<StateId, ThetaPolynomial>>;

    Model(std::vector<std::string> state_names, std::vector<double> obs, double lambda,
          std::vector<KernelRow> kernel, bool discrete_time = false);

    std::size_t state_count() const { return names_.size(); }
    const std::string& state_name(StateId s) const { return names_[s]; }
    std::optional<StateId> state_index(std::string_view name) const;

    double obs(StateId s) const { return obs_[s]; }
    double rate() const { return lambda_; }

    /// True for models meant only for the single-step (discrete-time)
    /// functional; these skip the identity-at-theta=1 check.
    bool discrete_time() const { return discrete_time_; }

    const KernelRow& kernel_row(StateId s) const { return kernel_[s]; }

    /// Checks honesty, the identity at theta = 1, per-entry polynomial range
    /// and the obs range on the validation grid; throws validation_error.
    void validate() const;

  private:
    std::vector<std::string> names_;
    std::vector<double> obs_;
    double lambda_ = 1.0;
    std::vector<KernelRow> kernel_;
    bool discrete_time_ = false;
};

/// Parses a model from its JSON file format and validates it.
Model load_model(const std::filesystem::path& path);

/// Same, from an in-memory JSON string.
Model load_model_from_string(std::string_view text);

/// Distribution of the process at theta = exp(-lambda t), started in x.
DiscreteDistribution kernel_at(const Model& model, StateId x, double theta);

/// The base pseudometric |obs(x) - obs(y)|.
PseudometricTable obs_metric(const Model& model);

}  // namespace ctmetric
