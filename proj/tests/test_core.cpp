#include <doctest.h>

#include <cmath>
#include <random>

#include "ctmetric/errors.hpp"
#include "ctmetric/model.hpp"
#include "support.hpp"

using namespace ctmetric;
using testsupport::sid;
using testsupport::toy_model;

namespace {

double weight_of(const DiscreteDistribution& d, std::size_t point) {
    for (std::size_t k = 0; k < d.support.size(); ++k)
        if (d.support[k] == point) return d.weights[k];
    return 0.0;
}

}  // namespace

TEST_CASE("theta polynomial evaluates lowest degree first") {
    ThetaPolynomial p({0.5, -0.25, 0.125});
    CHECK(p(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(1.0) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("discount spec ties beta to c and the rate") {
    const DiscountSpec d = DiscountSpec::from_factor(std::exp(-1.0), 1.0);
    CHECK(d.beta == doctest::Approx(1.0).epsilon(1e-14));
    d.validate(1.0);

    CHECK_THROWS_AS(DiscountSpec::from_factor(1.0, 1.0), validation_error);
    CHECK_THROWS_AS(DiscountSpec::from_factor(0.0, 1.0), validation_error);
    CHECK_THROWS_AS(DiscountSpec::from_factor(0.5, 0.0), validation_error);
}

TEST_CASE("toy model loads with the expected kernels") {
    const Model m = toy_model(0.5);
    REQUIRE(m.state_count() == 5);
    CHECK(m.obs(sid(m, "0")) == 1.0);
    CHECK(m.obs(sid(m, "dead")) == 0.0);
    CHECK(m.obs(sid(m, "x")) == 0.5);

    SUBCASE("theta = 1 is the identity for every state") {
        for (StateId s = 0; s < m.state_count(); ++s) {
            const DiscreteDistribution d = kernel_at(m, s, 1.0);
            REQUIRE(d.support.size() == 1);
            CHECK(d.support[0] == s);
            CHECK(d.weights[0] == 1.0);
        }
    }

    SUBCASE("x at theta = 1/2 splits evenly between 0 and x") {
        const DiscreteDistribution d = kernel_at(m, sid(m, "x"), 0.5);
        REQUIRE(d.support.size() == 2);
        CHECK(weight_of(d, sid(m, "0")) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(weight_of(d, sid(m, "x")) == doctest::Approx(0.5).epsilon(1e-15));
    }

    SUBCASE("z at theta = 1/2 is {0: 1/4, dead: 1/4, z: 1/2}") {
        const DiscreteDistribution d = kernel_at(m, sid(m, "z"), 0.5);
        REQUIRE(d.support.size() == 3);
        CHECK(weight_of(d, sid(m, "0")) == doctest::Approx(0.25));
        CHECK(weight_of(d, sid(m, "dead")) == doctest::Approx(0.25));
        CHECK(weight_of(d, sid(m, "z")) == doctest::Approx(0.5));
    }

    SUBCASE("theta outside (0,1] is rejected") {
        CHECK_THROWS_AS(kernel_at(m, 0, 0.0), precondition_error);
        CHECK_THROWS_AS(kernel_at(m, 0, 1.5), precondition_error);
    }
}

TEST_CASE("kernel rows stay honest across the theta sweep") {
    std::mt19937_64 rng(7);
    std::vector<Model> models;
    models.push_back(toy_model(0.2));
    models.push_back(toy_model(0.8));
    for (int k = 0; k < 5; ++k) models.push_back(testsupport::random_model(2 + k % 4, rng));

    for (const Model& m : models)
        for (double theta : {1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0})
            for (StateId s = 0; s < m.state_count(); ++s) {
                const DiscreteDistribution d = kernel_at(m, s, theta);
                double total = 0.0;
                for (double w : d.weights) total += w;
                CHECK(std::abs(total - 1.0) <= 1e-12);
            }
}

TEST_CASE("model validation names the violated invariant") {
    SUBCASE("row sum 0.9 fails honesty") {
        const std::string bad = R"({
          "states": ["a", "b"], "obs": [0.0, 1.0], "lambda": 1.0,
          "kernel": {"a": [["a", [0.0, 0.9]], ["b", [0.9, -0.9]]],
                     "b": [["b", [1.0]]]}})";
        CHECK_THROWS_WITH_AS(load_model_from_string(bad), doctest::Contains("honesty"),
                             validation_error);
    }
    SUBCASE("obs outside [0,1]") {
        const std::string bad = R"({
          "states": ["a"], "obs": [1.5], "lambda": 1.0,
          "kernel": {"a": [["a", [1.0]]]}})";
        CHECK_THROWS_WITH_AS(load_model_from_string(bad), doctest::Contains("obs"),
                             validation_error);
    }
    SUBCASE("missing identity at theta = 1") {
        const std::string bad = R"({
          "states": ["a", "b"], "obs": [0.0, 1.0], "lambda": 1.0,
          "kernel": {"a": [["a", [0.5]], ["b", [0.5]]],
                     "b": [["b", [1.0]]]}})";
        CHECK_THROWS_WITH_AS(load_model_from_string(bad), doctest::Contains("identity"),
                             validation_error);
        // the same kernel is accepted as a single-step model
        const std::string discrete = R"({
          "states": ["a", "b"], "obs": [0.0, 1.0], "lambda": 1.0, "discrete_time": true,
          "kernel": {"a": [["a", [0.5]], ["b", [0.5]]],
                     "b": [["b", [1.0]]]}})";
        CHECK_NOTHROW(load_model_from_string(discrete));
    }
    SUBCASE("malformed JSON is a parse error") {
        CHECK_THROWS_AS(load_model_from_string("{nope"), parse_error);
        CHECK_THROWS_AS(load_model_from_string(R"({"states": ["a"]})"), parse_error);
    }
    SUBCASE("kernel entry escaping [0,1]") {
        const std::string bad = R"({
          "states": ["a", "b"], "obs": [0.0, 1.0], "lambda": 1.0,
          "kernel": {"a": [["a", [-0.5, 1.5]], ["b", [1.5, -1.5]]],
                     "b": [["b", [1.0]]]}})";
        CHECK_THROWS_AS(load_model_from_string(bad), validation_error);
    }
    SUBCASE("kernel referencing an unknown state") {
        const std::string bad = R"({
          "states": ["a"], "obs": [0.0], "lambda": 1.0,
          "kernel": {"a": [["ghost", [1.0]]]}})";
        CHECK_THROWS_AS(load_model_from_string(bad), parse_error);
    }
}

TEST_CASE("obs metric") {
    const Model m = toy_model(0.5);
    const PseudometricTable d0 = obs_metric(m);
    CHECK(d0(sid(m, "0"), sid(m, "dead")) == 1.0);
    CHECK(d0(sid(m, "x"), sid(m, "y")) == 0.0);
    d0.validate();

    SUBCASE("constant obs gives the zero table") {
        const std::string json = R"({
          "states": ["a", "b"], "obs": [0.3, 0.3], "lambda": 1.0,
          "kernel": {"a": [["a", [0.0, 1.0]], ["b", [1.0, -1.0]]],
                     "b": [["b", [1.0]]]}})";
        const Model flat = load_model_from_string(json);
        CHECK(obs_metric(flat)(0, 1) == 0.0);
    }

    SUBCASE("random models always produce valid tables") {
        std::mt19937_64 rng(11);
        for (int k = 0; k < 20; ++k) {
            const Model rm = testsupport::random_model(2 + k % 5, rng);
            CHECK_NOTHROW(obs_metric(rm).validate());
        }
    }
}

TEST_CASE("pseudometric table invariants") {
    SUBCASE("rejects a broken triangle") {
        std::vector<double> e = {0.0, 1.0, 0.1, 1.0, 0.0, 0.1, 0.1, 0.1, 0.0};
        CHECK_THROWS_AS(PseudometricTable::from_entries(3, e), validation_error);
    }
    SUBCASE("closure repairs it") {
        PseudometricTable t(3);
        t.set(0, 1, 1.0);
        t.set(0, 2, 0.1);
        t.set(1, 2, 0.1);
        t.close_triangle();
        CHECK_NOTHROW(t.validate());
        CHECK(t(0, 1) == doctest::Approx(0.2));
    }
    SUBCASE("rejects asymmetry and a nonzero diagonal") {
        std::vector<double> e = {0.0, 0.5, 0.4, 0.0};
        CHECK_THROWS_AS(PseudometricTable::from_entries(2, e), validation_error);
        std::vector<double> diag = {0.1, 0.5, 0.5, 0.1};
        CHECK_THROWS_AS(PseudometricTable::from_entries(2, diag), validation_error);
    }
}

TEST_CASE("distribution invariants") {
    DiscreteDistribution d;
    d.support = {0, 1};
    d.weights = {0.5, 0.5};
    CHECK_NOTHROW(d.validate());

    d.weights = {0.4, 0.5};
    CHECK_THROWS_AS(d.validate(), validation_error);

    d.support = {1, 1};
    d.weights = {0.5, 0.5};
    CHECK_THROWS_AS(d.validate(), validation_error);
}
