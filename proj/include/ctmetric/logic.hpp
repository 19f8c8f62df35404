#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ctmetric/model.hpp"

namespace ctmetric {

/// Exact rational in [0,1]; keeps the truncated +/- arithmetic reproducible.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static Rational one_minus(const Rational& q);
    /// max(0, p - q)
    static Rational sub_clamped(const Rational& p, const Rational& q);
    static Rational min(const Rational& p, const Rational& q);

    bool operator==(const Rational& other) const {
        return num == other.num && den == other.den;
    }
};

class LogicExpr;
using LogicExprPtr = std::shared_ptr<const LogicExpr>;

/**
 * Real-valued test formulas: rational constants, the observable, pointwise
 * minimum, complement, truncated subtraction and the discounted time shift.
 */
class LogicExpr {
  public:
    enum class Kind { Const, Obs, Min, Neg, SubQ, Shift };

    Kind kind;
    Rational q;         // Const, SubQ
    double time = 0.0;  // Shift
    LogicExprPtr left;  // Min, Neg, SubQ, Shift
    LogicExprPtr right; // Min

    static LogicExprPtr constant(Rational q);
    static LogicExprPtr obs();
    static LogicExprPtr min_of(LogicExprPtr a, LogicExprPtr b);
    static LogicExprPtr neg(LogicExprPtr f);
    static LogicExprPtr sub(LogicExprPtr f, Rational q);
    static LogicExprPtr shift(double t, LogicExprPtr f);
    /// Truncated addition, derived: not(sub(not(f), q)).
    static LogicExprPtr add(LogicExprPtr f, Rational q);

    std::size_t depth() const;
};

bool equal(const LogicExpr& a, const LogicExpr& b);

/// Rewrites not(not(f)) -> f, min(f,f) -> f, sub(f,0) -> f, shift(0,f) -> f
/// and folds constants; semantics are unchanged.
LogicExprPtr canonicalize(const LogicExprPtr& f);

/// Structural evaluation at one state; always lands in [0,1].
double eval(const LogicExpr& f, const Model& model, const DiscountSpec& disc, StateId x);

/// |f(x) - f(y)|. Outer complements are peeled first, so the gap of not(f)
/// is bit-identical to the gap of f.
double pair_gap(const LogicExpr& f, const Model& model, const DiscountSpec& disc, StateId x,
                StateId y);

struct EnumConfig {
    std::size_t max_depth = 3;
    std::vector<Rational> constants;  // defaults to k/8
    std::vector<double> times;        // defaults to k*ln(2)/lambda, k = 0..4
    std::size_t budget = 2000000;     // candidates examined before truncating
};

/// Defaults from the module contract, with times scaled by the model's rate.
EnumConfig default_enum_config(const Model& model);

struct ScoredFormula {
    std::vector<double> values;  // one value per model state
    LogicExprPtr expr;
};

struct Enumeration {
    std::vector<ScoredFormula> formulas;
    bool truncated = false;
};

/**
 * Depth-bounded enumeration of formulas over the given constant/time pools.
 * Candidates are deduplicated by their value vector on the model's states,
 * so only semantically distinct formulas are kept. Deterministic.
 */
Enumeration enumerate_logic(const Model& model, const DiscountSpec& disc,
                            const EnumConfig& config);

struct BoundResult {
    double bound = 0.0;
    LogicExprPtr witness;
    bool truncated = false;
};

/// Best evaluation gap over the enumerated formulas: a certified lower bound
/// on the behavioural distance of (x, y).
BoundResult lambda_lower_bound(const Model& model, const DiscountSpec& disc, StateId x, StateId y,
                               const EnumConfig& config);

/// Textual syntax: obs | 0.5 | 3/8 | min(F,G) | not(F) | sub(F,q) | add(F,q)
/// | shift(t,F).
LogicExprPtr parse_formula(std::string_view text);
std::string to_string(const LogicExpr& f);

}  // namespace ctmetric
