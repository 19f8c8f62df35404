#include "ctmetric/logic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ctmetric/errors.hpp"

namespace ctmetric {

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw validation_error("rational: denominator must be positive");
    if (n < 0) throw validation_error("rational: logic constants are nonnegative");
    const std::int64_t g = std::gcd(n, d);
    num = n / g;
    den = d / g;
    if (num > den) throw validation_error("rational: logic constants lie in [0,1]");
}

Rational Rational::one_minus(const Rational& q) { return Rational(q.den - q.num, q.den); }

Rational Rational::sub_clamped(const Rational& p, const Rational& q) {
    const std::int64_t n = p.num * q.den - q.num * p.den;
    if (n <= 0) return Rational(0, 1);
    return Rational(n, p.den * q.den);
}

Rational Rational::min(const Rational& p, const Rational& q) {
    return (p.num * q.den <= q.num * p.den) ? p : q;
}

namespace {

LogicExprPtr make(LogicExpr e) { return std::make_shared<const LogicExpr>(std::move(e)); }

}  // namespace

LogicExprPtr LogicExpr::constant(Rational q) {
    LogicExpr e;
    e.kind = Kind::Const;
    e.q = q;
    return make(std::move(e));
}

LogicExprPtr LogicExpr::obs() {
    LogicExpr e;
    e.kind = Kind::Obs;
    return make(std::move(e));
}

LogicExprPtr LogicExpr::min_of(LogicExprPtr a, LogicExprPtr b) {
    LogicExpr e;
    e.kind = Kind::Min;
    e.left = std::move(a);
    e.right = std::move(b);
    return make(std::move(e));
}

LogicExprPtr LogicExpr::neg(LogicExprPtr f) {
    LogicExpr e;
    e.kind = Kind::Neg;
    e.left = std::move(f);
    return make(std::move(e));
}

LogicExprPtr LogicExpr::sub(LogicExprPtr f, Rational q) {
    LogicExpr e;
    e.kind = Kind::SubQ;
    e.left = std::move(f);
    e.q = q;
    return make(std::move(e));
}

LogicExprPtr LogicExpr::shift(double t, LogicExprPtr f) {
    if (t < 0.0) throw validation_error("logic: shift times are nonnegative");
    LogicExpr e;
    e.kind = Kind::Shift;
    e.time = t;
    e.left = std::move(f);
    return make(std::move(e));
}

LogicExprPtr LogicExpr::add(LogicExprPtr f, Rational q) {
    return neg(sub(neg(std::move(f)), q));
}

std::size_t LogicExpr::depth() const {
    switch (kind) {
        case Kind::Const:
        case Kind::Obs:
            return 0;
        case Kind::Min:
            return 1 + std::max(left->depth(), right->depth());
        default:
            return 1 + left->depth();
    }
}

bool equal(const LogicExpr& a, const LogicExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case LogicExpr::Kind::Const:
            return a.q == b.q;
        case LogicExpr::Kind::Obs:
            return true;
        case LogicExpr::Kind::Min:
            return equal(*a.left, *b.left) && equal(*a.right, *b.right);
        case LogicExpr::Kind::Neg:
            return equal(*a.left, *b.left);
        case LogicExpr::Kind::SubQ:
            return a.q == b.q && equal(*a.left, *b.left);
        case LogicExpr::Kind::Shift:
            return a.time == b.time && equal(*a.left, *b.left);
    }
    return false;
}

LogicExprPtr canonicalize(const LogicExprPtr& f) {
    switch (f->kind) {
        case LogicExpr::Kind::Const:
        case LogicExpr::Kind::Obs:
            return f;
        case LogicExpr::Kind::Neg: {
            LogicExprPtr inner = canonicalize(f->left);
            if (inner->kind == LogicExpr::Kind::Neg) return inner->left;
            if (inner->kind == LogicExpr::Kind::Const)
                return LogicExpr::constant(Rational::one_minus(inner->q));
            return LogicExpr::neg(inner);
        }
        case LogicExpr::Kind::SubQ: {
            LogicExprPtr inner = canonicalize(f->left);
            if (f->q.num == 0) return inner;
            if (inner->kind == LogicExpr::Kind::Const)
                return LogicExpr::constant(Rational::sub_clamped(inner->q, f->q));
            return LogicExpr::sub(inner, f->q);
        }
        case LogicExpr::Kind::Shift: {
            LogicExprPtr inner = canonicalize(f->left);
            if (f->time == 0.0) return inner;
            return LogicExpr::shift(f->time, inner);
        }
        case LogicExpr::Kind::Min: {
            LogicExprPtr a = canonicalize(f->left);
            LogicExprPtr b = canonicalize(f->right);
            if (equal(*a, *b)) return a;
            if (a->kind == LogicExpr::Kind::Const && b->kind == LogicExpr::Kind::Const)
                return LogicExpr::constant(Rational::min(a->q, b->q));
            if (a->kind == LogicExpr::Kind::Const && a->q.num == 0) return a;
            if (b->kind == LogicExpr::Kind::Const && b->q.num == 0) return b;
            if (a->kind == LogicExpr::Kind::Const && a->q.num == a->q.den) return b;
            if (b->kind == LogicExpr::Kind::Const && b->q.num == b->q.den) return a;
            return LogicExpr::min_of(a, b);
        }
    }
    return f;
}

double eval(const LogicExpr& f, const Model& model, const DiscountSpec& disc, StateId x) {
    switch (f.kind) {
        case LogicExpr::Kind::Const:
            return f.q.value();
        case LogicExpr::Kind::Obs:
            return model.obs(x);
        case LogicExpr::Kind::Min:
            return std::min(eval(*f.left, model, disc, x), eval(*f.right, model, disc, x));
        case LogicExpr::Kind::Neg:
            return 1.0 - eval(*f.left, model, disc, x);
        case LogicExpr::Kind::SubQ:
            return std::max(0.0, eval(*f.left, model, disc, x) - f.q.value());
        case LogicExpr::Kind::Shift: {
            // exp underflows to 0 for huge times; pin theta inside (0,1].
            const double theta =
                std::max(std::exp(-model.rate() * f.time), std::numeric_limits<double>::min());
            const DiscreteDistribution d = kernel_at(model, x, theta);
            double expectation = 0.0;
            for (std::size_t k = 0; k < d.support.size(); ++k)
                expectation += d.weights[k] * eval(*f.left, model, disc, d.support[k]);
            return std::pow(disc.c, f.time) * expectation;
        }
    }
    return 0.0;
}

double pair_gap(const LogicExpr& f, const Model& model, const DiscountSpec& disc, StateId x,
                StateId y) {
    const LogicExpr* g = &f;
    while (g->kind == LogicExpr::Kind::Neg) g = g->left.get();
    return std::abs(eval(*g, model, disc, x) - eval(*g, model, disc, y));
}

EnumConfig default_enum_config(const Model& model) {
    EnumConfig cfg;
    for (int k = 0; k <= 8; ++k) cfg.constants.emplace_back(k, 8);
    for (int k = 0; k <= 4; ++k) cfg.times.push_back(k * std::log(2.0) / model.rate());
    return cfg;
}

namespace {

struct VectorKey {
    std::vector<std::int64_t> q;
    bool operator==(const VectorKey& other) const { return q == other.q; }
};

struct VectorKeyHash {
    std::size_t operator()(const VectorKey& k) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (std::int64_t v : k.q) {
            h ^= static_cast<std::size_t>(v);
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

VectorKey quantize(const std::vector<double>& values) {
    VectorKey key;
    key.q.reserve(values.size());
    for (double v : values) key.q.push_back(std::llround(v * 1e12));
    return key;
}

// Dense kernel matrix and discount factor for one shift time.
struct ShiftOp {
    double factor;
    std::vector<double> matrix;  // state_count x state_count
};

}  // namespace

Enumeration enumerate_logic(const Model& model, const DiscountSpec& disc,
                            const EnumConfig& config) {
    if (config.constants.empty() || config.times.empty())
        throw precondition_error("enumerate_logic: constant and time pools must be nonempty");

    const std::size_t n = model.state_count();
    Enumeration out;
    std::unordered_set<VectorKey, VectorKeyHash> seen;
    std::size_t examined = 0;

    auto admit = [&](std::vector<double> values, LogicExprPtr expr) {
        ++examined;
        if (examined > config.budget) {
            out.truncated = true;
            return false;
        }
        VectorKey key = quantize(values);
        if (!seen.insert(std::move(key)).second) return true;
        out.formulas.push_back({std::move(values), std::move(expr)});
        return true;
    };

    // Depth 0: the observable first, then the constant pool.
    {
        std::vector<double> obs_values(n);
        for (StateId s = 0; s < n; ++s) obs_values[s] = model.obs(s);
        admit(std::move(obs_values), LogicExpr::obs());
        for (const Rational& q : config.constants)
            admit(std::vector<double>(n, q.value()), LogicExpr::constant(q));
    }

    std::vector<ShiftOp> shifts;
    for (double t : config.times) {
        if (t == 0.0) continue;  // the zero shift is the identity
        ShiftOp op;
        op.factor = std::pow(disc.c, t);
        op.matrix.assign(n * n, 0.0);
        const double theta = std::exp(-model.rate() * t);
        for (StateId s = 0; s < n; ++s)
            for (const auto& [target, poly] : model.kernel_row(s))
                op.matrix[s * n + target] = poly(theta);
        shifts.push_back(std::move(op));
    }
    std::vector<double> shift_times;
    for (double t : config.times)
        if (t != 0.0) shift_times.push_back(t);

    std::size_t layer_begin = 0;
    for (std::size_t depth = 1; depth <= config.max_depth && !out.truncated; ++depth) {
        const std::size_t layer_end = out.formulas.size();

        // Unary images of the previous layer.
        for (std::size_t idx = layer_begin; idx < layer_end && !out.truncated; ++idx) {
            // Copy: admit() may reallocate the formula store.
            const std::vector<double> values = out.formulas[idx].values;
            const LogicExprPtr expr = out.formulas[idx].expr;

            std::vector<double> negated(n);
            for (std::size_t s = 0; s < n; ++s) negated[s] = 1.0 - values[s];
            if (!admit(std::move(negated), LogicExpr::neg(expr))) break;

            for (const Rational& q : config.constants) {
                if (q.num == 0) continue;
                std::vector<double> lowered(n);
                const double qv = q.value();
                for (std::size_t s = 0; s < n; ++s) lowered[s] = std::max(0.0, values[s] - qv);
                if (!admit(std::move(lowered), LogicExpr::sub(expr, q))) break;
            }
            if (out.truncated) break;

            for (std::size_t ts = 0; ts < shifts.size(); ++ts) {
                std::vector<double> shifted(n, 0.0);
                for (std::size_t s = 0; s < n; ++s) {
                    double acc = 0.0;
                    for (std::size_t y = 0; y < n; ++y)
                        acc += shifts[ts].matrix[s * n + y] * values[y];
                    shifted[s] = shifts[ts].factor * acc;
                }
                if (!admit(std::move(shifted), LogicExpr::shift(shift_times[ts], expr))) break;
            }
        }

        // Minima with one operand in the previous layer.
        for (std::size_t a = layer_begin; a < layer_end && !out.truncated; ++a)
            for (std::size_t b = 0; b < a && !out.truncated; ++b) {
                std::vector<double> values(n);
                for (std::size_t s = 0; s < n; ++s)
                    values[s] = std::min(out.formulas[a].values[s], out.formulas[b].values[s]);
                admit(std::move(values),
                      LogicExpr::min_of(out.formulas[a].expr, out.formulas[b].expr));
            }

        layer_begin = layer_end;
    }
    return out;
}

BoundResult lambda_lower_bound(const Model& model, const DiscountSpec& disc, StateId x, StateId y,
                               const EnumConfig& config) {
    Enumeration enumeration = enumerate_logic(model, disc, config);
    BoundResult result;
    result.truncated = enumeration.truncated;
    for (const ScoredFormula& f : enumeration.formulas) {
        const double gap = std::abs(f.values[x] - f.values[y]);
        if (!result.witness || gap > result.bound) {
            result.bound = gap;
            result.witness = f.expr;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Textual syntax

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c))
            throw parse_error(std::string("formula: expected '") + c + "' at offset " +
                              std::to_string(pos));
    }

    std::string ident() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        return std::string(text.substr(start, pos - start));
    }

    double number() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' || text[pos] == '+' || text[pos] == '-'))
            ++pos;
        if (start == pos) throw parse_error("formula: expected a number at offset " +
                                            std::to_string(start));
        return std::stod(std::string(text.substr(start, pos - start)));
    }

    Rational rational() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) {
            // decimal form
            pos = start;
            return decimal_rational();
        }
        std::int64_t n = std::stoll(std::string(text.substr(start, pos - start)));
        skip_space();
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            skip_space();
            std::size_t dstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (dstart == pos) throw parse_error("formula: expected a denominator");
            return Rational(n, std::stoll(std::string(text.substr(dstart, pos - dstart))));
        }
        if (pos < text.size() && text[pos] == '.') {
            pos = start;
            return decimal_rational();
        }
        return Rational(n, 1);
    }

    Rational decimal_rational() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        std::int64_t whole = (pos > start) ? std::stoll(std::string(text.substr(start, pos - start)))
                                           : 0;
        std::int64_t num = whole, den = 1;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t fstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            for (std::size_t k = fstart; k < pos; ++k) {
                num = num * 10 + (text[k] - '0');
                den *= 10;
            }
        }
        return Rational(num, den);
    }

    LogicExprPtr expr() {
        skip_space();
        if (pos >= text.size()) throw parse_error("formula: unexpected end of input");
        if (std::isalpha(static_cast<unsigned char>(text[pos]))) {
            const std::string name = ident();
            if (name == "obs") return LogicExpr::obs();
            expect('(');
            if (name == "min") {
                LogicExprPtr a = expr();
                expect(',');
                LogicExprPtr b = expr();
                expect(')');
                return LogicExpr::min_of(a, b);
            }
            if (name == "not") {
                LogicExprPtr a = expr();
                expect(')');
                return LogicExpr::neg(a);
            }
            if (name == "sub" || name == "add") {
                LogicExprPtr a = expr();
                expect(',');
                Rational q = rational();
                expect(')');
                return name == "sub" ? LogicExpr::sub(a, q) : LogicExpr::add(a, q);
            }
            if (name == "shift") {
                const double t = number();
                expect(',');
                LogicExprPtr a = expr();
                expect(')');
                return LogicExpr::shift(t, a);
            }
            throw parse_error("formula: unknown operator '" + name + "'");
        }
        return LogicExpr::constant(rational());
    }
};

std::string rational_to_string(const Rational& q) {
    if (q.den == 1) return std::to_string(q.num);
    return std::to_string(q.num) + "/" + std::to_string(q.den);
}

}  // namespace

LogicExprPtr parse_formula(std::string_view text) {
    Parser p{text};
    LogicExprPtr e = p.expr();
    p.skip_space();
    if (p.pos != text.size())
        throw parse_error("formula: trailing input at offset " + std::to_string(p.pos));
    return e;
}

std::string to_string(const LogicExpr& f) {
    switch (f.kind) {
        case LogicExpr::Kind::Const:
            return rational_to_string(f.q);
        case LogicExpr::Kind::Obs:
            return "obs";
        case LogicExpr::Kind::Min:
            return "min(" + to_string(*f.left) + "," + to_string(*f.right) + ")";
        case LogicExpr::Kind::Neg: {
            // Recognize the derived truncated addition for readability.
            const LogicExpr& inner = *f.left;
            if (inner.kind == LogicExpr::Kind::SubQ &&
                inner.left->kind == LogicExpr::Kind::Neg)
                return "add(" + to_string(*inner.left->left) + "," +
                       rational_to_string(inner.q) + ")";
            return "not(" + to_string(*f.left) + ")";
        }
        case LogicExpr::Kind::SubQ:
            return "sub(" + to_string(*f.left) + "," + rational_to_string(f.q) + ")";
        case LogicExpr::Kind::Shift: {
            std::ostringstream os;
            os << "shift(";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.12g", f.time);
            os << buf << "," << to_string(*f.left) << ")";
            return os.str();
        }
    }
    return "";
}

}  // namespace ctmetric
