#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctmetric/brownian.hpp"
#include "ctmetric/errors.hpp"
#include "ctmetric/fixpoint.hpp"
#include "ctmetric/functional.hpp"
#include "ctmetric/logic.hpp"
#include "ctmetric/model.hpp"
#include "ctmetric/transport.hpp"

namespace {

using ctmetric::Model;
using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.rfind("lin:", 0) == 0 || spec.rfind("geo:", 0) == 0) {
        const bool geometric = spec[0] == 'g';
        double lo = 0.0, hi = 0.0;
        int count = 0;
        if (std::sscanf(spec.c_str() + 4, "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
            !(hi > lo) || (geometric && !(lo > 0.0)))
            throw ctmetric::parse_error("bad grid spec '" + spec + "'");
        for (int k = 0; k < count; ++k) {
            const double f = static_cast<double>(k) / (count - 1);
            grid.push_back(geometric ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
        }
        return grid;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw ctmetric::parse_error("bad grid spec '" + spec + "'");
    return grid;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Output {
    std::string path = "-";

    void write(const std::string& content) const {
        if (path == "-") {
            std::cout << content;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ctmetric::parse_error("cannot open output file " + path);
        f << content;
    }
};

struct FixpointFlags {
    std::string model_path;
    double c = -1.0;  // < 0: default to exp(-lambda)
    std::string mode = "theta-grid";
    double fixed_theta = 1.0;
    double tol_fix = 1e-9;
    std::size_t max_iter = 200;
    std::size_t grid_points = 0;  // 0: env override or 8193
    std::size_t refine_iters = 60;
    bool no_accel = false;
    bool strict = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--model", model_path, "model JSON file")->required();
        cmd->add_option("--c", c, "discount factor in (0,1); default exp(-lambda)");
        cmd->add_option("--mode", mode, "theta-grid | discrete-step")
            ->check(CLI::IsMember({"theta-grid", "discrete-step"}));
        cmd->add_option("--fixed-theta", fixed_theta, "theta for discrete-step mode");
        cmd->add_option("--tol-fix", tol_fix, "fixpoint stopping tolerance");
        cmd->add_option("--max-iter", max_iter, "functional application budget");
        cmd->add_option("--grid-points", grid_points,
                        "theta grid size (or env CTMETRIC_GRID_POINTS; default 8193)");
        cmd->add_option("--refine-iters", refine_iters, "golden-section refinement steps");
        cmd->add_flag("--no-accel", no_accel, "plain iteration, no extrapolation");
        cmd->add_flag("--strict", strict, "exit 2 when the iteration does not converge");
    }

    std::size_t effective_grid() const {
        if (grid_points > 0) return grid_points;
        if (const char* env = std::getenv("CTMETRIC_GRID_POINTS")) {
            const long v = std::atol(env);
            if (v >= 2) return static_cast<std::size_t>(v);
        }
        return 8193;
    }

    ctmetric::SupStrategy strategy() const {
        ctmetric::SupStrategy s;
        s.mode = (mode == "discrete-step") ? ctmetric::SupStrategy::Mode::discrete_step
                                           : ctmetric::SupStrategy::Mode::theta_grid;
        s.grid_points = effective_grid();
        s.refine_iters = refine_iters;
        s.fixed_theta = fixed_theta;
        return s;
    }

    double effective_c(const Model& model) const {
        return c > 0.0 ? c : std::exp(-model.rate());
    }

    void emit_config(std::ostringstream& os, double eff_c) const {
        os << "# model: " << model_path << "\n";
        os << "# c: " << fmt(eff_c) << "\n";
        os << "# mode: " << mode << "\n";
        if (mode == "discrete-step") os << "# fixed_theta: " << fmt(fixed_theta) << "\n";
        os << "# grid_points: " << effective_grid() << "\n";
        os << "# refine_iters: " << refine_iters << "\n";
        os << "# tol_fix: " << fmt(tol_fix) << "\n";
        os << "# max_iter: " << max_iter << "\n";
        os << "# accelerate: " << (no_accel ? "false" : "true") << "\n";
    }

    ordered_json config_json(double eff_c) const {
        ordered_json j;
        j["model"] = model_path;
        j["c"] = eff_c;
        j["mode"] = mode;
        if (mode == "discrete-step") j["fixed_theta"] = fixed_theta;
        j["grid_points"] = effective_grid();
        j["refine_iters"] = refine_iters;
        j["tol_fix"] = tol_fix;
        j["max_iter"] = max_iter;
        j["accelerate"] = !no_accel;
        return j;
    }
};

ctmetric::IterationTrace run_iteration(const Model& model, const FixpointFlags& flags,
                                       ctmetric::DiscountSpec& disc_out) {
    disc_out = ctmetric::DiscountSpec::from_factor(flags.effective_c(model), model.rate());
    ctmetric::IterateOptions opt;
    opt.tol_fix = flags.tol_fix;
    opt.max_iter = flags.max_iter;
    opt.accelerate = !flags.no_accel;
    opt.jump_tol = flags.tol_fix;
    return ctmetric::iterate(model, disc_out, flags.strategy(), opt);
}

int cmd_distance(const FixpointFlags& flags, const Output& out, const std::string& format) {
    const Model model = ctmetric::load_model(flags.model_path);
    ctmetric::DiscountSpec disc;
    const ctmetric::IterationTrace trace = run_iteration(model, flags, disc);
    const ctmetric::PseudometricTable& table = trace.final_table();

    if (format == "csv") {
        std::ostringstream os;
        os << "# ctmetric distance\n";
        flags.emit_config(os, disc.c);
        os << "# converged: " << (trace.converged ? "true" : "false") << "\n";
        os << "# iterations: " << trace.iterations << "\n";
        os << "# final_residual: " << fmt(trace.final_residual()) << "\n";
        os << "state_a,state_b,value\n";
        for (std::size_t i = 0; i < model.state_count(); ++i)
            for (std::size_t j = i + 1; j < model.state_count(); ++j)
                os << model.state_name(i) << "," << model.state_name(j) << ","
                   << fmt(table(i, j)) << "\n";
        out.write(os.str());
    } else {
        ordered_json j;
        j["command"] = "distance";
        j["config"] = flags.config_json(disc.c);
        j["converged"] = trace.converged;
        j["iterations"] = trace.iterations;
        j["final_residual"] = trace.final_residual();
        j["rows"] = ordered_json::array();
        for (std::size_t i = 0; i < model.state_count(); ++i)
            for (std::size_t j2 = i + 1; j2 < model.state_count(); ++j2)
                j["rows"].push_back({{"state_a", model.state_name(i)},
                                     {"state_b", model.state_name(j2)},
                                     {"value", table(i, j2)}});
        out.write(j.dump(2) + "\n");
    }
    return (!trace.converged && flags.strict) ? 2 : 0;
}

int cmd_trace(const FixpointFlags& flags, const Output& out, const std::string& format) {
    const Model model = ctmetric::load_model(flags.model_path);
    ctmetric::DiscountSpec disc;
    const ctmetric::IterationTrace trace = run_iteration(model, flags, disc);

    if (format == "json") {
        ordered_json j;
        j["command"] = "trace";
        j["config"] = flags.config_json(disc.c);
        j["converged"] = trace.converged;
        j["iterations"] = trace.iterations;
        j["tables"] = ordered_json::array();
        for (std::size_t n = 0; n < trace.tables.size(); ++n) {
            ordered_json rows = ordered_json::array();
            for (std::size_t i = 0; i < model.state_count(); ++i)
                for (std::size_t k = i + 1; k < model.state_count(); ++k)
                    rows.push_back({{"state_a", model.state_name(i)},
                                    {"state_b", model.state_name(k)},
                                    {"value", trace.tables[n](i, k)}});
            j["tables"].push_back({{"iteration", n}, {"rows", rows}});
        }
        j["residuals"] = ordered_json::array();
        for (std::size_t n = 0; n < trace.residuals.size(); ++n)
            j["residuals"].push_back({{"iteration", n + 1},
                                      {"residual", trace.residuals[n]},
                                      {"accelerated", static_cast<bool>(trace.accelerated[n])}});
        out.write(j.dump(2) + "\n");
        return (!trace.converged && flags.strict) ? 2 : 0;
    }

    std::ostringstream values;
    values << "# ctmetric trace\n";
    flags.emit_config(values, disc.c);
    values << "# converged: " << (trace.converged ? "true" : "false") << "\n";
    values << "iteration,state_a,state_b,value\n";
    for (std::size_t n = 0; n < trace.tables.size(); ++n)
        for (std::size_t i = 0; i < model.state_count(); ++i)
            for (std::size_t k = i + 1; k < model.state_count(); ++k)
                values << n << "," << model.state_name(i) << "," << model.state_name(k) << ","
                       << fmt(trace.tables[n](i, k)) << "\n";

    std::ostringstream residuals;
    residuals << "iteration,residual,accelerated\n";
    for (std::size_t n = 0; n < trace.residuals.size(); ++n)
        residuals << (n + 1) << "," << fmt(trace.residuals[n]) << ","
                  << (trace.accelerated[n] ? "true" : "false") << "\n";

    if (out.path == "-") {
        out.write(values.str() + "\n" + residuals.str());
    } else {
        out.write(values.str());
        std::string rpath = out.path;
        const std::string suffix = ".csv";
        if (rpath.size() > suffix.size() &&
            rpath.compare(rpath.size() - suffix.size(), suffix.size(), suffix) == 0)
            rpath = rpath.substr(0, rpath.size() - suffix.size());
        Output{rpath + ".residuals.csv"}.write(residuals.str());
    }
    return (!trace.converged && flags.strict) ? 2 : 0;
}

int cmd_verify(const FixpointFlags& flags, const Output& out, const std::string& format,
               double tol) {
    const Model model = ctmetric::load_model(flags.model_path);
    ctmetric::DiscountSpec disc;
    const ctmetric::IterationTrace trace = run_iteration(model, flags, disc);
    const double residual =
        ctmetric::verify_fixpoint(model, disc, flags.strategy(), trace.final_table());
    const bool pass = residual <= tol;

    if (format == "csv") {
        std::ostringstream os;
        os << "# ctmetric verify\n";
        flags.emit_config(os, disc.c);
        os << "# tol: " << fmt(tol) << "\n";
        os << "residual,pass\n" << fmt(residual) << "," << (pass ? "true" : "false") << "\n";
        out.write(os.str());
    } else {
        ordered_json j;
        j["command"] = "verify";
        j["config"] = flags.config_json(disc.c);
        j["tol"] = tol;
        j["residual"] = residual;
        j["pass"] = pass;
        out.write(j.dump(2) + "\n");
    }
    return pass ? 0 : 2;
}

int cmd_logic_bound(const FixpointFlags& flags, const Output& out, const std::string& format,
                    std::size_t depth, const std::string& constants_spec,
                    const std::string& times_spec, std::size_t budget,
                    const std::vector<std::string>& pair_specs) {
    const Model model = ctmetric::load_model(flags.model_path);
    ctmetric::DiscountSpec disc;
    const ctmetric::IterationTrace trace = run_iteration(model, flags, disc);
    const ctmetric::PseudometricTable& delta_bar = trace.final_table();

    ctmetric::EnumConfig cfg = ctmetric::default_enum_config(model);
    cfg.max_depth = depth;
    cfg.budget = budget;
    if (!constants_spec.empty()) {
        cfg.constants.clear();
        std::stringstream ss(constants_spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto e = ctmetric::parse_formula(item);
            if (e->kind != ctmetric::LogicExpr::Kind::Const)
                throw ctmetric::parse_error("constants must be rationals, got '" + item + "'");
            cfg.constants.push_back(e->q);
        }
    }
    if (!times_spec.empty()) cfg.times = parse_grid(times_spec);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (pair_specs.empty()) {
        for (std::size_t i = 0; i < model.state_count(); ++i)
            for (std::size_t j = i + 1; j < model.state_count(); ++j) pairs.emplace_back(i, j);
    } else {
        for (const std::string& spec : pair_specs) {
            const auto comma = spec.find(',');
            if (comma == std::string::npos)
                throw ctmetric::parse_error("pair must be 'stateA,stateB', got '" + spec + "'");
            const auto a = model.state_index(spec.substr(0, comma));
            const auto b = model.state_index(spec.substr(comma + 1));
            if (!a || !b) throw ctmetric::parse_error("unknown state name in pair '" + spec + "'");
            pairs.emplace_back(*a, *b);
        }
    }

    const ctmetric::Enumeration enumeration = ctmetric::enumerate_logic(model, disc, cfg);
    struct Row {
        std::size_t a, b;
        double bound;
        std::string witness;
        double delta;
    };
    std::vector<Row> rows;
    for (auto [a, b] : pairs) {
        double bound = 0.0;
        const ctmetric::LogicExprPtr* witness = nullptr;
        for (const auto& f : enumeration.formulas) {
            const double gap = std::abs(f.values[a] - f.values[b]);
            if (!witness || gap > bound) {
                bound = gap;
                witness = &f.expr;
            }
        }
        rows.push_back({a, b, bound, witness ? ctmetric::to_string(**witness) : "0",
                        delta_bar(a, b)});
    }

    if (format == "csv") {
        std::ostringstream os;
        os << "# ctmetric logic-bound\n";
        flags.emit_config(os, disc.c);
        os << "# depth: " << depth << "\n";
        os << "# budget: " << budget << "\n";
        os << "# truncated: " << (enumeration.truncated ? "true" : "false") << "\n";
        os << "state_a,state_b,bound,witness,delta_bar,gap\n";
        for (const Row& r : rows)
            os << model.state_name(r.a) << "," << model.state_name(r.b) << "," << fmt(r.bound)
               << "," << csv_quote(r.witness) << "," << fmt(r.delta) << ","
               << fmt(r.delta - r.bound) << "\n";
        out.write(os.str());
    } else {
        ordered_json j;
        j["command"] = "logic-bound";
        j["config"] = flags.config_json(disc.c);
        j["depth"] = depth;
        j["budget"] = budget;
        j["truncated"] = enumeration.truncated;
        j["rows"] = ordered_json::array();
        for (const Row& r : rows)
            j["rows"].push_back({{"state_a", model.state_name(r.a)},
                                 {"state_b", model.state_name(r.b)},
                                 {"bound", r.bound},
                                 {"witness", r.witness},
                                 {"delta_bar", r.delta},
                                 {"gap", r.delta - r.bound}});
        out.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_plan(const FixpointFlags& flags, const Output& out, const std::string& format,
             const std::string& state_x, const std::string& state_y, double theta,
             const std::string& metric_kind) {
    const Model model = ctmetric::load_model(flags.model_path);
    const auto x = model.state_index(state_x);
    const auto y = model.state_index(state_y);
    if (!x || !y) throw ctmetric::parse_error("unknown state name in --x/--y");

    ctmetric::DiscountSpec disc =
        ctmetric::DiscountSpec::from_factor(flags.effective_c(model), model.rate());
    ctmetric::PseudometricTable metric = ctmetric::obs_metric(model);
    if (metric_kind == "fixpoint") {
        ctmetric::DiscountSpec unused;
        metric = run_iteration(model, flags, unused).final_table();
    }

    const ctmetric::DiscreteDistribution P = ctmetric::kernel_at(model, *x, theta);
    const ctmetric::DiscreteDistribution Q = ctmetric::kernel_at(model, *y, theta);
    const ctmetric::TransportPlan plan = ctmetric::kantorovich(metric, P, Q);

    if (format == "csv") {
        std::ostringstream os;
        os << "# ctmetric plan\n";
        flags.emit_config(os, disc.c);
        os << "# x: " << state_x << "\n# y: " << state_y << "\n";
        os << "# theta: " << fmt(theta) << "\n# metric: " << metric_kind << "\n";
        os << "# cost: " << fmt(plan.cost) << "\n";
        os << "kind,a,b,value\n";
        for (std::size_t i = 0; i < plan.row_points.size(); ++i)
            for (std::size_t j = 0; j < plan.col_points.size(); ++j)
                os << "mass," << model.state_name(plan.row_points[i]) << ","
                   << model.state_name(plan.col_points[j]) << "," << fmt(plan.plan_at(i, j))
                   << "\n";
        for (std::size_t s = 0; s < model.state_count(); ++s)
            os << "potential," << model.state_name(s) << ",," << fmt(plan.potentials[s]) << "\n";
        out.write(os.str());
    } else {
        ordered_json j;
        j["command"] = "plan";
        j["config"] = flags.config_json(disc.c);
        j["x"] = state_x;
        j["y"] = state_y;
        j["theta"] = theta;
        j["metric"] = metric_kind;
        j["cost"] = plan.cost;
        j["plan"] = ordered_json::array();
        for (std::size_t i = 0; i < plan.row_points.size(); ++i)
            for (std::size_t k = 0; k < plan.col_points.size(); ++k)
                j["plan"].push_back({{"from", model.state_name(plan.row_points[i])},
                                     {"to", model.state_name(plan.col_points[k])},
                                     {"mass", plan.plan_at(i, k)}});
        j["potentials"] = ordered_json::object();
        for (std::size_t s = 0; s < model.state_count(); ++s)
            j["potentials"][model.state_name(s)] = plan.potentials[s];
        out.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_bm(const std::string& example, double x, double y, double c, std::size_t samples,
           std::uint64_t seed, const std::string& grid_spec, double step_scale, bool no_bridge,
           const Output& out, const std::string& format) {
    ctmetric::BmOptions options;
    options.step_scale = step_scale;
    options.bridge = !no_bridge;

    ordered_json config;
    config["example"] = example;
    config["x"] = x;
    config["c"] = c;
    config["t_grid"] = grid_spec;

    double value = 0.0, argmax_t = 0.0, se = 0.0;
    if (example == "absorbed") {
        config["y"] = y;
        config["samples"] = samples;
        config["seed"] = seed;
        config["step_scale"] = step_scale;
        config["bridge"] = options.bridge;
        const std::string spec = grid_spec.empty() ? "0,0.5,1,2,5,10,20,50" : grid_spec;
        config["t_grid"] = spec;
        const auto r = ctmetric::bm_delta1(x, y, c, parse_grid(spec), samples, seed, options);
        value = r.value;
        argmax_t = r.argmax_t;
        se = r.standard_error;
    } else if (example == "gbm") {
        const std::string spec = grid_spec.empty() ? "geo:0.01:128:200" : grid_spec;
        config["t_grid"] = spec;
        const auto r = ctmetric::gbm_lower_bound(x, c, parse_grid(spec));
        value = r.bound;
        argmax_t = r.argmax_t;
    } else {
        throw ctmetric::parse_error("unknown bm example '" + example + "'");
    }

    if (format == "csv") {
        std::ostringstream os;
        os << "# ctmetric bm\n";
        for (const auto& [key, val] : config.items())
            os << "# " << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
               << "\n";
        os << "value,argmax_t,standard_error,seed\n";
        os << fmt(value) << "," << fmt(argmax_t) << "," << fmt(se) << "," << seed << "\n";
        out.write(os.str());
    } else {
        ordered_json j;
        j["command"] = "bm";
        j["config"] = config;
        j["value"] = value;
        j["argmax_t"] = argmax_t;
        j["standard_error"] = se;
        j["seed"] = seed;
        out.write(j.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioural distances for continuous-time Markov processes"};
    app.require_subcommand(1);

    Output out;
    std::string format = "csv";

    FixpointFlags dist_flags, trace_flags, verify_flags, logic_flags;
    double verify_tol = 1e-6;
    std::size_t logic_depth = 3, logic_budget = 2000000;
    std::string logic_constants, logic_times;
    std::vector<std::string> logic_pairs;

    std::string bm_example = "absorbed", bm_grid;
    double bm_x = 0.5, bm_y = 0.0, bm_c = 0.9, bm_step = 1e-3;
    std::size_t bm_samples = 100000;
    std::uint64_t bm_seed = 42;
    bool bm_no_bridge = false;

    auto add_common = [&](CLI::App* cmd, const std::string& default_format) {
        cmd->add_option("--output", out.path, "output file, or - for stdout");
        cmd->add_option("--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->parse_complete_callback([&format, default_format, cmd]() {
            if (cmd->count("--format") == 0) format = default_format;
        });
    };

    CLI::App* dist = app.add_subcommand("distance", "iterate to the behavioural distance table");
    dist_flags.add_to(dist);
    add_common(dist, "csv");

    CLI::App* trace = app.add_subcommand("trace", "emit every iterate and residual");
    trace_flags.add_to(trace);
    add_common(trace, "csv");

    CLI::App* verify = app.add_subcommand("verify", "check the fixpoint property of the result");
    verify_flags.add_to(verify);
    verify->add_option("--tol", verify_tol, "residual tolerance");
    add_common(verify, "csv");

    CLI::App* logic = app.add_subcommand("logic-bound", "logic lower bounds per state pair");
    logic_flags.add_to(logic);
    logic->add_option("--depth", logic_depth, "maximum formula depth");
    logic->add_option("--constants", logic_constants, "comma-separated rationals");
    logic->add_option("--times", logic_times, "comma-separated shift times");
    logic->add_option("--budget", logic_budget, "enumeration budget");
    logic->add_option("--pair", logic_pairs, "stateA,stateB (repeatable; default all pairs)");
    add_common(logic, "csv");

    FixpointFlags plan_flags;
    std::string plan_x, plan_y, plan_metric = "obs";
    double plan_theta = 0.5;
    CLI::App* plan = app.add_subcommand("plan", "export one optimal coupling");
    plan_flags.add_to(plan);
    plan->add_option("--x", plan_x, "source state name")->required();
    plan->add_option("--y", plan_y, "target state name")->required();
    plan->add_option("--theta", plan_theta, "kernel parameter in (0,1]");
    plan->add_option("--metric", plan_metric, "obs | fixpoint")
        ->check(CLI::IsMember({"obs", "fixpoint"}));
    add_common(plan, "csv");

    CLI::App* bm = app.add_subcommand("bm", "Brownian-motion examples");
    bm->add_option("--example", bm_example, "absorbed | gbm")
        ->check(CLI::IsMember({"absorbed", "gbm"}));
    bm->add_option("--x", bm_x, "start point in [0,1]")->required();
    bm->add_option("--y", bm_y, "second start point (absorbed example)");
    bm->add_option("--c", bm_c, "discount factor in (0,1)");
    bm->add_option("--samples", bm_samples, "Monte Carlo paths");
    bm->add_option("--seed", bm_seed, "master RNG seed");
    bm->add_option("--t-grid", bm_grid, "comma list, lin:a:b:n or geo:a:b:n");
    bm->add_option("--step-scale", bm_step, "step = step_scale * max(t,1)");
    bm->add_flag("--no-bridge", bm_no_bridge, "disable intra-step hit sampling");
    add_common(bm, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (dist->parsed()) return cmd_distance(dist_flags, out, format);
        if (trace->parsed()) return cmd_trace(trace_flags, out, format);
        if (verify->parsed()) return cmd_verify(verify_flags, out, format, verify_tol);
        if (logic->parsed())
            return cmd_logic_bound(logic_flags, out, format, logic_depth, logic_constants,
                                   logic_times, logic_budget, logic_pairs);
        if (plan->parsed())
            return cmd_plan(plan_flags, out, format, plan_x, plan_y, plan_theta, plan_metric);
        if (bm->parsed())
            return cmd_bm(bm_example, bm_x, bm_y, bm_c, bm_samples, bm_seed, bm_grid, bm_step,
                          bm_no_bridge, out, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
