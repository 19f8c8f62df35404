#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace {

std::string binary_path() {
    const char* env = std::getenv("CTMETRIC_BIN");
    REQUIRE_MESSAGE(env != nullptr, "CTMETRIC_BIN must point at the CLI binary");
    return env;
}

int run(const std::string& args) {
    const std::string cmd = binary_path() + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string tmp(const std::string& name) { return "/tmp/ctmetric_test_" + name; }

// value of a state_a,state_b,value row, searched by name pair
double csv_value(const std::string& csv, const std::string& a, const std::string& b) {
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(a + "," + b + ",", 0) == 0)
            return std::stod(line.substr(a.size() + b.size() + 2));
    }
    FAIL("row ", a, ",", b, " not found");
    return 0.0;
}

}  // namespace

TEST_CASE("distance command reproduces the toy table") {
    const std::string model = tmp("toy05.json");
    write_file(model, testsupport::toy_model_json(0.5));
    const std::string out = tmp("dist.csv");

    REQUIRE(run("distance --model " + model + " --grid-points 2049 --output " + out) == 0);
    const std::string csv = slurp(out);

    CHECK(csv.find("# converged: true") != std::string::npos);
    CHECK(csv.find("state_a,state_b,value") != std::string::npos);
    CHECK(csv_value(csv, "x", "y") == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(csv_value(csv, "0", "dead") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(csv_value(csv, "z", "dead") == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("identical configurations produce byte-identical files") {
    const std::string model = tmp("toy08.json");
    write_file(model, testsupport::toy_model_json(0.8));
    const std::string out1 = tmp("rep1.csv"), out2 = tmp("rep2.csv");

    REQUIRE(run("distance --model " + model + " --grid-points 1025 --output " + out1) == 0);
    REQUIRE(run("distance --model " + model + " --grid-points 1025 --output " + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));

    const std::string bm1 = tmp("bm1.json"), bm2 = tmp("bm2.json");
    REQUIRE(run("bm --example absorbed --x 0.5 --y 0 --c 0.9 --samples 2000 --seed 42 "
                "--output " +
                bm1) == 0);
    REQUIRE(run("bm --example absorbed --x 0.5 --y 0 --c 0.9 --samples 2000 --seed 42 "
                "--output " +
                bm2) == 0);
    CHECK(slurp(bm1) == slurp(bm2));
}

TEST_CASE("exit codes distinguish input errors from non-convergence") {
    SUBCASE("validation failure exits 1") {
        const std::string bad = tmp("bad.json");
        write_file(bad, R"({"states": ["a"], "obs": [2.0], "lambda": 1.0,
                            "kernel": {"a": [["a", [1.0]]]}})");
        CHECK(run("distance --model " + bad + " --output -") == 1);
    }
    SUBCASE("missing file exits 1") {
        CHECK(run("distance --model /tmp/ctmetric_does_not_exist.json --output -") == 1);
    }
    SUBCASE("strict non-convergence exits 2") {
        const std::string model = tmp("toy02.json");
        write_file(model, testsupport::toy_model_json(0.2));
        CHECK(run("distance --model " + model +
                  " --grid-points 257 --no-accel --max-iter 2 --strict --output " +
                  tmp("nc.csv")) == 2);
        // without --strict the same run exits 0 and reports converged: false
        CHECK(run("distance --model " + model +
                  " --grid-points 257 --no-accel --max-iter 2 --output " + tmp("nc2.csv")) == 0);
        CHECK(slurp(tmp("nc2.csv")).find("# converged: false") != std::string::npos);
    }
}

TEST_CASE("trace command writes tables and residuals") {
    const std::string model = tmp("toy05b.json");
    write_file(model, testsupport::toy_model_json(0.5));
    const std::string out = tmp("trace.csv");

    REQUIRE(run("trace --model " + model + " --grid-points 1025 --output " + out) == 0);
    const std::string values = slurp(out);
    CHECK(values.find("iteration,state_a,state_b,value") != std::string::npos);
    CHECK(values.find("0,x,y,0") != std::string::npos);  // delta_0(x,y) = 0

    const std::string residuals = slurp(tmp("trace.residuals.csv"));
    CHECK(residuals.find("iteration,residual,accelerated") != std::string::npos);
}

TEST_CASE("logic-bound command emits sound rows") {
    const std::string model = tmp("toy05c.json");
    write_file(model, testsupport::toy_model_json(0.5));
    const std::string out = tmp("logic.csv");

    REQUIRE(run("logic-bound --model " + model +
                " --grid-points 1025 --depth 2 --output " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("state_a,state_b,bound,witness,delta_bar,gap") != std::string::npos);
    CHECK(csv.find("0,dead,1,\"obs\",1,0") != std::string::npos);

    // every bound column stays below delta_bar + tolerance
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 's') continue;
        std::stringstream row(line);
        std::string a, b, bound, witness, delta;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, bound, ',');
        std::getline(row, witness, '"');  // skip into the quoted witness
        std::getline(row, witness, '"');
        std::getline(row, delta, ',');  // swallow the comma after the quote
        std::getline(row, delta, ',');
        CHECK(std::stod(bound) <= std::stod(delta) + 1e-6);
    }
}

TEST_CASE("plan command exports the coupling") {
    const std::string model = tmp("toy05p.json");
    write_file(model, testsupport::toy_model_json(0.5));
    const std::string out = tmp("plan.csv");

    REQUIRE(run("plan --model " + model + " --x 0 --y z --theta 0.5 --output " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("# cost: 0.5") != std::string::npos);
    CHECK(csv.find("kind,a,b,value") != std::string::npos);
    CHECK(csv.find("mass,0,") != std::string::npos);
    CHECK(csv.find("potential,0,") != std::string::npos);

    CHECK(run("plan --model " + model + " --x 0 --y ghost --output -") == 1);
}

TEST_CASE("verify command passes on the toy model") {
    const std::string model = tmp("toy05d.json");
    write_file(model, testsupport::toy_model_json(0.5));
    CHECK(run("verify --model " + model + " --grid-points 1025 --output " + tmp("v.csv")) == 0);
    CHECK(slurp(tmp("v.csv")).find(",true") != std::string::npos);
}

TEST_CASE("bm command emits the documented JSON fields") {
    const std::string out = tmp("bm.json");
    REQUIRE(run("bm --example absorbed --x 0.5 --y 0 --c 0.9 --samples 2000 --seed 42 "
                "--output " +
                out) == 0);
    const std::string json = slurp(out);
    for (const char* field : {"\"value\"", "\"argmax_t\"", "\"standard_error\"", "\"seed\""})
        CHECK(json.find(field) != std::string::npos);

    REQUIRE(run("bm --example gbm --x 0.367879441171442 --c 0.99 --output " + tmp("gbm.json")) ==
            0);
    CHECK(slurp(tmp("gbm.json")).find("\"value\"") != std::string::npos);
}

TEST_CASE("environment variable sets the default grid") {
    const std::string model = tmp("toy05e.json");
    write_file(model, testsupport::toy_model_json(0.5));
    const std::string cmd = "CTMETRIC_GRID_POINTS=513 " + binary_path() + " distance --model " +
                            model + " --output " + tmp("env.csv") + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(slurp(tmp("env.csv")).find("# grid_points: 513") != std::string::npos);
}
