#include <filesystem>
#include <random>

#include "doctest.h"
#include "fracflow/config.hpp"
#include "fracflow/errors.hpp"

using namespace fracflow;

namespace {

ErrorKind kind_of(const json& j) {
    try {
        config_from_json(j);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::domain;
}

std::string message_of(const json& j) {
    try {
        config_from_json(j);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const RunConfig c = config_from_json(json::parse(R"({"grid": {"points": 64}, "problem": {"kappa1": 1.0}})"));
    CHECK(c.experiment.grid.points == 64);
    CHECK(c.experiment.grid.dim == 2);
    CHECK(c.experiment.problem.kappa1 == 1.0);
    CHECK(c.experiment.problem.alpha == 1.5);
    CHECK(c.experiment.timegrid == TimeGrid{});
    CHECK(c.verify == VerifyConfig{});
    CHECK(c.seed == 1);
    CHECK(config_from_json(json::object()) == RunConfig{});
}

TEST_CASE("schema errors name the key path") {
    CHECK(kind_of(json::parse(R"({"problem": {"rho_": 3}})")) == ErrorKind::schema);
    CHECK(message_of(json::parse(R"({"problem": {"rho_": 3}})")).find("problem.rho_") != std::string::npos);
    CHECK(message_of(json::parse(R"({"verify": {"decay": {"window": 1}}})")).find("verify.decay.window") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"grid": {"points": 64.5}})")).find("grid.points") != std::string::npos);
    CHECK(message_of(json::parse(R"({"verify": {"selfsimilarity": {"gammas": [1, "x"]}}})"))
              .find("verify.selfsimilarity.gammas[1]") != std::string::npos);
    CHECK(kind_of(json::parse(R"({"phi": {"kind": "spline"}})")) == ErrorKind::schema);
    CHECK(kind_of(json::parse(R"({"verify": {"symmetry": {"group": ["shear"]}}})")) == ErrorKind::schema);
    CHECK(kind_of(json::parse(R"({"seed": -3})")) == ErrorKind::schema);
    CHECK(kind_of(json::parse(R"([1, 2])")) == ErrorKind::schema);
    CHECK(kind_of(json::parse(R"({"problem": {"alpha": 2.5}})")) == ErrorKind::domain);
}

TEST_CASE("file errors") {
    try {
        parse_config("/nonexistent/config.json");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
    const auto path = std::filesystem::temp_directory_path() / "fracflow_bad_config.json";
    write_text(path, "{\"grid\": ");
    try {
        parse_config(path);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::schema);
    }
}

TEST_CASE("parse(emit(config)) round trip") {
    CHECK(config_from_json(config_to_json(RunConfig{})) == RunConfig{});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        RunConfig c;
        c.experiment.grid = {1 + trial % 2, 16 << (trial % 3), 0.5 + u(rng)};
        c.experiment.problem = {1.0 + 0.9 * u(rng) + 0.05, 1.5 + u(rng), 1.1 + 0.8 * u(rng), u(rng), -u(rng)};
        c.experiment.phi = {DataKind::homogeneous_radial, u(rng), u(rng)};
        c.experiment.phi.mass_matched = trial % 2 == 0;
        c.experiment.psi = {DataKind::gaussian, u(rng)};
        c.experiment.psi.width = 0.1 + u(rng);
        c.experiment.psi.envelope = u(rng);
        c.experiment.psi.path = "x" + std::to_string(trial);
        c.experiment.timegrid = {0.0, 0.1 + u(rng), 4 + trial, 1.0 + trial % 3};
        c.experiment.picard.max_sweeps = 3 + trial;
        c.experiment.picard.sweep_tol = u(rng) * 1e-8;
        c.norms.p = 1.0 + u(rng);
        c.norms.radii = trial % 2 ? "dyadic" : "all";
        c.verify.selfsimilarity.gammas = {1.0 + u(rng), 1.0 + u(rng)};
        c.verify.symmetry.group = {GridMap::rot90, GridMap::reflect_diag};
        c.verify.stability.seed = 1000 + trial;
        c.verify.profile.times = {u(rng), u(rng)};
        c.verify.mikhlin.delta = u(rng);
        c.verify.smoothing.spec.item = 1 + trial % 3;
        c.seed = 77 + trial;
        c.tolerance_scale = 0.5 + u(rng);
        c.svg = trial % 2 == 1;
        const json emitted = config_to_json(c);
        CHECK(config_from_json(emitted) == c);
        CHECK(config_from_json(json::parse(emitted.dump())) == c);
    }
}

TEST_CASE("ball family from the norms block") {
    const Grid g{2, 128, 1.0};
    NormsConfig n;
    const BallFamily all = n.family(g);
    CHECK(all.center_stride == 2);
    CHECK(all.radii_cells.size() == 64);
    n.radii = "dyadic";
    CHECK(n.family(g).radii_cells.size() < 64);
    n.radii = "odd";
    CHECK_THROWS_AS(static_cast<void>(n.family(g)), Error);
}
