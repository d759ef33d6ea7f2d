#include "doctest.h"

#include <cmath>
#include <string>

#include "locsym/config.hpp"
#include "locsym/errors.hpp"
#include "locsym/output.hpp"

using namespace locsym;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "profile": {"u_left": 2, "u_right": 2, "slabs": [{"x_left": 0, "width": 1, "u": 1}]},
  "energies": [0.5]
})";

std::string error_of(const std::string& text) {
    try {
        (void)parse_config_text(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    const auto c = parse_config_text(kMinimal);
    CHECK(c.version == 1);
    REQUIRE(c.profile.slabs.size() == 1);
    CHECK(c.energy_list() == std::vector<double>{0.5});
    CHECK(c.tolerances.constancy == 1e-9);
    CHECK(c.n_samples == 17);
    CHECK(c.incidence.mode == "left");
    CHECK(c.build_profile().eval(0.5) == 1.0);
}

TEST_CASE("negative asymptote names the positivity requirement") {
    const std::string text = R"({"version": 1, "profile": {"u_left": -1, "u_right": 2, "slabs": []}})";
    try {
        (void)parse_config_text(text);
        FAIL("expected PhysicsError");
    } catch (const PhysicsError& e) {
        CHECK(std::string(e.what()).find("asymptotically positive") != std::string::npos);
    }
}

TEST_CASE("energy that closes an asymptotic channel is a physics error") {
    const std::string text = R"({"version": 1, "profile": {"u_left": 1, "u_right": 2,
                                 "slabs": [{"x_left": 0, "width": 1, "u": 1}]}, "energies": [0.0, -1.5]})";
    CHECK_THROWS_AS((void)parse_config_text(text), PhysicsError);
}

TEST_CASE("sweep is inclusive") {
    const std::string text = R"({"version": 1, "profile": {"u_left": 1, "u_right": 1, "slabs": []},
                                 "sweep": {"start": 1.0, "stop": 5.0, "count": 101}})";
    const auto e = parse_config_text(text).energy_list();
    REQUIRE(e.size() == 101);
    CHECK(e.front() == 1.0);
    CHECK(e.back() == 5.0);
    CHECK(e[50] == doctest::Approx(3.0));
}

TEST_CASE("schema errors carry field paths and line numbers") {
    CHECK(error_of(R"({"profile": {"u_left": 1, "u_right": 1}})").find("version") != std::string::npos);
    CHECK(error_of(R"({"version": 2, "profile": {"u_left": 1, "u_right": 1}})").find("version") !=
          std::string::npos);
    CHECK(error_of(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1, "slab": []}})")
              .find("profile.slab") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1,
        "slabs": [{"x_left": 0, "width": "wide", "u": 1}]}})")
              .find("profile.slabs[0].width") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1},
        "sweep": {"start": 0, "stop": 1, "count": 0}})")
              .find("sweep.count") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1},
        "transforms": [{"sigma": 2, "rho": 0}]})")
              .find("transforms[0].sigma") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "profile": {"smooth": {"x_min": 0, "x_max": 1, "step": 0,
        "background": 1}}})")
              .find("step") != std::string::npos);
    const std::string broken = "{\n  \"version\": 1,\n  \"profile\": {\n    oops\n  }\n}";
    CHECK(error_of(broken).find(":4:") != std::string::npos);
    CHECK_THROWS_AS((void)parse_config_text(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1,
        "slabs": [{"x_left": 0, "width": 1, "u": 1}, {"x_left": 2, "width": 1, "u": 1}]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("transform spellings") {
    const auto c = parse_config_text(R"({"version": 1, "profile": {"u_left": 1, "u_right": 1},
        "transforms": [{"inversion": 0.5}, {"translation": 2}, {"sigma": -1, "rho": 3}]})");
    REQUIRE(c.transforms.size() == 3);
    CHECK(c.transforms[0] == SymmetryTransform::inversion(0.5));
    CHECK(c.transforms[1] == SymmetryTransform::translation(2.0));
    CHECK(c.transforms[2] == SymmetryTransform{-1, 3.0});
}

TEST_CASE("emit/parse round trip") {
    const std::string texts[] = {
        kMinimal,
        R"({"version": 1, "profile": {"u_left": 1.25, "u_right": 3,
            "slabs": [{"x_left": -0.1, "width": 0.30000000000000004, "u": -2.5e-7}]},
            "sweep": {"start": 0.1, "stop": 2.7, "count": 7},
            "transforms": [{"inversion": 0.05}], "tolerances": {"tol_u": 1e-13, "grid_step": 0.02},
            "incidence": {"mode": "odd", "alpha": 0.05}, "n_samples": 9, "field_step": 0.125,
            "cell": [0, 0.2], "output": {"dir": "results/x"}})",
        R"({"version": 1, "profile": {"smooth": {"shape": "sech2", "x_min": -2, "x_max": 2,
            "step": 0.1, "background": 1.5, "amplitude": 0.7, "width": 0.3}}})",
    };
    for (const auto& t : texts) {
        const auto c = parse_config_text(t);
        const std::string once = emit_config(c);
        const auto back = parse_config_text(once);
        CHECK(back == c);
        CHECK(emit_config(back) == once);
    }
}

TEST_CASE("smooth discretization uses midpoint samples") {
    SmoothSpec s;
    s.shape = "gaussian";
    s.x_min = -1.0;
    s.x_max = 1.0;
    s.step = 0.5;
    s.background = 2.0;
    s.amplitude = -1.0;
    s.width = 0.5;
    const auto p = discretize(s);
    REQUIRE(p.slabs().size() == 4);
    CHECK(p.slabs()[0].u == doctest::Approx(2.0 - std::exp(-1.5 * 1.5)));
    CHECK(p.slabs()[1].u == doctest::Approx(2.0 - std::exp(-0.25)));
    CHECK(p.u_left() == 2.0);
    CHECK(p.slabs().back().x_right() == 1.0);
}

TEST_CASE("number formatting") {
    CHECK(io::format_json_number(0.1) == "1.0000000000000001e-01");
    CHECK(io::format_json_number(-0.0) == "0.0000000000000000e+00");
    CHECK(io::format_json_number(NAN) == "null");
    CHECK(io::format_csv_number(0.1) == "0.1");
    CHECK(io::format_csv_number(1e-300) == "1e-300");
    io::JsonWriter w;
    w.begin_object();
    w.key("a");
    w.value(std::complex<double>(1.0, -2.0));
    w.key("s");
    w.value("q\"x");
    w.end_object();
    CHECK(w.str().find("\"q\\\"x\"") != std::string::npos);
}
