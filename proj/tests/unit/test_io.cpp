#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "sfac/error.hpp"
#include "sfac/estimate_io.hpp"
#include "sfac/keyvalue.hpp"
#include "sfac/pattern_io.hpp"
#include "sfac/samplers.hpp"

using namespace sfac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sfac_test_io";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        CHECK(parse_double(format_double(v), "v") == v);
    }
    CHECK(parse_double(" 1.5 ", "v") == 1.5);
    CHECK_THROWS_AS(parse_double("1.5x", "v"), ValidationError);
    CHECK_THROWS_AS(parse_double("", "v"), ValidationError);
    CHECK(parse_double_list("1, 2,3", "v") == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("key-value text") {
    const auto kv = KeyValue::parse("# comment\na = 1\n\nb=two words \nlist = 1,2\n");
    CHECK(kv.require("a") == "1");
    CHECK(kv.require("b") == "two words");
    CHECK(kv.require_doubles("list") == std::vector<double>{1.0, 2.0});
    CHECK_FALSE(kv.get("c").has_value());
    CHECK_THROWS_AS(kv.require("c"), ValidationError);
    CHECK_THROWS_AS(KeyValue::parse("a = 1\na = 2\n"), ValidationError);
    CHECK_THROWS_AS(KeyValue::parse("no equals sign\n"), ValidationError);
    CHECK(KeyValue::parse(kv.to_string()).entries() == kv.entries());
}

TEST_CASE("pattern files round-trip") {
    const auto path = scratch("pattern.csv").string();
    const PointPattern p = sample_thomas(Window::box({30.0, 20.0}), 0.01, 10.0, 1.0, 3);
    KeyValue extra;
    extra.set("process", std::string("thomas"));
    save_pattern(path, p, 3, extra);
    const auto loaded = load_pattern_with_metadata(path);
    CHECK(loaded.pattern.coords() == p.coords());
    CHECK(loaded.pattern.window() == p.window());
    CHECK(loaded.pattern.intensity() == p.intensity());
    CHECK(loaded.metadata.require("seed") == "3");
    CHECK(loaded.metadata.require("process") == "thomas");

    const auto ball = scratch("ball.csv").string();
    const PointPattern q(Window::ball(3, 2.0), {0.1, 0.2, 0.3});
    save_pattern(ball, q);
    CHECK(load_pattern(ball).window() == Window::ball(3, 2.0));
}

TEST_CASE("pattern loading validates rows and recenters") {
    const auto path = scratch("shifted.csv");
    write(path, "x1,x2\n10.5,20.0\n9.0,19.0\n");
    write(path.string() + ".meta", "window.type = box\nwindow.lengths = 4,4\nwindow.center = 10,20\n");
    const auto loaded = load_pattern_with_metadata(path.string());
    CHECK(loaded.pattern.size() == 2);
    CHECK(loaded.pattern.point(0)[0] == doctest::Approx(0.5));
    CHECK(loaded.pattern.point(1)[1] == doctest::Approx(-1.0));

    write(path, "x1,x2\n10.5,20.0\n13.0,19.0\n");
    try {
        load_pattern(path.string());
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    write(path, "x1,x2\n10.5,abc\n");
    CHECK_THROWS_AS(load_pattern(path.string()), ValidationError);
    write(path, "x1,x2\n10.5\n");
    CHECK_THROWS_AS(load_pattern(path.string()), ValidationError);
    write(path.string() + ".meta", "window.type = hexagon\n");
    CHECK_THROWS_AS(load_pattern(path.string()), ValidationError);
    CHECK_THROWS_AS(load_pattern(scratch("missing.csv").string()), ValidationError);
}

TEST_CASE("estimate files round-trip") {
    const auto path = scratch("est.csv").string();
    SpectralEstimate e;
    e.dim = 2;
    e.wavevectors = {0.1, 0.2, -0.3, 0.4};
    e.wavenumbers = {std::hypot(0.1, 0.2), 0.5};
    e.values = {0.9, 1.1};
    e.metadata["estimator"] = "si";
    save_estimate(path, e);
    const auto back = load_estimate(path);
    CHECK(back.wavevectors == e.wavevectors);
    CHECK(back.wavenumbers == e.wavenumbers);
    CHECK(back.values == e.values);
    CHECK(back.metadata.at("estimator") == "si");

    SpectralEstimate radial;
    radial.dim = 2;
    radial.wavenumbers = {0.5, 1.0};
    radial.values = {0.3, 0.7};
    save_estimate(path, radial);
    const auto r = load_estimate(path);
    CHECK(r.wavevectors.empty());
    CHECK(r.values == radial.values);
}

TEST_CASE("pcf files round-trip") {
    const auto path = scratch("pcf.csv").string();
    PcfEstimate e;
    e.radii = {0.5, 1.0, 1.5};
    e.values = {0.2, 0.9, 1.0};
    e.unreliable = {true, false, false};
    e.r_max = 1.5;
    e.bandwidth = 1.2;
    save_pcf(path, e);
    const auto back = load_pcf(path);
    CHECK(back.radii == e.radii);
    CHECK(back.values == e.values);
    CHECK(back.r_max == e.r_max);
    CHECK(back.bandwidth == e.bandwidth);
}

TEST_CASE("test reports round-trip") {
    TestReport r;
    r.z_bar = 0.61;
    r.sigma_bar = 0.2;
    r.ci_lo = 0.52;
    r.ci_hi = 0.7;
    r.A = 50;
    r.lambda = 18.5;
    r.estimator = "si";
    r.schedule = "box:20:60:1";
    r.reject = true;
    const auto back = test_report_from_keyvalue(KeyValue::parse(to_keyvalue(r).to_string()));
    CHECK(back.z_bar == r.z_bar);
    CHECK(back.ci_hi == r.ci_hi);
    CHECK(back.A == 50);
    CHECK(back.reject);
    CHECK(back.schedule == r.schedule);
}
