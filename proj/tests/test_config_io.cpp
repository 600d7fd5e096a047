#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chemoctrl/config.hpp"
#include "chemoctrl/csv.hpp"
#include "chemoctrl/errors.hpp"
#include "chemoctrl/snapshot.hpp"
#include "test_support.hpp"

using namespace chemoctrl;
using namespace testsupport;

namespace {

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "chemoctrl_io_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

const char* kMinimal =
    "[grid]\n"
    "dims = 16\n"
    "[time]\n"
    "horizon = 1.0\n"
    "steps = 8\n"
    "[initial]\n"
    "u0 = constant 1.0\n"
    "v0 = constant 0.5\n";

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("minimal file fills the documented defaults") {
    RunConfig c = parse_string(kMinimal);
    validate_config(c);
    CHECK(c.dims == std::vector<std::int64_t>{16});
    CHECK(c.extents == std::vector<double>{1.0});
    CHECK_FALSE(c.has_control_box);
    CHECK(c.steps == 8);
    CHECK(c.eps == 0.0);
    CHECK(c.flux == FluxScheme::central);
    CHECK(c.weights.alpha_u == 1.0);
    CHECK(c.helmholtz_tol == 1e-10);
    CHECK(c.method == OptimizerMethod::projected_gradient);
    CHECK(c.snapshot_stride == 10);
    CHECK(c.eps_list == std::vector<double>{1e-2, 1e-3, 1e-4});
    CHECK(c.u0.kind == FieldSpec::Kind::constant);
    CHECK(c.u0.value == 1.0);
    CHECK(c.v0.value == 0.5);
    CHECK(c.f0.kind == FieldSpec::Kind::constant);
    CHECK(c.f0.value == 0.0);

    Grid g = make_grid(c);
    CHECK(g.cell_count() == 16);
    TimeGrid tg = make_time_grid(c);
    CHECK(tg.dt() == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("full configuration round-trips through format and parse") {
    std::string text =
        "# sample configuration\n"
        "[grid]\n"
        "dims = 12 10\n"
        "extent = 2.0 1.0\n"
        "control_lo = 0.5 0.25\n"
        "control_hi = 1.5 0.75\n"
        "[time]\n"
        "horizon = 0.5\n"
        "steps = 20\n"
        "[physics]\n"
        "eps = 0.001\n"
        "flux = upwind\n"
        "[initial]\n"
        "u0 = gaussian 1.0 0.5 0.2 0.8 0.1\n"
        "v0 = constant 0.25\n"
        "f = constant 0.1\n"
        "[weights]\n"
        "alpha_u = 2.0\n"
        "alpha_v = 0.5\n"
        "alpha_f = 0.25\n"
        "[box]\n"
        "f_min = -0.75\n"
        "f_max = 0.75\n"
        "[solver]\n"
        "tol = 1e-11\n"
        "max_iter = 500\n"
        "diagonal_precondition = true\n"
        "[optimizer]\n"
        "method = fixed_point\n"
        "tol = 1e-7\n"
        "max_iter = 150\n"
        "relaxation = 0.1\n"
        "[targets]\n"
        "mode = constant\n"
        "u = 1.5\n"
        "v = 0.75\n"
        "[output]\n"
        "directory = out\n"
        "snapshot_stride = 5\n"
        "[sweep]\n"
        "eps_list = 0.01 0.001\n";
    RunConfig c = parse_string(text);
    validate_config(c);
    CHECK(c.dims == std::vector<std::int64_t>{12, 10});
    CHECK(c.has_control_box);
    CHECK(c.flux == FluxScheme::upwind);
    CHECK(c.u0.kind == FieldSpec::Kind::gaussian);
    CHECK(c.u0.center == std::vector<double>{1.0, 0.5});
    CHECK(c.u0.width == 0.2);
    CHECK(c.u0.amplitude == 0.8);
    CHECK(c.u0.offset == 0.1);
    CHECK(c.method == OptimizerMethod::fixed_point);
    CHECK(c.relaxation == 0.1);
    CHECK(c.box.lo == -0.75);
    CHECK(c.box.hi == 0.75);
    CHECK(c.diagonal_precondition);
    CHECK(c.eps_list == std::vector<double>{0.01, 0.001});

    const std::string canonical = format_config(c);
    RunConfig again = parse_string(canonical);
    CHECK(format_config(again) == canonical);

    // And through the filesystem.
    auto path = scratch_dir() / "roundtrip.ini";
    save_config(c, path.string());
    RunConfig loaded = load_config(path.string());
    CHECK(format_config(loaded) == canonical);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_string("[grid]\ndims = 8\nwhat = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }

    try {
        parse_string("[nope]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 1);
    }

    try {
        parse_string("dims = 8\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("outside any") != std::string::npos);
    }

    try {
        parse_string("[grid]\ndims = 8\ndims = 9\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }

    try {
        // Complete except for the bad value, so the type error is what fires.
        parse_string(
            "[grid]\ndims = 8\n"
            "[time]\nhorizon = abc\nsteps = 4\n"
            "[initial]\nu0 = constant 1.0\nv0 = constant 1.0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 4);
        CHECK(std::string(e.what()).find("horizon") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_string("[grid]\ndims = 8\n"), ConfigError);  // missing sections
    CHECK_THROWS_AS(parse_string(std::string(kMinimal) + "[grid]\ncontrol_lo = 0.1\n"),
                    ConfigError);
}

TEST_CASE("comments, blank lines, and carriage returns are tolerated") {
    std::string text =
        "; leading comment\r\n"
        "[grid]\r\n"
        "dims = 16   # trailing comment\r\n"
        "\r\n"
        "[time]\nhorizon = 1.0\nsteps = 4\n"
        "[initial]\nu0 = constant 1.0\nv0 = constant 1.0\n";
    RunConfig c = parse_string(text);
    CHECK(c.dims == std::vector<std::int64_t>{16});
    CHECK(c.steps == 4);
}

TEST_CASE("validation rejects bad physics and weights") {
    RunConfig c = parse_string(kMinimal);
    c.weights.alpha_u = 0.0;
    CHECK_THROWS_WITH_AS(validate_config(c), "alpha_u must be positive", InvalidInputError);

    c = parse_string(kMinimal);
    c.eps = -1e-3;
    CHECK_THROWS_AS(validate_config(c), InvalidInputError);

    c = parse_string(kMinimal);
    c.u0.kind = FieldSpec::Kind::constant;
    c.u0.value = -0.5;
    CHECK_THROWS_AS(validate_config(c), InvalidInputError);

    c = parse_string(kMinimal);
    c.u0.kind = FieldSpec::Kind::gaussian;
    c.u0.center = {0.5, 0.5};  // wrong arity for a 1D grid
    CHECK_THROWS_AS(validate_config(c), InvalidInputError);

    try {
        parse_string(std::string(kMinimal) + "[targets]\nmode = file\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("u_file") != std::string::npos);
    }
}

TEST_CASE("gaussian fields materialize from grid coordinates") {
    RunConfig c = parse_string(kMinimal);
    Grid g = make_grid(c);
    FieldSpec spec;
    spec.kind = FieldSpec::Kind::gaussian;
    spec.center = {0.5};
    spec.width = 0.25;
    spec.amplitude = 2.0;
    spec.offset = 0.5;
    ScalarField field = materialize_field(spec, g);
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
        const double d = g.center(cell, 0) - 0.5;
        const double expect = 2.0 * std::exp(-d * d / (2.0 * 0.25 * 0.25)) + 0.5;
        CHECK(field[cell] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("controls materialize onto the mask at every node") {
    RunConfig cfg = parse_string(
        "[grid]\ndims = 8\ncontrol_lo = 0.5\ncontrol_hi = 1.0\n"
        "[time]\nhorizon = 1.0\nsteps = 3\n"
        "[initial]\nu0 = constant 1.0\nv0 = constant 1.0\nf = constant 0.7\n");
    Grid g = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    Control f = make_control(cfg, g, tg);
    REQUIRE(f.f.size() == 4);
    for (const auto& field : f.f)
        for (std::int64_t cell = 0; cell < g.cell_count(); ++cell)
            CHECK(field[cell] == (g.in_control_region(cell) ? 0.7 : 0.0));
}

TEST_CASE("snapshot files round-trip bitwise") {
    std::mt19937_64 rng(81);
    Grid g({9, 5}, {1.0, 0.7});
    ScalarField f = random_field(g, rng, -3.0, 3.0);
    f[0] = 0.0;
    f[1] = -0.0;
    f[2] = 1e-308;  // subnormal-adjacent values must survive

    auto path = scratch_dir() / "field.snap";
    write_snapshot(f, 17, 0.625, path.string());
    Snapshot s = read_snapshot(path.string());
    CHECK(s.dims == std::vector<std::int64_t>{9, 5});
    CHECK(s.step == 17);
    CHECK(s.time == 0.625);
    REQUIRE(s.values.size() == 45);
    CHECK(std::memcmp(s.values.data(), f.data(), sizeof(double) * 45) == 0);

    ScalarField back = read_snapshot_field(path.string(), g);
    CHECK(bitwise_equal(back, f));
}

TEST_CASE("snapshot rejects damaged files") {
    Grid g({8}, {1.0});
    ScalarField f(g, 1.0);
    auto dir = scratch_dir();

    auto good = dir / "good.snap";
    write_snapshot(f, 0, 0.0, good.string());

    auto bad_magic = dir / "bad_magic.snap";
    {
        std::string bytes = read_bytes(good);
        bytes[0] = 'X';
        std::ofstream out(bad_magic, std::ios::binary);
        out << bytes;
    }
    CHECK_THROWS_AS(read_snapshot(bad_magic.string()), SnapshotError);

    auto truncated = dir / "truncated.snap";
    {
        std::string bytes = read_bytes(good);
        bytes.resize(bytes.size() - 16);
        std::ofstream out(truncated, std::ios::binary);
        out << bytes;
    }
    CHECK_THROWS_AS(read_snapshot(truncated.string()), SnapshotError);

    CHECK_THROWS_AS(read_snapshot((dir / "missing.snap").string()), SnapshotError);

    Grid other(std::vector<std::int64_t>{4}, {1.0});
    CHECK_THROWS_AS(read_snapshot_field(good.string(), other), SnapshotError);

    Grid rescaled(std::vector<std::int64_t>{8}, {2.0});
    CHECK_THROWS_AS(read_snapshot_field(good.string(), rescaled), SnapshotError);
}

TEST_CASE("file-backed field specs read snapshots") {
    Grid g({10}, {1.0});
    ScalarField f(g);
    for (std::int64_t c = 0; c < 10; ++c) f[c] = 0.1 * static_cast<double>(c);
    auto path = scratch_dir() / "u_init.snap";
    write_snapshot(f, 0, 0.0, path.string());

    FieldSpec spec;
    spec.kind = FieldSpec::Kind::file;
    spec.path = path.string();
    ScalarField got = materialize_field(spec, g);
    CHECK(bitwise_equal(got, f));

    Grid other(std::vector<std::int64_t>{20}, {1.0});
    CHECK_THROWS_AS(materialize_field(spec, other), InvalidInputError);
}

TEST_CASE("csv writer quotes and escapes per RFC 4180") {
    auto path = scratch_dir() / "table.csv";
    {
        CsvWriter csv(path.string());
        csv.row({"step", "name", "value"});
        csv.row({"1", "plain", CsvWriter::number(0.5)});
        csv.row({"2", "comma,inside", "quote\"inside"});
        csv.row({"3", "line\nbreak", ""});
    }
    const std::string bytes = read_bytes(path);
    CHECK(bytes ==
          "step,name,value\r\n"
          "1,plain,0.5\r\n"
          "2,\"comma,inside\",\"quote\"\"inside\"\r\n"
          "3,\"line\nbreak\",\r\n");
}

TEST_CASE("csv number formatting is round-trippable") {
    const double x = 0.1 + 0.2;
    const std::string s = CsvWriter::number(x);
    CHECK(std::stod(s) == x);
    CHECK(CsvWriter::number(static_cast<std::int64_t>(42)) == "42");
}

}  // TEST_SUITE
