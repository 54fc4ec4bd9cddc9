#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "moldflux/config.hpp"
#include "moldflux/errors.hpp"
#include "moldflux/io.hpp"

using namespace moldflux;

namespace {
std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0, -0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv write/read round trip") {
    const std::string path = temp_path("moldflux_io_test.csv");
    write_csv(path, {"i", "value"},
              {{0.0, 0.1}, {1.0, -3.25}, {2.0, 1.0 / 7.0}});
    auto v = read_value_csv(path);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.1);
    CHECK(v[1] == -3.25);
    CHECK(v[2] == 1.0 / 7.0);

    const std::string text = read_text_file(path);
    CHECK(text.rfind("i,value\n", 0) == 0);

    CHECK_THROWS_AS(write_csv(path, {"a", "b"}, {{1.0}}), Error);
    std::remove(path.c_str());
}

TEST_CASE("csv reading a missing file is an io error") {
    try {
        (void)read_value_csv("/nonexistent/file.csv");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("vtk writers emit deterministic legacy files") {
    StructuredGrid grid(3, 2, 2, 1.0, 0.5, 1.0);
    std::vector<double> cells(static_cast<size_t>(grid.cell_count()), 300.0);
    const std::string p1 = temp_path("moldflux_vtk_a.vtk");
    const std::string p2 = temp_path("moldflux_vtk_b.vtk");
    write_vtk_cell_field(p1, grid, cells, "temperature");
    write_vtk_cell_field(p2, grid, cells, "temperature");
    const std::string a = read_text_file(p1);
    CHECK(a == read_text_file(p2));
    CHECK(a.find("DATASET STRUCTURED_POINTS") != std::string::npos);
    CHECK(a.find("DIMENSIONS 4 3 3") != std::string::npos);
    CHECK(a.find("CELL_DATA 12") != std::string::npos);
    CHECK(a.find("temperature") != std::string::npos);

    std::vector<double> faces(grid.patch_face_count(PatchId::SIn), 1.5);
    write_vtk_boundary_field(p1, grid, faces, "flux");
    const std::string b = read_text_file(p1);
    CHECK(b.find("DATASET STRUCTURED_GRID") != std::string::npos);
    CHECK(b.find("DIMENSIONS 3 1 2") != std::string::npos);
    CHECK(b.find("POINT_DATA 6") != std::string::npos);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("config set and get cover every key") {
    RunConfig cfg;
    for (const auto& [key, value] : cfg.to_map()) {
        if (value.empty()) continue;  // unset lists/paths have no value form
        CHECK_NOTHROW(cfg.set(key, value));
    }
    cfg.set("case.nx", "32");
    CHECK(cfg.nx == 32);
    cfg.set("method.reg", "tsvd:5");
    CHECK(cfg.tsvd_alpha() == 5);
    cfg.set("method.ghat", "60");
    CHECK(cfg.ghat_value() == doctest::Approx(60.0));
    cfg.set("method.ghat", "auto");
    CHECK(std::isnan(cfg.ghat_value()));
    cfg.set("study.levels", "8,12,16");
    CHECK(cfg.levels == std::vector<int>{8, 12, 16});
    cfg.set("noise.seed", "42");
    CHECK(cfg.seed == 42);
}

TEST_CASE("config rejects unknown keys and malformed values") {
    RunConfig cfg;
    auto code = [&](const std::string& k, const std::string& v) {
        try {
            cfg.set(k, v);
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return ErrorCode::InvalidArgument;
    };
    CHECK(code("case.bogus", "1") == ErrorCode::Config);
    CHECK(code("nosection", "1") == ErrorCode::Config);
    CHECK(code("case.nx", "ten") == ErrorCode::Config);
    CHECK(code("method.reg", "ridge") == ErrorCode::Config);
    CHECK(code("method.reg", "tsvd:zero") == ErrorCode::Config);
    CHECK(code("case.robin", "mixed") == ErrorCode::Config);
}

TEST_CASE("presets pin the two reference cases") {
    RunConfig a;
    a.apply_preset("analytical");
    CHECK(a.benchmark == "analytical");
    CHECK(a.nx == 20);
    CHECK(a.lx == 1.0);
    CHECK(a.plane_y == 0.2);
    CHECK(a.count_x == 4);
    CHECK(a.eta == doctest::Approx(0.7));

    RunConfig b;
    b.apply_preset("industrial");
    CHECK(b.benchmark == "industrial");
    CHECK(b.nx == 100);
    CHECK(b.ny == 25);
    CHECK(b.nz == 50);
    CHECK(b.lx == 2.0);
    CHECK(b.ly == doctest::Approx(0.1));
    CHECK(b.lz == doctest::Approx(1.2));
    CHECK(b.plane_y == doctest::Approx(0.02));
    CHECK(b.count_x == 10);
    CHECK(b.eta == doctest::Approx(0.3));

    CHECK_THROWS_AS(b.apply_preset("unknown"), Error);
}

TEST_CASE("ini text round-trips and later sources win") {
    RunConfig cfg;
    cfg.apply_preset("analytical");
    cfg.set("method.reg", "tsvd:3");
    cfg.set("noise.omega", "0.08");

    RunConfig back = RunConfig::from_ini(cfg.to_ini());
    CHECK(back.to_map() == cfg.to_map());

    // apply_ini overlays without resetting unrelated fields.
    back.apply_ini("[method]\n# comment line\neta = 1.5\n");
    CHECK(back.eta == doctest::Approx(1.5));
    CHECK(back.reg == "tsvd:3");
    CHECK(back.omega == doctest::Approx(0.08));

    CHECK_THROWS_AS(back.apply_ini("[method]\nbogus = 1\n"), Error);
    CHECK_THROWS_AS(back.apply_ini("stray line\n"), Error);
}

TEST_CASE("validation catches inconsistent settings") {
    auto fails = [](const std::function<void(RunConfig&)>& tweak) {
        RunConfig cfg;
        cfg.apply_preset("analytical");
        tweak(cfg);
        try {
            cfg.validate();
        } catch (const Error& e) {
            return e.code() == ErrorCode::Config;
        }
        return false;
    };
    CHECK(fails([](RunConfig& c) { c.nx = 0; }));
    CHECK(fails([](RunConfig& c) { c.lx = -1.0; }));
    CHECK(fails([](RunConfig& c) { c.plane_y = 2.0; }));  // outside (0, ly)
    CHECK(fails([](RunConfig& c) { c.count_x = 0; }));
    CHECK(fails([](RunConfig& c) { c.reps = 0; }));
    CHECK(fails([](RunConfig& c) { c.threads = 0; }));
    CHECK(fails([](RunConfig& c) { c.reg = "tsvd:0"; }));

    RunConfig ok;
    ok.apply_preset("industrial");
    CHECK_NOTHROW(ok.validate());
}
