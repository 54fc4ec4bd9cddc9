#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "moldflux/benchmarks.hpp"
#include "moldflux/rbf.hpp"

using namespace moldflux;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

RbfBasis lattice_basis(int per_axis, double lx, double lz, double eta) {
    RbfBasis basis;
    basis.eta = eta;
    for (int i = 0; i < per_axis; ++i)
        for (int k = 0; k < per_axis; ++k)
            basis.centers.push_back({(i + 0.5) * lx / per_axis, 0.0,
                                     (k + 0.5) * lz / per_axis});
    return basis;
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("gaussian basis evaluates as exp(-(eta r)^2)") {
    RbfBasis basis;
    basis.eta = 2.0;
    basis.centers = {{0.25, 0.0, 0.75}};
    CHECK(rbf_evaluate(basis, 0, {0.25, 0.0, 0.75}) == doctest::Approx(1.0));
    // r = 0.5 along x: exp(-(2 * 0.5)^2) = exp(-1)
    CHECK(rbf_evaluate(basis, 0, {0.75, 0.0, 0.75}) ==
          doctest::Approx(std::exp(-1.0)));
    // distance counts the y offset too
    CHECK(rbf_evaluate(basis, 0, {0.25, 0.5, 0.75}) ==
          doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("project_to_boundary drops points onto the y = 0 plane") {
    auto out = project_to_boundary({{0.1, 0.4, 0.9}, {0.5, -2.0, 0.2}});
    REQUIRE(out.size() == 2);
    CHECK(out[0][0] == 0.1);
    CHECK(out[0][1] == 0.0);
    CHECK(out[0][2] == 0.9);
    CHECK(out[1][1] == 0.0);
}

TEST_CASE("face field matches pointwise evaluation at face midpoints") {
    StructuredGrid grid(4, 3, 5, 1.0, 1.0, 1.0);
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 0.7);
    const auto faces = grid.boundary_faces(PatchId::SIn);
    for (int j = 0; j < basis.size(); ++j) {
        auto f = rbf_face_field(basis, grid, j);
        REQUIRE(f.size() == faces.size());
        for (size_t i = 0; i < faces.size(); ++i)
            CHECK(f[i] == rbf_evaluate(basis, j, faces[i].center));
    }
}

TEST_CASE("reconstruct_flux is the weighted sum of basis face fields") {
    StructuredGrid grid(5, 3, 4, 1.0, 1.0, 1.0);
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 1.5);
    std::vector<double> w = {2.0, -1.0, 0.5, 3.0};
    auto g = reconstruct_flux(basis, grid, w);
    std::vector<double> expected(g.size(), 0.0);
    for (int j = 0; j < basis.size(); ++j) {
        auto f = rbf_face_field(basis, grid, j);
        for (size_t i = 0; i < f.size(); ++i) expected[i] += w[j] * f[i];
    }
    for (size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    CHECK_THROWS_AS((void)reconstruct_flux(basis, grid, {1.0}), Error);
}

TEST_CASE("offline build is deterministic across thread counts") {
    AnalyticalCase ac;
    StructuredGrid grid = ac.make_grid(8);
    PhysicalCase pc = ac.make_case(grid);
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 0.7);
    auto sensors = place_lattice(grid, 0.2, 2, 2);

    OfflineArtifact a1 = build_offline(pc, basis, sensors, 1);
    OfflineArtifact a4 = build_offline(pc, basis, sensors, 4);
    CHECK(a1.theta.a == a4.theta.a);
    CHECK(a1.t_ad_samples == a4.t_ad_samples);
    CHECK(a1.phi_integrals == a4.phi_integrals);
    CHECK(a1.metadata_hash() == a4.metadata_hash());
}

TEST_CASE("sensor responses superpose: Theta w - T_ad predicts the direct solve") {
    AnalyticalCase ac;
    StructuredGrid grid = ac.make_grid(10);
    PhysicalCase pc = ac.make_case(grid);
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 0.7);
    auto sensor_points = place_lattice(grid, 0.2, 2, 2);
    OfflineArtifact art = build_offline(pc, basis, sensor_points, 1);

    const std::vector<double> w = {40.0, -15.0, 25.0, 60.0};
    PhysicalCase combined = pc;
    combined.g = reconstruct_flux(basis, grid, w);
    const TemperatureField t = solve_direct(combined);
    auto sampled = synthesize(grid, t, sensor_points);

    auto predicted = art.theta.times(w);
    for (size_t i = 0; i < sampled.size(); ++i) {
        predicted[i] -= art.t_ad_samples[i];
        CHECK(sampled[i] == doctest::Approx(predicted[i]).epsilon(1e-7));
    }
}

TEST_CASE("online LU recovers in-span weights from exact data") {
    AnalyticalCase ac;
    StructuredGrid grid = ac.make_grid(10);
    PhysicalCase pc = ac.make_case(grid);
    // eta = 3 keeps the normal matrix numerically full rank.
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 3.0);
    auto sensor_points = place_lattice(grid, 0.2, 2, 2);
    OfflineArtifact art = build_offline(pc, basis, sensor_points, 1);

    const std::vector<double> w_true = {55.0, 48.0, 62.0, 51.0};
    auto t_hat = art.theta.times(w_true);
    for (int i = 0; i < art.m; ++i) t_hat[i] -= art.t_ad_samples[i];

    OnlineOptions opts;  // LU, J1
    auto w = online_solve(art, t_hat, opts);
    for (int j = 0; j < art.m; ++j)
        CHECK(w[j] == doctest::Approx(w_true[j]).epsilon(1e-6));

    SUBCASE("total-heat mode with zero weight degenerates to the misfit solve") {
        OnlineOptions j2 = opts;
        j2.mode = CostMode::j2(0.0, 123.0);
        CHECK(online_solve(art, t_hat, j2) == w);
    }
    SUBCASE("measurement size is validated") {
        CHECK(code_of([&] { (void)online_solve(art, {1.0}, opts); }) ==
              ErrorCode::InvalidArgument);
    }
}

TEST_CASE("artifact round-trips through its file format") {
    AnalyticalCase ac;
    StructuredGrid grid = ac.make_grid(6);
    PhysicalCase pc = ac.make_case(grid);
    RbfBasis basis = lattice_basis(2, 1.0, 1.0, 0.7);
    auto sensor_points = place_lattice(grid, 0.2, 2, 2);
    OfflineArtifact art = build_offline(pc, basis, sensor_points, 1);

    const std::string path = temp_path("moldflux_artifact_test.bin");
    save_artifact(art, path);
    OfflineArtifact back = load_artifact(path);

    CHECK(back.m == art.m);
    CHECK(back.theta.a == art.theta.a);
    CHECK(back.t_ad_samples == art.t_ad_samples);
    CHECK(back.phi_integrals == art.phi_integrals);
    CHECK(back.centers == art.centers);
    CHECK(back.sensor_points == art.sensor_points);
    CHECK(back.metadata_hash() == art.metadata_hash());
    CHECK_NOTHROW(back.check_matches(pc, basis, sensor_points));

    SUBCASE("a different basis is rejected by the integrity check") {
        RbfBasis other = basis;
        other.eta = 0.9;
        CHECK(code_of([&] { back.check_matches(pc, other, sensor_points); }) ==
              ErrorCode::Integrity);
    }
    SUBCASE("corrupted magic bytes are rejected") {
        std::string bytes = read_bytes(path);
        bytes[0] = 'X';
        write_bytes(path, bytes);
        CHECK(code_of([&] { (void)load_artifact(path); }) ==
              ErrorCode::Integrity);
    }
    SUBCASE("future format versions are refused") {
        std::string bytes = read_bytes(path);
        const std::string tag = "\"format_version\":1";
        auto pos = bytes.find(tag);
        REQUIRE(pos != std::string::npos);
        bytes[pos + tag.size() - 1] = '2';
        write_bytes(path, bytes);
        CHECK(code_of([&] { (void)load_artifact(path); }) ==
              ErrorCode::UnsupportedVersion);
    }
    SUBCASE("tampered metadata fails the hash check") {
        std::string bytes = read_bytes(path);
        const std::string tag = "\"eta\":0.7";
        auto pos = bytes.find(tag);
        REQUIRE(pos != std::string::npos);
        bytes[pos + tag.size() - 1] = '8';
        write_bytes(path, bytes);
        CHECK(code_of([&] { (void)load_artifact(path); }) ==
              ErrorCode::Integrity);
    }
    std::remove(path.c_str());
}

TEST_CASE("loading a missing artifact reports an io error") {
    CHECK(code_of([] {
              (void)load_artifact("/nonexistent/dir/artifact.bin");
          }) == ErrorCode::Io);
}
