#include <doctest.h>

#include <cmath>
#include <numeric>

#include "moldflux/benchmarks.hpp"
#include "moldflux/measurements.hpp"

using namespace moldflux;

TEST_CASE("sensor lattice spans the plane with half-spacing insets") {
    StructuredGrid g(20, 20, 20, 1.0, 1.0, 1.0);
    auto pts = place_lattice(g, 0.2, 4, 4);
    REQUIRE(pts.size() == 16);
    for (const auto& p : pts) CHECK(p[1] == doctest::Approx(0.2));
    // 4 positions at (i + 0.5) * 0.25 in x and z.
    CHECK(pts.front()[0] == doctest::Approx(0.125));
    CHECK(pts.front()[2] == doctest::Approx(0.125));
    CHECK(pts.back()[0] == doctest::Approx(0.875));
    CHECK(pts.back()[2] == doctest::Approx(0.875));
    CHECK_THROWS_AS((void)place_lattice(g, 1.5, 4, 4), Error);
}

TEST_CASE("synthesis from formula and from a solved field agree") {
    AnalyticalCase ac;
    StructuredGrid grid = ac.make_grid(20);
    auto pts = place_lattice(grid, 0.2, 4, 4);
    auto analytic =
        synthesize([&](const Vec3& p) { return ac.t_an(p); }, pts);
    TemperatureField t = solve_direct(ac.make_case(grid));
    auto numeric = synthesize(grid, t, pts);
    REQUIRE(analytic.size() == numeric.size());
    for (size_t i = 0; i < analytic.size(); ++i)
        CHECK(numeric[i] == doctest::Approx(analytic[i]).epsilon(1e-3));
}

TEST_CASE("noise is deterministic, unbiased and correctly scaled") {
    std::vector<double> clean(20000, 10.0);
    const double omega = 0.08;

    auto a = add_noise(clean, omega, 42);
    auto b = add_noise(clean, omega, 42);
    CHECK(a == b);  // bit-reproducible
    auto c = add_noise(clean, omega, 43);
    CHECK(a != c);  // seed matters

    double mean = 0.0;
    for (double v : a) mean += v - 10.0;
    mean /= a.size();
    double var = 0.0;
    for (double v : a) var += (v - 10.0 - mean) * (v - 10.0 - mean);
    var /= (a.size() - 1);
    CHECK(std::abs(mean) < 3.0 * omega / std::sqrt(double(a.size())));
    CHECK(std::sqrt(var) == doctest::Approx(omega).epsilon(0.03));
}

TEST_CASE("zero noise returns the input unchanged") {
    std::vector<double> clean = {1.0, 2.0, 3.0};
    CHECK(add_noise(clean, 0.0, 99) == clean);
}

TEST_CASE("total heat from the cooling water energy balance") {
    // Q = m_dot * cp * (T_out - T_in).
    CHECK(total_heat_from_water(2.0, 4186.0, 305.0, 300.0) ==
          doctest::Approx(41860.0));
}

TEST_CASE("total heat of a uniform flux is flux times area") {
    StructuredGrid g(10, 5, 8, 2.0, 0.1, 1.2);
    std::vector<double> flux(g.patch_face_count(PatchId::SIn), 1e5);
    CHECK(total_heat_of_flux(g, flux) == doctest::Approx(1e5 * 2.0 * 1.2));
}
