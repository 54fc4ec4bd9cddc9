#include <doctest.h>

#include <cmath>

#include "moldflux/alifanov.hpp"
#include "moldflux/benchmarks.hpp"

using namespace moldflux;

namespace {

struct Setup {
    AnalyticalCase ac;
    StructuredGrid grid;
    PhysicalCase pc;
    Sensors sensors;

    explicit Setup(int n = 20) : grid(ac.make_grid(n)), pc(ac.make_case(grid)) {
        sensors.points = place_lattice(grid, 0.2, 4, 4);
        sensors.values =
            synthesize([&](const Vec3& p) { return ac.t_an(p); },
                       sensors.points);
    }
};

}  // namespace

TEST_CASE("discrepancy threshold follows the configured convention") {
    DiscrepancyRule dp{0.1, 16, true};
    const double base = 0.1 * 0.1 * 16 / 2.0;  // omega^2 M / 2 = 0.08
    CHECK(dp.threshold() == doctest::Approx(base * base));
    dp.squared = false;
    CHECK(dp.threshold() == doctest::Approx(base));
}

TEST_CASE("fletcher-reeves ratio uses the face-area quadrature") {
    StructuredGrid grid(4, 4, 4, 1.0, 1.0, 1.0);
    std::vector<double> gn(grid.patch_face_count(PatchId::SIn), 2.0);
    std::vector<double> gp(gn.size(), 1.0);
    // Both norms share the same area factor, so the ratio is 4.
    CHECK(fletcher_reeves_gamma(grid, gn, gp) == doctest::Approx(4.0));
    CHECK_THROWS_AS(
        (void)fletcher_reeves_gamma(grid, gn,
                                    std::vector<double>(gn.size(), 0.0)),
        Error);
}

TEST_CASE("gradient in total-heat mode adds the uniform correction") {
    Setup s(10);
    TemperatureField t = solve_direct(s.pc);
    auto g1 = gradient(s.pc, s.pc.g, s.sensors, t, CostMode::j1());
    const double p_g = 3.0, g_hat = 50.0;
    auto g2 = gradient(s.pc, s.pc.g, s.sensors, t, CostMode::j2(p_g, g_hat));
    const double corr = p_g * (integrate_s_in(s.grid, s.pc.g) - g_hat);
    for (size_t f = 0; f < g1.size(); ++f)
        CHECK(g2[f] - g1[f] == doctest::Approx(corr));
}

TEST_CASE("alifanov reconstructs the analytic flux from clean data") {
    Setup s;
    std::vector<double> g0(s.pc.g.size(), 0.0);
    StoppingRule rule;
    rule.j_tol = 1e-4;
    rule.max_iter = 100;
    auto g_ref = s.ac.g_an_field(s.grid);
    CgResult res =
        run_alifanov(s.pc, s.sensors, g0, rule, CostMode::j1(), &g_ref);
    CHECK(res.stop_reason == "j_tol");
    CHECK(static_cast<int>(res.trace.size()) <= 100);
    // The functional is monotone along the trace.
    for (size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].j <= res.trace[i - 1].j * (1.0 + 1e-12));
    auto [l2, linf] = relative_error_norms(s.grid, res.g, g_ref);
    CHECK(l2 < 0.05);
    CHECK(res.trace.back().err_l2 == doctest::Approx(l2));
}

TEST_CASE("iteration budget stops the solver") {
    Setup s(10);
    std::vector<double> g0(s.pc.g.size(), 0.0);
    StoppingRule rule;
    rule.j_tol = 0.0;  // disabled
    rule.max_iter = 2;
    CgResult res = run_alifanov(s.pc, s.sensors, g0, rule, CostMode::j1());
    CHECK(res.stop_reason == "max_iter");
    CHECK(res.trace.size() == 3);  // iterations 0, 1 and the final record
}

TEST_CASE("discrepancy principle stops on noisy-consistent misfit") {
    Setup s(10);
    std::vector<double> g0(s.pc.g.size(), 0.0);
    StoppingRule rule;
    rule.j_tol = 0.0;
    rule.max_iter = 100;
    // A huge omega makes the threshold larger than the initial misfit, so
    // the solver must stop immediately.
    rule.discrepancy =
        DiscrepancyRule{1e3, static_cast<int>(s.sensors.points.size()), true};
    CgResult res = run_alifanov(s.pc, s.sensors, g0, rule, CostMode::j1());
    CHECK(res.stop_reason == "discrepancy");
    CHECK(res.trace.size() == 1);
}

TEST_CASE("relative-change rule detects a plateau") {
    Setup s(10);
    std::vector<double> g0(s.pc.g.size(), 0.0);
    StoppingRule rule;
    rule.j_tol = 1e-30;  // unreachable
    rule.max_iter = 100;
    // At the round-off floor J still jitters by ~10-20% per iteration, so the
    // plateau detector needs a loose tolerance to fire.
    rule.rel_change_tol = 0.5;
    CgResult res = run_alifanov(s.pc, s.sensors, g0, rule, CostMode::j1());
    CHECK((res.stop_reason == "rel_change" || res.stop_reason == "stagnation"));
}

TEST_CASE("total-heat variant steers the integral toward the measurement") {
    Setup s;
    std::vector<double> g0(s.pc.g.size(), 0.0);
    StoppingRule rule;
    rule.j_tol = 1e-6;
    rule.max_iter = 60;
    CgResult res = run_alifanov(s.pc, s.sensors, g0, rule,
                                CostMode::j2(10.0, s.ac.total_heat()));
    const double q = integrate_s_in(s.grid, res.g);
    CHECK(std::abs(q - s.ac.total_heat()) / s.ac.total_heat() < 0.05);
}
