#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "moldflux/measurements.hpp"

namespace moldflux {

/// Closed-form benchmark on the unit cube. The temperature
/// a x^2 + b x y + c y - a z^2 + c is harmonic and the boundary data below
/// reproduce it exactly, so every solver layer can be checked against it.
struct AnalyticalCase {
    double a = 5.0, b = 10.0, c = 15.0;  // K/m^2
    double k = 3.0;                      // W/(m K)
    double h = 5.0;                      // W/(m^2 K)
    double L = 1.0, W = 1.0, H = 1.0;    // m

    double t_an(const Vec3& p) const {
        return a * p[0] * p[0] + b * p[0] * p[1] + c * p[1] - a * p[2] * p[2] + c;
    }
    double g_an(const Vec3& p) const { return k * (b * p[0] + c); }
    double t_f(const Vec3& p) const {
        return k * (b * p[0] + c) / h + a * p[0] * p[0] + c * p[1] -
               a * p[2] * p[2] + b * p[0] * W + c;
    }
    double q_I(const Vec3&) const { return 2.0 * k * a * H; }
    double q_II(const Vec3& p) const { return -k * (2.0 * a * L + b * p[1]); }
    double q_III(const Vec3&) const { return 0.0; }
    double q_IV(const Vec3& p) const { return k * b * p[1]; }

    /// Exact integral of g_an over the hot face: k (b/2 + c) L H.
    double total_heat() const { return k * (b / 2.0 + c) * L * H; }

    StructuredGrid make_grid(int n_per_axis) const;
    /// Full benchmark case with g = g_an sampled at face midpoints.
    PhysicalCase make_case(const StructuredGrid& grid) const;
    std::vector<double> g_an_field(const StructuredGrid& grid) const;
};

/// Mold-plate benchmark with typical plant values; the reference flux is
/// prescribed, measurements are synthesized numerically.
struct IndustrialCase {
    double k = 300.0;     // W/(m K)
    double h = 5.66e4;    // W/(m^2 K)
    double L = 2.0, W = 0.1, H = 1.2;  // m

    double t_f(const Vec3& p) const { return 303.0 + 8.0 * (1.2 - p[2]); }
    double g_true(const Vec3& p) const {
        return 1e5 * (2.0 * (p[0] - 1.0) * (p[0] - 1.0) - 2.0 * p[2] - 5.0);
    }

    /// full = true gives the full-resolution 200x50x100 grid; the default
    /// desk grid is 100x25x50.
    StructuredGrid make_grid(bool full = false) const;
    PhysicalCase make_case(const StructuredGrid& grid) const;
    std::vector<double> g_true_field(const StructuredGrid& grid) const;
};

/// Relative error of a flux estimate against a nowhere-zero reference:
/// area-weighted L2 and pointwise Linf of (g - g_ref)/g_ref.
std::pair<double, double> relative_error_norms(const StructuredGrid& grid,
                                               const std::vector<double>& g_est,
                                               const std::vector<double>& g_ref);

struct ConvergenceRow {
    int n;
    double abs_l2;
    double rel_l2;
};
struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope;  // log-log fit of abs_l2 vs spacing; NaN for < 2 levels
};

ConvergenceResult run_convergence_study(const AnalyticalCase& bench,
                                        const std::vector<int>& levels,
                                        const PcgOptions& pcg = {});

/// Maps one (possibly noisy) measurement vector to an estimated flux on SIn.
using InverseSolver =
    std::function<std::vector<double>(const std::vector<double>& t_hat)>;

struct NoiseRow {
    double omega;
    double mean_l2, q05_l2, q95_l2;
    double mean_linf, q05_linf, q95_linf;
};

/// Repetition r of a study perturbs the clean measurements with seed
/// (base_seed + r), so studies are bit-reproducible.
std::vector<NoiseRow> run_noise_study(const StructuredGrid& grid,
                                      const InverseSolver& solver,
                                      const std::vector<double>& t_clean,
                                      const std::vector<double>& g_ref,
                                      const std::vector<double>& omegas,
                                      int repetitions, uint64_t base_seed);

struct PgRow {
    double p_g;
    double l2, linf;
    double total_heat_rel_err;
};

std::vector<PgRow> run_pg_sweep(
    const StructuredGrid& grid,
    const std::function<std::vector<double>(double p_g)>& solver_for_pg,
    const std::vector<double>& g_ref, double g_hat,
    const std::vector<double>& pg_values);

/// Empirical quantile by linear interpolation of order statistics.
double quantile(std::vector<double> values, double q);

}  // namespace moldflux
