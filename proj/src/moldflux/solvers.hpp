#pragma once

#include <vector>

#include "moldflux/linalg.hpp"

namespace moldflux {

/// Physical data of the direct problem on a rectangular box: conduction in
/// the solid, prescribed flux g on the hot face, optional fluxes on the four
/// exterior faces, convection against T_f on the cooled face.
struct PhysicalCase {
    const StructuredGrid* grid = nullptr;
    double k = 0.0;  // W/(m K)
    double h = 0.0;  // W/(m^2 K)
    std::vector<double> t_f;  // per SF face, K
    std::vector<double> g;    // per SIn face, W/m^2
    std::vector<double> q_I, q_II, q_III, q_IV;  // per exterior face, W/m^2
    PcgOptions pcg;
    AssembleOptions assembly;
    // Residual deposition for the adjoint solve: true spreads each point
    // source with the same trilinear weights used for sampling; false puts
    // it in the containing cell.
    bool interp_adjoint_sources = true;

    void validate() const;
    std::vector<double> zero_ex(PatchId p) const;
};

struct TemperatureField {
    std::vector<double> values;  // per cell, K
};

struct Sensors {
    std::vector<Vec3> points;
    std::vector<double> values;  // measured temperatures, K
};

/// Point sampling rule for cell fields: trilinear on the cell-center lattice;
/// axes without a full neighbor pair clamp to the nearest cell layer.
double sample_field(const StructuredGrid& grid, const std::vector<double>& cells,
                    const Vec3& p);

/// The sampling weights of p over (up to 8) cell centers; transpose of the
/// rule above, used to deposit point sources consistently.
std::vector<std::pair<int, double>> sample_weights(const StructuredGrid& grid,
                                                   const Vec3& p);

TemperatureField solve_direct(const PhysicalCase& pc);
TemperatureField solve_sensitivity(const PhysicalCase& pc,
                                   const std::vector<double>& delta_g);
TemperatureField solve_adjoint(const PhysicalCase& pc,
                               const std::vector<std::pair<Vec3, double>>& residuals);
TemperatureField solve_additive(const PhysicalCase& pc);

double eval_J1(const StructuredGrid& grid, const TemperatureField& t,
               const Sensors& sensors);
double eval_J2(const StructuredGrid& grid, const TemperatureField& t,
               const Sensors& sensors, const std::vector<double>& g,
               double g_hat, double p_g);

/// Face-area-weighted integral over SIn (midpoint quadrature).
double integrate_s_in(const StructuredGrid& grid, const std::vector<double>& f);
/// L2(SIn) inner product by the same quadrature.
double inner_s_in(const StructuredGrid& grid, const std::vector<double>& a,
                  const std::vector<double>& b);

/// Trace of a cell field on SIn: adjacent-cell value per boundary face.
std::vector<double> trace_s_in(const StructuredGrid& grid,
                               const std::vector<double>& cells);

}  // namespace moldflux
