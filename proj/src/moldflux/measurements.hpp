#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "moldflux/solvers.hpp"

namespace moldflux {

struct MeasurementSet {
    std::vector<Vec3> points;
    std::vector<double> values;  // K
    double total_heat = 0.0;     // W, meaningful only if has_total_heat
    bool has_total_heat = false;
    double noise_sigma = 0.0;
    uint64_t seed = 0;

    Sensors sensors() const { return Sensors{points, values}; }
};

/// count_x*count_z virtual thermocouples on the plane y = plane_y, uniformly
/// spaced and inset half a spacing from the lateral edges.
std::vector<Vec3> place_lattice(const StructuredGrid& grid, double plane_y,
                                int count_x, int count_z);

/// Analytical-mode synthesis: evaluate a closed form at the sensor points.
std::vector<double> synthesize(const std::function<double(const Vec3&)>& formula,
                               const std::vector<Vec3>& points);
/// Numerical mode: sample a computed field via the standard sampling rule.
std::vector<double> synthesize(const StructuredGrid& grid,
                               const TemperatureField& field,
                               const std::vector<Vec3>& points);

/// Deterministic IID N(0, omega^2) perturbation (xoshiro-style splitmix64
/// stream + Box-Muller). omega = 0 returns the input unchanged.
std::vector<double> add_noise(const std::vector<double>& values, double omega,
                              uint64_t seed);

double total_heat_from_water(double m_dot, double cp, double t_out, double t_in);
double total_heat_of_flux(const StructuredGrid& grid,
                          const std::vector<double>& g);

}  // namespace moldflux
