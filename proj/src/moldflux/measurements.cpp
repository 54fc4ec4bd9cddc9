#include "moldflux/measurements.hpp"

#include <cmath>

namespace moldflux {

std::vector<Vec3> place_lattice(const StructuredGrid& grid, double plane_y,
                                int count_x, int count_z) {
    require(plane_y > 0.0 && plane_y < grid.ly(), ErrorCode::OutOfDomain,
            "place_lattice: plane outside domain");
    require(count_x > 0 && count_z > 0, ErrorCode::InvalidArgument,
            "place_lattice: counts must be positive");
    const double sx = grid.lx() / count_x;
    const double sz = grid.lz() / count_z;
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(count_x) * count_z);
    for (int k = 0; k < count_z; ++k)
        for (int i = 0; i < count_x; ++i)
            pts.push_back({(i + 0.5) * sx, plane_y, (k + 0.5) * sz});
    return pts;
}

std::vector<double> synthesize(const std::function<double(const Vec3&)>& formula,
                               const std::vector<Vec3>& points) {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(formula(p));
    return v;
}

std::vector<double> synthesize(const StructuredGrid& grid,
                               const TemperatureField& field,
                               const std::vector<Vec3>& points) {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(sample_field(grid, field.values, p));
    return v;
}

namespace {
// splitmix64: documented, trivially portable, fixed by the seed.
uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-53;
}
}  // namespace

std::vector<double> add_noise(const std::vector<double>& values, double omega,
                              uint64_t seed) {
    require(omega >= 0.0, ErrorCode::InvalidArgument,
            "add_noise: omega must be >= 0");
    if (omega == 0.0) return values;
    std::vector<double> out = values;
    uint64_t state = seed;
    double cached = 0.0;
    bool has_cached = false;
    for (double& v : out) {
        double n;
        if (has_cached) {
            n = cached;
            has_cached = false;
        } else {
            // Box-Muller; u1 in (0,1] to keep the log finite.
            const double u1 = 1.0 - uniform01(state);
            const double u2 = uniform01(state);
            const double r = std::sqrt(-2.0 * std::log(u1));
            n = r * std::cos(2.0 * M_PI * u2);
            cached = r * std::sin(2.0 * M_PI * u2);
            has_cached = true;
        }
        v += omega * n;
    }
    return out;
}

double total_heat_from_water(double m_dot, double cp, double t_out,
                             double t_in) {
    require(m_dot > 0.0 && cp > 0.0, ErrorCode::InvalidArgument,
            "total_heat_from_water: m_dot and cp must be > 0");
    return m_dot * cp * (t_out - t_in);
}

double total_heat_of_flux(const StructuredGrid& grid,
                          const std::vector<double>& g) {
    return integrate_s_in(grid, g);
}

}  // namespace moldflux
