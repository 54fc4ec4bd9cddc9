#pragma once

#include <map>
#include <optional>
#include <vector>

#include "moldflux/grid.hpp"

namespace moldflux {

/// Sparse symmetric system A T = b in CSR layout. A is in W/K, b in W,
/// unknowns in K.
struct DiscreteSystem {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> val;
    std::vector<double> b;

    std::vector<double> multiply(const std::vector<double>& x) const;
    double diag(int row) const;
};

enum class BcKind { Neumann, Robin, Adiabatic };

/// Robin faces eliminate the face temperature by series conduction-convection
/// (h_eff = 1/(1/h + d/k)); set direct_robin to use h_eff = h instead.
struct BoundarySpec {
    BcKind kind = BcKind::Adiabatic;
    std::vector<double> q;        // Neumann: -k grad(u).n = q, per face, W/m^2
    double h = 0.0;               // Robin coefficient, W/(m^2 K)
    std::vector<double> ambient;  // Robin ambient, per face, K

    static BoundarySpec adiabatic() { return {}; }
    static BoundarySpec neumann(std::vector<double> flux);
    static BoundarySpec robin(double h, std::vector<double> ambient);
};

struct AssembleOptions {
    bool direct_robin = false;  // h_eff = h instead of series elimination
};

DiscreteSystem assemble(const StructuredGrid& grid, double k,
                        const std::map<PatchId, BoundarySpec>& bcs,
                        const std::vector<double>* volumetric_source = nullptr,
                        const AssembleOptions& opts = {});

/// Deposits each point strength (W) entirely into the containing cell.
void add_dirac_sources(DiscreteSystem& system, const StructuredGrid& grid,
                       const std::vector<std::pair<Vec3, double>>& points);

}  // namespace moldflux
