#include "moldflux/fvm.hpp"

#include <algorithm>
#include <cmath>

namespace moldflux {

std::vector<double> DiscreteSystem::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
            s += val[p] * x[col_idx[p]];
        y[r] = s;
    }
    return y;
}

double DiscreteSystem::diag(int row) const {
    for (int p = row_ptr[row]; p < row_ptr[row + 1]; ++p)
        if (col_idx[p] == row) return val[p];
    return 0.0;
}

BoundarySpec BoundarySpec::neumann(std::vector<double> flux) {
    BoundarySpec s;
    s.kind = BcKind::Neumann;
    s.q = std::move(flux);
    return s;
}

BoundarySpec BoundarySpec::robin(double h, std::vector<double> ambient) {
    BoundarySpec s;
    s.kind = BcKind::Robin;
    s.h = h;
    s.ambient = std::move(ambient);
    return s;
}

DiscreteSystem assemble(const StructuredGrid& grid, double k,
                        const std::map<PatchId, BoundarySpec>& bcs,
                        const std::vector<double>* volumetric_source,
                        const AssembleOptions& opts) {
    require(k > 0.0, ErrorCode::InvalidArgument, "assemble: k must be > 0");
    for (PatchId p : kAllPatches)
        require(bcs.count(p) == 1, ErrorCode::InvalidArgument,
                std::string("assemble: missing BC for patch ") + patch_name(p));

    const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    const int n = grid.cell_count();
    const double ax = k * grid.dy() * grid.dz() / grid.dx();  // W/K per x-face
    const double ay = k * grid.dx() * grid.dz() / grid.dy();
    const double az = k * grid.dx() * grid.dy() / grid.dz();

    DiscreteSystem sys;
    sys.n = n;
    sys.row_ptr.assign(n + 1, 0);
    sys.b.assign(n, 0.0);

    // Stencil size per row.
    for (int c = 0; c < n; ++c) {
        auto [i, j, kk] = grid.ijk(c);
        int nnz = 1;
        nnz += (i > 0) + (i < nx - 1) + (j > 0) + (j < ny - 1) + (kk > 0) +
               (kk < nz - 1);
        sys.row_ptr[c + 1] = nnz;
    }
    for (int c = 0; c < n; ++c) sys.row_ptr[c + 1] += sys.row_ptr[c];
    sys.col_idx.assign(sys.row_ptr[n], 0);
    sys.val.assign(sys.row_ptr[n], 0.0);

    // Interior two-point fluxes, columns in ascending order.
    for (int c = 0; c < n; ++c) {
        auto [i, j, kk] = grid.ijk(c);
        int p = sys.row_ptr[c];
        double d = 0.0;
        auto put = [&](int col, double v) {
            sys.col_idx[p] = col;
            sys.val[p] = v;
            ++p;
        };
        if (kk > 0) { put(c - nx * ny, -az); d += az; }
        if (j > 0) { put(c - nx, -ay); d += ay; }
        if (i > 0) { put(c - 1, -ax); d += ax; }
        int diag_pos = p++;
        if (i < nx - 1) { put(c + 1, -ax); d += ax; }
        if (j < ny - 1) { put(c + nx, -ay); d += ay; }
        if (kk < nz - 1) { put(c + nx * ny, -az); d += az; }
        sys.col_idx[diag_pos] = c;
        sys.val[diag_pos] = d;
    }

    // Boundary conditions.
    for (PatchId patch : kAllPatches) {
        const BoundarySpec& bc = bcs.at(patch);
        const auto faces = grid.boundary_faces(patch);
        switch (bc.kind) {
            case BcKind::Adiabatic:
                break;
            case BcKind::Neumann: {
                require(bc.q.size() == faces.size(), ErrorCode::InvalidArgument,
                        "assemble: Neumann field size mismatch");
                for (size_t f = 0; f < faces.size(); ++f)
                    sys.b[faces[f].cell] -= bc.q[f] * faces[f].area;
                break;
            }
            case BcKind::Robin: {
                require(bc.h > 0.0, ErrorCode::InvalidArgument,
                        "assemble: Robin h must be > 0");
                require(bc.ambient.size() == faces.size(),
                        ErrorCode::InvalidArgument,
                        "assemble: Robin ambient field size mismatch");
                // Distance from cell center to the boundary face.
                double dist = 0.0;
                if (patch == PatchId::SIn || patch == PatchId::SF)
                    dist = grid.dy() / 2;
                else if (patch == PatchId::SExI || patch == PatchId::SExIII)
                    dist = grid.dz() / 2;
                else
                    dist = grid.dx() / 2;
                const double h_eff =
                    opts.direct_robin ? bc.h : 1.0 / (1.0 / bc.h + dist / k);
                for (size_t f = 0; f < faces.size(); ++f) {
                    const int c = faces[f].cell;
                    const double hA = h_eff * faces[f].area;
                    for (int p = sys.row_ptr[c]; p < sys.row_ptr[c + 1]; ++p)
                        if (sys.col_idx[p] == c) { sys.val[p] += hA; break; }
                    sys.b[c] += hA * bc.ambient[f];
                }
                break;
            }
        }
    }

    if (volumetric_source) {
        require(static_cast<int>(volumetric_source->size()) == n,
                ErrorCode::InvalidArgument,
                "assemble: volumetric source size mismatch");
        for (int c = 0; c < n; ++c) sys.b[c] += (*volumetric_source)[c];
    }

    return sys;
}

void add_dirac_sources(DiscreteSystem& system, const StructuredGrid& grid,
                       const std::vector<std::pair<Vec3, double>>& points) {
    for (const auto& [p, strength] : points)
        system.b[grid.locate_cell(p)] += strength;
}

}  // namespace moldflux
