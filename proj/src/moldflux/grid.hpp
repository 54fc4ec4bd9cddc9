#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "moldflux/errors.hpp"

namespace moldflux {

using Vec3 = std::array<double, 3>;

/// The six axis-aligned boundary patches of the box domain.
/// SIn is the hot face (y = 0), SF the cooled face (y = ly); the four
/// remaining faces form the exterior boundary.
enum class PatchId {
    SIn,     // y = 0
    SF,      // y = ly
    SExI,    // z = lz
    SExII,   // x = lx
    SExIII,  // z = 0
    SExIV,   // x = 0
};

constexpr std::array<PatchId, 6> kAllPatches = {
    PatchId::SIn, PatchId::SF, PatchId::SExI,
    PatchId::SExII, PatchId::SExIII, PatchId::SExIV};

const char* patch_name(PatchId p);

struct BoundaryFace {
    Vec3 center;
    double area;
    int cell;      // adjacent cell (linear index)
    Vec3 normal;   // outward unit normal
};

/// Uniform structured orthogonal hexahedral mesh of (0,lx)x(0,ly)x(0,lz).
/// Cells are indexed (i,j,k) with x fastest: linear = i + nx*(j + ny*k).
/// Immutable after construction.
class StructuredGrid {
public:
    StructuredGrid(int nx, int ny, int nz, double lx, double ly, double lz);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double lz() const { return lz_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double dz() const { return dz_; }

    int cell_count() const { return nx_ * ny_ * nz_; }
    double cell_volume() const { return dx_ * dy_ * dz_; }

    int linear_index(int i, int j, int k) const {
        return i + nx_ * (j + ny_ * k);
    }
    std::array<int, 3> ijk(int cell) const {
        return {cell % nx_, (cell / nx_) % ny_, cell / (nx_ * ny_)};
    }
    Vec3 cell_center(int cell) const {
        auto [i, j, k] = ijk(cell);
        return {(i + 0.5) * dx_, (j + 0.5) * dy_, (k + 0.5) * dz_};
    }

    /// Cell whose closed axis-aligned extent contains p. Points on internal
    /// faces resolve to the lower-index cell.
    int locate_cell(const Vec3& p) const;

    /// Enumerates the faces of one patch. Face ordering is deterministic:
    /// the two tangential indices run with the lower axis fastest.
    std::vector<BoundaryFace> boundary_faces(PatchId patch) const;

    int patch_face_count(PatchId patch) const;
    double patch_face_area(PatchId patch) const;

private:
    int nx_, ny_, nz_;
    double lx_, ly_, lz_;
    double dx_, dy_, dz_;
};

}  // namespace moldflux
