#include "moldflux/grid.hpp"

#include <cmath>

namespace moldflux {

const char* patch_name(PatchId p) {
    switch (p) {
        case PatchId::SIn: return "s_in";
        case PatchId::SF: return "sf";
        case PatchId::SExI: return "s_ex_I";
        case PatchId::SExII: return "s_ex_II";
        case PatchId::SExIII: return "s_ex_III";
        case PatchId::SExIV: return "s_ex_IV";
    }
    return "?";
}

StructuredGrid::StructuredGrid(int nx, int ny, int nz, double lx, double ly,
                               double lz)
    : nx_(nx), ny_(ny), nz_(nz), lx_(lx), ly_(ly), lz_(lz) {
    require(nx > 0 && ny > 0 && nz > 0, ErrorCode::InvalidArgument,
            "grid: cell counts must be positive");
    require(lx > 0 && ly > 0 && lz > 0, ErrorCode::InvalidArgument,
            "grid: lengths must be positive");
    dx_ = lx_ / nx_;
    dy_ = ly_ / ny_;
    dz_ = lz_ / nz_;
}

namespace {
// Index of the cell containing coordinate x along one axis; a point exactly
// on an internal face goes to the lower cell.
int axis_index(double x, double d, double len, int n, const char* axis) {
    require(x >= 0.0 && x <= len, ErrorCode::OutOfDomain,
            std::string("locate_cell: point outside domain along ") + axis);
    int i = static_cast<int>(std::floor(x / d));
    if (i > 0 && x <= i * d) --i;
    if (i >= n) i = n - 1;
    return i;
}
}  // namespace

int StructuredGrid::locate_cell(const Vec3& p) const {
    int i = axis_index(p[0], dx_, lx_, nx_, "x");
    int j = axis_index(p[1], dy_, ly_, ny_, "y");
    int k = axis_index(p[2], dz_, lz_, nz_, "z");
    return linear_index(i, j, k);
}

int StructuredGrid::patch_face_count(PatchId patch) const {
    switch (patch) {
        case PatchId::SIn:
        case PatchId::SF: return nx_ * nz_;
        case PatchId::SExI:
        case PatchId::SExIII: return nx_ * ny_;
        case PatchId::SExII:
        case PatchId::SExIV: return ny_ * nz_;
    }
    return 0;
}

double StructuredGrid::patch_face_area(PatchId patch) const {
    switch (patch) {
        case PatchId::SIn:
        case PatchId::SF: return dx_ * dz_;
        case PatchId::SExI:
        case PatchId::SExIII: return dx_ * dy_;
        case PatchId::SExII:
        case PatchId::SExIV: return dy_ * dz_;
    }
    return 0.0;
}

std::vector<BoundaryFace> StructuredGrid::boundary_faces(PatchId patch) const {
    std::vector<BoundaryFace> faces;
    faces.reserve(patch_face_count(patch));
    const double area = patch_face_area(patch);

    switch (patch) {
        case PatchId::SIn:  // y = 0, x fastest then z
            for (int k = 0; k < nz_; ++k)
                for (int i = 0; i < nx_; ++i)
                    faces.push_back({{(i + 0.5) * dx_, 0.0, (k + 0.5) * dz_},
                                     area,
                                     linear_index(i, 0, k),
                                     {0, -1, 0}});
            break;
        case PatchId::SF:  // y = ly
            for (int k = 0; k < nz_; ++k)
                for (int i = 0; i < nx_; ++i)
                    faces.push_back({{(i + 0.5) * dx_, ly_, (k + 0.5) * dz_},
                                     area,
                                     linear_index(i, ny_ - 1, k),
                                     {0, 1, 0}});
            break;
        case PatchId::SExI:  // z = lz
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i)
                    faces.push_back({{(i + 0.5) * dx_, (j + 0.5) * dy_, lz_},
                                     area,
                                     linear_index(i, j, nz_ - 1),
                                     {0, 0, 1}});
            break;
        case PatchId::SExII:  // x = lx
            for (int k = 0; k < nz_; ++k)
                for (int j = 0; j < ny_; ++j)
                    faces.push_back({{lx_, (j + 0.5) * dy_, (k + 0.5) * dz_},
                                     area,
                                     linear_index(nx_ - 1, j, k),
                                     {1, 0, 0}});
            break;
        case PatchId::SExIII:  // z = 0
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i)
                    faces.push_back({{(i + 0.5) * dx_, (j + 0.5) * dy_, 0.0},
                                     area,
                                     linear_index(i, j, 0),
                                     {0, 0, -1}});
            break;
        case PatchId::SExIV:  // x = 0
            for (int k = 0; k < nz_; ++k)
                for (int j = 0; j < ny_; ++j)
                    faces.push_back({{0.0, (j + 0.5) * dy_, (k + 0.5) * dz_},
                                     area,
                                     linear_index(0, j, k),
                                     {-1, 0, 0}});
            break;
    }
    return faces;
}

}  // namespace moldflux
