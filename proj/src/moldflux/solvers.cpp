#include "moldflux/solvers.hpp"

#include <cmath>

namespace moldflux {

void PhysicalCase::validate() const {
    require(grid != nullptr, ErrorCode::InvalidArgument, "case: missing grid");
    require(k > 0.0, ErrorCode::InvalidArgument, "case: k must be > 0");
    require(h > 0.0, ErrorCode::InvalidArgument, "case: h must be > 0");
    require(t_f.size() == static_cast<size_t>(grid->patch_face_count(PatchId::SF)),
            ErrorCode::InvalidArgument, "case: T_f size mismatch");
    require(g.size() == static_cast<size_t>(grid->patch_face_count(PatchId::SIn)),
            ErrorCode::InvalidArgument, "case: g size mismatch");
}

std::vector<double> PhysicalCase::zero_ex(PatchId p) const {
    return std::vector<double>(grid->patch_face_count(p), 0.0);
}

namespace {

// Per-axis interpolation stencil on the cell-center lattice.
struct AxisStencil {
    int i0, i1;
    double w1;  // weight of i1; i0 gets 1 - w1
};

AxisStencil axis_stencil(double x, double d, int n) {
    const double u = x / d - 0.5;
    int i0 = static_cast<int>(std::floor(u));
    double w1 = u - i0;
    if (i0 < 0) { i0 = 0; w1 = 0.0; }           // clamp: nearest layer
    if (i0 >= n - 1) { i0 = n - 1; w1 = 0.0; }
    const int i1 = std::min(i0 + 1, n - 1);
    return {i0, i1, w1};
}

std::vector<double> neumann_field(const PhysicalCase& pc, PatchId p,
                                  const std::vector<double>* f) {
    if (f && !f->empty()) {
        require(f->size() == static_cast<size_t>(pc.grid->patch_face_count(p)),
                ErrorCode::InvalidArgument, "case: exterior flux size mismatch");
        return *f;
    }
    return pc.zero_ex(p);
}

TemperatureField run_solve(const PhysicalCase& pc, DiscreteSystem&& sys) {
    auto res = pcg_solve(sys, pc.pcg);
    return TemperatureField{std::move(res.x)};
}

}  // namespace

std::vector<std::pair<int, double>> sample_weights(const StructuredGrid& grid,
                                                   const Vec3& p) {
    require(p[0] >= 0 && p[0] <= grid.lx() && p[1] >= 0 && p[1] <= grid.ly() &&
                p[2] >= 0 && p[2] <= grid.lz(),
            ErrorCode::OutOfDomain, "sample: point outside domain");
    const AxisStencil sx = axis_stencil(p[0], grid.dx(), grid.nx());
    const AxisStencil sy = axis_stencil(p[1], grid.dy(), grid.ny());
    const AxisStencil sz = axis_stencil(p[2], grid.dz(), grid.nz());
    std::vector<std::pair<int, double>> w;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const double weight = (a ? sx.w1 : 1 - sx.w1) *
                                      (b ? sy.w1 : 1 - sy.w1) *
                                      (c ? sz.w1 : 1 - sz.w1);
                if (weight == 0.0) continue;
                const int cell = grid.linear_index(a ? sx.i1 : sx.i0,
                                                   b ? sy.i1 : sy.i0,
                                                   c ? sz.i1 : sz.i0);
                w.emplace_back(cell, weight);
            }
    return w;
}

double sample_field(const StructuredGrid& grid, const std::vector<double>& cells,
                    const Vec3& p) {
    double s = 0.0;
    for (const auto& [cell, weight] : sample_weights(grid, p))
        s += weight * cells[cell];
    return s;
}

TemperatureField solve_direct(const PhysicalCase& pc) {
    pc.validate();
    std::map<PatchId, BoundarySpec> bcs;
    bcs[PatchId::SIn] = BoundarySpec::neumann(pc.g);
    bcs[PatchId::SF] = BoundarySpec::robin(pc.h, pc.t_f);
    bcs[PatchId::SExI] = BoundarySpec::neumann(neumann_field(pc, PatchId::SExI, &pc.q_I));
    bcs[PatchId::SExII] = BoundarySpec::neumann(neumann_field(pc, PatchId::SExII, &pc.q_II));
    bcs[PatchId::SExIII] = BoundarySpec::neumann(neumann_field(pc, PatchId::SExIII, &pc.q_III));
    bcs[PatchId::SExIV] = BoundarySpec::neumann(neumann_field(pc, PatchId::SExIV, &pc.q_IV));
    return run_solve(pc, assemble(*pc.grid, pc.k, bcs, nullptr, pc.assembly));
}

TemperatureField solve_sensitivity(const PhysicalCase& pc,
                                   const std::vector<double>& delta_g) {
    pc.validate();
    std::map<PatchId, BoundarySpec> bcs;
    bcs[PatchId::SIn] = BoundarySpec::neumann(delta_g);
    bcs[PatchId::SF] =
        BoundarySpec::robin(pc.h, pc.zero_ex(PatchId::SF));
    for (PatchId p : {PatchId::SExI, PatchId::SExII, PatchId::SExIII, PatchId::SExIV})
        bcs[p] = BoundarySpec::adiabatic();
    return run_solve(pc, assemble(*pc.grid, pc.k, bcs, nullptr, pc.assembly));
}

TemperatureField solve_adjoint(
    const PhysicalCase& pc,
    const std::vector<std::pair<Vec3, double>>& residuals) {
    pc.validate();
    std::map<PatchId, BoundarySpec> bcs;
    bcs[PatchId::SIn] = BoundarySpec::adiabatic();
    bcs[PatchId::SF] = BoundarySpec::robin(pc.h, pc.zero_ex(PatchId::SF));
    for (PatchId p : {PatchId::SExI, PatchId::SExII, PatchId::SExIII, PatchId::SExIV})
        bcs[p] = BoundarySpec::adiabatic();
    DiscreteSystem sys = assemble(*pc.grid, pc.k, bcs, nullptr, pc.assembly);
    if (pc.interp_adjoint_sources) {
        for (const auto& [p, strength] : residuals)
            for (const auto& [cell, weight] : sample_weights(*pc.grid, p))
                sys.b[cell] += weight * strength;
    } else {
        add_dirac_sources(sys, *pc.grid, residuals);
    }
    return run_solve(pc, std::move(sys));
}

TemperatureField solve_additive(const PhysicalCase& pc) {
    pc.validate();
    std::vector<double> neg_tf(pc.t_f.size());
    for (size_t i = 0; i < pc.t_f.size(); ++i) neg_tf[i] = -pc.t_f[i];
    // Exterior fluxes enter negated so that the affine decomposition
    // T[g] = sum_j w_j (T[phi_j] + T_ad) - T_ad holds also when the
    // exterior faces are not adiabatic; with q = 0 this is the plain
    // additive problem.
    auto negated = [&](PatchId p, const std::vector<double>& q) {
        std::vector<double> out = neumann_field(pc, p, &q);
        for (double& v : out) v = -v;
        return out;
    };
    std::map<PatchId, BoundarySpec> bcs;
    bcs[PatchId::SIn] = BoundarySpec::adiabatic();
    bcs[PatchId::SF] = BoundarySpec::robin(pc.h, neg_tf);
    bcs[PatchId::SExI] = BoundarySpec::neumann(negated(PatchId::SExI, pc.q_I));
    bcs[PatchId::SExII] = BoundarySpec::neumann(negated(PatchId::SExII, pc.q_II));
    bcs[PatchId::SExIII] = BoundarySpec::neumann(negated(PatchId::SExIII, pc.q_III));
    bcs[PatchId::SExIV] = BoundarySpec::neumann(negated(PatchId::SExIV, pc.q_IV));
    return run_solve(pc, assemble(*pc.grid, pc.k, bcs, nullptr, pc.assembly));
}

double eval_J1(const StructuredGrid& grid, const TemperatureField& t,
               const Sensors& sensors) {
    require(!sensors.points.empty(), ErrorCode::InvalidArgument,
            "eval_J1: no sensors");
    double j = 0.0;
    for (size_t i = 0; i < sensors.points.size(); ++i) {
        const double r =
            sample_field(grid, t.values, sensors.points[i]) - sensors.values[i];
        j += r * r;
    }
    return 0.5 * j;
}

double eval_J2(const StructuredGrid& grid, const TemperatureField& t,
               const Sensors& sensors, const std::vector<double>& g,
               double g_hat, double p_g) {
    require(p_g >= 0.0, ErrorCode::InvalidArgument, "eval_J2: p_g must be >= 0");
    const double mismatch = integrate_s_in(grid, g) - g_hat;
    return eval_J1(grid, t, sensors) + 0.5 * p_g * mismatch * mismatch;
}

double integrate_s_in(const StructuredGrid& grid, const std::vector<double>& f) {
    require(f.size() == static_cast<size_t>(grid.patch_face_count(PatchId::SIn)),
            ErrorCode::InvalidArgument, "integrate_s_in: size mismatch");
    const double area = grid.patch_face_area(PatchId::SIn);
    double s = 0.0;
    for (double v : f) s += v;
    return s * area;
}

double inner_s_in(const StructuredGrid& grid, const std::vector<double>& a,
                  const std::vector<double>& b) {
    const double area = grid.patch_face_area(PatchId::SIn);
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * area;
}

std::vector<double> trace_s_in(const StructuredGrid& grid,
                               const std::vector<double>& cells) {
    const auto faces = grid.boundary_faces(PatchId::SIn);
    std::vector<double> tr(faces.size());
    for (size_t f = 0; f < faces.size(); ++f) tr[f] = cells[faces[f].cell];
    return tr;
}

}  // namespace moldflux
