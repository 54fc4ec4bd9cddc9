#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moldflux/alifanov.hpp"

namespace moldflux {

/// Gaussian radial basis on the hot face, one basis per center:
/// phi_j(x) = exp(-(eta ||x - xi_j||)^2).
struct RbfBasis {
    std::vector<Vec3> centers;  // on the y = 0 plane
    double eta = 0.7;           // shape parameter, 1/m

    int size() const { return static_cast<int>(centers.size()); }
};

std::vector<Vec3> project_to_boundary(const std::vector<Vec3>& points);

double rbf_evaluate(const RbfBasis& basis, int j, const Vec3& x);

/// phi_j sampled at the SIn face midpoints.
std::vector<double> rbf_face_field(const RbfBasis& basis,
                                   const StructuredGrid& grid, int j);

/// Persisted product of the offline phase: the sensor-response matrix, the
/// additive-solution samples and the basis integrals, plus enough metadata
/// to verify that an online case matches.
struct OfflineArtifact {
    static constexpr uint32_t kFormatVersion = 1;

    int m = 0;
    DenseMatrix theta;                  // Theta_ij = T[phi_j](x_i) + T_ad(x_i)
    std::vector<double> t_ad_samples;   // T_ad(x_i)
    std::vector<double> phi_integrals;  // integral of phi_j over SIn

    // Metadata identifying the build.
    int nx = 0, ny = 0, nz = 0;
    double lx = 0, ly = 0, lz = 0;
    double k = 0, h = 0, eta = 0;
    std::vector<Vec3> centers;
    std::vector<Vec3> sensor_points;

    uint64_t metadata_hash() const;
    /// Throws an integrity error when the artifact was built for a different
    /// grid/physics/basis combination.
    void check_matches(const PhysicalCase& pc, const RbfBasis& basis,
                       const std::vector<Vec3>& sensors) const;
};

/// M direct solves (g = phi_j) plus one additive solve. threads > 1 runs the
/// independent solves in parallel.
OfflineArtifact build_offline(const PhysicalCase& pc, const RbfBasis& basis,
                              const std::vector<Vec3>& sensor_points,
                              int threads = 1);

enum class OnlineReg { Lu, Tsvd };

struct OnlineOptions {
    OnlineReg reg = OnlineReg::Lu;
    int tsvd_alpha = 0;
    CostMode mode;  // reuses the J1/J2 selector
};

/// Normal-equation solve for the basis weights. J1: Th^T Th w = Th^T (T_hat +
/// T_ad). J2: (Th^T Th + p_g Phi) w = p_g G_hat phi + Th^T (T_ad + T_hat).
std::vector<double> online_solve(const OfflineArtifact& artifact,
                                 const std::vector<double>& t_hat,
                                 const OnlineOptions& opts);

std::vector<double> reconstruct_flux(const RbfBasis& basis,
                                     const StructuredGrid& grid,
                                     const std::vector<double>& w);

void save_artifact(const OfflineArtifact& artifact, const std::string& path);
OfflineArtifact load_artifact(const std::string& path);

}  // namespace moldflux
