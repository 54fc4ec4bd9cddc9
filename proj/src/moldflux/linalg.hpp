#pragma once

#include <vector>

#include "moldflux/fvm.hpp"

namespace moldflux {

enum class Preconditioner { DiagonalIncompleteCholesky, Jacobi };

struct PcgOptions {
    double tol = 1e-12;  // relative residual
    int max_iter = 10000;
    Preconditioner precond = Preconditioner::DiagonalIncompleteCholesky;
};

struct PcgResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // final relative residual
};

PcgResult pcg_solve(const DiscreteSystem& system, const PcgOptions& opts = {});

/// Dense row-major square matrix, sized for the M x M inverse systems.
struct DenseMatrix {
    int m = 0;
    std::vector<double> a;  // row-major

    DenseMatrix() = default;
    explicit DenseMatrix(int size) : m(size), a(size * size, 0.0) {}
    double& operator()(int i, int j) { return a[i * m + j]; }
    double operator()(int i, int j) const { return a[i * m + j]; }

    static DenseMatrix identity(int size);
    DenseMatrix transpose_times(const DenseMatrix& other) const;  // this^T * other
    std::vector<double> transpose_times(const std::vector<double>& v) const;
    std::vector<double> times(const std::vector<double>& v) const;
};

std::vector<double> lu_full_pivot_solve(DenseMatrix a, std::vector<double> rhs);

struct SvdResult {
    DenseMatrix u;              // M x M, columns are singular vectors
    DenseMatrix v;
    std::vector<double> sigma;  // descending, all retained values > 0
    int rank = 0;               // count above rank_tol * sigma[0]
};

/// Eigen-decomposition of a symmetric PSD matrix by cyclic Jacobi rotations,
/// reported as an SVD (sigma descending, U = V up to column signs).
SvdResult svd_decompose(const DenseMatrix& amat, double rank_tol = 1e-12);

/// x = sum_{i<alpha} (u_i . rhs / sigma_i) v_i, 1 <= alpha <= rank.
std::vector<double> tsvd_solve(const SvdResult& svd,
                               const std::vector<double>& rhs, int alpha);

double condition_number(const SvdResult& svd);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace moldflux
