#include "moldflux/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace moldflux {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

namespace {

// Modified diagonal for the DIC preconditioner:
//   rd[i] = a_ii - sum_{j<i} a_ij^2 / rd[j]   (over stored lower entries)
std::vector<double> dic_diagonal(const DiscreteSystem& s) {
    std::vector<double> rd(s.n);
    for (int r = 0; r < s.n; ++r) {
        double d = 0.0;
        for (int p = s.row_ptr[r]; p < s.row_ptr[r + 1]; ++p) {
            const int c = s.col_idx[p];
            if (c == r)
                d += s.val[p];
            else if (c < r)
                d -= s.val[p] * s.val[p] / rd[c];
        }
        require(d > 0.0, ErrorCode::NotSpd,
                "pcg: non-positive pivot in DIC factorization");
        rd[r] = d;
    }
    return rd;
}

// z = M^{-1} r with M = (D~ + L) D~^{-1} (D~ + L^T).
void dic_apply(const DiscreteSystem& s, const std::vector<double>& rd,
               const std::vector<double>& r, std::vector<double>& z) {
    const int n = s.n;
    // Forward: (D~ + L) y = r
    for (int i = 0; i < n; ++i) {
        double acc = r[i];
        for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
            const int c = s.col_idx[p];
            if (c < i) acc -= s.val[p] * z[c];
        }
        z[i] = acc / rd[i];
    }
    // Backward: (I + D~^{-1} L^T) z = y
    for (int i = n - 1; i >= 0; --i) {
        double acc = 0.0;
        for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
            const int c = s.col_idx[p];
            if (c > i) acc += s.val[p] * z[c];
        }
        z[i] -= acc / rd[i];
    }
}

}  // namespace

PcgResult pcg_solve(const DiscreteSystem& sys, const PcgOptions& opts) {
    const int n = sys.n;
    require(n > 0, ErrorCode::InvalidArgument, "pcg: empty system");

    std::vector<double> rd;
    std::vector<double> inv_diag;
    if (opts.precond == Preconditioner::DiagonalIncompleteCholesky) {
        rd = dic_diagonal(sys);
    } else {
        inv_diag.resize(n);
        for (int i = 0; i < n; ++i) {
            const double d = sys.diag(i);
            require(d > 0.0, ErrorCode::NotSpd, "pcg: non-positive diagonal");
            inv_diag[i] = 1.0 / d;
        }
    }

    PcgResult res;
    res.x.assign(n, 0.0);
    std::vector<double> r = sys.b;
    const double bnorm = norm2(sys.b);
    if (bnorm == 0.0) return res;  // x = 0 solves exactly

    std::vector<double> z(n), p(n), ap(n);
    auto apply_precond = [&](const std::vector<double>& rin,
                             std::vector<double>& zout) {
        if (opts.precond == Preconditioner::DiagonalIncompleteCholesky)
            dic_apply(sys, rd, rin, zout);
        else
            for (int i = 0; i < n; ++i) zout[i] = inv_diag[i] * rin[i];
    };

    apply_precond(r, z);
    p = z;
    double rz = dot(r, z);

    for (int it = 0; it < opts.max_iter; ++it) {
        ap = sys.multiply(p);
        const double pap = dot(p, ap);
        require(pap > 0.0, ErrorCode::NotSpd, "pcg: p^T A p <= 0, matrix not SPD");
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res.iterations = it + 1;
        res.residual = norm2(r) / bnorm;
        if (res.residual <= opts.tol) return res;
        apply_precond(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw Error(ErrorCode::NoConvergence,
                "pcg: max iterations exceeded, residual " +
                    std::to_string(res.residual));
}

DenseMatrix DenseMatrix::identity(int size) {
    DenseMatrix m(size);
    for (int i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose_times(const DenseMatrix& other) const {
    DenseMatrix r(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += (*this)(k, i) * other(k, j);
            r(i, j) = s;
        }
    return r;
}

std::vector<double> DenseMatrix::transpose_times(
    const std::vector<double>& v) const {
    std::vector<double> r(m, 0.0);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) r[i] += (*this)(k, i) * v[k];
    return r;
}

std::vector<double> DenseMatrix::times(const std::vector<double>& v) const {
    std::vector<double> r(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) r[i] += (*this)(i, k) * v[k];
    return r;
}

std::vector<double> lu_full_pivot_solve(DenseMatrix a, std::vector<double> rhs) {
    const int m = a.m;
    require(m >= 1, ErrorCode::InvalidArgument, "lu: empty system");
    require(static_cast<int>(rhs.size()) == m, ErrorCode::InvalidArgument,
            "lu: rhs size mismatch");

    std::vector<int> col_perm(m);
    std::iota(col_perm.begin(), col_perm.end(), 0);

    // The normal matrices handled here are routinely singular to 1e-16
    // relative (cf. the singular-value decay of the Gram matrix), and full
    // pivoting is expected to push through them like a LAPACK solve would.
    // Only an (essentially) exactly zero remaining submatrix is rejected.
    double max_abs = 0.0;
    for (double v : a.a) max_abs = std::max(max_abs, std::abs(v));
    const double pivot_tol = 1e-30 * std::max(max_abs, 1.0);

    for (int s = 0; s < m; ++s) {
        // Largest absolute entry over the remaining submatrix.
        int pr = s, pc = s;
        double best = 0.0;
        for (int i = s; i < m; ++i)
            for (int j = s; j < m; ++j)
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pr = i;
                    pc = j;
                }
        require(best > pivot_tol, ErrorCode::SingularMatrix,
                "lu: matrix is singular to working precision");
        if (pr != s) {
            for (int j = 0; j < m; ++j) std::swap(a(s, j), a(pr, j));
            std::swap(rhs[s], rhs[pr]);
        }
        if (pc != s) {
            for (int i = 0; i < m; ++i) std::swap(a(i, s), a(i, pc));
            std::swap(col_perm[s], col_perm[pc]);
        }
        for (int i = s + 1; i < m; ++i) {
            const double f = a(i, s) / a(s, s);
            a(i, s) = f;
            for (int j = s + 1; j < m; ++j) a(i, j) -= f * a(s, j);
            rhs[i] -= f * rhs[s];
        }
    }

    std::vector<double> y(m);
    for (int i = m - 1; i >= 0; --i) {
        double acc = rhs[i];
        for (int j = i + 1; j < m; ++j) acc -= a(i, j) * y[j];
        y[i] = acc / a(i, i);
    }
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[col_perm[i]] = y[i];
    return x;
}

SvdResult svd_decompose(const DenseMatrix& amat, double rank_tol) {
    const int m = amat.m;
    require(m >= 1, ErrorCode::InvalidArgument, "svd: empty matrix");

    double max_abs = 0.0, max_asym = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            max_abs = std::max(max_abs, std::abs(amat(i, j)));
            max_asym = std::max(max_asym, std::abs(amat(i, j) - amat(j, i)));
        }
    require(max_asym <= 1e-8 * std::max(max_abs, 1.0),
            ErrorCode::InvalidArgument, "svd: matrix is not symmetric");

    // Cyclic Jacobi eigenvalue iteration (symmetric input).
    DenseMatrix a = amat;
    DenseMatrix q = DenseMatrix::identity(m);
    const double off_tol = 1e-15 * std::max(max_abs, 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) off = std::max(off, std::abs(a(i, j)));
        if (off <= off_tol) break;
        for (int p = 0; p < m; ++p)
            for (int qi = p + 1; qi < m; ++qi) {
                if (std::abs(a(p, qi)) <= off_tol) continue;
                const double theta = (a(qi, qi) - a(p, p)) / (2.0 * a(p, qi));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1.0 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (int i = 0; i < m; ++i) {
                    const double aip = a(i, p), aiq = a(i, qi);
                    a(i, p) = c * aip - s * aiq;
                    a(i, qi) = s * aip + c * aiq;
                }
                for (int j = 0; j < m; ++j) {
                    const double apj = a(p, j), aqj = a(qi, j);
                    a(p, j) = c * apj - s * aqj;
                    a(qi, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < m; ++i) {
                    const double qip = q(i, p), qiq = q(i, qi);
                    q(i, p) = c * qip - s * qiq;
                    q(i, qi) = s * qip + c * qiq;
                }
            }
    }

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> eig(m);
    for (int i = 0; i < m; ++i) eig[i] = a(i, i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::abs(eig[x]) > std::abs(eig[y]); });

    SvdResult res;
    res.u = DenseMatrix(m);
    res.v = DenseMatrix(m);
    res.sigma.resize(m);
    for (int j = 0; j < m; ++j) {
        const int src = order[j];
        const double lam = eig[src];
        res.sigma[j] = std::abs(lam);
        // For PSD input sigma = lambda and u = v; a (numerically) negative
        // eigenvalue flips the sign of the u column only.
        const double us = lam < 0 ? -1.0 : 1.0;
        for (int i = 0; i < m; ++i) {
            res.u(i, j) = us * q(i, src);
            res.v(i, j) = q(i, src);
        }
    }
    const double sigma1 = res.sigma.empty() ? 0.0 : res.sigma[0];
    res.rank = 0;
    for (int j = 0; j < m; ++j)
        if (res.sigma[j] > rank_tol * sigma1) ++res.rank;
    return res;
}

std::vector<double> tsvd_solve(const SvdResult& svd,
                               const std::vector<double>& rhs, int alpha) {
    const int m = svd.u.m;
    require(alpha >= 1 && alpha <= svd.rank, ErrorCode::InvalidArgument,
            "tsvd: alpha out of range [1, rank]");
    require(static_cast<int>(rhs.size()) == m, ErrorCode::InvalidArgument,
            "tsvd: rhs size mismatch");
    std::vector<double> x(m, 0.0);
    for (int i = 0; i < alpha; ++i) {
        double ur = 0.0;
        for (int r = 0; r < m; ++r) ur += svd.u(r, i) * rhs[r];
        const double coeff = ur / svd.sigma[i];
        for (int r = 0; r < m; ++r) x[r] += coeff * svd.v(r, i);
    }
    return x;
}

double condition_number(const SvdResult& svd) {
    require(svd.rank >= 1, ErrorCode::InvalidArgument, "condition_number: rank 0");
    return svd.sigma[0] / svd.sigma[svd.rank - 1];
}

}  // namespace moldflux
