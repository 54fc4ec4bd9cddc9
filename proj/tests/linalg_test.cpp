#include <doctest.h>

#include <cmath>
#include <map>

#include "moldflux/linalg.hpp"

using namespace moldflux;

namespace {

// Small deterministic generator for test matrices.
struct Lcg {
    uint64_t s = 0x9e3779b97f4a7c15ULL;
    double next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    }
};

DenseMatrix random_spd(int m, Lcg& rng) {
    DenseMatrix b(m);
    for (double& v : b.a) v = rng.next();
    DenseMatrix a = b.transpose_times(b);
    for (int i = 0; i < m; ++i) a(i, i) += 1.0;  // keep it well conditioned
    return a;
}

DiscreteSystem dense_to_csr(const DenseMatrix& a) {
    DiscreteSystem s;
    s.n = a.m;
    s.row_ptr.push_back(0);
    for (int i = 0; i < a.m; ++i) {
        for (int j = 0; j < a.m; ++j)
            if (a(i, j) != 0.0) {
                s.col_idx.push_back(j);
                s.val.push_back(a(i, j));
            }
        s.row_ptr.push_back(static_cast<int>(s.col_idx.size()));
    }
    s.b.assign(a.m, 0.0);
    return s;
}

}  // namespace

TEST_CASE("pcg agrees with the dense solver on a random SPD system") {
    Lcg rng;
    DenseMatrix a = random_spd(12, rng);
    std::vector<double> x_true(12);
    for (double& v : x_true) v = rng.next();
    DiscreteSystem s = dense_to_csr(a);
    s.b = a.times(x_true);
    for (Preconditioner p :
         {Preconditioner::DiagonalIncompleteCholesky, Preconditioner::Jacobi}) {
        PcgOptions opts;
        opts.precond = p;
        auto sol = pcg_solve(s, opts);
        for (int i = 0; i < 12; ++i)
            CHECK(sol.x[i] == doctest::Approx(x_true[i]).epsilon(1e-8));
        CHECK(sol.residual <= opts.tol);
    }
}

TEST_CASE("pcg handles the zero right-hand side") {
    Lcg rng;
    DiscreteSystem s = dense_to_csr(random_spd(5, rng));
    auto sol = pcg_solve(s);
    for (double v : sol.x) CHECK(v == 0.0);
    CHECK(sol.iterations == 0);
}

TEST_CASE("pcg rejects an indefinite matrix") {
    DenseMatrix a(2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    DiscreteSystem s = dense_to_csr(a);
    s.b = {1.0, 1.0};
    CHECK_THROWS_WITH_AS((void)pcg_solve(s), doctest::Contains("positive"),
                         Error);
}

TEST_CASE("pcg reports no convergence when starved of iterations") {
    Lcg rng;
    DenseMatrix a = random_spd(12, rng);
    DiscreteSystem s = dense_to_csr(a);
    s.b.assign(12, 1.0);
    PcgOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-16;
    CHECK_THROWS_AS((void)pcg_solve(s, opts), Error);
}

TEST_CASE("lu full pivoting solves the 4x4 Hilbert system") {
    // Hilbert matrix H_ij = 1/(i+j+1); rhs chosen so the solution is ones.
    DenseMatrix h(4);
    std::vector<double> rhs(4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            h(i, j) = 1.0 / (i + j + 1);
            rhs[i] += h(i, j);
        }
    auto x = lu_full_pivot_solve(h, rhs);
    for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lu pivoting survives a zero leading diagonal") {
    DenseMatrix a(3);
    a(0, 1) = 2.0;
    a(1, 0) = 3.0;
    a(2, 2) = 4.0;
    auto x = lu_full_pivot_solve(a, {2.0, 6.0, 8.0});
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(1.0));
    CHECK(x[2] == doctest::Approx(2.0));
}

TEST_CASE("lu rejects the exactly singular matrix") {
    DenseMatrix a(3);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;  // second row is twice the first; third row zero
    CHECK_THROWS_WITH_AS((void)lu_full_pivot_solve(a, {1.0, 2.0, 0.0}),
                         doctest::Contains("singular"), Error);
}

TEST_CASE("svd of a diagonal matrix sorts descending") {
    DenseMatrix a(3);
    a(0, 0) = 2.0;
    a(1, 1) = 7.0;
    a(2, 2) = 0.5;
    auto svd = svd_decompose(a);
    REQUIRE(svd.rank == 3);
    CHECK(svd.sigma[0] == doctest::Approx(7.0));
    CHECK(svd.sigma[1] == doctest::Approx(2.0));
    CHECK(svd.sigma[2] == doctest::Approx(0.5));
    CHECK(condition_number(svd) == doctest::Approx(14.0));
}

TEST_CASE("svd reconstructs the input and preserves the trace") {
    Lcg rng;
    DenseMatrix a = random_spd(8, rng);
    auto svd = svd_decompose(a);
    REQUIRE(svd.rank == 8);
    double trace = 0.0, sum_sigma = 0.0;
    for (int i = 0; i < 8; ++i) trace += a(i, i);
    for (double s : svd.sigma) sum_sigma += s;
    CHECK(trace == doctest::Approx(sum_sigma).epsilon(1e-8));

    // ||U S V^T - A|| <= 1e-10 * sigma_1.
    double err = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double v = 0.0;
            for (int r = 0; r < 8; ++r)
                v += svd.u(i, r) * svd.sigma[r] * svd.v(j, r);
            err = std::max(err, std::abs(v - a(i, j)));
        }
    CHECK(err <= 1e-10 * svd.sigma[0]);
}

TEST_CASE("svd detects rank deficiency") {
    // Rank-1 PSD matrix from an outer product.
    std::vector<double> u = {1.0, -2.0, 3.0, 0.5};
    DenseMatrix a(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = u[i] * u[j];
    auto svd = svd_decompose(a);
    CHECK(svd.rank == 1);
    double norm2 = 0.0;
    for (double v : u) norm2 += v * v;
    CHECK(svd.sigma[0] == doctest::Approx(norm2));
}

TEST_CASE("svd requires a symmetric input") {
    DenseMatrix a(2);
    a(0, 1) = 1.0;
    a(1, 0) = 2.0;
    CHECK_THROWS_AS((void)svd_decompose(a), Error);
}

TEST_CASE("tsvd at full rank matches lu") {
    Lcg rng;
    DenseMatrix a = random_spd(5, rng);
    std::vector<double> rhs(5);
    for (double& v : rhs) v = rng.next();
    auto lu = lu_full_pivot_solve(a, rhs);
    auto svd = svd_decompose(a);
    auto ts = tsvd_solve(svd, rhs, svd.rank);
    for (int i = 0; i < 5; ++i)
        CHECK(ts[i] == doctest::Approx(lu[i]).epsilon(1e-8));
}

TEST_CASE("tsvd truncation projects onto the leading modes") {
    DenseMatrix a(3);
    a(0, 0) = 100.0;
    a(1, 1) = 1.0;
    a(2, 2) = 0.01;
    auto svd = svd_decompose(a);
    auto x = tsvd_solve(svd, {100.0, 1.0, 0.01}, 1);
    // Only the dominant mode is retained.
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(0.0));
    CHECK(x[2] == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)tsvd_solve(svd, {1.0, 1.0, 1.0}, 0), Error);
    CHECK_THROWS_AS((void)tsvd_solve(svd, {1.0, 1.0, 1.0}, 4), Error);
}
