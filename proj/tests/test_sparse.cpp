#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "westervelt/sparse.hpp"

using namespace westervelt;
using Catch::Approx;

TEST_CASE("identity solve returns the right-hand side") {
    SparseMatrix a(4);
    for (int i = 0; i < 4; ++i) a.add(i, i, cplx{1.0, 0.0});
    a.finalize();
    const std::vector<cplx> b = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    auto [x, rep] = solve(a, b);
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(x[i] - b[i]) < 1e-14);
    REQUIRE(rep.method == SolveMethod::direct);
    REQUIRE(rep.iterations == 0);
    REQUIRE(rep.residual_norm <= 1e-10);
}

TEST_CASE("complex diagonal solve") {
    SparseMatrix a(2);
    a.add(0, 0, cplx{2.0, 0.0});
    a.add(1, 1, cplx{0.0, 2.0});
    a.finalize();
    auto [x, rep] = solve(a, std::vector<cplx>{cplx{2, 0}, cplx{2, 0}});
    REQUIRE(std::abs(x[0] - cplx{1, 0}) < 1e-14);
    REQUIRE(std::abs(x[1] - cplx{0, -1}) < 1e-14);
}

TEST_CASE("duplicate triplets are summed on finalize") {
    SparseMatrix a(2);
    a.add(0, 0, cplx{1.0, 0.0});
    a.add(0, 0, cplx{1.0, 0.0});
    a.add(1, 1, cplx{1.0, 0.0});
    a.finalize();
    auto [x, rep] = solve(a, std::vector<cplx>{cplx{4, 0}, cplx{1, 0}});
    REQUIRE(std::abs(x[0] - cplx{2, 0}) < 1e-14);
}

namespace {

SparseMatrix random_well_conditioned(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_int_distribution<int> col(0, n - 1);
    SparseMatrix a(n);
    for (int i = 0; i < n; ++i) {
        double offsum = 0.0;
        for (int t = 0; t < 4; ++t) {
            const int j = col(rng);
            if (j == i) continue;
            const cplx v{uni(rng), uni(rng)};
            offsum += std::abs(v);
            a.add(i, j, v);
        }
        a.add(i, i, cplx{offsum + 1.0, offsum + 1.0});  // diagonally dominant
    }
    a.finalize();
    return a;
}

}  // namespace

TEST_CASE("random well-conditioned system meets the residual contract") {
    const int n = 100;
    const SparseMatrix a = random_well_conditioned(n, 42);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<cplx> b(n);
    for (auto& v : b) v = cplx{uni(rng), uni(rng)};

    auto [x, rep] = solve(a, b);
    // independent residual recomputation
    const Eigen::VectorXcd r = a.eigen() * to_eigen(x) - to_eigen(b);
    REQUIRE(r.norm() / to_eigen(b).norm() <= 1e-10);
    REQUIRE(rep.residual_norm <= 1e-10);

    auto [xi, repi] = solve(a, b, SolveMethod::iterative);
    const Eigen::VectorXcd ri = a.eigen() * to_eigen(xi) - to_eigen(b);
    REQUIRE(ri.norm() / to_eigen(b).norm() <= 1e-10);
    REQUIRE(repi.method == SolveMethod::iterative);
}

TEST_CASE("zero right-hand side returns exact zero") {
    const SparseMatrix a = random_well_conditioned(20, 3);
    auto [x, rep] = solve(a, std::vector<cplx>(20, cplx{}));
    for (const auto& v : x) REQUIRE(v == cplx{0.0, 0.0});
    REQUIRE(rep.residual_norm == 0.0);
}

TEST_CASE("singular matrix is reported") {
    SparseMatrix a(3);
    a.add(0, 0, cplx{1.0, 0.0});
    a.add(1, 1, cplx{1.0, 0.0});
    // row 2 left empty
    a.finalize();
    REQUIRE_THROWS_AS(solve(a, std::vector<cplx>(3, cplx{1.0, 0.0})), SingularMatrixError);
}

TEST_CASE("factorization reuse across right-hand sides") {
    const SparseMatrix a = random_well_conditioned(50, 11);
    Factorization f(a);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<cplx> b(50);
        for (auto& v : b) v = cplx{uni(rng), uni(rng)};
        auto [x, rep] = f.solve(b);
        REQUIRE(rep.residual_norm <= 1e-10);
    }
}

TEST_CASE("adjoint solve") {
    const SparseMatrix a = random_well_conditioned(30, 9);
    Factorization f(a);
    std::vector<cplx> b(30, cplx{1.0, -0.5});
    const auto x = f.solve_adjoint(b);
    const Eigen::VectorXcd r = a.eigen().adjoint() * to_eigen(x) - to_eigen(b);
    REQUIRE(r.norm() / to_eigen(b).norm() < 1e-12);
}
