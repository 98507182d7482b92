#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "spinladder/eigensolver.hpp"
#include "spinladder/hamiltonian.hpp"

using namespace spinladder;

namespace {

HamiltonianPair pair_from_dense(const Matrix& h1) {
    HamiltonianPair ham;
    ham.h0 = SparseMatrix(h1.rows(), h1.cols());
    ham.h1 = h1.sparseView();
    ham.h1.makeCompressed();
    return ham;
}

Matrix random_symmetric(Index n, std::mt19937& rng, double density = 0.3) {
    Matrix m = Matrix::Zero(n, n);
    auto uniform = [&]() { return 2.0 * (static_cast<double>(rng()) / 4294967296.0) - 1.0; };
    for (Index i = 0; i < n; ++i) {
        m(i, i) = uniform();
        for (Index j = i + 1; j < n; ++j) {
            if (static_cast<double>(rng()) / 4294967296.0 < density) {
                const double v = uniform();
                m(i, j) = v;
                m(j, i) = v;
            }
        }
    }
    return m;
}

// frozen by dense diagonalization of the 924-dimensional ladder matrix
constexpr double kStrongRungLevels[4] = {-68.174361251051664, -54.805657713248145,
                                         -54.192080482733303, -53.348051953248259};

}  // namespace

TEST_CASE("single rung eigenpairs") {
    const auto ham = build_su2(enumerate_su2(1), CouplingSet::make(1.0, 0.0, 0.0), 1);
    const EigenResult res = lowest_eigenpairs(ham, 1.0, 2, 1e-12);
    CHECK(res.eigenvalues[0] == Catch::Approx(-0.75).margin(1e-13));
    CHECK(res.eigenvalues[1] == Catch::Approx(0.25).margin(1e-13));
    CHECK(res.iterations == 0);  // dense path
}

TEST_CASE("two-state flip matrix") {
    Matrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    const EigenResult res = lowest_eigenpairs(pair_from_dense(h), 1.0, 1, 1e-12);
    CHECK(res.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-13));
}

TEST_CASE("argument validation") {
    const auto ham = build_su2(enumerate_su2(1), CouplingSet::make(1.0, 0.0, 0.0), 1);
    CHECK_THROWS_AS(lowest_eigenpairs(ham, 1.0, 3, 1e-10), DimensionMismatchError);
    CHECK_THROWS_AS(lowest_eigenpairs(ham, 1.0, 0, 1e-10), DimensionMismatchError);
    CHECK_THROWS_AS(lowest_eigenpairs(ham, 1.0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("lanczos agrees with dense on the full ladder") {
    const int length = 6;
    const CouplingSet c = CouplingSet::make(15.0, 5.0, 3.0);
    const auto ham = build_su2(enumerate_su2(length), c, length);
    REQUIRE(ham.dim() == 924);

    SolverOptions opts;  // dim 924 > 256: iterative path
    const EigenResult res = lowest_eigenpairs(ham, c.jt, 4, 1e-9, opts);
    CHECK(res.iterations > 0);

    const Vector dense = dense_spectrum(ham, c.jt);
    for (int i = 0; i < 4; ++i) {
        CHECK(res.eigenvalues[i] == Catch::Approx(dense[i]).margin(1e-8));
        CHECK(res.eigenvalues[i] == Catch::Approx(kStrongRungLevels[i]).margin(1e-7));
    }
    for (Index i = 0; i < res.residuals.size(); ++i) CHECK(res.residuals[i] <= 1e-9);

    // orthonormality of the returned block
    const Matrix gram = res.eigenvectors.transpose() * res.eigenvectors;
    CHECK((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);

    // variational: the iterative ground level cannot undercut the dense one
    CHECK(res.eigenvalues[0] >= dense[0] - 1e-9);
}

TEST_CASE("forced lanczos matches forced dense on random matrices") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 6; ++trial) {
        const Index n = 30 + static_cast<Index>(rng() % 40);
        const Matrix m = random_symmetric(n, rng);
        const auto ham = pair_from_dense(m);
        const Index k = 3;

        SolverOptions lanczos_opts;
        lanczos_opts.dense_threshold = 1;
        lanczos_opts.seed = 1234 + trial;
        const EigenResult it = lowest_eigenpairs(ham, 1.0, k, 1e-10, lanczos_opts);
        const EigenResult dn = dense_lowest(ham, 1.0, k);

        for (Index i = 0; i < k; ++i)
            CHECK(it.eigenvalues[i] == Catch::Approx(dn.eigenvalues[i]).margin(1e-8));
        for (Index i = 0; i < k; ++i) CHECK(it.residuals[i] <= 1e-10);
    }
}

TEST_CASE("degenerate multiplets are fully resolved") {
    // diagonal with exact double eigenvalues; a single Krylov sequence sees
    // one copy per value, so this exercises the deflated restart
    const Index n = 40;
    Matrix m = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = static_cast<double>(i / 2 + 1);
    const auto ham = pair_from_dense(m);

    SolverOptions opts;
    opts.dense_threshold = 1;
    const EigenResult res = lowest_eigenpairs(ham, 1.0, 4, 1e-10, opts);
    CHECK(res.eigenvalues[0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(res.eigenvalues[1] == Catch::Approx(1.0).margin(1e-9));
    CHECK(res.eigenvalues[2] == Catch::Approx(2.0).margin(1e-9));
    CHECK(res.eigenvalues[3] == Catch::Approx(2.0).margin(1e-9));
    const Matrix gram = res.eigenvectors.transpose() * res.eigenvectors;
    CHECK((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("iteration budget failure carries residuals") {
    std::mt19937 rng(5);
    const auto ham = pair_from_dense(random_symmetric(60, rng));
    SolverOptions opts;
    opts.dense_threshold = 1;
    opts.max_iterations = 3;
    CHECK_THROWS_AS(lowest_eigenpairs(ham, 1.0, 4, 1e-12, opts), ConvergenceError);
}

TEST_CASE("fixed seed reproduces the iteration bitwise") {
    std::mt19937 rng(9);
    const auto ham = pair_from_dense(random_symmetric(80, rng));
    SolverOptions opts;
    opts.dense_threshold = 1;
    opts.seed = 77;
    const EigenResult a = lowest_eigenpairs(ham, 2.0, 2, 1e-10, opts);
    const EigenResult b = lowest_eigenpairs(ham, 2.0, 2, 1e-10, opts);
    CHECK(a.eigenvalues[0] == b.eigenvalues[0]);
    CHECK(a.eigenvalues[1] == b.eigenvalues[1]);
    CHECK(a.iterations == b.iterations);
    CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ground amplitudes") {
    SECTION("singlet with the sign convention") {
        const auto ham = build_su2(enumerate_su2(1), CouplingSet::make(1.0, 0.0, 0.0), 1);
        const EigenResult res = lowest_eigenpairs(ham, 1.0, 1, 1e-12);
        const Vector a = ground_amplitudes(res, enumerate_su2(1));
        CHECK(a[0] == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
        CHECK(a[1] == Catch::Approx(-std::sqrt(0.5)).margin(1e-12));
        CHECK(a.norm() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("matches the dense eigenvector at L=2") {
        const int length = 2;
        const CouplingSet c = CouplingSet::make(15.0, 5.0, 3.0);
        const auto ham = build_su2(enumerate_su2(length), c, length);
        const EigenResult res = lowest_eigenpairs(ham, c.jt, 1, 1e-12);
        const Vector a = ground_amplitudes(res, enumerate_su2(length));

        Eigen::SelfAdjointEigenSolver<Matrix> solver(c.jt * Matrix(ham.h1));
        Vector expected = solver.eigenvectors().col(0);
        Index imax = 0;
        for (Index i = 1; i < expected.size(); ++i)
            if (std::abs(expected[i]) > std::abs(expected[imax])) imax = i;
        if (expected[imax] < 0.0) expected = -expected;
        CHECK((a - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SECTION("dimension mismatch") {
        const auto ham = build_su2(enumerate_su2(1), CouplingSet::make(1.0, 0.0, 0.0), 1);
        const EigenResult res = lowest_eigenpairs(ham, 1.0, 1, 1e-12);
        CHECK_THROWS_AS(ground_amplitudes(res, enumerate_su2(2)), DimensionMismatchError);
    }
}
