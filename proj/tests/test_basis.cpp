#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "spinladder/basis.hpp"
#include "spinladder/hamiltonian.hpp"
#include "spinladder/ordering.hpp"
#include "spinladder/transform.hpp"

using namespace spinladder;

namespace {

std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// independent count of rung-code sequences with total projection zero
std::int64_t so4_count_dp(int length) {
    // per rung: M = -1, 0 (twice: singlet and triplet-0), +1
    std::map<int, std::int64_t> ways{{0, 1}};
    for (int i = 0; i < length; ++i) {
        std::map<int, std::int64_t> next;
        for (const auto& [m, w] : ways) {
            next[m - 1] += w;
            next[m] += 2 * w;
            next[m + 1] += w;
        }
        ways = std::move(next);
    }
    return ways[0];
}

}  // namespace

TEST_CASE("su2 enumeration basics") {
    const Basis b1 = enumerate_su2(1);
    REQUIRE(b1.size() == 2);
    CHECK(b1.state(0) == 0b01u);  // site (1,1) up, site (1,2) down
    CHECK(b1.state(1) == 0b10u);

    CHECK(enumerate_su2(2).size() == 6);
    CHECK(enumerate_su2(6).size() == 924);

    CHECK_THROWS_AS(enumerate_su2(0), DimensionOverflowError);
    CHECK_THROWS_AS(enumerate_su2(17), DimensionOverflowError);
}

TEST_CASE("su2 states are ascending with popcount L") {
    const int length = 5;
    const Basis b = enumerate_su2(length);
    for (std::size_t p = 0; p < b.size(); ++p) {
        CHECK(std::popcount(b.state(p)) == length);
        if (p > 0) CHECK(b.state(p - 1) < b.state(p));
        CHECK(b.state(p) < (1u << (2 * length)));
    }
}

TEST_CASE("so4 enumeration basics") {
    const Basis b1 = enumerate_so4(1);
    REQUIRE(b1.size() == 2);
    CHECK(rung_code(b1.state(0), 0, 1) == kRungSinglet);
    CHECK(rung_code(b1.state(1), 0, 1) == kRungTripletZero);

    const Basis b2 = enumerate_so4(2);
    REQUIRE(b2.size() == 6);
    // lexicographic with per-rung order (0,0) < (1,-1) < (1,0) < (1,+1)
    const std::vector<std::pair<StateCode, StateCode>> expected = {
        {kRungSinglet, kRungSinglet},      {kRungSinglet, kRungTripletZero},
        {kRungTripletMinus, kRungTripletPlus}, {kRungTripletZero, kRungSinglet},
        {kRungTripletZero, kRungTripletZero},  {kRungTripletPlus, kRungTripletMinus}};
    for (std::size_t p = 0; p < b2.size(); ++p) {
        CHECK(rung_code(b2.state(p), 0, 2) == expected[p].first);
        CHECK(rung_code(b2.state(p), 1, 2) == expected[p].second);
    }

    CHECK_THROWS_AS(enumerate_so4(0), DimensionOverflowError);
    CHECK_THROWS_AS(enumerate_so4(17), DimensionOverflowError);
}

TEST_CASE("so4 dimension matches the zero-projection count") {
    // dynamic-programming oracle; also equals C(2L, L)
    CHECK(so4_count_dp(6) == 924);
    CHECK(enumerate_so4(6).size() == 924);
    for (int length = 1; length <= 8; ++length) {
        const auto expected = static_cast<std::size_t>(so4_count_dp(length));
        CHECK(enumerate_so4(length).size() == expected);
        CHECK(expected == static_cast<std::size_t>(binomial(2 * length, length)));
        CHECK(enumerate_su2(length).size() == expected);
    }
}

TEST_CASE("so4 states conserve total projection") {
    const int length = 4;
    const Basis b = enumerate_so4(length);
    for (std::size_t p = 0; p < b.size(); ++p) {
        int mtot = 0;
        for (int r = 0; r < length; ++r) {
            const RungState rs = decode_rung(rung_code(b.state(p), r, length));
            if (rs.total_spin == 0) CHECK(rs.projection == 0);
            mtot += rs.projection;
        }
        CHECK(mtot == 0);
    }
}

TEST_CASE("index_of inverts enumeration") {
    for (const Basis& b : {enumerate_su2(5), enumerate_so4(5)}) {
        for (std::size_t p = 0; p < b.size(); ++p) {
            const auto found = b.index_of(b.state(p));
            REQUIRE(found.has_value());
            CHECK(*found == p);
        }
        CHECK_FALSE(b.index_of(0xffffffffu).has_value());
    }
}

TEST_CASE("clebsch-gordan transform, L=1") {
    const SparseMatrix u = su2_to_so4_matrix(1);
    const Matrix dense = Matrix(u);
    const double s = 1.0 / std::sqrt(2.0);
    // rows: su2 states ud, du; columns: so4 states (0,0), (1,0)
    CHECK(dense(0, 0) == Catch::Approx(s).margin(1e-15));
    CHECK(dense(0, 1) == Catch::Approx(s).margin(1e-15));
    CHECK(dense(1, 0) == Catch::Approx(-s).margin(1e-15));
    CHECK(dense(1, 1) == Catch::Approx(s).margin(1e-15));
}

TEST_CASE("clebsch-gordan transform is orthogonal") {
    for (int length : {1, 2, 3, 4}) {
        const SparseMatrix u = su2_to_so4_matrix(length);
        const Matrix gram = Matrix(SparseMatrix(u.transpose() * u));
        const Matrix eye = Matrix::Identity(gram.rows(), gram.cols());
        CHECK((gram - eye).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("ordering permutation examples") {
    // eps = (-3, 1, 1, 0) -> (0, 3, 1, 2), stable on the tie
    HamiltonianPair ham;
    ham.h0 = SparseMatrix(4, 4);
    std::vector<Triplet> d = {{0, 0, -3.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 0.0}};
    ham.h1 = SparseMatrix(4, 4);
    ham.h1.setFromTriplets(d.begin(), d.end());
    const Basis b(Representation::SU2, 1, {0u, 1u, 2u, 3u});  // synthetic states
    const auto perm =
        ordering_permutation(b, ham, 1.0, OrderingStrategy::DiagonalAscending, nullptr);
    CHECK(perm == std::vector<std::size_t>{0, 3, 1, 2});

    Vector a(3);
    a << 0.9, 0.1, 0.42;
    HamiltonianPair ham3;
    ham3.h0 = SparseMatrix(3, 3);
    ham3.h1 = SparseMatrix(3, 3);
    const Basis b3(Representation::SU2, 1, {0u, 1u, 2u});
    const auto perm3 =
        ordering_permutation(b3, ham3, 1.0, OrderingStrategy::AmplitudeDescending, &a);
    CHECK(perm3 == std::vector<std::size_t>{0, 2, 1});

    CHECK_THROWS_AS(
        ordering_permutation(b3, ham3, 1.0, OrderingStrategy::AmplitudeDescending, nullptr),
        MissingAmplitudesError);
}

TEST_CASE("rung-diagonal tie keeps enumeration order") {
    const Basis b = enumerate_su2(1);
    const auto ham = build_su2(b, CouplingSet::make(1.0, 0.0, 0.0), 1);
    const auto perm =
        ordering_permutation(b, ham, 1.0, OrderingStrategy::DiagonalAscending, nullptr);
    CHECK(perm == std::vector<std::size_t>{0, 1});  // both diagonals -1/4
}

TEST_CASE("order_basis permutes without losing states") {
    const int length = 3;
    const Basis b = enumerate_su2(length);
    const auto ham = build_su2(b, CouplingSet::make(2.0, 1.0, 0.5), length);
    const Basis ordered =
        order_basis(b, ham, 2.0, OrderingStrategy::DiagonalAscending, nullptr);
    REQUIRE(ordered.size() == b.size());

    std::vector<StateCode> sorted_original = b.states();
    std::vector<StateCode> sorted_permuted = ordered.states();
    std::sort(sorted_original.begin(), sorted_original.end());
    std::sort(sorted_permuted.begin(), sorted_permuted.end());
    CHECK(sorted_original == sorted_permuted);

    // diagonal really ascends along the new order
    const Vector diag = diagonal_of(ham.h1);
    for (std::size_t p = 0; p + 1 < ordered.size(); ++p) {
        const auto i = b.index_of(ordered.state(p));
        const auto j = b.index_of(ordered.state(p + 1));
        CHECK(diag[static_cast<Index>(*i)] <= diag[static_cast<Index>(*j)]);
    }
}
