#include "straightlab/int_matrix.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace straightlab;

namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::initializer_list<int> vals) {
    IntMatrix m(r, c);
    auto it = vals.begin();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = *it++;
    return m;
}

// the properties every Smith form must satisfy
void check_smith(const IntMatrix& m) {
    SmithForm f = smith_normal_form(m);
    REQUIRE(f.u * m * f.v == f.s);
    Int du = determinant(f.u), dv = determinant(f.v);
    REQUIRE((du == 1 || du == -1));
    REQUIRE((dv == 1 || dv == -1));
    auto d = f.diagonal();
    for (std::size_t i = 0; i < f.s.rows(); ++i)
        for (std::size_t j = 0; j < f.s.cols(); ++j)
            if (i != j) REQUIRE(f.s(i, j) == 0);
    for (std::size_t i = 0; i < d.size(); ++i) REQUIRE(d[i] >= 0);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        if (d[i] == 0) REQUIRE(d[i + 1] == 0);
        else REQUIRE(d[i + 1] % d[i] == 0);
    }
}

} // namespace

TEST_CASE("smith normal form on the zero matrix") {
    IntMatrix z(3, 2);
    SmithForm f = smith_normal_form(z);
    REQUIRE(f.s == z);
    REQUIRE(f.u == IntMatrix::identity(3));
    REQUIRE(f.v == IntMatrix::identity(2));
}

TEST_CASE("smith normal form of the identity") {
    for (std::size_t n : {1u, 2u, 4u}) {
        SmithForm f = smith_normal_form(IntMatrix::identity(n));
        REQUIRE(f.s == IntMatrix::identity(n));
        check_smith(IntMatrix::identity(n));
    }
}

TEST_CASE("smith normal form of [[2,4],[6,8]] is diag(2,4)") {
    IntMatrix m = mat(2, 2, {2, 4, 6, 8});
    SmithForm f = smith_normal_form(m);
    // d1 = gcd of entries, d1*d2 = |det|
    REQUIRE(f.s(0, 0) == 2);
    REQUIRE(f.s(1, 1) == 4);
    check_smith(m);
}

TEST_CASE("smith normal form fuzz") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> dim(1, 6), entry(-9, 9);
    for (int iter = 0; iter < 300; ++iter) {
        IntMatrix m(dim(rng), dim(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
        check_smith(m);
    }
}

TEST_CASE("kernel basis spans the exact kernel") {
    IntMatrix m = mat(2, 3, {1, 2, 3, 2, 4, 6}); // rank 1
    IntMatrix k = kernel_basis(m);
    REQUIRE(k.cols() == 2);
    REQUIRE((m * k).is_zero());
    // saturated: (1,1,-1) is in the kernel and must be an integral combination
    auto sol = solve(k, Vec{Int(1), Int(1), Int(-1)});
    REQUIRE(sol.has_value());
}

TEST_CASE("solve finds particular solutions and detects unsolvability") {
    IntMatrix m = mat(2, 2, {2, 0, 0, 3});
    auto s = solve(m, Vec{Int(4), Int(9)});
    REQUIRE(s.has_value());
    REQUIRE(m * *s == Vec{Int(4), Int(9)});
    REQUIRE_FALSE(solve(m, Vec{Int(1), Int(0)}).has_value());
}

TEST_CASE("column echelon reduction gives canonical representatives") {
    IntMatrix l = mat(2, 2, {2, 0, 0, 3});
    ColEchelon e = col_echelon(l);
    Vec v{Int(5), Int(-4)};
    Vec r = reduce_mod_lattice(e, v);
    REQUIRE(r == Vec{Int(1), Int(2)});
    // reduction is idempotent and stable across lattice translates
    REQUIRE(reduce_mod_lattice(e, r) == r);
    Vec w{Int(7), Int(2)}; // v + (2,6) in the lattice... (5+2, -4+6)
    REQUIRE(reduce_mod_lattice(e, w) == r);
}

TEST_CASE("determinant (Bareiss) matches known values") {
    REQUIRE(determinant(IntMatrix::identity(3)) == 1);
    REQUIRE(determinant(mat(2, 2, {2, 4, 6, 8})) == -8);
    REQUIRE(determinant(mat(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9})) == 0);
}
