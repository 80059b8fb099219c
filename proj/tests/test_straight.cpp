#include "straightlab/straightcore.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace straightlab;
using namespace straightlab::straightcore;

namespace {

FiniteSetMap id2() { return FiniteSetMap(2, 2, {0, 1}); }
FiniteSetMap swap2() { return FiniteSetMap(2, 2, {1, 0}); }
FiniteSetMap const2(int y) { return FiniteSetMap(2, 2, {y, y}); }

IntMatrix pointwise(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * b(i, j);
    return r;
}

} // namespace

TEST_CASE("canonical homomorphisms of maps") {
    REQUIRE(canonical_hom(id2()) == IntMatrix::identity(2));
    IntMatrix sw = canonical_hom(swap2());
    REQUIRE(sw(0, 1) == 1);
    REQUIRE(sw(1, 0) == 1);
    REQUIRE(sw(0, 0) == 0);
    IntMatrix c0 = canonical_hom(const2(0));
    REQUIRE(c0(0, 0) == 1);
    REQUIRE(c0(0, 1) == 1);
    REQUIRE(c0(1, 0) == 0);
}

TEST_CASE("partial homomorphisms") {
    SECTION("full domain gives the canonical homomorphism") {
        REQUIRE(partial_hom({1, 1}, swap2()) == canonical_hom(swap2()));
    }
    SECTION("empty domain gives zero") {
        REQUIRE(partial_hom({0, 0}, swap2()).is_zero());
    }
    SECTION("product law: indicators multiply to the equalizer restriction") {
        for (const auto& a1 : all_maps(3, 2))
            for (const auto& a2 : all_maps(3, 2)) {
                std::vector<char> d1{1, 1, 0}, d2{1, 0, 1};
                IntMatrix lhs = pointwise(partial_hom(d1, a1), partial_hom(d2, a2));
                std::vector<char> d(3);
                for (int x = 0; x < 3; ++x) d[x] = d1[x] && d2[x] && (a1(x) == a2(x));
                REQUIRE(lhs == partial_hom(d, a1));
            }
    }
}

TEST_CASE("every integer matrix decomposes over the point generators") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(-9, 9), dim(1, 3);
    for (int it = 0; it < 100; ++it) {
        IntMatrix m(dim(rng), dim(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(rng);
        LElement el(m); // constructor re-multiplies the expression
        REQUIRE(el.mat == m);
    }
}

TEST_CASE("is_straight decisions") {
    SECTION("all-zero tables are straight with the zero homomorphism") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::free_group(1);
        for (const auto& a : all_maps(2, 2)) {
            t.maps.push_back(a);
            t.values.push_back(Vec{Int(0)});
        }
        auto d = is_straight(t);
        REQUIRE(d.ok());
        REQUIRE(d.hom->is_zero_hom());
    }
    SECTION("the four-map table into Z refuses with the exchange relation") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::free_group(1);
        t.maps = {id2(), swap2(), const2(0), const2(1)};
        t.values = {Vec{Int(1)}, Vec{Int(1)}, Vec{Int(0)}, Vec{Int(0)}};
        auto d = is_straight(t);
        REQUIRE_FALSE(d.ok());
        REQUIRE(d.witness.has_value());
        // the relation <id> + <swap> = <const0> + <const1> sends values to 2 != 0
        REQUIRE(d.witness->order == 0);
        Int sum = 0;
        for (std::size_t i = 0; i < 4; ++i) sum += d.witness->combo[i] * t.values[i][0];
        REQUIRE((sum == d.witness->value[0]));
        REQUIRE(sum != 0);
        REQUIRE((sum == 2 || sum == -2));
    }
    SECTION("the same table into Z/2 is straight") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::cyclic(2);
        t.maps = {id2(), swap2(), const2(0), const2(1)};
        t.values = {Vec{Int(1)}, Vec{Int(1)}, Vec{Int(0)}, Vec{Int(0)}};
        auto d = is_straight(t);
        REQUIRE(d.ok());
        for (std::size_t i = 0; i < t.maps.size(); ++i)
            REQUIRE(t.m.equal(d.hom->apply(flatten_matrix(canonical_hom(t.maps[i]))), t.values[i]));
    }
    SECTION("agreement with brute force over all homomorphisms") {
        std::mt19937 rng(11);
        std::uniform_int_distribution<int> val(0, 3);
        FGAbGroup m = FGAbGroup::cyclic(4);
        FGAbGroup ambient = FGAbGroup::free_group(4);
        auto homs = ab::enumerate_homs(ambient, m); // 4^4 = 256 assignments
        for (int it = 0; it < 25; ++it) {
            InvariantTable t;
            t.nx = t.ny = 2;
            t.m = m;
            for (const auto& a : all_maps(2, 2)) {
                t.maps.push_back(a);
                t.values.push_back(Vec{Int(val(rng))});
            }
            bool brute = false;
            for (const auto& h : homs) {
                bool all = true;
                for (std::size_t i = 0; i < t.maps.size() && all; ++i)
                    all = m.equal(h.apply(flatten_matrix(canonical_hom(t.maps[i]))), t.values[i]);
                if (all) { brute = true; break; }
            }
            REQUIRE(is_straight(t).ok() == brute);
        }
    }
}

TEST_CASE("induced invariants") {
    FGAbGroup m = FGAbGroup::cyclic(6);
    // a straight invariant generated by an explicit functional F
    auto make_table = [&](int nx, int ny, const AbHom& f) {
        InvariantTable t;
        t.nx = nx;
        t.ny = ny;
        t.m = m;
        for (const auto& a : all_maps(nx, ny)) {
            t.maps.push_back(a);
            t.values.push_back(f.apply(flatten_matrix(canonical_hom(a))));
        }
        return t;
    };
    FGAbGroup ambient = FGAbGroup::free_group(4);
    IntMatrix fm(1, 4);
    fm(0, 0) = 1; fm(0, 1) = 2; fm(0, 2) = 3; fm(0, 3) = 4;
    AbHom f(ambient, m, fm, false);
    InvariantTable t = make_table(2, 2, f);
    REQUIRE(is_straight(t).ok());

    SECTION("identity maps reproduce the table") {
        InvariantTable u = induced_invariant(t, id2(), id2());
        REQUIRE(u.maps.size() == t.maps.size());
        for (std::size_t i = 0; i < u.maps.size(); ++i) {
            bool found = false;
            for (std::size_t j = 0; j < t.maps.size(); ++j)
                if (t.maps[j] == u.maps[i]) {
                    REQUIRE(m.equal(t.values[j], u.values[i]));
                    found = true;
                }
            REQUIRE(found);
        }
    }
    SECTION("straightness is preserved, with the composed functional as evidence") {
        for (const auto& r : all_maps(2, 3))
            for (const auto& s : all_maps(3, 2)) {
                InvariantTable u = induced_invariant(t, r, s);
                auto d = is_straight(u);
                REQUIRE(d.ok());
                // F~ = F o T with T(u~) = <s> u~ <r>, checked on every map
                IntMatrix sm = canonical_hom(s), rm = canonical_hom(r);
                for (std::size_t i = 0; i < u.maps.size(); ++i) {
                    IntMatrix composed = sm * canonical_hom(u.maps[i]) * rm;
                    REQUIRE(m.equal(f.apply(flatten_matrix(composed)), u.values[i]));
                }
            }
    }
    SECTION("constant tables stay constant") {
        InvariantTable c;
        c.nx = c.ny = 2;
        c.m = m;
        for (const auto& a : all_maps(2, 2)) {
            c.maps.push_back(a);
            c.values.push_back(Vec{Int(5)});
        }
        InvariantTable u = induced_invariant(c, FiniteSetMap(2, 3, {0, 2}), FiniteSetMap(3, 2, {1, 1, 0}));
        for (const auto& v : u.values) REQUIRE(m.equal(v, Vec{Int(5)}));
    }
}

TEST_CASE("base change round trips (Lemma 16.1 instances)") {
    SECTION("K = Z: identity round trip") {
        CoefRing k{Int(0)};
        IntMatrix v(2, 2);
        v(0, 0) = -3; v(0, 1) = 7; v(1, 0) = 0; v(1, 1) = 2;
        REQUIRE(round_trip_identity(v, k));
        TensorDecomposition d = inverse_decomposition(v, k);
        REQUIRE(d.recompose(k, 2, 2) == v);
    }
    SECTION("K = Z/2, |X| = 1, |Y| = 2: all four elements round trip") {
        CoefRing k{Int(2)};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                IntMatrix v(2, 1);
                v(0, 0) = a; v(1, 0) = b;
                REQUIRE(round_trip_identity(v, k));
            }
    }
    SECTION("Z/3 decomposition splits by coefficient value") {
        CoefRing k{Int(3)};
        IntMatrix v(2, 2);
        v(0, 0) = 1; v(0, 1) = 2; v(1, 0) = 2; v(1, 1) = 0;
        TensorDecomposition d = inverse_decomposition(v, k);
        REQUIRE(d.terms.size() == 2);
        REQUIRE(d.terms[0].first == 1);
        REQUIRE(d.terms[1].first == 2);
        // v_1 collects positions with coefficient 1, v_2 those with coefficient 2
        REQUIRE(d.terms[0].second(0, 0) == 1);
        REQUIRE(d.terms[1].second(0, 1) == 1);
        REQUIRE(d.terms[1].second(1, 0) == 1);
        REQUIRE(round_trip_identity(v, k));
    }
    SECTION("exhaustive round trips for K in {Z/2, Z/3, Z/4}, |X|,|Y| <= 2") {
        for (int m : {2, 3, 4}) {
            CoefRing k{Int(m)};
            for (int nx = 1; nx <= 2; ++nx)
                for (int ny = 1; ny <= 2; ++ny) {
                    std::size_t cells = static_cast<std::size_t>(nx) * ny;
                    std::size_t total = 1;
                    for (std::size_t c = 0; c < cells; ++c) total *= m;
                    for (std::size_t code = 0; code < total; ++code) {
                        IntMatrix v(ny, nx);
                        std::size_t rest = code;
                        for (int y = 0; y < ny; ++y)
                            for (int x = 0; x < nx; ++x) {
                                v(y, x) = Int(rest % m);
                                rest /= m;
                            }
                        REQUIRE(round_trip_identity(v, k));
                    }
                }
        }
    }
}

TEST_CASE("K-straightness agrees with straightness") {
    SECTION("zero table") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::cyclic(2);
        for (const auto& a : all_maps(2, 2)) {
            t.maps.push_back(a);
            t.values.push_back(Vec{Int(0)});
        }
        auto r = k_straight_equiv(t, CoefRing{Int(2)});
        REQUIRE(r.k_straight);
        REQUIRE(r.straight);
    }
    SECTION("the refused Z-table refuses both ways") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::free_group(1);
        t.maps = {id2(), swap2(), const2(0), const2(1)};
        t.values = {Vec{Int(1)}, Vec{Int(1)}, Vec{Int(0)}, Vec{Int(0)}};
        auto r = k_straight_equiv(t, CoefRing{Int(0)});
        REQUIRE_FALSE(r.k_straight);
        REQUIRE_FALSE(r.straight);
    }
    SECTION("its Z/2 version accepts both ways") {
        InvariantTable t;
        t.nx = t.ny = 2;
        t.m = FGAbGroup::cyclic(2);
        t.maps = {id2(), swap2(), const2(0), const2(1)};
        t.values = {Vec{Int(1)}, Vec{Int(1)}, Vec{Int(0)}, Vec{Int(0)}};
        auto r = k_straight_equiv(t, CoefRing{Int(2)});
        REQUIRE(r.k_straight);
        REQUIRE(r.straight);
    }
    SECTION("random tables agree across K in {Z/2, Z/3, Z/4}") {
        std::mt19937 rng(23);
        for (int m : {2, 3, 4}) {
            CoefRing k{Int(m)};
            FGAbGroup grp = FGAbGroup::cyclic(m);
            std::uniform_int_distribution<int> val(0, m - 1);
            for (int it = 0; it < 20; ++it) {
                InvariantTable t;
                t.nx = t.ny = 2;
                t.m = grp;
                for (const auto& a : all_maps(2, 2)) {
                    t.maps.push_back(a);
                    t.values.push_back(Vec{Int(val(rng))});
                }
                auto r = k_straight_equiv(t, k);
                REQUIRE(r.k_straight == r.straight);
            }
        }
    }
    SECTION("M that is not a K-module is rejected") {
        InvariantTable t;
        t.nx = t.ny = 1;
        t.m = FGAbGroup::free_group(1);
        t.maps = {FiniteSetMap(1, 1, {0})};
        t.values = {Vec{Int(0)}};
        REQUIRE_THROWS(k_straight_equiv(t, CoefRing{Int(2)}));
    }
}
