// Free abelianization of finite sets, the matrix groups L(X,Y) and L_K(X,Y),
// straightness decisions for tabulated invariants, induced invariants, and
// base change between Z and Z/m coefficients.
#pragma once

#include "straightlab/ab.hpp"

#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace straightlab::straightcore {

using ab::AbHom;
using ab::FGAbGroup;

// map between finite sets {0..nx-1} -> {0..ny-1}
struct FiniteSetMap {
    int nx = 0, ny = 0;
    std::vector<int> img;

    FiniteSetMap() = default;
    FiniteSetMap(int nx_, int ny_, std::vector<int> img_) : nx(nx_), ny(ny_), img(std::move(img_)) {
        if (static_cast<int>(img.size()) != nx)
            throw std::invalid_argument("FiniteSetMap: image length mismatch");
        for (int v : img)
            if (v < 0 || v >= ny) throw std::invalid_argument("FiniteSetMap: value out of range");
    }

    int operator()(int x) const { return img[x]; }

    FiniteSetMap compose(const FiniteSetMap& inner) const { // (*this) o inner
        std::vector<int> r(inner.nx);
        for (int x = 0; x < inner.nx; ++x) r[x] = img[inner.img[x]];
        return FiniteSetMap(inner.nx, ny, std::move(r));
    }

    friend bool operator==(const FiniteSetMap& a, const FiniteSetMap& b) {
        return a.nx == b.nx && a.ny == b.ny && a.img == b.img;
    }
    friend bool operator<(const FiniteSetMap& a, const FiniteSetMap& b) { return a.img < b.img; }
};

inline std::vector<FiniteSetMap> all_maps(int nx, int ny) {
    std::vector<FiniteSetMap> out;
    if (nx == 0) {
        out.emplace_back(0, ny, std::vector<int>{});
        return out;
    }
    std::vector<int> cur(nx, 0);
    for (;;) {
        out.emplace_back(nx, ny, cur);
        int i = 0;
        while (i < nx && ++cur[i] == ny) cur[i++] = 0;
        if (i == nx) break;
    }
    return out;
}

// <a>: the 0/1 matrix of a map, one 1 per column
inline IntMatrix canonical_hom(const FiniteSetMap& a) {
    IntMatrix m(a.ny, a.nx);
    for (int x = 0; x < a.nx; ++x) m(a.img[x], x) = 1;
    return m;
}

// e(D, a): columns outside D vanish; e(X, a) = <a>
inline IntMatrix partial_hom(const std::vector<char>& domain, const FiniteSetMap& a) {
    if (static_cast<int>(domain.size()) != a.nx)
        throw std::invalid_argument("partial_hom: domain flag length mismatch");
    IntMatrix m(a.ny, a.nx);
    for (int x = 0; x < a.nx; ++x)
        if (domain[x]) m(a.img[x], x) = 1;
    return m;
}

// every integer Y x X matrix is a Z-combination of the generators e({x}, x->y);
// the element carries its expression, and re-multiplication is checked
struct LElement {
    IntMatrix mat;
    std::vector<std::tuple<Int, int, int>> expression; // (coefficient, x, y)

    explicit LElement(IntMatrix m) : mat(std::move(m)) {
        IntMatrix rebuilt(mat.rows(), mat.cols());
        for (std::size_t y = 0; y < mat.rows(); ++y)
            for (std::size_t x = 0; x < mat.cols(); ++x) {
                if (mat(y, x) == 0) continue;
                expression.emplace_back(mat(y, x), static_cast<int>(x), static_cast<int>(y));
                std::vector<char> dom(mat.cols(), 0);
                dom[x] = 1;
                std::vector<int> img(mat.cols(), 0);
                img[x] = static_cast<int>(y);
                rebuilt = rebuilt + partial_hom(dom, FiniteSetMap(static_cast<int>(mat.cols()),
                                                                  static_cast<int>(mat.rows()), img))
                                        .scaled(mat(y, x));
            }
        if (!(rebuilt == mat)) throw std::logic_error("LElement: generator expression broken");
    }
};

// flattened coordinates of a matrix over the free group on Y x X (row-major)
inline Vec flatten_matrix(const IntMatrix& m) {
    Vec v(m.rows() * m.cols());
    for (std::size_t y = 0; y < m.rows(); ++y)
        for (std::size_t x = 0; x < m.cols(); ++x) v[y * m.cols() + x] = m(y, x);
    return v;
}

// invariant table: maps with optional class labels and values in M
struct InvariantTable {
    int nx = 0, ny = 0;
    std::vector<FiniteSetMap> maps;
    std::vector<int> classes; // empty: every map its own class
    std::vector<Vec> values;
    FGAbGroup m;

    void check() const {
        if (maps.size() != values.size())
            throw std::invalid_argument("InvariantTable: maps/values mismatch");
        if (!classes.empty()) {
            if (classes.size() != maps.size())
                throw std::invalid_argument("InvariantTable: class labels mismatch");
            for (std::size_t i = 0; i < maps.size(); ++i)
                for (std::size_t j = 0; j < maps.size(); ++j)
                    if (classes[i] == classes[j] && !m.equal(values[i], values[j]))
                        throw std::invalid_argument("InvariantTable: values not class-constant");
        }
    }
};

struct StraightDecision {
    std::optional<AbHom> hom; // on the free group over Y x X
    std::optional<ab::Witness> witness;
    bool ok() const { return hom.has_value(); }
};

// straight <=> some F on all of L(X,Y) satisfies F(<a_i>) = v_i
inline StraightDecision is_straight(const InvariantTable& t) {
    t.check();
    FGAbGroup ambient = FGAbGroup::free_group(static_cast<std::size_t>(t.nx) * t.ny);
    std::vector<ab::Constraint> cs;
    for (std::size_t i = 0; i < t.maps.size(); ++i)
        cs.push_back({flatten_matrix(canonical_hom(t.maps[i])), t.values[i]});
    auto r = ab::extend_hom(ambient, cs, t.m);
    return {std::move(r.hom), std::move(r.witness)};
}

// induced invariant along r: X -> X~ and s: Y~ -> Y; the input table must
// cover every composite s o a~ o r
inline InvariantTable induced_invariant(const InvariantTable& f, const FiniteSetMap& r,
                                        const FiniteSetMap& s) {
    if (r.nx != f.nx || s.ny != f.ny)
        throw std::invalid_argument("induced_invariant: maps are not composable with the table");
    InvariantTable out;
    out.nx = r.ny;
    out.ny = s.nx;
    out.m = f.m;
    for (const auto& a : all_maps(out.nx, out.ny)) {
        FiniteSetMap comp = s.compose(a.compose(r));
        bool found = false;
        for (std::size_t i = 0; i < f.maps.size(); ++i)
            if (f.maps[i] == comp) {
                out.maps.push_back(a);
                out.values.push_back(f.values[i]);
                found = true;
                break;
            }
        if (!found) throw std::invalid_argument("induced_invariant: table misses a composite");
    }
    return out;
}

// ---------------------------------------------------------------------------
// coefficient rings K = Z (m = 0) or Z/m, and Lemma 16.1's round trip

struct CoefRing {
    Int m; // 0 = Z
    bool is_integers() const { return m == 0; }
    Int reduce(const Int& x) const { return m == 0 ? x : mod_positive(x, m); }
};

inline IntMatrix base_change(const IntMatrix& u, const CoefRing& k) {
    IntMatrix r = u;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = k.reduce(r(i, j));
    return r;
}

// d: L_K(X,Y) -> K (x) L(X,Y), v -> sum_k k (x) v_k, where v_k is the 0/1
// matrix of positions with coefficient exactly k
struct TensorDecomposition {
    std::vector<std::pair<Int, IntMatrix>> terms; // (k, v_k)

    // canonical form in K (x) L = matrices over K
    IntMatrix recompose(const CoefRing& k, std::size_t rows, std::size_t cols) const {
        IntMatrix acc(rows, cols);
        for (const auto& [c, vk] : terms) acc = acc + vk.scaled(c);
        return base_change(acc, k);
    }
};

inline TensorDecomposition inverse_decomposition(const IntMatrix& v, const CoefRing& k) {
    TensorDecomposition d;
    std::vector<Int> seen;
    // nonzero coefficient values, in increasing canonical order
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            Int c = k.reduce(v(i, j));
            if (c == 0) continue;
            if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
        }
    std::sort(seen.begin(), seen.end());
    for (const Int& c : seen) {
        IntMatrix vk(v.rows(), v.cols());
        for (std::size_t i = 0; i < v.rows(); ++i)
            for (std::size_t j = 0; j < v.cols(); ++j)
                if (k.reduce(v(i, j)) == c) vk(i, j) = 1;
        d.terms.emplace_back(c, std::move(vk));
    }
    return d;
}

// both composites of Lemma 16.1, evaluated exactly on a given element
inline bool round_trip_identity(const IntMatrix& v, const CoefRing& k) {
    TensorDecomposition d = inverse_decomposition(v, k);
    // e^(K) o d: recompose and compare with v over K
    if (!(d.recompose(k, v.rows(), v.cols()) == base_change(v, k))) return false;
    // d o e^(K): start from the canonical tensor form of v, push through e^(K)
    // (the identity on matrices over K) and decompose again
    TensorDecomposition d2 = inverse_decomposition(base_change(v, k), k);
    return d2.recompose(k, v.rows(), v.cols()) == base_change(v, k);
}

// ---------------------------------------------------------------------------
// K-straightness: M must be a K-module (m*M = 0 for K = Z/m)

struct KStraightResult {
    bool k_straight = false;
    bool straight = false;
};

inline KStraightResult k_straight_equiv(const InvariantTable& t, const CoefRing& k) {
    t.check();
    if (!k.is_integers()) {
        // verify the K-module structure of M
        for (std::size_t i = 0; i < t.m.ngens(); ++i)
            if (!t.m.is_zero(vec_scaled(k.m, t.m.generator(i))))
                throw std::invalid_argument("k_straight_equiv: M is not a K-module");
    }
    KStraightResult r;
    r.straight = is_straight(t).ok();
    // K-straight: F~ is K-linear on the free K-module over Y x X
    std::size_t n = static_cast<std::size_t>(t.nx) * t.ny;
    FGAbGroup ambient_k = k.is_integers()
                              ? FGAbGroup::free_group(n)
                              : FGAbGroup::from_orders(std::vector<Int>(n, k.m));
    std::vector<ab::Constraint> cs;
    for (std::size_t i = 0; i < t.maps.size(); ++i)
        cs.push_back({flatten_matrix(base_change(canonical_hom(t.maps[i]), k)), t.values[i]});
    r.k_straight = ab::extend_hom(ambient_k, cs, t.m).ok();
    return r;
}

} // namespace straightlab::straightcore
