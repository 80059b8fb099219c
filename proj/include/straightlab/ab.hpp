// Finitely generated abelian groups as integer presentations, homomorphisms
// between them, subgroup lattice operations, Hom/Ext, and the constrained
// homomorphism-extension solver.
#pragma once

#include "straightlab/int_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

namespace straightlab::ab {

using straightlab::Int;
using straightlab::IntMatrix;
using straightlab::Vec;

// Z^ngens modulo the column span of `relations`. Elements are coordinate
// vectors over the generators; equality goes through the cached Smith data.
class FGAbGroup {
public:
    FGAbGroup() : FGAbGroup(0, IntMatrix(0, 0)) {}

    FGAbGroup(std::size_t ngens, IntMatrix relations)
        : ngens_(ngens), rels_(std::move(relations)) {
        if (rels_.rows() != ngens_)
            throw std::invalid_argument("FGAbGroup: relations row count must equal ngens");
        SmithForm f = smith_normal_form(rels_);
        u_ = std::move(f.u);
        auto uinv = solve_matrix(u_, IntMatrix::identity(ngens_));
        uinv_ = std::move(*uinv); // u_ unimodular by construction
        orders_.assign(ngens_, Int(0));
        std::size_t bound = std::min(rels_.rows(), rels_.cols());
        for (std::size_t i = 0; i < bound; ++i) orders_[i] = f.s(i, i);
    }

    static FGAbGroup free_group(std::size_t n) { return FGAbGroup(n, IntMatrix(n, 0)); }

    static FGAbGroup cyclic(const Int& m) {
        IntMatrix r(1, 1);
        r(0, 0) = m;
        return FGAbGroup(1, r);
    }

    // direct sum of cyclic groups of the given orders (0 meaning Z)
    static FGAbGroup from_orders(const std::vector<Int>& orders) {
        IntMatrix r(orders.size(), orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) r(i, i) = orders[i];
        return FGAbGroup(orders.size(), r);
    }

    std::size_t ngens() const { return ngens_; }
    const IntMatrix& relations() const { return rels_; }
    const IntMatrix& to_smith() const { return u_; }     // y = U x
    const IntMatrix& from_smith() const { return uinv_; }
    const std::vector<Int>& smith_orders() const { return orders_; }

    // torsion invariant factors > 1, in divisibility order
    std::vector<Int> invariant_factors() const {
        std::vector<Int> f;
        for (const auto& d : orders_)
            if (d > 1) f.push_back(d);
        return f;
    }

    std::size_t free_rank() const {
        std::size_t r = 0;
        for (const auto& d : orders_)
            if (d == 0) ++r;
        return r;
    }

    bool is_trivial() const { return invariant_factors().empty() && free_rank() == 0; }

    bool is_finite() const { return free_rank() == 0; }

    Int order() const {
        if (!is_finite()) throw std::logic_error("order: infinite group");
        Int n = 1;
        for (const auto& d : invariant_factors()) n *= d;
        return n;
    }

    Vec zero() const { return Vec(ngens_); }

    Vec canonical(const Vec& x) const {
        if (x.size() != ngens_) throw std::invalid_argument("canonical: bad element length");
        Vec y = u_ * x;
        for (std::size_t i = 0; i < ngens_; ++i)
            if (orders_[i] != 0) y[i] = mod_positive(y[i], orders_[i]);
        return uinv_ * y;
    }

    bool is_zero(const Vec& x) const {
        Vec y = u_ * x;
        for (std::size_t i = 0; i < ngens_; ++i) {
            if (orders_[i] == 0) {
                if (y[i] != 0) return false;
            } else if (y[i] % orders_[i] != 0) {
                return false;
            }
        }
        return true;
    }

    bool equal(const Vec& a, const Vec& b) const { return is_zero(vec_sub(a, b)); }

    Vec generator(std::size_t i) const {
        Vec v(ngens_);
        v[i] = 1;
        return v;
    }

    // generator of the i-th Smith coordinate, in generator coordinates
    Vec smith_generator(std::size_t i) const { return uinv_.col(i); }

    // solve n*x = target in the group; per-Smith-coordinate divisibility
    std::optional<Vec> solve_scaled(const Int& n, const Vec& target) const {
        Vec t = u_ * target;
        Vec y(ngens_);
        for (std::size_t i = 0; i < ngens_; ++i) {
            const Int& m = orders_[i];
            if (m == 0) {
                if (n == 0) {
                    if (t[i] != 0) return std::nullopt;
                } else {
                    if (t[i] % n != 0) return std::nullopt;
                    y[i] = t[i] / n;
                }
            } else {
                Int ti = mod_positive(t[i], m);
                if (n == 0) {
                    if (ti != 0) return std::nullopt;
                } else {
                    Int g = gcd(n, m);
                    if (ti % g != 0) return std::nullopt;
                    Int m2 = m / g;
                    if (m2 == 1) continue; // any value works, keep 0
                    Int inv = mod_inverse(mod_positive(n / g, m2), m2);
                    y[i] = mod_positive((ti / g) * inv, m2);
                }
            }
        }
        return canonical(uinv_ * y);
    }

    // all elements, canonical coordinates; throws on infinite or oversized groups
    std::vector<Vec> elements(std::uint64_t cap = 1u << 20) const {
        if (!is_finite()) throw std::logic_error("elements: infinite group");
        std::vector<std::size_t> idx;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < ngens_; ++i) {
            if (orders_[i] == 1) continue;
            idx.push_back(i);
            total *= orders_[i].convert_to<std::uint64_t>();
            if (total > cap) throw std::logic_error("elements: group too large");
        }
        std::vector<Vec> out;
        out.reserve(total);
        Vec y(ngens_);
        for (std::uint64_t k = 0; k < total; ++k) {
            std::uint64_t rest = k;
            for (std::size_t t = 0; t < idx.size(); ++t) {
                std::uint64_t m = orders_[idx[t]].convert_to<std::uint64_t>();
                y[idx[t]] = Int(rest % m);
                rest /= m;
            }
            out.push_back(canonical(uinv_ * y));
        }
        return out;
    }

    bool same_shape(const FGAbGroup& o) const {
        return ngens_ == o.ngens_ && rels_ == o.rels_;
    }

private:
    std::size_t ngens_;
    IntMatrix rels_;
    IntMatrix u_, uinv_;
    std::vector<Int> orders_;
};

// Homomorphism between presented groups; well-definedness (relations map to
// zero) is established at construction.
class AbHom {
public:
    AbHom(FGAbGroup source, FGAbGroup target, IntMatrix matrix, bool check = true)
        : src_(std::move(source)), dst_(std::move(target)), mat_(std::move(matrix)) {
        if (mat_.rows() != dst_.ngens() || mat_.cols() != src_.ngens())
            throw std::invalid_argument("AbHom: matrix shape mismatch");
        if (check) {
            IntMatrix img = mat_ * src_.relations();
            for (std::size_t j = 0; j < img.cols(); ++j)
                if (!dst_.is_zero(img.col(j)))
                    throw std::invalid_argument("AbHom: relations not preserved");
        }
    }

    static AbHom identity(const FGAbGroup& g) {
        return AbHom(g, g, IntMatrix::identity(g.ngens()), false);
    }

    static AbHom zero(const FGAbGroup& src, const FGAbGroup& dst) {
        return AbHom(src, dst, IntMatrix(dst.ngens(), src.ngens()), false);
    }

    const FGAbGroup& source() const { return src_; }
    const FGAbGroup& target() const { return dst_; }
    const IntMatrix& matrix() const { return mat_; }

    Vec apply(const Vec& x) const { return dst_.canonical(mat_ * x); }

    AbHom compose(const AbHom& inner) const { // (*this) o inner
        return AbHom(inner.src_, dst_, mat_ * inner.mat_, false);
    }

    AbHom operator+(const AbHom& o) const { return AbHom(src_, dst_, mat_ + o.mat_, false); }
    AbHom operator-(const AbHom& o) const { return AbHom(src_, dst_, mat_ - o.mat_, false); }

    bool equals(const AbHom& o) const {
        if (mat_.cols() != o.mat_.cols() || mat_.rows() != o.mat_.rows()) return false;
        IntMatrix d = mat_ - o.mat_;
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (!dst_.is_zero(d.col(j))) return false;
        return true;
    }

    bool is_zero_hom() const {
        for (std::size_t j = 0; j < mat_.cols(); ++j)
            if (!dst_.is_zero(mat_.col(j))) return false;
        return true;
    }

private:
    FGAbGroup src_, dst_;
    IntMatrix mat_;
};

// Subgroup of an ambient group, generated by a finite set of elements.
// Membership and equality are decided exactly; nothing else is stored.
class Subgroup {
public:
    Subgroup(FGAbGroup ambient, IntMatrix gens)
        : ambient_(std::move(ambient)), gens_(std::move(gens)) {
        if (gens_.rows() != ambient_.ngens())
            throw std::invalid_argument("Subgroup: generator length mismatch");
        span_ = gens_.hstack(ambient_.relations());
    }

    static Subgroup span(const FGAbGroup& ambient, const std::vector<Vec>& gens) {
        return Subgroup(ambient, IntMatrix::from_cols(ambient.ngens(), gens));
    }

    static Subgroup full(const FGAbGroup& ambient) {
        return Subgroup(ambient, IntMatrix::identity(ambient.ngens()));
    }

    static Subgroup zero(const FGAbGroup& ambient) {
        return Subgroup(ambient, IntMatrix(ambient.ngens(), 0));
    }

    const FGAbGroup& ambient() const { return ambient_; }
    const IntMatrix& generators() const { return gens_; }

    bool contains(const Vec& v) const { return in_span(span_, v); }

    bool contains(const Subgroup& other) const {
        require_same_ambient(other);
        for (std::size_t j = 0; j < other.gens_.cols(); ++j)
            if (!contains(other.gens_.col(j))) return false;
        return true;
    }

    bool equals(const Subgroup& other) const { return contains(other) && other.contains(*this); }

    // presentation of the subgroup on its listed generators
    FGAbGroup presentation() const {
        std::size_t k = gens_.cols();
        IntMatrix ker = kernel_basis(span_); // relations among [gens | ambient rels]
        return FGAbGroup(k, ker.top_rows(k));
    }

    AbHom embedding() const { return AbHom(presentation(), ambient_, gens_, false); }

    std::size_t rank() const { return presentation().free_rank(); }

private:
    void require_same_ambient(const Subgroup& o) const {
        if (!ambient_.same_shape(o.ambient_))
            throw std::invalid_argument("Subgroup: ambient groups differ");
    }

    FGAbGroup ambient_;
    IntMatrix gens_;
    IntMatrix span_;
};

inline bool subgroup_equal(const Subgroup& a, const Subgroup& b) { return a.equals(b); }

inline Subgroup kernel(const AbHom& f) {
    // x with f(x) in the relation span of the target
    IntMatrix big = f.matrix().hstack(-f.target().relations());
    IntMatrix ker = kernel_basis(big);
    return Subgroup(f.source(), ker.top_rows(f.source().ngens()));
}

inline Subgroup image(const AbHom& f) { return Subgroup(f.target(), f.matrix()); }

// quotient of the ambient group by a subgroup, with the projection map
inline std::pair<FGAbGroup, AbHom> quotient(const FGAbGroup& g, const Subgroup& s) {
    FGAbGroup q(g.ngens(), g.relations().hstack(s.generators()));
    AbHom proj(g, q, IntMatrix::identity(g.ngens()), false);
    return {std::move(q), std::move(proj)};
}

struct DirectSum {
    FGAbGroup grp;
    std::vector<AbHom> injections;
    std::vector<AbHom> projections;
};

inline DirectSum direct_sum(const std::vector<FGAbGroup>& parts) {
    std::size_t n = 0, r = 0;
    for (const auto& p : parts) { n += p.ngens(); r += p.relations().cols(); }
    IntMatrix rels(n, r);
    std::size_t go = 0, ro = 0;
    for (const auto& p : parts) {
        const IntMatrix& pr = p.relations();
        for (std::size_t i = 0; i < pr.rows(); ++i)
            for (std::size_t j = 0; j < pr.cols(); ++j) rels(go + i, ro + j) = pr(i, j);
        go += p.ngens();
        ro += pr.cols();
    }
    DirectSum out{FGAbGroup(n, rels), {}, {}};
    go = 0;
    for (const auto& p : parts) {
        IntMatrix inj(n, p.ngens()), proj(p.ngens(), n);
        for (std::size_t i = 0; i < p.ngens(); ++i) {
            inj(go + i, i) = 1;
            proj(i, go + i) = 1;
        }
        out.injections.emplace_back(p, out.grp, std::move(inj), false);
        out.projections.emplace_back(out.grp, p, std::move(proj), false);
        go += p.ngens();
    }
    return out;
}

// ----------------------------------------------------------------------------
// Hom(A, B) with an explicit basis of representing matrices and exact
// coordinatization of arbitrary homomorphisms.
struct HomGroup {
    FGAbGroup grp;                      // presentation of Hom(A,B)
    std::vector<IntMatrix> basis;       // matrices on original generators
    FGAbGroup a, b;

    // coordinates of a well-defined homomorphism matrix
    Vec coords_of(const IntMatrix& mat) const {
        IntMatrix h = b.to_smith() * mat * a.from_smith();
        Vec c(grp.ngens());
        std::size_t k = 0;
        const auto& ao = a.smith_orders();
        const auto& bo = b.smith_orders();
        for (std::size_t i = 0; i < ao.size(); ++i) {
            if (ao[i] == 1) continue;
            for (std::size_t j = 0; j < bo.size(); ++j) {
                if (bo[j] == 1) continue;
                const Int raw = h(j, i);
                if (ao[i] == 0) {
                    c[k++] = raw;
                } else if (bo[j] == 0) {
                    if (raw != 0) throw std::invalid_argument("coords_of: not a homomorphism");
                } else {
                    Int g = gcd(ao[i], bo[j]);
                    Int q = bo[j] / g;
                    if (raw % q != 0) throw std::invalid_argument("coords_of: not a homomorphism");
                    c[k++] = raw / q;
                }
            }
        }
        return grp.canonical(c);
    }

    IntMatrix matrix_of(const Vec& coords) const {
        IntMatrix m(b.ngens(), a.ngens());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (coords[k] != 0) m = m + basis[k].scaled(coords[k]);
        return m;
    }
};

inline HomGroup hom_group(const FGAbGroup& a, const FGAbGroup& b) {
    const auto& ao = a.smith_orders();
    const auto& bo = b.smith_orders();
    std::vector<Int> comp_orders;
    std::vector<IntMatrix> basis;
    for (std::size_t i = 0; i < ao.size(); ++i) {
        if (ao[i] == 1) continue;
        for (std::size_t j = 0; j < bo.size(); ++j) {
            if (bo[j] == 1) continue;
            IntMatrix e(b.ngens(), a.ngens());
            if (ao[i] == 0) {
                comp_orders.push_back(bo[j]);
                e(j, i) = 1;
            } else if (bo[j] == 0) {
                continue; // Hom(Z/a, Z) = 0
            } else {
                Int g = gcd(ao[i], bo[j]);
                comp_orders.push_back(g);
                e(j, i) = bo[j] / g;
            }
            basis.push_back(b.from_smith() * e * a.to_smith());
        }
    }
    return HomGroup{FGAbGroup::from_orders(comp_orders), std::move(basis), a, b};
}

// Ext(A, B) from the free resolution 0 -> Z^r -> Z^m -> A -> 0 where the middle
// term is the generator module and Z^r is a basis of the relation lattice.
struct ExtGroup {
    FGAbGroup grp;          // presented on r * ngens(B) generators
    IntMatrix res_basis;    // ngens(A) x r: basis of the relation lattice of A
    FGAbGroup a, b;
    // generator index (p, q) -> p * ngens(B) + q : "relation-basis p maps to gen q of B"
};

inline IntMatrix relation_lattice_basis(const FGAbGroup& a) {
    SmithForm f = smith_normal_form(a.relations());
    std::vector<Vec> cols;
    std::size_t bound = std::min(a.relations().rows(), a.relations().cols());
    for (std::size_t i = 0; i < bound; ++i) {
        if (f.s(i, i) == 0) break;
        Vec v = a.from_smith().col(i);
        cols.push_back(vec_scaled(f.s(i, i), v));
    }
    return IntMatrix::from_cols(a.ngens(), cols);
}

inline ExtGroup ext_group(const FGAbGroup& a, const FGAbGroup& b) {
    IntMatrix r = relation_lattice_basis(a);
    const std::size_t nr = r.cols();
    const std::size_t nb = b.ngens();
    const std::size_t n = nr * nb;
    // B^nr with block-diagonal relations
    IntMatrix rels(n, nr * b.relations().cols() + a.ngens() * nb);
    std::size_t c = 0;
    for (std::size_t p = 0; p < nr; ++p)
        for (std::size_t j = 0; j < b.relations().cols(); ++j, ++c)
            for (std::size_t i = 0; i < nb; ++i)
                rels(p * nb + i, c) = b.relations()(i, j);
    // image of Hom(Z^m, B): generator (p', q') maps to (R[p',p] * e_q')_p
    for (std::size_t pp = 0; pp < a.ngens(); ++pp)
        for (std::size_t q = 0; q < nb; ++q, ++c)
            for (std::size_t p = 0; p < nr; ++p)
                rels(p * nb + q, c) = r(pp, p);
    return ExtGroup{FGAbGroup(n, rels), std::move(r), a, b};
}

// ----------------------------------------------------------------------------
// extend_hom: find F: A -> M with F(a_i) = m_i, or a witness relation.

struct Constraint {
    Vec element; // in A
    Vec value;   // in M
};

struct Witness {
    std::vector<Int> combo; // coefficients over the supplied constraints
    Vec element;            // sum_i combo_i * a_i, an element of A
    Int order;              // the divisibility datum d (0: element vanishes in A)
    Vec value;              // sum_i combo_i * m_i, unsolvable as d*x = value in M
};

struct ExtendResult {
    std::optional<AbHom> hom;
    std::optional<Witness> witness;
    bool ok() const { return hom.has_value(); }
};

inline ExtendResult extend_hom(const FGAbGroup& a, const std::vector<Constraint>& constraints,
                               const FGAbGroup& m) {
    const std::size_t ng = a.ngens();
    const std::size_t nc = constraints.size();
    const std::size_t nrel = a.relations().cols();
    // columns: constraint elements, then the relations of A (with value 0)
    IntMatrix cmat(ng, nc + nrel);
    for (std::size_t j = 0; j < nc; ++j) {
        if (constraints[j].element.size() != ng || constraints[j].value.size() != m.ngens())
            throw std::invalid_argument("extend_hom: constraint shape mismatch");
        cmat.set_col(j, constraints[j].element);
    }
    for (std::size_t j = 0; j < nrel; ++j)
        for (std::size_t i = 0; i < ng; ++i) cmat(i, nc + j) = a.relations()(i, j);

    SmithForm f = smith_normal_form(cmat);
    const std::size_t ncols = nc + nrel;
    const std::size_t bound = std::min(ng, ncols);

    // transported values: m'_j = sum_i V[i][j] * value_i  (relations contribute 0)
    std::vector<Vec> tv(ncols, m.zero());
    for (std::size_t j = 0; j < ncols; ++j) {
        Vec acc = m.zero();
        for (std::size_t i = 0; i < nc; ++i)
            if (f.v(i, j) != 0) acc = vec_add(acc, vec_scaled(f.v(i, j), constraints[i].value));
        tv[j] = m.canonical(acc);
    }

    IntMatrix smith_images(m.ngens(), ng); // F on the diagonalized basis of Z^ng
    for (std::size_t j = 0; j < ncols; ++j) {
        Int d = (j < bound) ? f.s(j, j) : Int(0);
        auto x = m.solve_scaled(d, tv[j]);
        if (!x) {
            Witness w;
            w.combo.resize(nc);
            for (std::size_t i = 0; i < nc; ++i) w.combo[i] = f.v(i, j);
            Vec elem(ng);
            for (std::size_t i = 0; i < nc; ++i)
                elem = vec_add(elem, vec_scaled(w.combo[i], constraints[i].element));
            w.element = a.canonical(elem);
            w.order = d;
            w.value = tv[j];
            return ExtendResult{std::nullopt, std::move(w)};
        }
        if (j < bound && d != 0) smith_images.set_col(j, *x);
        // d == 0 columns force no value; unconstrained coordinates stay 0
    }

    IntMatrix mat = smith_images * f.u; // back to the original generators
    return ExtendResult{AbHom(a, m, std::move(mat)), std::nullopt};
}

// brute-force enumeration of Hom(A, M); test oracle for extend_hom
inline std::vector<AbHom> enumerate_homs(const FGAbGroup& a, const FGAbGroup& m,
                                         std::uint64_t cap = 1u << 20) {
    std::vector<Vec> melems = m.elements(cap);
    const auto& ao = a.smith_orders();
    std::vector<std::vector<Vec>> candidates;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < ao.size(); ++i) {
        std::vector<Vec> c;
        if (ao[i] == 1) {
            c.push_back(m.zero());
        } else {
            for (const auto& x : melems)
                if (m.is_zero(vec_scaled(ao[i], x))) c.push_back(x);
        }
        total *= c.size();
        if (total > cap) throw std::logic_error("enumerate_homs: too many homomorphisms");
        candidates.push_back(std::move(c));
    }
    std::vector<AbHom> out;
    std::vector<std::size_t> pick(ao.size(), 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        std::uint64_t rest = k;
        IntMatrix sm(m.ngens(), a.ngens());
        for (std::size_t i = 0; i < ao.size(); ++i) {
            std::size_t ci = rest % candidates[i].size();
            rest /= candidates[i].size();
            sm.set_col(i, candidates[i][ci]);
        }
        out.emplace_back(a, m, sm * a.to_smith(), false);
    }
    return out;
}

} // namespace straightlab::ab
