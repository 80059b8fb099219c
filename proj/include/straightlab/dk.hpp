// Bounded degreewise-free chain complexes, normalized chains of a simplicial
// set, chain maps and their homotopy-class groups, the universal-coefficient
// sequence with a computed splitting, the main invariant, the simplicial-map
// group Si(U, <V>) realized as a chain-map lattice, and base change to Z/p.
#pragma once

#include "straightlab/ab.hpp"
#include "straightlab/sset.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace straightlab::dk {

using ab::AbHom;
using ab::FGAbGroup;
using ab::Subgroup;
using sset::Simplex;
using sset::SimplexRef;
using sset::SimplicialMap;
using sset::SSetPtr;

class ChainComplex {
public:
    ChainComplex() = default;

    ChainComplex(std::vector<std::size_t> ranks, std::vector<IntMatrix> boundaries,
                 std::vector<std::vector<std::string>> labels = {})
        : ranks_(std::move(ranks)), bnd_(std::move(boundaries)), labels_(std::move(labels)) {
        if (bnd_.size() != ranks_.size())
            throw std::invalid_argument("ChainComplex: boundary count mismatch");
        for (std::size_t n = 1; n < ranks_.size(); ++n) {
            if (bnd_[n].rows() != ranks_[n - 1] || bnd_[n].cols() != ranks_[n])
                throw std::invalid_argument("ChainComplex: boundary shape mismatch");
            if (n >= 2 && !(bnd_[n - 1] * bnd_[n]).is_zero())
                throw std::invalid_argument("ChainComplex: dd != 0");
        }
    }

    int top_degree() const { return static_cast<int>(ranks_.size()) - 1; }

    std::size_t rank(int n) const {
        if (n < 0 || n > top_degree()) return 0;
        return ranks_[n];
    }

    IntMatrix boundary(int n) const {
        if (n >= 1 && n <= top_degree()) return bnd_[n];
        return IntMatrix(rank(n - 1), rank(n));
    }

    const std::string& label(int n, std::size_t i) const { return labels_[n][i]; }
    bool has_labels() const { return !labels_.empty(); }

    std::size_t total_rank() const {
        std::size_t t = 0;
        for (auto r : ranks_) t += r;
        return t;
    }

    friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
        return a.ranks_ == b.ranks_ && a.bnd_ == b.bnd_;
    }

private:
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> bnd_;
    std::vector<std::vector<std::string>> labels_;
};

// normalized chains: basis in degree n = nondegenerate n-simplices,
// boundary = alternating face sum with degenerate faces dropped
inline ChainComplex normalized_chains(const SSetPtr& u, int up_to = -1) {
    int top = up_to >= 0 ? up_to : (u->truncated() ? u->cutoff() : u->dim());
    if (u->truncated() && top > u->cutoff())
        throw std::invalid_argument("normalized_chains: degree beyond truncation cutoff");
    if (top < 0) return ChainComplex({}, {}, {});
    std::vector<std::size_t> ranks(top + 1);
    std::vector<IntMatrix> bnd(top + 1);
    std::vector<std::vector<std::string>> labels(top + 1);
    for (int n = 0; n <= top; ++n) {
        ranks[n] = u->nondeg_count(n);
        for (std::size_t i = 0; i < ranks[n]; ++i)
            labels[n].push_back(u->simplex_name(SimplexRef{n, static_cast<int>(i)}));
    }
    for (int n = 1; n <= top; ++n) {
        IntMatrix d(ranks[n - 1], ranks[n]);
        for (std::size_t j = 0; j < ranks[n]; ++j)
            for (int i = 0; i <= n; ++i) {
                Simplex f = u->stored_face(SimplexRef{n, static_cast<int>(j)}, i);
                if (!f.nondegenerate()) continue;
                d(f.base.idx, j) += (i % 2 == 0) ? 1 : -1;
            }
        bnd[n] = std::move(d);
    }
    return ChainComplex(std::move(ranks), std::move(bnd), std::move(labels));
}

class ChainMap {
public:
    ChainMap(ChainComplex src, ChainComplex dst, std::vector<IntMatrix> mats, bool check = true)
        : src_(std::move(src)), dst_(std::move(dst)), mats_(std::move(mats)) {
        mats_.resize(src_.top_degree() + 1 > 0 ? src_.top_degree() + 1 : 0);
        for (int n = 0; n <= src_.top_degree(); ++n) {
            if (mats_[n].rows() == 0 && mats_[n].cols() == 0)
                mats_[n] = IntMatrix(dst_.rank(n), src_.rank(n));
            if (mats_[n].rows() != dst_.rank(n) || mats_[n].cols() != src_.rank(n))
                throw std::invalid_argument("ChainMap: matrix shape mismatch");
        }
        if (check) {
            for (int n = 1; n <= src_.top_degree(); ++n) {
                IntMatrix lhs = dst_.boundary(n) * at(n);
                IntMatrix rhs = at(n - 1) * src_.boundary(n);
                if (!(lhs == rhs)) throw std::invalid_argument("ChainMap: does not commute with d");
            }
        }
    }

    const ChainComplex& source() const { return src_; }
    const ChainComplex& target() const { return dst_; }

    IntMatrix at(int n) const {
        if (n < 0 || n > src_.top_degree()) return IntMatrix(dst_.rank(n), src_.rank(n));
        return mats_[n];
    }

    ChainMap operator+(const ChainMap& o) const {
        std::vector<IntMatrix> m;
        for (int n = 0; n <= src_.top_degree(); ++n) m.push_back(at(n) + o.at(n));
        return ChainMap(src_, dst_, std::move(m), false);
    }

    ChainMap operator-(const ChainMap& o) const {
        std::vector<IntMatrix> m;
        for (int n = 0; n <= src_.top_degree(); ++n) m.push_back(at(n) - o.at(n));
        return ChainMap(src_, dst_, std::move(m), false);
    }

    ChainMap scaled(const Int& k) const {
        std::vector<IntMatrix> m;
        for (int n = 0; n <= src_.top_degree(); ++n) m.push_back(at(n).scaled(k));
        return ChainMap(src_, dst_, std::move(m), false);
    }

    ChainMap compose(const ChainMap& inner) const { // (*this) o inner
        std::vector<IntMatrix> m;
        for (int n = 0; n <= inner.src_.top_degree(); ++n) m.push_back(at(n) * inner.at(n));
        return ChainMap(inner.src_, dst_, std::move(m), false);
    }

    static ChainMap identity(const ChainComplex& c) {
        std::vector<IntMatrix> m;
        for (int n = 0; n <= c.top_degree(); ++n) m.push_back(IntMatrix::identity(c.rank(n)));
        return ChainMap(c, c, std::move(m), false);
    }

    friend bool operator==(const ChainMap& a, const ChainMap& b) {
        if (a.src_.top_degree() != b.src_.top_degree()) return false;
        for (int n = 0; n <= a.src_.top_degree(); ++n)
            if (!(a.at(n) == b.at(n))) return false;
        return true;
    }

private:
    ChainComplex src_, dst_;
    std::vector<IntMatrix> mats_;
};

// chain map induced by a simplicial map on normalized chains
inline ChainMap induced_chain_map(const SimplicialMap& s, const ChainComplex& src,
                                  const ChainComplex& dst) {
    std::vector<IntMatrix> mats;
    for (int n = 0; n <= src.top_degree(); ++n) {
        IntMatrix m(dst.rank(n), src.rank(n));
        for (std::size_t j = 0; j < src.rank(n); ++j) {
            Simplex img = s.apply(SimplexRef{n, static_cast<int>(j)});
            if (img.nondegenerate()) m(img.base.idx, j) = 1;
        }
        mats.push_back(std::move(m));
    }
    return ChainMap(src, dst, std::move(mats));
}

inline ChainMap induced_chain_map(const SimplicialMap& s) {
    const SSetPtr& u = s.source();
    const SSetPtr& v = s.target();
    int top = u->truncated() ? u->cutoff() : u->dim();
    return induced_chain_map(s, normalized_chains(u, top), normalized_chains(v, top));
}

// ---------------------------------------------------------------------------
// homology

struct HomologyData {
    FGAbGroup group;       // presented on a basis of cycles
    IntMatrix cycle_basis; // chains realizing the generators

    Vec class_of(const Vec& chain) const {
        auto x = solve(cycle_basis, chain);
        if (!x) throw std::invalid_argument("class_of: chain is not a cycle");
        return group.canonical(*x);
    }
};

inline HomologyData homology(const ChainComplex& c, int i) {
    if (i < 0 || i > c.top_degree())
        return HomologyData{FGAbGroup(), IntMatrix(0, 0)};
    IntMatrix z = kernel_basis(c.boundary(i));
    auto rels = solve_matrix(z, c.boundary(i + 1));
    if (!rels) throw std::logic_error("homology: boundaries are not cycles");
    return HomologyData{FGAbGroup(z.cols(), *rels), std::move(z)};
}

inline AbHom induced_homology_hom(const ChainMap& f, int i, const HomologyData& hc,
                                  const HomologyData& hd) {
    IntMatrix m(hd.group.ngens(), hc.group.ngens());
    for (std::size_t j = 0; j < hc.group.ngens(); ++j) {
        Vec img = f.at(i) * hc.cycle_basis.col(j);
        auto x = solve(hd.cycle_basis, img);
        if (!x) throw std::logic_error("induced_homology_hom: image is not a cycle");
        m.set_col(j, *x);
    }
    return AbHom(hc.group, hd.group, std::move(m));
}

// ---------------------------------------------------------------------------
// the lattice of chain maps C -> D; with zero_sum set, only maps whose
// degree-0 matrix has vanishing column sums (the Si(U, <V>_0) realization)

struct ChainMapSpace {
    ChainComplex c, d;
    bool zero_sum = false;
    std::vector<std::size_t> offsets; // per degree; offsets.back() = total entries
    IntMatrix conditions;             // rows: commutation (+ zero-sum) constraints
    IntMatrix basis;                  // total x rank, lattice basis of the space

    int top() const { return c.top_degree(); }
    std::size_t rank() const { return basis.cols(); }

    std::size_t entry_index(int n, std::size_t row, std::size_t col) const {
        return offsets[n] + row * c.rank(n) + col;
    }

    Vec flatten(const ChainMap& f) const {
        Vec v(offsets.back());
        for (int n = 0; n <= top(); ++n) {
            IntMatrix m = f.at(n);
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t cl = 0; cl < m.cols(); ++cl) v[entry_index(n, r, cl)] = m(r, cl);
        }
        return v;
    }

    ChainMap unflatten(const Vec& v) const {
        std::vector<IntMatrix> mats;
        for (int n = 0; n <= top(); ++n) {
            IntMatrix m(d.rank(n), c.rank(n));
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t cl = 0; cl < m.cols(); ++cl) m(r, cl) = v[entry_index(n, r, cl)];
            mats.push_back(std::move(m));
        }
        return ChainMap(c, d, std::move(mats), false);
    }

    Vec coords(const ChainMap& f) const {
        auto x = solve(basis, flatten(f));
        if (!x) throw std::invalid_argument("ChainMapSpace: not in the lattice");
        return *x;
    }

    ChainMap from_coords(const Vec& x) const { return unflatten(basis * x); }
};

inline ChainMapSpace chain_map_space(ChainComplex c, ChainComplex d, bool zero_sum = false) {
    ChainMapSpace sp;
    sp.c = std::move(c);
    sp.d = std::move(d);
    sp.zero_sum = zero_sum;
    const int top = sp.top();
    sp.offsets.assign(1, 0);
    for (int n = 0; n <= top; ++n)
        sp.offsets.push_back(sp.offsets.back() + sp.d.rank(n) * sp.c.rank(n));
    const std::size_t total = sp.offsets.back();

    std::size_t nrows = 0;
    for (int n = 1; n <= top; ++n) nrows += sp.d.rank(n - 1) * sp.c.rank(n);
    if (zero_sum) nrows += sp.c.rank(0);
    IntMatrix cond(nrows, total);
    std::size_t row = 0;
    for (int n = 1; n <= top; ++n) {
        IntMatrix dd = sp.d.boundary(n), dc = sp.c.boundary(n);
        for (std::size_t a = 0; a < sp.d.rank(n - 1); ++a)
            for (std::size_t b = 0; b < sp.c.rank(n); ++b, ++row) {
                for (std::size_t k = 0; k < sp.d.rank(n); ++k)
                    if (dd(a, k) != 0) cond(row, sp.entry_index(n, k, b)) += dd(a, k);
                for (std::size_t k = 0; k < sp.c.rank(n - 1); ++k)
                    if (dc(k, b) != 0) cond(row, sp.entry_index(n - 1, a, k)) -= dc(k, b);
            }
    }
    if (zero_sum)
        for (std::size_t b = 0; b < sp.c.rank(0); ++b, ++row)
            for (std::size_t a = 0; a < sp.d.rank(0); ++a)
                cond(row, sp.entry_index(0, a, b)) = 1;
    sp.conditions = std::move(cond);
    sp.basis = kernel_basis(sp.conditions);
    return sp;
}

// flattened images of the homotopy operator h -> dh + hd, one column per
// elementary degree-(+1) map; these span the null-homotopic sublattice
inline IntMatrix homotopy_operator_columns(const ChainMapSpace& sp) {
    const int top = sp.top();
    std::vector<Vec> cols;
    for (int n = 0; n <= top; ++n) {
        std::size_t hr = sp.d.rank(n + 1), hc = sp.c.rank(n);
        IntMatrix dd = sp.d.boundary(n + 1), dc = sp.c.boundary(n + 1);
        for (std::size_t a = 0; a < hr; ++a)
            for (std::size_t b = 0; b < hc; ++b) {
                Vec v(sp.offsets.back());
                // contribution to f_n = d_D h_n
                for (std::size_t k = 0; k < sp.d.rank(n); ++k)
                    if (dd(k, a) != 0) v[sp.entry_index(n, k, b)] += dd(k, a);
                // contribution to f_{n+1} = h_n d_C
                if (n + 1 <= top)
                    for (std::size_t j = 0; j < sp.c.rank(n + 1); ++j)
                        if (dc(b, j) != 0) v[sp.entry_index(n + 1, a, j)] += dc(b, j);
                cols.push_back(std::move(v));
            }
    }
    return IntMatrix::from_cols(sp.offsets.back(), cols);
}

// the group [C, D] of chain-homotopy classes, with canonical representatives
struct ClassGroup {
    ChainMapSpace space;
    IntMatrix null_gens;   // in lattice coordinates
    FGAbGroup grp;         // Z^rank / null_gens
    ColEchelon null_ech;

    Vec project(const ChainMap& f) const { return grp.canonical(space.coords(f)); }

    // canonical lift: reduce lattice coordinates modulo the null sublattice
    ChainMap representative(const Vec& cls) const {
        return space.from_coords(reduce_mod_lattice(null_ech, grp.canonical(cls)));
    }
};

inline ClassGroup class_group(ChainComplex c, ChainComplex d) {
    ClassGroup cg;
    cg.space = chain_map_space(std::move(c), std::move(d), false);
    IntMatrix images = homotopy_operator_columns(cg.space);
    auto in_coords = solve_matrix(cg.space.basis, images);
    if (!in_coords) throw std::logic_error("class_group: homotopy image escapes the lattice");
    cg.null_gens = std::move(*in_coords);
    cg.grp = FGAbGroup(cg.space.rank(), cg.null_gens);
    cg.null_ech = col_echelon(cg.null_gens);
    return cg;
}

inline Vec main_invariant(const ClassGroup& cg, const SimplicialMap& s) {
    return cg.project(induced_chain_map(s, cg.space.c, cg.space.d));
}

// class group driver for simplicial inputs: [N(U), N(V)] at cutoff dim U + 1
inline ClassGroup class_group_of_sets(const SSetPtr& u, const SSetPtr& v) {
    int du = std::max(u->dim(), 0);
    int dv = v->truncated() ? du + 1 : v->dim();
    return class_group(normalized_chains(u, u->dim()), normalized_chains(v, dv));
}

// ---------------------------------------------------------------------------
// universal coefficient sequence
//   0 -> sum_i Ext(H_{i-1}C, H_iD) -> [C,D] -> sum_i Hom(H_iC, H_iD) -> 0

struct UctResult {
    FGAbGroup ext_part, hom_part;
    ClassGroup middle;
    AbHom inject;    // ext_part -> [C,D]
    AbHom surject;   // [C,D] -> hom_part
    AbHom splitting; // hom_part -> [C,D], surject o splitting = id
    bool injective = false, surjective = false, exact_middle = false, split_ok = false;

    bool all_ok() const { return injective && surjective && exact_middle && split_ok; }
};

inline UctResult uct_sequence(const ChainComplex& c, const ChainComplex& d) {
    UctResult r{FGAbGroup(), FGAbGroup(), class_group(c, d),
                AbHom::zero(FGAbGroup(), FGAbGroup()), AbHom::zero(FGAbGroup(), FGAbGroup()),
                AbHom::zero(FGAbGroup(), FGAbGroup())};
    const int lo = 0, hi = std::max(c.top_degree(), d.top_degree()) + 1;

    std::vector<HomologyData> hc, hd;
    for (int i = lo; i <= hi; ++i) {
        hc.push_back(homology(c, i));
        hd.push_back(homology(d, i));
    }

    std::vector<ab::HomGroup> homs;
    std::vector<ab::ExtGroup> exts;
    std::vector<FGAbGroup> hom_parts, ext_parts;
    for (int i = lo; i <= hi; ++i) {
        homs.push_back(ab::hom_group(hc[i].group, hd[i].group));
        hom_parts.push_back(homs.back().grp);
        const FGAbGroup prev = (i == 0) ? FGAbGroup() : hc[i - 1].group;
        exts.push_back(ab::ext_group(prev, hd[i].group));
        ext_parts.push_back(exts.back().grp);
    }
    ab::DirectSum hom_sum = ab::direct_sum(hom_parts);
    ab::DirectSum ext_sum = ab::direct_sum(ext_parts);
    r.hom_part = hom_sum.grp;
    r.ext_part = ext_sum.grp;

    const std::size_t rk = r.middle.space.rank();

    // surjection: induced maps on homology, coordinatized per degree
    IntMatrix phi(r.hom_part.ngens(), rk);
    for (std::size_t k = 0; k < rk; ++k) {
        Vec unit(rk);
        unit[k] = 1;
        ChainMap f = r.middle.space.from_coords(unit);
        std::size_t off = 0;
        for (int i = lo; i <= hi; ++i) {
            AbHom hom_i = induced_homology_hom(f, i, hc[i], hd[i]);
            Vec coords = homs[i].coords_of(hom_i.matrix());
            for (std::size_t t = 0; t < coords.size(); ++t) phi(off + t, k) = coords[t];
            off += homs[i].grp.ngens();
        }
    }
    r.surject = AbHom(r.middle.grp, r.hom_part, std::move(phi));

    // injection: an Ext generator phi: B_{i-1} -> H_i D lifts to the chain map
    // f_i = lift(phi) o (d_i factored through the relation lattice of H_{i-1}C)
    IntMatrix psi(rk, r.ext_part.ngens());
    std::size_t off = 0;
    for (int i = lo; i <= hi; ++i) {
        const ab::ExtGroup& ext = exts[i];
        const std::size_t nb = hd[i].group.ngens();
        const std::size_t nr = ext.res_basis.cols();
        if (nr * nb == 0) continue;
        // factor d_i: C_i -> relation-lattice coordinates of H_{i-1}C
        IntMatrix bnd = c.boundary(i);
        auto in_cycles = solve_matrix(hc[i - 1].cycle_basis, bnd);
        if (!in_cycles) throw std::logic_error("uct: boundary is not a cycle");
        auto rho = solve_matrix(ext.res_basis, *in_cycles);
        if (!rho) throw std::logic_error("uct: boundary escapes the relation lattice");
        for (std::size_t p = 0; p < nr; ++p)
            for (std::size_t q = 0; q < nb; ++q) {
                // chain map concentrated in degree i
                IntMatrix fi(d.rank(i), c.rank(i));
                Vec lift = hd[i].cycle_basis.col(q);
                for (std::size_t j = 0; j < c.rank(i); ++j)
                    if ((*rho)(p, j) != 0)
                        for (std::size_t t = 0; t < d.rank(i); ++t)
                            fi(t, j) += (*rho)(p, j) * lift[t];
                std::vector<IntMatrix> mats(c.top_degree() + 1);
                if (i <= c.top_degree()) mats[i] = std::move(fi);
                ChainMap g(c, d, std::move(mats));
                Vec coords = r.middle.space.coords(g);
                for (std::size_t t = 0; t < rk; ++t) psi(t, off + p * nb + q) = coords[t];
            }
        off += ext.grp.ngens();
        continue;
    }
    // note: `off` must track every block, including empty ones
    r.inject = AbHom(r.ext_part, r.middle.grp, std::move(psi));

    // exactness checks
    Subgroup ker_phi = ab::kernel(r.surject);
    Subgroup im_psi = ab::image(r.inject);
    r.exact_middle = ab::subgroup_equal(ker_phi, im_psi);
    Subgroup ker_psi = ab::kernel(r.inject);
    r.injective = true;
    for (std::size_t j = 0; j < ker_psi.generators().cols(); ++j)
        if (!r.ext_part.is_zero(ker_psi.generators().col(j))) r.injective = false;
    r.surjective = ab::subgroup_equal(ab::image(r.surject), Subgroup::full(r.hom_part));

    // splitting: preimages of the Smith generators of hom_part, with matching order
    {
        const std::size_t np = r.hom_part.ngens();
        IntMatrix sigma_smith(rk, np);
        bool ok = true;
        const IntMatrix& phi_m = r.surject.matrix();
        const IntMatrix& relp = r.hom_part.relations();
        const IntMatrix& relg = r.middle.grp.relations();
        for (std::size_t j = 0; j < np && ok; ++j) {
            const Int order = r.hom_part.smith_orders()[j];
            Vec target = r.hom_part.smith_generator(j);
            // unknowns: x (rk), y (relp cols), z (relg cols)
            std::size_t ny = relp.cols(), nz = relg.cols();
            IntMatrix big(np + rk, rk + ny + nz);
            for (std::size_t a = 0; a < np; ++a) {
                for (std::size_t b = 0; b < rk; ++b) big(a, b) = phi_m(a, b);
                for (std::size_t b = 0; b < ny; ++b) big(a, rk + b) = relp(a, b);
            }
            for (std::size_t a = 0; a < rk; ++a) {
                big(np + a, a) = order;
                for (std::size_t b = 0; b < nz; ++b) big(np + a, rk + ny + b) = relg(a, b);
            }
            Vec rhs(np + rk);
            for (std::size_t a = 0; a < np; ++a) rhs[a] = target[a];
            auto sol = solve(big, rhs);
            if (!sol) { ok = false; break; }
            for (std::size_t a = 0; a < rk; ++a) sigma_smith(a, j) = (*sol)[a];
        }
        if (ok) {
            r.splitting = AbHom(r.hom_part, r.middle.grp, sigma_smith * r.hom_part.to_smith());
            AbHom comp = r.surject.compose(r.splitting);
            r.split_ok = comp.equals(AbHom::identity(r.hom_part));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// full simplicial-level values (Dold-Kan reconstruction): a chain map
// N(U) -> N(V) corresponds to a unique simplicial map U -> <V>; `value`
// returns its coefficients over all n-simplices of V (canonical order)

class FullExpansion {
public:
    FullExpansion(SSetPtr u, SSetPtr v, ChainMap f)
        : u_(std::move(u)), v_(std::move(v)), f_(std::move(f)) {}

    const std::vector<Int>& value(SimplexRef r) {
        auto it = cache_.find(r);
        if (it != cache_.end()) return it->second;
        const int n = r.dim;
        std::vector<Simplex> all = v_->simplices(n);
        std::map<Simplex, std::size_t> index;
        for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = i;

        std::size_t lower_total = 0;
        std::vector<std::vector<Simplex>> lower;
        if (n >= 1) {
            lower.push_back(v_->simplices(n - 1));
            lower_total = lower[0].size();
        }
        std::map<Simplex, std::size_t> lower_index;
        for (std::size_t i = 0; i < lower_total; ++i) lower_index[lower[0][i]] = i;

        const std::size_t nondeg = v_->nondeg_count(n);
        IntMatrix a(nondeg + (n >= 1 ? (n + 1) * lower_total : 0), all.size());
        Vec b(a.rows());
        // (a) nondegenerate coefficients are the chain-map entries
        for (std::size_t w = 0; w < nondeg; ++w) {
            a(w, index.at(Simplex{{}, SimplexRef{n, static_cast<int>(w)}})) = 1;
            b[w] = f_.at(n)(w, r.idx);
        }
        // (b) each face pushes to the already-known lower value
        if (n >= 1) {
            for (int i = 0; i <= n; ++i) {
                const std::size_t row0 = nondeg + static_cast<std::size_t>(i) * lower_total;
                for (std::size_t s = 0; s < all.size(); ++s) {
                    Simplex fs = v_->face(all[s], i);
                    a(row0 + lower_index.at(fs), s) += 1;
                }
                Simplex uf = u_->face(Simplex{{}, r}, i);
                const std::vector<Int>& base_val = value(uf.base);
                std::vector<Simplex> base_all = v_->simplices(uf.base.dim);
                for (std::size_t s = 0; s < base_all.size(); ++s) {
                    if (base_val[s] == 0) continue;
                    Simplex pushed{sset::word_compose(uf.word, base_all[s].word), base_all[s].base};
                    b[row0 + lower_index.at(pushed)] += base_val[s];
                }
            }
        }
        auto sol = solve(a, b);
        if (!sol) throw std::logic_error("FullExpansion: reconstruction system unsolvable");
        return cache_[r] = *sol;
    }

    const SSetPtr& target() const { return v_; }

private:
    SSetPtr u_, v_;
    ChainMap f_;
    std::map<SimplexRef, std::vector<Int>> cache_;
};

// ---------------------------------------------------------------------------
// base change to Z/p

namespace modp {

inline Int norm(const Int& x, const Int& p) { return mod_positive(x, p); }

// column-reduced basis of the kernel of M over F_p
inline IntMatrix kernel(const IntMatrix& m, const Int& p) {
    IntMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = norm(a(i, j), p);
    IntMatrix v = IntMatrix::identity(cols);
    std::size_t lead = 0;
    for (std::size_t i = 0; i < rows && lead < cols; ++i) {
        std::size_t piv = lead;
        while (piv < cols && a(i, piv) == 0) ++piv;
        if (piv == cols) continue;
        detail::swap_cols(a, lead, piv);
        detail::swap_cols(v, lead, piv);
        Int inv = mod_inverse(a(i, lead), p);
        for (std::size_t r2 = 0; r2 < rows; ++r2) a(r2, lead) = norm(a(r2, lead) * inv, p);
        for (std::size_t r2 = 0; r2 < cols; ++r2) v(r2, lead) = norm(v(r2, lead) * inv, p);
        for (std::size_t j = 0; j < cols; ++j) {
            if (j == lead || a(i, j) == 0) continue;
            Int q = a(i, j);
            for (std::size_t r2 = 0; r2 < rows; ++r2) a(r2, j) = norm(a(r2, j) - q * a(r2, lead), p);
            for (std::size_t r2 = 0; r2 < cols; ++r2) v(r2, j) = norm(v(r2, j) - q * v(r2, lead), p);
        }
        ++lead;
    }
    std::vector<Vec> ker;
    for (std::size_t j = 0; j < cols; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < rows; ++i)
            if (a(i, j) != 0) { zero = false; break; }
        if (zero) ker.push_back(v.col(j));
    }
    return IntMatrix::from_cols(cols, ker);
}

inline std::optional<Vec> solve(const IntMatrix& m, const Vec& b, const Int& p) {
    const std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix a(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = norm(m(i, j), p);
        a(i, cols) = norm(b[i], p);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rr = 0;
    for (std::size_t j = 0; j < cols && rr < rows; ++j) {
        std::size_t piv = rr;
        while (piv < rows && a(piv, j) == 0) ++piv;
        if (piv == rows) continue;
        detail::swap_rows(a, rr, piv);
        Int inv = mod_inverse(a(rr, j), p);
        for (std::size_t k = j; k <= cols; ++k) a(rr, k) = norm(a(rr, k) * inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rr || a(i, j) == 0) continue;
            Int q = a(i, j);
            for (std::size_t k = j; k <= cols; ++k) a(i, k) = norm(a(i, k) - q * a(rr, k), p);
        }
        pivot_col.push_back(j);
        ++rr;
    }
    for (std::size_t i = rr; i < rows; ++i)
        if (a(i, cols) != 0) return std::nullopt;
    Vec x(cols);
    for (std::size_t i = 0; i < rr; ++i) x[pivot_col[i]] = a(i, cols);
    return x;
}

inline std::size_t rank(const IntMatrix& m, const Int& p) {
    return m.cols() - kernel(m, p).cols();
}

} // namespace modp

struct BaseChangeResult {
    Int p;
    std::size_t dim = 0;      // dim over F_p of [C@Z/p, D@Z/p]
    FGAbGroup target;         // (Z/p)^dim
    AbHom map = AbHom::zero(FGAbGroup(), FGAbGroup()); // I: [C,D] -> target
    bool mod_p_injective = false; // injectivity of the induced I^(K)
};

inline BaseChangeResult base_change_classes(const ClassGroup& cg, const Int& p) {
    // primality by trial division (p stays small here)
    if (p < 2) throw std::invalid_argument("base_change_classes: p must be prime");
    for (Int t = 2; t * t <= p; ++t)
        if (p % t == 0) throw std::invalid_argument("base_change_classes: p must be prime");

    BaseChangeResult r;
    r.p = p;
    IntMatrix vp = modp::kernel(cg.space.conditions, p); // mod-p chain maps
    IntMatrix hcols = homotopy_operator_columns(cg.space);
    // null-homotopic subspace in vp coordinates
    std::vector<Vec> wcols;
    for (std::size_t j = 0; j < hcols.cols(); ++j) {
        auto x = modp::solve(vp, hcols.col(j), p);
        if (!x) throw std::logic_error("base_change: homotopy image escapes the mod-p space");
        wcols.push_back(*x);
    }
    IntMatrix w = IntMatrix::from_cols(vp.cols(), wcols);

    // quotient coordinates: reduce against a column echelon of w, keep non-pivot rows
    IntMatrix we = w;
    std::vector<std::size_t> pivots;
    {
        std::size_t lead = 0;
        for (std::size_t i = 0; i < we.rows() && lead < we.cols(); ++i) {
            std::size_t piv = lead;
            while (piv < we.cols() && modp::norm(we(i, piv), p) == 0) ++piv;
            if (piv == we.cols()) continue;
            detail::swap_cols(we, lead, piv);
            Int inv = mod_inverse(modp::norm(we(i, lead), p), p);
            for (std::size_t r2 = 0; r2 < we.rows(); ++r2)
                we(r2, lead) = modp::norm(we(r2, lead) * inv, p);
            for (std::size_t j = 0; j < we.cols(); ++j) {
                if (j == lead) continue;
                Int q = modp::norm(we(i, j), p);
                if (q == 0) continue;
                for (std::size_t r2 = 0; r2 < we.rows(); ++r2)
                    we(r2, j) = modp::norm(we(r2, j) - q * we(r2, lead), p);
            }
            pivots.push_back(i);
            ++lead;
        }
    }
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < vp.cols(); ++i)
        if (std::find(pivots.begin(), pivots.end(), i) == pivots.end()) free_rows.push_back(i);
    r.dim = free_rows.size();
    r.target = FGAbGroup::from_orders(std::vector<Int>(r.dim, p));

    auto quotient_coords = [&](Vec x) {
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            Int q = modp::norm(x[pivots[k]], p);
            if (q == 0) continue;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = modp::norm(x[i] - q * we(i, k), p);
        }
        Vec out(free_rows.size());
        for (std::size_t i = 0; i < free_rows.size(); ++i) out[i] = modp::norm(x[free_rows[i]], p);
        return out;
    };

    const std::size_t rk = cg.space.rank();
    IntMatrix m(r.dim, rk);
    for (std::size_t k = 0; k < rk; ++k) {
        Vec flat = cg.space.basis.col(k);
        auto x = modp::solve(vp, flat, p);
        if (!x) throw std::logic_error("base_change: integral chain map escapes the mod-p space");
        Vec qc = quotient_coords(*x);
        m.set_col(k, qc);
    }
    r.map = AbHom(cg.grp, r.target, std::move(m));

    // kernel of I must lie in p*[C,D]
    Subgroup ker = ab::kernel(r.map);
    Subgroup p_mult = Subgroup(cg.grp, IntMatrix::identity(cg.grp.ngens()).scaled(p));
    r.mod_p_injective = true;
    for (std::size_t j = 0; j < ker.generators().cols(); ++j)
        if (!p_mult.contains(ker.generators().col(j))) r.mod_p_injective = false;
    return r;
}

} // namespace straightlab::dk
