// The superposition homomorphism Z, the subcomplex ring <Q> with its identity,
// extension operators E_A built from Kan fillers, the section K with Z o K = id,
// the cocartesian-square check, rational realization-point evaluation, and the
// factor-through-the-main-invariant decision.
#pragma once

#include "straightlab/ab.hpp"
#include "straightlab/dk.hpp"
#include "straightlab/sset.hpp"

#include <boost/rational.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace straightlab::superpos {

using ab::FGAbGroup;
using ab::Subgroup;
using dk::ChainMap;
using dk::ChainMapSpace;
using dk::ClassGroup;
using sset::ExtractedSubset;
using sset::Simplex;
using sset::SimplexRef;
using sset::SimplicialMap;
using sset::SimplicialSubset;
using sset::SSetPtr;

// ---------------------------------------------------------------------------
// the system Q of standard-simplex subcomplexes, its ring, and the identity I

struct QMember {
    SimplicialSubset subset;
    SimplexRef generator; // top simplex; meaningless for the empty member
    bool empty = false;
    int dim = -1;
};

struct QLattice {
    SSetPtr host;
    std::vector<QMember> members;             // supersets first, empty member last
    std::vector<std::vector<int>> meet;       // member index of pairwise intersections
    IntMatrix e_matrix;                       // e[B][A] = [A contains B]
    Vec identity_coeffs;                      // I in <Q>

    int index_of(const SimplicialSubset& s) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i].subset.same_members(s)) return static_cast<int>(i);
        return -1;
    }

    // ring product <A><B> = <A n B>, extended bilinearly
    Vec product(const Vec& x, const Vec& y) const {
        Vec z(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = 0; j < members.size(); ++j)
                if (x[i] != 0 && y[j] != 0) z[meet[i][j]] += x[i] * y[j];
        return z;
    }

    Vec unit(int idx) const {
        Vec v(members.size());
        v[idx] = 1;
        return v;
    }
};

inline QLattice q_lattice(const SSetPtr& u) {
    if (!u->compact()) throw std::invalid_argument("q_lattice: host must be compact");
    QLattice q;
    q.host = u;

    // closures of nondegenerate simplices; each must be a standard simplex
    std::vector<std::string> keys;
    for (int n = 0; n <= u->dim(); ++n)
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i) {
            SimplexRef top{n, static_cast<int>(i)};
            // every iterated face must be nondegenerate and pairwise distinct
            std::vector<Simplex> faces;
            std::vector<std::vector<int>> subsets;
            for (int mask = 1; mask < (1 << (n + 1)); ++mask) {
                std::vector<int> keep;
                for (int b = 0; b <= n; ++b)
                    if (mask & (1 << b)) keep.push_back(b);
                Simplex f = u->iterated_face(Simplex{{}, top}, keep);
                if (!f.nondegenerate())
                    throw std::invalid_argument("q_lattice: host not polyhedral, closure of " +
                                                u->simplex_name(top) + " is not a standard simplex");
                faces.push_back(f);
            }
            std::sort(faces.begin(), faces.end());
            if (std::adjacent_find(faces.begin(), faces.end()) != faces.end())
                throw std::invalid_argument("q_lattice: host not polyhedral, closure of " +
                                            u->simplex_name(top) + " identifies faces");
            SimplicialSubset cl = SimplicialSubset::closure_of(u, top);
            bool dup = false;
            for (const auto& m : q.members)
                if (m.subset.same_members(cl)) { dup = true; break; }
            if (!dup) q.members.push_back(QMember{cl, top, false, n});
        }

    // supersets before subsets: sort by descending simplex count, then by name
    std::sort(q.members.begin(), q.members.end(), [&](const QMember& a, const QMember& b) {
        std::size_t ca = a.subset.simplex_count(), cb = b.subset.simplex_count();
        if (ca != cb) return ca > cb;
        return u->simplex_name(a.generator) < u->simplex_name(b.generator);
    });
    q.members.push_back(QMember{SimplicialSubset::empty(u), SimplexRef{0, 0}, true, -1});

    // intersection closure
    const std::size_t nm = q.members.size();
    q.meet.assign(nm, std::vector<int>(nm, -1));
    for (std::size_t i = 0; i < nm; ++i)
        for (std::size_t j = 0; j < nm; ++j) {
            SimplicialSubset is = q.members[i].subset.intersect(q.members[j].subset);
            int idx = q.index_of(is);
            if (idx < 0)
                throw std::invalid_argument(
                    "q_lattice: host not polyhedral, intersection of " +
                    (q.members[i].empty ? std::string("{}") : u->simplex_name(q.members[i].generator)) +
                    " and " +
                    (q.members[j].empty ? std::string("{}") : u->simplex_name(q.members[j].generator)) +
                    " is not a member");
            q.meet[i][j] = idx;
        }

    // e(<A>)(B) = [A >= B]; unitriangular under the chosen order
    q.e_matrix = IntMatrix(nm, nm);
    for (std::size_t b = 0; b < nm; ++b)
        for (std::size_t a = 0; a < nm; ++a)
            q.e_matrix(b, a) = (q.meet[a][b] == static_cast<int>(b)) ? 1 : 0;
    Vec ones(nm, Int(1));
    auto sol = solve(q.e_matrix, ones);
    if (!sol) throw std::logic_error("q_lattice: e(x) = 1 is unsolvable");
    q.identity_coeffs = *sol;

    // I is a two-sided identity of the ring
    for (std::size_t a = 0; a < nm; ++a) {
        if (!(q.product(q.identity_coeffs, q.unit(static_cast<int>(a))) == q.unit(static_cast<int>(a))) ||
            !(q.product(q.unit(static_cast<int>(a)), q.identity_coeffs) == q.unit(static_cast<int>(a))))
            throw std::logic_error("q_lattice: computed I is not an identity");
    }
    return q;
}

// ---------------------------------------------------------------------------
// extension of simplicial maps into an e_nerve via Kan fillers

// extends x (defined on the subset a, through the extraction tables) to all of
// u; fillers run in increasing degree, canonical index order within a degree
inline SimplicialMap extend(const SSetPtr& u, const SimplicialSubset& a, const ExtractedSubset& ex,
                            const SimplicialMap& x, const SSetPtr& w) {
    if (w->kind() != sset::SimplicialSet::Kind::e_nerve)
        throw std::invalid_argument("extend: target is not an e_nerve");
    std::vector<std::vector<Simplex>> assign(u->dim() + 1);
    for (int n = 0; n <= u->dim(); ++n) assign[n].resize(u->nondeg_count(n));

    auto partial_apply = [&](const Simplex& s) {
        const Simplex& img = assign[s.base.dim][s.base.idx];
        return Simplex{sset::word_compose(s.word, img.word), img.base};
    };

    for (int n = 0; n <= u->dim(); ++n)
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i) {
            SimplexRef r{n, static_cast<int>(i)};
            if (a.contains(r)) {
                assign[n][i] = x.apply(SimplexRef{n, ex.from_parent[n].at(r.idx)});
                continue;
            }
            if (n == 0) {
                assign[n][i] = w->from_tuple({0}); // the chosen base filler e_0
                continue;
            }
            // boundary data of the characteristic map, then the unique filler;
            // boundary(n) lists its simplices in the same subset order
            SSetPtr bd = sset::boundary(n);
            auto subsets = sset::detail::subsets_by_size(n);
            std::vector<std::vector<Simplex>> q(std::max(n - 1, 0) + 1);
            for (int k = 0; k <= n - 1; ++k)
                for (const auto& keep : subsets[k]) {
                    Simplex face = u->iterated_face(Simplex{{}, r}, keep);
                    q[k].push_back(partial_apply(face));
                }
            SimplicialMap qb(bd, w, std::move(q), false);
            SimplicialMap filler = sset::kan_filler(w, qb, n);
            assign[n][i] = filler.apply(SimplexRef{n, 0});
        }
    return SimplicialMap(u, w, std::move(assign)); // re-checks simpliciality
}

// ---------------------------------------------------------------------------
// the map group Si(U, <V>) (and its zero-sum part) as a chain-map lattice

struct MapGroupView {
    SSetPtr u, v;
    ChainMapSpace space;

    ChainMap chain_of(const SimplicialMap& s) const {
        return dk::induced_chain_map(s, space.c, space.d);
    }

    Vec coords_of(const SimplicialMap& s) const { return space.coords(chain_of(s)); }
};

inline MapGroupView map_group_view(const SSetPtr& u, const SSetPtr& v, bool zero_sum,
                                   int target_degree = -1) {
    int du = std::max(u->dim(), 0);
    int dv = target_degree >= 0 ? target_degree : (v->truncated() ? du : v->dim());
    MapGroupView view{u, v,
                      dk::chain_map_space(dk::normalized_chains(u, u->dim()),
                                          dk::normalized_chains(v, dv), zero_sum)};
    return view;
}

// superposition of a zero-coefficient-sum combination of simplicial maps
inline ChainMap superposition(const MapGroupView& zero_sum_view,
                              const std::vector<SimplicialMap>& maps, const Vec& coeffs) {
    if (maps.size() != coeffs.size())
        throw std::invalid_argument("superposition: coefficient count mismatch");
    Int total = 0;
    for (const auto& c : coeffs) total += c;
    if (total != 0) throw std::invalid_argument("superposition: coefficient sum must vanish");
    ChainMap acc(zero_sum_view.space.c, zero_sum_view.space.d, {}, false);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (coeffs[i] == 0) continue;
        acc = acc + zero_sum_view.chain_of(maps[i]).scaled(coeffs[i]);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Lemma 9.1: the section K = k^+(I) with Z o K = id

struct SectionReport {
    bool holds = false;
    std::size_t map_count = 0;      // |Si(U, W)|
    std::size_t si_w0_rank = 0;     // rank of Si(U, <W>_0)
    std::size_t member_count = 0;   // |Q|
    IntMatrix k_matrix;             // <Si(U,W)> coordinates per Si(U,<W>_0) basis vector
};

inline SectionReport section_k(const SSetPtr& u, const SSetPtr& w) {
    if (w->kind() != sset::SimplicialSet::Kind::e_nerve)
        throw std::invalid_argument("section_k: W must be an e_nerve");
    QLattice q = q_lattice(u);

    std::vector<SimplicialMap> maps_u = sset::enumerate_maps(u, w);
    std::map<std::vector<std::vector<Simplex>>, int> map_index;
    for (std::size_t i = 0; i < maps_u.size(); ++i) map_index[maps_u[i].assignment()] = static_cast<int>(i);

    MapGroupView view0 = map_group_view(u, w, true);
    const std::size_t r0 = view0.space.rank();
    const std::size_t nmaps = maps_u.size();

    IntMatrix k_total(nmaps, r0);
    for (std::size_t mi = 0; mi < q.members.size(); ++mi) {
        const QMember& mem = q.members[mi];
        const Int& coef = q.identity_coeffs[mi];
        if (mem.empty || coef == 0) continue; // the empty member contributes the zero map

        ExtractedSubset ex = sset::extract(mem.subset, "q-member");
        std::vector<SimplicialMap> maps_a = sset::enumerate_maps(ex.set, w);
        MapGroupView view_a = map_group_view(ex.set, w, true);
        const std::size_t ra = view_a.space.rank();
        if (ra + 1 != maps_a.size())
            throw std::logic_error("section_k: Z_A is not an isomorphism (rank mismatch)");

        // Z_A on the basis <s_i> - <s_0>
        IntMatrix za(ra, ra);
        for (std::size_t i = 1; i < maps_a.size(); ++i) {
            ChainMap diff = view_a.chain_of(maps_a[i]) - view_a.chain_of(maps_a[0]);
            za.set_col(i - 1, view_a.space.coords(diff));
        }
        auto za_inv = solve_matrix(za, IntMatrix::identity(ra));
        if (!za_inv) throw std::logic_error("section_k: Z_A is not invertible over Z");

        // restriction s_A: Si(U,<W>_0) -> Si(A,<W>_0) by composing with the inclusion
        IntMatrix restr(ra, r0);
        for (std::size_t k = 0; k < r0; ++k) {
            Vec unit(r0);
            unit[k] = 1;
            ChainMap f = view0.space.from_coords(unit);
            std::vector<IntMatrix> mats;
            for (int n = 0; n <= view_a.space.c.top_degree(); ++n) {
                IntMatrix fn = f.at(n);
                IntMatrix restricted(view_a.space.d.rank(n), view_a.space.c.rank(n));
                for (std::size_t col = 0; col < view_a.space.c.rank(n); ++col) {
                    int parent = ex.to_parent[n][col];
                    for (std::size_t row = 0; row < restricted.rows(); ++row)
                        restricted(row, col) = fn(row, parent);
                }
                mats.push_back(std::move(restricted));
            }
            ChainMap fr(view_a.space.c, view_a.space.d, std::move(mats), false);
            restr.set_col(k, view_a.space.coords(fr));
        }

        // <E_A>_0 on the same basis, landing in <Si(U,W)>_0
        IntMatrix ea(nmaps, ra);
        std::vector<int> extended_index(maps_a.size());
        for (std::size_t i = 0; i < maps_a.size(); ++i) {
            SimplicialMap ext_map = extend(u, mem.subset, ex, maps_a[i], w);
            extended_index[i] = map_index.at(ext_map.assignment());
        }
        for (std::size_t i = 1; i < maps_a.size(); ++i) {
            ea(extended_index[i], i - 1) += 1;
            ea(extended_index[0], i - 1) -= 1;
        }

        k_total = k_total + (ea * *za_inv * restr).scaled(coef);
    }

    SectionReport rep;
    rep.map_count = nmaps;
    rep.si_w0_rank = r0;
    rep.member_count = q.members.size();
    rep.k_matrix = k_total;

    // K lands in the zero-sum part
    for (std::size_t j = 0; j < r0; ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < nmaps; ++i) s += k_total(i, j);
        if (s != 0) return rep; // holds stays false
    }
    // Z o K = id on the basis of Si(U, <W>_0)
    for (std::size_t j = 0; j < r0; ++j) {
        ChainMap acc(view0.space.c, view0.space.d, {}, false);
        for (std::size_t i = 0; i < nmaps; ++i)
            if (k_total(i, j) != 0) acc = acc + view0.chain_of(maps_u[i]).scaled(k_total(i, j));
        Vec coords = view0.space.coords(acc);
        for (std::size_t t = 0; t < r0; ++t)
            if (coords[t] != (t == j ? 1 : 0)) return rep;
    }
    rep.holds = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Lemma 10.1: Ker q = (c_#)^+(Ker <p>)

struct CocartesianReport {
    bool holds = false;
    std::size_t map_count = 0;
    std::size_t class_count = 0;
    std::size_t ker_p_rank = 0;   // rank of Ker <p> inside <Si(U,V)>
    std::size_t ker_q_rank = 0;   // rank of Ker q inside Si(U, <V>)
    std::size_t image_rank = 0;   // rank of (c_#)^+(Ker <p>)
};

inline CocartesianReport cocartesian_check(const SSetPtr& u, const SSetPtr& v) {
    if (!v->fibrant()) throw std::invalid_argument("cocartesian_check: V must be flagged fibrant");
    q_lattice(u); // enforces that U is compact polyhedral
    sset::HomotopyClasses hc = sset::homotopy_classes(u, v);

    int du = std::max(u->dim(), 0);
    MapGroupView view = map_group_view(u, v, false, v->truncated() ? du + 1 : v->dim());
    const std::size_t r = view.space.rank();
    FGAbGroup ambient = FGAbGroup::free_group(r);

    // Ker q: the null-homotopic sublattice
    IntMatrix hcols = dk::homotopy_operator_columns(view.space);
    auto null_coords = solve_matrix(view.space.basis, hcols);
    if (!null_coords) throw std::logic_error("cocartesian_check: homotopy image escapes the lattice");
    Subgroup ker_q(ambient, *null_coords);

    // (c_#)^+(Ker <p>): differences of homotopic maps
    std::vector<Vec> gens;
    for (const auto& cls : hc.classes) {
        for (std::size_t t = 1; t < cls.size(); ++t) {
            ChainMap diff = view.chain_of(hc.maps[cls[t]]) - view.chain_of(hc.maps[cls[0]]);
            gens.push_back(view.space.coords(diff));
        }
    }
    Subgroup image(ambient, IntMatrix::from_cols(r, gens));

    CocartesianReport rep;
    rep.map_count = hc.maps.size();
    rep.class_count = hc.classes.size();
    rep.ker_p_rank = hc.maps.size() - hc.classes.size(); // differences span freely
    rep.ker_q_rank = ker_q.rank();
    rep.image_rank = image.rank();
    rep.holds = ab::subgroup_equal(ker_q, image);
    return rep;
}

// ---------------------------------------------------------------------------
// rational realization points and evaluation of elements of Si(U, <V>)

using Rat = boost::rational<Int>;

struct RealizationPoint {
    SimplexRef simplex;      // nondegenerate simplex of the host
    std::vector<Rat> coords; // interior barycentric coordinates, sum 1

    friend bool operator<(const RealizationPoint& a, const RealizationPoint& b) {
        if (!(a.simplex == b.simplex)) return a.simplex < b.simplex;
        return a.coords < b.coords;
    }
    friend bool operator==(const RealizationPoint& a, const RealizationPoint& b) {
        return a.simplex == b.simplex && a.coords == b.coords;
    }
};

inline RealizationPoint make_point(const SimplexRef& r, std::vector<Rat> coords) {
    if (static_cast<int>(coords.size()) != r.dim + 1)
        throw std::invalid_argument("make_point: coordinate count mismatch");
    Rat sum(0);
    for (const auto& c : coords) {
        if (c <= Rat(0)) throw std::invalid_argument("make_point: coordinates must be positive");
        sum += c;
    }
    if (sum != Rat(1)) throw std::invalid_argument("make_point: coordinates must sum to 1");
    return RealizationPoint{r, std::move(coords)};
}

// interior normal form of (z, s): collapse the degeneracy word, then drop
// zero coordinates through faces until the pair is interior and nondegenerate
inline RealizationPoint normalize_point(const SSetPtr& v, std::vector<Rat> z, Simplex s) {
    for (;;) {
        // collapse the word, outermost degeneracy first
        for (int i : s.word) {
            std::vector<Rat> z2;
            z2.reserve(z.size() - 1);
            for (std::size_t t = 0; t < z.size(); ++t) {
                if (static_cast<int>(t) == i + 1) { z2.back() += z[t]; continue; }
                z2.push_back(z[t]);
            }
            z = std::move(z2);
        }
        s.word.clear();
        // drop a zero coordinate, if any
        std::size_t zero = z.size();
        for (std::size_t t = 0; t < z.size(); ++t)
            if (z[t] == Rat(0)) { zero = t; break; }
        if (zero == z.size()) return RealizationPoint{s.base, std::move(z)};
        z.erase(z.begin() + static_cast<long>(zero));
        s = v->stored_face(s.base, static_cast<int>(zero));
    }
}

// formal Z-combination of realization points of V
inline std::map<RealizationPoint, Int> realization_eval(dk::FullExpansion& t,
                                                        const RealizationPoint& x) {
    const SSetPtr& v = t.target();
    const std::vector<Int>& coeffs = t.value(x.simplex);
    std::vector<Simplex> all = v->simplices(x.simplex.dim);
    std::map<RealizationPoint, Int> out;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (coeffs[k] == 0) continue;
        RealizationPoint p = normalize_point(v, x.coords, all[k]);
        auto [it, fresh] = out.emplace(std::move(p), coeffs[k]);
        if (!fresh) it->second += coeffs[k];
        if (it->second == 0) out.erase(it);
    }
    return out;
}

// ---------------------------------------------------------------------------
// straightness for tables on [U, V] and the factorization through h

struct SimplicialTable {
    std::vector<Vec> class_values; // indexed by homotopy-class index
    FGAbGroup m;
};

struct StraightVerdict {
    bool straight = false;
    std::optional<ab::Witness> witness;
    std::optional<ab::AbHom> hom;
};

// straightness surrogate on an explicit constraint list: a homomorphism F on
// all of Si(U, <V>) with F(c o s_i) = v_i; no fibrancy is needed for this
// linear question
inline StraightVerdict simplicial_straight_check_maps(const MapGroupView& view,
                                                      const std::vector<SimplicialMap>& maps,
                                                      const std::vector<Vec>& values,
                                                      const FGAbGroup& m) {
    if (maps.size() != values.size())
        throw std::invalid_argument("straight_check: map/value count mismatch");
    FGAbGroup ambient = FGAbGroup::free_group(view.space.rank());
    std::vector<ab::Constraint> cs;
    for (std::size_t i = 0; i < maps.size(); ++i) cs.push_back({view.coords_of(maps[i]), values[i]});
    auto r = ab::extend_hom(ambient, cs, m);
    return {r.ok(), std::move(r.witness), std::move(r.hom)};
}

inline StraightVerdict simplicial_straight_check(const MapGroupView& view,
                                                 const sset::HomotopyClasses& hc,
                                                 const SimplicialTable& table) {
    if (table.class_values.size() != hc.classes.size())
        throw std::invalid_argument("straight_check: table does not cover the classes");
    std::vector<Vec> values;
    for (std::size_t i = 0; i < hc.maps.size(); ++i)
        values.push_back(table.class_values[hc.class_of[i]]);
    return simplicial_straight_check_maps(view, hc.maps, values, table.m);
}

struct FactorVerdict {
    bool factors = false;
    std::optional<ab::Witness> witness;
    std::optional<ab::AbHom> hom; // d: [N U, N V] -> M
};

inline FactorVerdict factor_check(const ClassGroup& cg, const sset::HomotopyClasses& hc,
                                  const SimplicialTable& table) {
    std::vector<ab::Constraint> cs;
    for (std::size_t i = 0; i < hc.maps.size(); ++i)
        cs.push_back({dk::main_invariant(cg, hc.maps[i]), table.class_values[hc.class_of[i]]});
    auto r = ab::extend_hom(cg.grp, cs, table.m);
    return {r.ok(), std::move(r.witness), std::move(r.hom)};
}

struct FactorReport {
    StraightVerdict straight;
    FactorVerdict factored;
    bool agree = false;
};

// Theorem 1.1 at desk scale: the straight verdict and the factor-through-h
// verdict, which must agree on class-constant tables
inline FactorReport factor_through_main(const SSetPtr& u, const SSetPtr& v,
                                        const SimplicialTable& table) {
    if (!u->compact()) throw std::invalid_argument("factor_through_main: U must be compact");
    if (!v->fibrant()) throw std::invalid_argument("factor_through_main: V must be flagged fibrant");
    q_lattice(u); // enforces that U is polyhedral
    sset::HomotopyClasses hc = sset::homotopy_classes(u, v);
    int du = std::max(u->dim(), 0);
    MapGroupView view = map_group_view(u, v, false, v->truncated() ? du + 1 : v->dim());
    ClassGroup cg = dk::class_group_of_sets(u, v);
    FactorReport rep;
    rep.straight = simplicial_straight_check(view, hc, table);
    rep.factored = factor_check(cg, hc, table);
    rep.agree = (rep.straight.straight == rep.factored.factors);
    return rep;
}

} // namespace straightlab::superpos
