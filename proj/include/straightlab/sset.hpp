// Compact simplicial sets stored by nondegenerate simplices with
// degeneracy-word face data (Kenzo-style), simplicial maps, builders
// (standard simplices, polygons, nerves), binary products, map enumeration,
// cylinder homotopy, and Kan filling in contractible nerves.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace straightlab::sset {

// ---------------------------------------------------------------------------
// degeneracy words: [i1 > i2 > ... > ik] encodes s_{i1} o ... o s_{ik}

using Word = std::vector<int>;

inline bool word_is_normal(const Word& w) {
    for (std::size_t t = 0; t + 1 < w.size(); ++t)
        if (w[t] <= w[t + 1]) return false;
    return true;
}

// w o s_i (apply s_i first); w normal in, normal out
inline Word word_append(Word w, int i) {
    // s_a s_i = s_{i+1} s_a for a <= i
    int carry = i;
    std::size_t pos = w.size();
    while (pos > 0 && w[pos - 1] <= carry) {
        ++carry;
        --pos;
    }
    w.insert(w.begin() + pos, carry);
    return w;
}

// s_i o w (apply s_i last); w normal in, normal out
inline Word word_prepend(Word w, int i) {
    int carry = i;
    std::size_t pos = 0;
    while (pos < w.size() && carry <= w[pos]) {
        int a = w[pos];
        w[pos] = a + 1; // s_carry s_a = s_{a+1} s_carry for carry <= a
        ++pos;
    }
    w.insert(w.begin() + pos, carry);
    return w;
}

inline Word word_compose(Word outer, const Word& inner) {
    for (int i : inner) outer = word_append(std::move(outer), i);
    return outer;
}

// normalize an arbitrary composition list (same encoding, possibly unsorted)
inline Word word_normalize(const Word& w) {
    Word out;
    for (int i : w) out = word_append(std::move(out), i);
    return out;
}

// d_i pushed through a word: returns the transformed word; `residual` is the
// face index that reaches the base simplex, or -1 if the face was absorbed
struct FaceThrough {
    Word word;
    int residual;
};

inline FaceThrough face_through_word(int i, const Word& w) {
    Word out;
    int c = i;
    for (std::size_t t = 0; t < w.size(); ++t) {
        int a = w[t];
        if (c < a) {
            out.push_back(a - 1); // d_c s_a = s_{a-1} d_c
        } else if (c == a || c == a + 1) {
            for (std::size_t r = t + 1; r < w.size(); ++r) out.push_back(w[r]);
            return {std::move(out), -1};
        } else {
            out.push_back(a); // d_c s_a = s_a d_{c-1}
            --c;
        }
    }
    return {std::move(out), c};
}

// ---------------------------------------------------------------------------

struct SimplexRef {
    int dim = 0;
    int idx = 0;
    friend bool operator==(const SimplexRef& a, const SimplexRef& b) {
        return a.dim == b.dim && a.idx == b.idx;
    }
    friend bool operator<(const SimplexRef& a, const SimplexRef& b) {
        return a.dim != b.dim ? a.dim < b.dim : a.idx < b.idx;
    }
};

// possibly degenerate simplex: word applied to a nondegenerate base
struct Simplex {
    Word word;
    SimplexRef base;
    int degree() const { return base.dim + static_cast<int>(word.size()); }
    bool nondegenerate() const { return word.empty(); }
    friend bool operator==(const Simplex& a, const Simplex& b) {
        return a.word == b.word && a.base == b.base;
    }
    friend bool operator<(const Simplex& a, const Simplex& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.word < b.word;
    }
};

struct FiniteGroup {
    std::string name;
    int order = 1;
    std::vector<int> table; // row-major multiplication, identity = 0

    int times(int a, int b) const { return table[a * order + b]; }

    int inverse(int a) const {
        for (int b = 0; b < order; ++b)
            if (times(a, b) == 0) return b;
        throw std::logic_error("FiniteGroup: no inverse");
    }

    static FiniteGroup cyclic(int m) {
        if (m < 1) throw std::invalid_argument("cyclic: order must be positive");
        FiniteGroup g;
        g.name = "Z" + std::to_string(m);
        g.order = m;
        g.table.resize(static_cast<std::size_t>(m) * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) g.table[a * m + b] = (a + b) % m;
        return g;
    }
};

class SimplicialSet;
using SSetPtr = std::shared_ptr<const SimplicialSet>;

class SimplicialSet {
public:
    enum class Kind { generic, nerve, e_nerve };

    struct Data {
        std::string name;
        int cutoff = 0;
        bool truncated = false;
        bool fibrant = false;
        bool polyhedral = false;
        Kind kind = Kind::generic;
        FiniteGroup group;
        std::vector<std::vector<std::string>> names;        // per degree
        std::vector<std::vector<std::vector<Simplex>>> faces; // [n][idx][i]
    };

    explicit SimplicialSet(Data d) : d_(std::move(d)) {
        if (static_cast<int>(d_.names.size()) != d_.cutoff + 1 ||
            d_.faces.size() != d_.names.size())
            throw std::invalid_argument("SimplicialSet: degree tables must span 0..cutoff");
        if (!d_.names.empty()) d_.faces[0].resize(d_.names[0].size()); // vertices have no faces
        validate();
    }

    const std::string& name() const { return d_.name; }
    int cutoff() const { return d_.cutoff; }
    bool truncated() const { return d_.truncated; }
    bool compact() const { return !d_.truncated; }
    bool fibrant() const { return d_.fibrant; }
    bool polyhedral_flag() const { return d_.polyhedral; }
    Kind kind() const { return d_.kind; }
    const FiniteGroup& group() const { return d_.group; }

    int dim() const {
        for (int n = d_.cutoff; n >= 0; --n)
            if (!d_.names[n].empty()) return n;
        return -1;
    }

    std::size_t nondeg_count(int n) const {
        if (n < 0 || n > d_.cutoff) return 0;
        return d_.names[n].size();
    }

    const std::string& simplex_name(SimplexRef r) const { return d_.names[r.dim][r.idx]; }

    const Simplex& stored_face(SimplexRef r, int i) const { return d_.faces[r.dim][r.idx][i]; }

    Simplex face(const Simplex& s, int i) const {
        FaceThrough ft = face_through_word(i, s.word);
        if (ft.residual < 0) return {std::move(ft.word), s.base};
        if (s.base.dim == 0) throw std::logic_error("face: vertex has no faces");
        const Simplex& f = stored_face(s.base, ft.residual);
        return {word_compose(std::move(ft.word), f.word), f.base};
    }

    Simplex degenerate(const Simplex& s, int i) const {
        return {word_prepend(s.word, i), s.base};
    }

    // face keeping the vertex positions `keep` (sorted ascending) of a simplex
    Simplex iterated_face(const Simplex& s, const std::vector<int>& keep) const {
        const int n = s.degree();
        Simplex cur = s;
        for (int j = n; j >= 0; --j) {
            if (!std::binary_search(keep.begin(), keep.end(), j)) cur = face(cur, j);
        }
        return cur;
    }

    std::vector<SimplexRef> vertices_of(SimplexRef r) const {
        std::vector<SimplexRef> vs;
        for (int j = 0; j <= r.dim; ++j) {
            Simplex v = iterated_face(Simplex{{}, r}, {j});
            vs.push_back(v.base); // degree 0: always nondegenerate
        }
        return vs;
    }

    // all n-simplices (degenerate ones included), canonical order
    std::vector<Simplex> simplices(int n) const {
        if (d_.truncated && n > d_.cutoff)
            throw std::logic_error("simplices: degree beyond truncation cutoff");
        std::vector<Simplex> out;
        for (int m = std::min(n, d_.cutoff); m >= 0; --m) {
            const int k = n - m;
            std::vector<Word> words = descending_words(k, n - 1);
            for (std::size_t idx = 0; idx < nondeg_count(m); ++idx)
                for (const auto& w : words)
                    out.push_back(Simplex{w, SimplexRef{m, static_cast<int>(idx)}});
        }
        return out;
    }

    std::size_t simplex_count(int n) const {
        std::size_t total = 0;
        for (int m = 0; m <= std::min(n, d_.cutoff); ++m)
            total += nondeg_count(m) * binomial(n, n - m);
        return total;
    }

    std::optional<SimplexRef> ref_by_name(const std::string& nm) const {
        for (int n = 0; n <= d_.cutoff; ++n)
            for (std::size_t i = 0; i < d_.names[n].size(); ++i)
                if (d_.names[n][i] == nm) return SimplexRef{n, static_cast<int>(i)};
        return std::nullopt;
    }

    // nondegenerate simplex of a nerve/e_nerve from a raw group tuple
    Simplex from_tuple(const std::vector<int>& tuple) const {
        if (d_.kind == Kind::e_nerve) {
            for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
                if (tuple[i] == tuple[i + 1]) {
                    std::vector<int> t = tuple;
                    t.erase(t.begin() + static_cast<long>(i) + 1);
                    return degenerate(from_tuple(t), static_cast<int>(i));
                }
        } else if (d_.kind == Kind::nerve) {
            for (std::size_t j = 0; j < tuple.size(); ++j)
                if (tuple[j] == 0) {
                    std::vector<int> t = tuple;
                    t.erase(t.begin() + static_cast<long>(j));
                    return degenerate(from_tuple(t), static_cast<int>(j));
                }
        } else {
            throw std::logic_error("from_tuple: not a nerve-built set");
        }
        auto it = tuple_index_.find(tuple);
        if (it == tuple_index_.end()) throw std::logic_error("from_tuple: unknown tuple");
        int deg = static_cast<int>(tuple.size()) - (d_.kind == Kind::e_nerve ? 1 : 0);
        return Simplex{{}, SimplexRef{deg, it->second}};
    }

    const std::vector<int>& tuple_of(SimplexRef r) const {
        if (d_.kind == Kind::generic) throw std::logic_error("tuple_of: not a nerve-built set");
        return tuples_[r.dim][r.idx];
    }

    static std::size_t binomial(int n, int k) {
        if (k < 0 || k > n) return 0;
        std::size_t r = 1;
        for (int i = 0; i < k; ++i) r = r * static_cast<std::size_t>(n - i) / (i + 1);
        return r;
    }

    static std::vector<Word> descending_words(int length, int max_index) {
        std::vector<Word> out;
        Word cur;
        build_words(length, max_index, cur, out);
        return out;
    }

private:
    friend SSetPtr make_simplicial_set(Data d,
                                       std::vector<std::vector<std::vector<int>>> tuples);

    static void build_words(int length, int max_index, Word& cur, std::vector<Word>& out) {
        if (length == 0) {
            out.push_back(cur);
            return;
        }
        // next index strictly below the last one
        int hi = cur.empty() ? max_index : cur.back() - 1;
        for (int i = hi; i >= length - 1; --i) {
            cur.push_back(i);
            build_words(length - 1, max_index, cur, out);
            cur.pop_back();
        }
    }

    void validate() const {
        for (int n = 0; n <= d_.cutoff; ++n) {
            if (d_.faces[n].size() != d_.names[n].size())
                throw std::invalid_argument("SimplicialSet: face table size mismatch");
            for (std::size_t idx = 0; idx < d_.names[n].size(); ++idx) {
                const auto& fs = d_.faces[n][idx];
                if (n == 0) {
                    if (!fs.empty()) throw std::invalid_argument("SimplicialSet: vertex with faces");
                    continue;
                }
                if (static_cast<int>(fs.size()) != n + 1)
                    throw std::invalid_argument("SimplicialSet: wrong face count");
                for (const auto& f : fs) {
                    if (!word_is_normal(f.word) || f.degree() != n - 1)
                        throw std::invalid_argument("SimplicialSet: malformed face");
                    if (f.base.dim < 0 || f.base.dim > d_.cutoff ||
                        f.base.idx >= static_cast<int>(d_.names[f.base.dim].size()))
                        throw std::invalid_argument("SimplicialSet: face ref out of range");
                }
            }
        }
        // d_i d_j = d_{j-1} d_i for i < j, checked through the word calculus
        for (int n = 2; n <= d_.cutoff; ++n)
            for (std::size_t idx = 0; idx < d_.names[n].size(); ++idx) {
                Simplex top{{}, SimplexRef{n, static_cast<int>(idx)}};
                for (int j = 1; j <= n; ++j)
                    for (int i = 0; i < j; ++i) {
                        Simplex a = face(face(top, j), i);
                        Simplex b = face(face(top, i), j - 1);
                        if (!(a == b))
                            throw std::invalid_argument("SimplicialSet: simplicial identity fails at " +
                                                        d_.names[n][idx]);
                    }
            }
    }

    Data d_;
    std::map<std::vector<int>, int> tuple_index_;
    std::vector<std::vector<std::vector<int>>> tuples_;
};

inline SSetPtr make_simplicial_set(SimplicialSet::Data d,
                                   std::vector<std::vector<std::vector<int>>> tuples = {}) {
    auto s = std::make_shared<SimplicialSet>(std::move(d));
    auto* mut = const_cast<SimplicialSet*>(s.get());
    mut->tuples_ = std::move(tuples);
    for (std::size_t n = 0; n < mut->tuples_.size(); ++n)
        for (std::size_t i = 0; i < mut->tuples_[n].size(); ++i)
            mut->tuple_index_[mut->tuples_[n][i]] = static_cast<int>(i);
    return s;
}

// ---------------------------------------------------------------------------
// simplicial maps

class SimplicialMap {
public:
    SimplicialMap(SSetPtr src, SSetPtr dst, std::vector<std::vector<Simplex>> assign,
                  bool check = true)
        : src_(std::move(src)), dst_(std::move(dst)), assign_(std::move(assign)) {
        if (check) validate();
    }

    const SSetPtr& source() const { return src_; }
    const SSetPtr& target() const { return dst_; }
    const std::vector<std::vector<Simplex>>& assignment() const { return assign_; }

    Simplex apply(SimplexRef r) const { return assign_[r.dim][r.idx]; }

    Simplex apply(const Simplex& s) const {
        const Simplex& img = assign_[s.base.dim][s.base.idx];
        return {word_compose(s.word, img.word), img.base};
    }

    SimplicialMap compose(const SimplicialMap& inner) const { // (*this) o inner
        std::vector<std::vector<Simplex>> a(inner.assign_.size());
        for (std::size_t n = 0; n < inner.assign_.size(); ++n)
            for (const auto& s : inner.assign_[n]) a[n].push_back(apply(s));
        return SimplicialMap(inner.src_, dst_, std::move(a), false);
    }

    friend bool operator==(const SimplicialMap& a, const SimplicialMap& b) {
        return a.assign_ == b.assign_;
    }

    friend bool operator<(const SimplicialMap& a, const SimplicialMap& b) {
        return a.assign_ < b.assign_;
    }

private:
    void validate() const {
        int du = src_->dim();
        if (static_cast<int>(assign_.size()) < du + 1)
            throw std::invalid_argument("SimplicialMap: assignment does not cover the source");
        for (int n = 0; n <= du; ++n) {
            if (assign_[n].size() != src_->nondeg_count(n))
                throw std::invalid_argument("SimplicialMap: assignment count mismatch");
            for (std::size_t idx = 0; idx < assign_[n].size(); ++idx) {
                const Simplex& img = assign_[n][idx];
                if (img.degree() != n)
                    throw std::invalid_argument("SimplicialMap: degree not preserved");
                if (n == 0) continue;
                Simplex top{{}, SimplexRef{n, static_cast<int>(idx)}};
                for (int i = 0; i <= n; ++i) {
                    Simplex lhs = apply(src_->face(top, i));
                    Simplex rhs = dst_->face(img, i);
                    if (!(lhs == rhs))
                        throw std::invalid_argument("SimplicialMap: face commutation fails");
                }
            }
        }
    }

    SSetPtr src_, dst_;
    std::vector<std::vector<Simplex>> assign_;
};

inline SimplicialMap identity_map(const SSetPtr& u) {
    std::vector<std::vector<Simplex>> a(u->dim() + 1 > 0 ? u->dim() + 1 : 0);
    for (int n = 0; n <= u->dim(); ++n)
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i)
            a[n].push_back(Simplex{{}, SimplexRef{n, static_cast<int>(i)}});
    return SimplicialMap(u, u, std::move(a), false);
}

inline SimplicialMap constant_map(const SSetPtr& u, const SSetPtr& v, SimplexRef vertex) {
    if (vertex.dim != 0) throw std::invalid_argument("constant_map: expects a vertex");
    std::vector<std::vector<Simplex>> a(u->dim() + 1 > 0 ? u->dim() + 1 : 0);
    for (int n = 0; n <= u->dim(); ++n) {
        Word w(n);
        for (int t = 0; t < n; ++t) w[t] = n - 1 - t; // s_{n-1} ... s_0
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i)
            a[n].push_back(Simplex{w, vertex});
    }
    return SimplicialMap(u, v, std::move(a), false);
}

// ---------------------------------------------------------------------------
// builders

inline std::string subset_name(const std::vector<int>& verts) {
    std::string s;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i) s += ".";
        s += std::to_string(verts[i]);
    }
    return s;
}

namespace detail {

inline std::vector<std::vector<std::vector<int>>> subsets_by_size(int n) {
    // subsets of {0..n} grouped by (size-1), each sorted, lexicographic order
    std::vector<std::vector<std::vector<int>>> by(n + 1);
    const int total = 1 << (n + 1);
    for (int mask = 1; mask < total; ++mask) {
        std::vector<int> s;
        for (int b = 0; b <= n; ++b)
            if (mask & (1 << b)) s.push_back(b);
        by[s.size() - 1].push_back(std::move(s));
    }
    for (auto& grp : by) std::sort(grp.begin(), grp.end());
    return by;
}

inline SSetPtr simplex_like(const std::string& name, int n, bool include_top) {
    auto subsets = subsets_by_size(n);
    if (!include_top) subsets[n].clear();
    int cutoff = include_top ? n : std::max(n - 1, 0);
    SimplicialSet::Data d;
    d.name = name;
    d.cutoff = cutoff;
    d.polyhedral = true;
    d.names.resize(cutoff + 1);
    d.faces.resize(cutoff + 1);
    std::map<std::vector<int>, int> index;
    for (int k = 0; k <= cutoff; ++k)
        for (const auto& s : subsets[k]) {
            index[s] = static_cast<int>(d.names[k].size());
            d.names[k].push_back(subset_name(s));
        }
    for (int k = 1; k <= cutoff; ++k)
        for (const auto& s : subsets[k]) {
            std::vector<Simplex> fs;
            for (int i = 0; i <= k; ++i) {
                std::vector<int> f = s;
                f.erase(f.begin() + i);
                fs.push_back(Simplex{{}, SimplexRef{k - 1, index.at(f)}});
            }
            d.faces[k].push_back(std::move(fs));
        }
    return make_simplicial_set(std::move(d));
}

} // namespace detail

inline SSetPtr standard_simplex(int n) {
    if (n < 0) throw std::invalid_argument("standard_simplex: n >= 0 required");
    return detail::simplex_like("delta" + std::to_string(n), n, true);
}

inline SSetPtr boundary(int n) {
    if (n < 0) throw std::invalid_argument("boundary: n >= 0 required");
    if (n == 0) { // empty simplicial set
        SimplicialSet::Data d;
        d.name = "boundary0";
        d.cutoff = 0;
        d.polyhedral = true;
        d.names.resize(1);
        d.faces.resize(1);
        return make_simplicial_set(std::move(d));
    }
    return detail::simplex_like("boundary" + std::to_string(n), n, false);
}

// the m-gon circle: m vertices, m edges v_i -> v_{i+1 mod m}
inline SSetPtr polygon(int m) {
    if (m < 3) throw std::invalid_argument("polygon: m >= 3 required");
    SimplicialSet::Data d;
    d.name = "polygon" + std::to_string(m);
    d.cutoff = 1;
    d.polyhedral = true;
    d.names.resize(2);
    d.faces.resize(2);
    for (int i = 0; i < m; ++i) d.names[0].push_back("v" + std::to_string(i));
    for (int i = 0; i < m; ++i) {
        d.names[1].push_back("e" + std::to_string(i));
        std::vector<Simplex> fs(2);
        fs[0] = Simplex{{}, SimplexRef{0, (i + 1) % m}}; // d_0 = endpoint
        fs[1] = Simplex{{}, SimplexRef{0, i}};           // d_1 = start
        d.faces[1].push_back(std::move(fs));
    }
    return make_simplicial_set(std::move(d));
}

namespace detail {

inline void enumerate_tuples(int length, int order, std::vector<int>& cur,
                             const std::function<bool(const std::vector<int>&, int)>& keep,
                             std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == length) {
        out.push_back(cur);
        return;
    }
    for (int g = 0; g < order; ++g) {
        if (!keep(cur, g)) continue;
        cur.push_back(g);
        enumerate_tuples(length, order, cur, keep, out);
        cur.pop_back();
    }
}

} // namespace detail

// classifying space BG, truncated at degree `cutoff`
inline SSetPtr nerve(const FiniteGroup& g, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("nerve: cutoff >= 1 required");
    SimplicialSet::Data d;
    d.name = "nerve:" + g.name;
    d.cutoff = cutoff;
    d.truncated = true;
    d.fibrant = true;
    d.kind = SimplicialSet::Kind::nerve;
    d.group = g;
    d.names.resize(cutoff + 1);
    d.faces.resize(cutoff + 1);
    std::vector<std::vector<std::vector<int>>> tuples(cutoff + 1);
    // nondegenerate n-simplices: tuples (g_1..g_n) with no identity entries
    for (int n = 0; n <= cutoff; ++n) {
        std::vector<int> cur;
        detail::enumerate_tuples(
            n, g.order, cur, [](const std::vector<int>&, int x) { return x != 0; }, tuples[n]);
        for (const auto& t : tuples[n]) {
            std::string nm = "[";
            for (std::size_t i = 0; i < t.size(); ++i) nm += (i ? "|" : "") + std::to_string(t[i]);
            nm += "]";
            d.names[n].push_back(nm);
        }
    }
    std::map<std::vector<int>, int> index;
    for (int n = 0; n <= cutoff; ++n)
        for (std::size_t i = 0; i < tuples[n].size(); ++i) index[tuples[n][i]] = static_cast<int>(i);
    // normal form of a possibly-degenerate tuple
    std::function<Simplex(std::vector<int>)> normal = [&](std::vector<int> t) -> Simplex {
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[j] == 0) {
                std::vector<int> s = t;
                s.erase(s.begin() + static_cast<long>(j));
                Simplex inner = normal(std::move(s));
                return Simplex{word_prepend(inner.word, static_cast<int>(j)), inner.base};
            }
        return Simplex{{}, SimplexRef{static_cast<int>(t.size()), index.at(t)}};
    };
    for (int n = 1; n <= cutoff; ++n)
        for (const auto& t : tuples[n]) {
            std::vector<Simplex> fs;
            for (int i = 0; i <= n; ++i) {
                std::vector<int> f;
                if (i == 0) {
                    f.assign(t.begin() + 1, t.end());
                } else if (i == n) {
                    f.assign(t.begin(), t.end() - 1);
                } else {
                    f.assign(t.begin(), t.end());
                    f[i - 1] = g.times(t[i - 1], t[i]);
                    f.erase(f.begin() + i);
                }
                fs.push_back(normal(std::move(f)));
            }
            d.faces[n].push_back(std::move(fs));
        }
    return make_simplicial_set(std::move(d), std::move(tuples));
}

// contractible cover EG, truncated at degree `cutoff`
inline SSetPtr e_nerve(const FiniteGroup& g, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("e_nerve: cutoff >= 1 required");
    SimplicialSet::Data d;
    d.name = "enerve:" + g.name;
    d.cutoff = cutoff;
    d.truncated = true;
    d.fibrant = true;
    d.kind = SimplicialSet::Kind::e_nerve;
    d.group = g;
    d.names.resize(cutoff + 1);
    d.faces.resize(cutoff + 1);
    std::vector<std::vector<std::vector<int>>> tuples(cutoff + 1);
    // nondegenerate n-simplices: (h_0..h_n) with no adjacent repeats
    for (int n = 0; n <= cutoff; ++n) {
        std::vector<int> cur;
        detail::enumerate_tuples(
            n + 1, g.order, cur,
            [](const std::vector<int>& c, int x) { return c.empty() || c.back() != x; },
            tuples[n]);
        for (const auto& t : tuples[n]) {
            std::string nm = "(";
            for (std::size_t i = 0; i < t.size(); ++i) nm += (i ? "," : "") + std::to_string(t[i]);
            nm += ")";
            d.names[n].push_back(nm);
        }
    }
    std::map<std::vector<int>, int> index;
    for (int n = 0; n <= cutoff; ++n)
        for (std::size_t i = 0; i < tuples[n].size(); ++i) index[tuples[n][i]] = static_cast<int>(i);
    std::function<Simplex(std::vector<int>)> normal = [&](std::vector<int> t) -> Simplex {
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            if (t[i] == t[i + 1]) {
                std::vector<int> s = t;
                s.erase(s.begin() + static_cast<long>(i) + 1);
                Simplex inner = normal(std::move(s));
                return Simplex{word_prepend(inner.word, static_cast<int>(i)), inner.base};
            }
        return Simplex{{}, SimplexRef{static_cast<int>(t.size()) - 1, index.at(t)}};
    };
    for (int n = 1; n <= cutoff; ++n)
        for (const auto& t : tuples[n]) {
            std::vector<Simplex> fs;
            for (int i = 0; i <= n; ++i) {
                std::vector<int> f = t;
                f.erase(f.begin() + i);
                fs.push_back(normal(std::move(f)));
            }
            d.faces[n].push_back(std::move(fs));
        }
    return make_simplicial_set(std::move(d), std::move(tuples));
}

// degreewise-surjective quotient EG -> BG
inline SimplicialMap e_nerve_quotient(const SSetPtr& eg, const SSetPtr& bg) {
    if (eg->kind() != SimplicialSet::Kind::e_nerve || bg->kind() != SimplicialSet::Kind::nerve)
        throw std::invalid_argument("e_nerve_quotient: expects EG and BG");
    const FiniteGroup& g = eg->group();
    std::vector<std::vector<Simplex>> a(eg->dim() + 1);
    for (int n = 0; n <= eg->dim(); ++n)
        for (std::size_t i = 0; i < eg->nondeg_count(n); ++i) {
            const auto& t = eg->tuple_of(SimplexRef{n, static_cast<int>(i)});
            std::vector<int> q;
            for (std::size_t k = 1; k < t.size(); ++k) q.push_back(g.times(g.inverse(t[k - 1]), t[k]));
            a[n].push_back(bg->from_tuple(q));
        }
    return SimplicialMap(eg, bg, std::move(a));
}

inline SSetPtr disjoint_union(const SSetPtr& u, const SSetPtr& v) {
    SimplicialSet::Data d;
    d.name = u->name() + "+" + v->name();
    bool trunc = u->truncated() || v->truncated();
    int cutoff;
    if (trunc) {
        cutoff = std::numeric_limits<int>::max();
        if (u->truncated()) cutoff = std::min(cutoff, u->cutoff());
        if (v->truncated()) cutoff = std::min(cutoff, v->cutoff());
    } else {
        cutoff = std::max({u->dim(), v->dim(), 0});
    }
    d.cutoff = cutoff;
    d.truncated = trunc;
    d.fibrant = u->fibrant() && v->fibrant();
    d.names.resize(d.cutoff + 1);
    d.faces.resize(d.cutoff + 1);
    std::vector<int> offset(d.cutoff + 1, 0);
    for (int n = 0; n <= d.cutoff; ++n) {
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i)
            d.names[n].push_back("L:" + u->simplex_name(SimplexRef{n, static_cast<int>(i)}));
        offset[n] = static_cast<int>(d.names[n].size());
        for (std::size_t i = 0; i < v->nondeg_count(n); ++i)
            d.names[n].push_back("R:" + v->simplex_name(SimplexRef{n, static_cast<int>(i)}));
    }
    for (int n = 1; n <= d.cutoff; ++n) {
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i) {
            std::vector<Simplex> fs;
            for (int k = 0; k <= n; ++k) {
                Simplex f = u->stored_face(SimplexRef{n, static_cast<int>(i)}, k);
                fs.push_back(Simplex{f.word, SimplexRef{f.base.dim, f.base.idx}});
            }
            d.faces[n].push_back(std::move(fs));
        }
        for (std::size_t i = 0; i < v->nondeg_count(n); ++i) {
            std::vector<Simplex> fs;
            for (int k = 0; k <= n; ++k) {
                Simplex f = v->stored_face(SimplexRef{n, static_cast<int>(i)}, k);
                fs.push_back(Simplex{f.word, SimplexRef{f.base.dim, f.base.idx + offset[f.base.dim]}});
            }
            d.faces[n].push_back(std::move(fs));
        }
    }
    return make_simplicial_set(std::move(d));
}

// component inclusions for a disjoint union built by disjoint_union()
inline SimplicialMap union_inclusion(const SSetPtr& part, const SSetPtr& whole, bool left,
                                     const SSetPtr& other) {
    std::vector<std::vector<Simplex>> a(part->dim() + 1);
    for (int n = 0; n <= part->dim(); ++n)
        for (std::size_t i = 0; i < part->nondeg_count(n); ++i) {
            int off = left ? 0 : static_cast<int>(other->nondeg_count(n));
            a[n].push_back(Simplex{{}, SimplexRef{n, static_cast<int>(i) + off}});
        }
    return SimplicialMap(part, whole, std::move(a));
}

// ---------------------------------------------------------------------------
// binary product with shuffle-pair bookkeeping

struct ProductSet {
    SSetPtr set;
    SSetPtr left, right;

    struct Pair {
        Simplex a; // component in `left`
        Simplex b; // component in `right`
        friend bool operator<(const Pair& x, const Pair& y) {
            if (!(x.a == y.a)) return x.a < y.a;
            return x.b < y.b;
        }
    };

    std::vector<std::vector<Pair>> pairs; // per degree, aligned with nondeg indices
    std::vector<std::map<Pair, int>> index;

    // product simplex in normal form from arbitrary components of equal degree
    Simplex normalize_pair(const Simplex& a, const Simplex& b) const {
        std::vector<int> common;
        std::set_intersection(a.word.rbegin(), a.word.rend(), b.word.rbegin(), b.word.rend(),
                              std::back_inserter(common)); // ascending
        if (common.empty()) {
            int n = a.degree();
            auto it = index[n].find(Pair{a, b});
            if (it == index[n].end()) throw std::logic_error("product: unknown pair");
            return Simplex{{}, SimplexRef{n, it->second}};
        }
        int i = common.back(); // largest shared degeneracy index
        Simplex inner = normalize_pair(left->face(a, i), right->face(b, i));
        return Simplex{word_prepend(inner.word, i), inner.base};
    }
};

inline ProductSet product(const SSetPtr& u, const SSetPtr& v, int requested_cutoff = -1) {
    const long big = 1L << 20;
    long du = u->truncated() ? u->cutoff() : std::max(u->dim(), 0);
    long dv = v->truncated() ? v->cutoff() : std::max(v->dim(), 0);
    long limit = big;
    if (u->truncated()) limit = std::min(limit, du);
    if (v->truncated()) limit = std::min(limit, dv);
    long natural = std::min(limit, du + dv);
    long cutoff = requested_cutoff >= 0 ? requested_cutoff : natural;
    if (cutoff > natural)
        throw std::invalid_argument("product: cutoff overflow, needed degree " +
                                    std::to_string(cutoff) + " but only " +
                                    std::to_string(natural) + " is representable");

    ProductSet ps;
    ps.left = u;
    ps.right = v;
    SimplicialSet::Data d;
    d.name = u->name() + "x" + v->name();
    d.cutoff = static_cast<int>(cutoff);
    d.truncated = u->truncated() || v->truncated();
    d.fibrant = u->fibrant() && v->fibrant();
    d.names.resize(cutoff + 1);
    d.faces.resize(cutoff + 1);
    ps.pairs.resize(cutoff + 1);
    ps.index.resize(cutoff + 1);

    auto word_name = [](const Word& w) {
        std::string s;
        for (int i : w) s += "s" + std::to_string(i);
        return s;
    };

    for (int n = 0; n <= cutoff; ++n) {
        // enumerate nondegenerate pairs (s_A x, s_B y), A and B disjoint
        for (int p = std::min<int>(n, u->cutoff()); p >= 0; --p) {
            auto words_a = SimplicialSet::descending_words(n - p, n - 1);
            for (std::size_t xi = 0; xi < u->nondeg_count(p); ++xi)
                for (const auto& wa : words_a) {
                    for (int q = std::min<int>(n, v->cutoff()); q >= 0; --q) {
                        auto words_b = SimplicialSet::descending_words(n - q, n - 1);
                        for (std::size_t yi = 0; yi < v->nondeg_count(q); ++yi)
                            for (const auto& wb : words_b) {
                                // disjointness of word index sets
                                bool disjoint = true;
                                for (int ia : wa)
                                    if (std::find(wb.begin(), wb.end(), ia) != wb.end()) {
                                        disjoint = false;
                                        break;
                                    }
                                if (!disjoint) continue;
                                ProductSet::Pair pr{
                                    Simplex{wa, SimplexRef{p, static_cast<int>(xi)}},
                                    Simplex{wb, SimplexRef{q, static_cast<int>(yi)}}};
                                ps.index[n][pr] = static_cast<int>(ps.pairs[n].size());
                                ps.pairs[n].push_back(pr);
                                std::string nm = "(" + u->simplex_name(pr.a.base) +
                                                 (wa.empty() ? "" : "|" + word_name(wa)) + ";" +
                                                 v->simplex_name(pr.b.base) +
                                                 (wb.empty() ? "" : "|" + word_name(wb)) + ")";
                                d.names[n].push_back(std::move(nm));
                            }
                    }
                }
        }
        if (n >= 1) {
            for (const auto& pr : ps.pairs[n]) {
                std::vector<Simplex> fs;
                for (int i = 0; i <= n; ++i) {
                    Simplex fa = u->face(pr.a, i);
                    Simplex fb = v->face(pr.b, i);
                    fs.push_back(ps.normalize_pair(fa, fb));
                }
                d.faces[n].push_back(std::move(fs));
            }
        }
    }
    ps.set = make_simplicial_set(std::move(d));
    return ps;
}

inline SimplicialMap product_projection(const ProductSet& ps, bool left_side) {
    const SSetPtr& tgt = left_side ? ps.left : ps.right;
    std::vector<std::vector<Simplex>> a(ps.set->dim() + 1);
    for (int n = 0; n <= ps.set->dim(); ++n)
        for (const auto& pr : ps.pairs[n]) a[n].push_back(left_side ? pr.a : pr.b);
    return SimplicialMap(ps.set, tgt, std::move(a));
}

inline SimplicialMap product_pairing(const ProductSet& ps, const SimplicialMap& f,
                                     const SimplicialMap& g) {
    const SSetPtr& t = f.source();
    std::vector<std::vector<Simplex>> a(t->dim() + 1);
    for (int n = 0; n <= t->dim(); ++n)
        for (std::size_t i = 0; i < t->nondeg_count(n); ++i) {
            SimplexRef r{n, static_cast<int>(i)};
            a[n].push_back(ps.normalize_pair(f.apply(r), g.apply(r)));
        }
    return SimplicialMap(t, ps.set, std::move(a));
}

// ---------------------------------------------------------------------------
// enumeration of simplicial maps and homotopy classes

inline std::vector<SimplicialMap> enumerate_maps(const SSetPtr& u, const SSetPtr& v,
                                                 bool reverse_candidates = false) {
    if (!u->compact()) throw std::invalid_argument("enumerate_maps: source must be compact");
    const int du = u->dim();
    if (v->truncated() && v->cutoff() < du)
        throw std::invalid_argument("enumerate_maps: target truncated below the source dimension");

    std::vector<std::vector<Simplex>> candidates(du + 1);
    for (int n = 0; n <= du; ++n) {
        candidates[n] = v->simplices(n);
        if (reverse_candidates) std::reverse(candidates[n].begin(), candidates[n].end());
    }

    std::vector<std::vector<Simplex>> assign(du + 1);
    for (int n = 0; n <= du; ++n) assign[n].resize(u->nondeg_count(n));

    std::vector<SimplexRef> order;
    for (int n = 0; n <= du; ++n)
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i)
            order.push_back(SimplexRef{n, static_cast<int>(i)});

    std::vector<SimplicialMap> out;

    // value of the partial map on a possibly-degenerate simplex
    auto partial_apply = [&](const Simplex& s) {
        const Simplex& img = assign[s.base.dim][s.base.idx];
        return Simplex{word_compose(s.word, img.word), img.base};
    };

    std::function<void(std::size_t)> dfs = [&](std::size_t k) {
        if (k == order.size()) {
            out.emplace_back(u, v, assign, false);
            return;
        }
        SimplexRef r = order[k];
        const int n = r.dim;
        Simplex top{{}, r};
        for (const auto& cand : candidates[n]) {
            bool ok = true;
            for (int i = 0; i <= n && ok; ++i) {
                if (n == 0) break;
                Simplex lhs = partial_apply(u->face(top, i));
                Simplex rhs = v->face(cand, i);
                ok = (lhs == rhs);
            }
            if (!ok) continue;
            assign[n][r.idx] = cand;
            dfs(k + 1);
        }
        assign[n][r.idx] = Simplex{};
    };
    dfs(0);
    return out;
}

struct HomotopyClasses {
    std::vector<SimplicialMap> maps;          // canonical enumeration order
    std::vector<int> class_of;                // map index -> class index
    std::vector<std::vector<int>> classes;    // sorted members per class
    std::vector<int> representatives;         // least member per class
};

inline HomotopyClasses homotopy_classes(const SSetPtr& u, const SSetPtr& v) {
    HomotopyClasses hc;
    hc.maps = enumerate_maps(u, v);

    std::map<std::vector<std::vector<Simplex>>, int> map_index;
    for (std::size_t i = 0; i < hc.maps.size(); ++i) map_index[hc.maps[i].assignment()] = static_cast<int>(i);

    std::vector<int> parent(hc.maps.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto join = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    ProductSet cyl = product(u, standard_simplex(1));
    SimplicialMap end0 = product_pairing(cyl, identity_map(u), constant_map(u, cyl.right, SimplexRef{0, 0}));
    SimplicialMap end1 = product_pairing(cyl, identity_map(u), constant_map(u, cyl.right, SimplexRef{0, 1}));

    for (const auto& h : enumerate_maps(cyl.set, v)) {
        SimplicialMap a = h.compose(end0);
        SimplicialMap b = h.compose(end1);
        join(map_index.at(a.assignment()), map_index.at(b.assignment()));
    }

    std::map<int, int> root_to_class;
    for (std::size_t i = 0; i < hc.maps.size(); ++i) {
        int r = find(static_cast<int>(i));
        auto it = root_to_class.find(r);
        int c;
        if (it == root_to_class.end()) {
            c = static_cast<int>(hc.classes.size());
            root_to_class[r] = c;
            hc.classes.emplace_back();
            hc.representatives.push_back(r);
        } else {
            c = it->second;
        }
        hc.class_of.push_back(c);
        hc.classes[c].push_back(static_cast<int>(i));
    }
    return hc;
}

// unique filler in EG: a simplex is determined by its vertex tuple.
// For n = 0 the chosen base point is the identity vertex.
inline SimplicialMap kan_filler(const SSetPtr& w, const SimplicialMap& q, int n) {
    if (w->kind() != SimplicialSet::Kind::e_nerve)
        throw std::invalid_argument("kan_filler: target is not an e_nerve");
    SSetPtr simplex = standard_simplex(n);
    if (n == 0) {
        std::vector<std::vector<Simplex>> a(1);
        a[0].push_back(w->from_tuple({0}));
        return SimplicialMap(simplex, w, std::move(a), false);
    }
    // vertex i of boundary(n) is the subset {i}; read its image vertex
    std::vector<int> h(n + 1);
    const SSetPtr& bd = q.source();
    for (int i = 0; i <= n; ++i) {
        auto r = bd->ref_by_name(std::to_string(i));
        if (!r) throw std::invalid_argument("kan_filler: malformed boundary source");
        Simplex img = q.apply(*r);
        h[i] = w->tuple_of(img.base)[0];
    }
    std::vector<std::vector<Simplex>> a(n + 1);
    auto subsets = detail::subsets_by_size(n);
    for (int k = 0; k <= n; ++k)
        for (const auto& s : subsets[k]) {
            std::vector<int> t;
            for (int vtx : s) t.push_back(h[vtx]);
            a[k].push_back(w->from_tuple(t));
        }
    SimplicialMap filler(simplex, w, std::move(a)); // construction re-checks simpliciality
    // the filler must restrict to q on the boundary
    for (int k = 0; k < n; ++k)
        for (std::size_t i = 0; i < bd->nondeg_count(k); ++i) {
            auto r = simplex->ref_by_name(bd->simplex_name(SimplexRef{k, static_cast<int>(i)}));
            if (!(filler.apply(*r) == q.apply(SimplexRef{k, static_cast<int>(i)})))
                throw std::logic_error("kan_filler: extension does not restrict to the input");
        }
    return filler;
}

// ---------------------------------------------------------------------------
// simplicial subsets (member flags on nondegenerate simplices, face-closed)

class SimplicialSubset {
public:
    SimplicialSubset(SSetPtr parent, std::vector<std::vector<char>> member)
        : parent_(std::move(parent)), member_(std::move(member)) {
        member_.resize(parent_->cutoff() + 1);
        for (int n = 0; n <= parent_->cutoff(); ++n)
            member_[n].resize(parent_->nondeg_count(n), 0);
        for (int n = 1; n <= parent_->cutoff(); ++n)
            for (std::size_t i = 0; i < member_[n].size(); ++i) {
                if (!member_[n][i]) continue;
                for (int k = 0; k <= n; ++k) {
                    Simplex f = parent_->stored_face(SimplexRef{n, static_cast<int>(i)}, k);
                    if (!member_[f.base.dim][f.base.idx])
                        throw std::invalid_argument("SimplicialSubset: not closed under faces");
                }
            }
    }

    static SimplicialSubset empty(const SSetPtr& parent) {
        return SimplicialSubset(parent, {});
    }

    static SimplicialSubset full(const SSetPtr& parent) {
        std::vector<std::vector<char>> m(parent->cutoff() + 1);
        for (int n = 0; n <= parent->cutoff(); ++n) m[n].assign(parent->nondeg_count(n), 1);
        return SimplicialSubset(parent, std::move(m));
    }

    // smallest subcomplex containing the given nondegenerate simplex
    static SimplicialSubset closure_of(const SSetPtr& parent, SimplexRef top) {
        std::vector<std::vector<char>> m(parent->cutoff() + 1);
        for (int n = 0; n <= parent->cutoff(); ++n) m[n].assign(parent->nondeg_count(n), 0);
        std::vector<SimplexRef> stack{top};
        while (!stack.empty()) {
            SimplexRef r = stack.back();
            stack.pop_back();
            if (m[r.dim][r.idx]) continue;
            m[r.dim][r.idx] = 1;
            for (int i = 0; i <= r.dim && r.dim > 0; ++i)
                stack.push_back(parent->stored_face(r, i).base);
        }
        return SimplicialSubset(parent, std::move(m));
    }

    const SSetPtr& parent() const { return parent_; }
    bool contains(SimplexRef r) const { return member_[r.dim][r.idx] != 0; }

    std::size_t simplex_count() const {
        std::size_t c = 0;
        for (const auto& lvl : member_) c += static_cast<std::size_t>(std::count(lvl.begin(), lvl.end(), 1));
        return c;
    }

    int max_dim() const {
        for (int n = static_cast<int>(member_.size()) - 1; n >= 0; --n)
            for (char f : member_[n])
                if (f) return n;
        return -1;
    }

    SimplicialSubset intersect(const SimplicialSubset& o) const {
        std::vector<std::vector<char>> m(member_.size());
        for (std::size_t n = 0; n < member_.size(); ++n) {
            m[n].resize(member_[n].size());
            for (std::size_t i = 0; i < member_[n].size(); ++i) m[n][i] = member_[n][i] && o.member_[n][i];
        }
        return SimplicialSubset(parent_, std::move(m));
    }

    bool same_members(const SimplicialSubset& o) const { return member_ == o.member_; }

    const std::vector<std::vector<char>>& members() const { return member_; }

private:
    SSetPtr parent_;
    std::vector<std::vector<char>> member_;
};

// standalone simplicial set extracted from a subset, with index translation
struct ExtractedSubset {
    SSetPtr set;
    std::vector<std::vector<int>> to_parent;   // [n][sub idx] -> parent idx
    std::vector<std::map<int, int>> from_parent;
};

inline ExtractedSubset extract(const SimplicialSubset& sub, const std::string& name) {
    const SSetPtr& p = sub.parent();
    ExtractedSubset ex;
    int top = std::max(sub.max_dim(), 0);
    ex.to_parent.resize(top + 1);
    ex.from_parent.resize(top + 1);
    SimplicialSet::Data d;
    d.name = name;
    d.cutoff = top;
    d.names.resize(top + 1);
    d.faces.resize(top + 1);
    for (int n = 0; n <= top; ++n)
        for (std::size_t i = 0; i < p->nondeg_count(n); ++i)
            if (sub.contains(SimplexRef{n, static_cast<int>(i)})) {
                ex.from_parent[n][static_cast<int>(i)] = static_cast<int>(ex.to_parent[n].size());
                ex.to_parent[n].push_back(static_cast<int>(i));
                d.names[n].push_back(p->simplex_name(SimplexRef{n, static_cast<int>(i)}));
            }
    for (int n = 1; n <= top; ++n)
        for (int pi : ex.to_parent[n]) {
            std::vector<Simplex> fs;
            for (int k = 0; k <= n; ++k) {
                Simplex f = p->stored_face(SimplexRef{n, pi}, k);
                fs.push_back(Simplex{f.word,
                                     SimplexRef{f.base.dim, ex.from_parent[f.base.dim].at(f.base.idx)}});
            }
            d.faces[n].push_back(std::move(fs));
        }
    ex.set = make_simplicial_set(std::move(d));
    return ex;
}

inline SimplicialMap inclusion_map(const ExtractedSubset& ex, const SSetPtr& parent) {
    std::vector<std::vector<Simplex>> a(ex.set->dim() + 1);
    for (int n = 0; n <= ex.set->dim(); ++n)
        for (std::size_t i = 0; i < ex.set->nondeg_count(n); ++i)
            a[n].push_back(Simplex{{}, SimplexRef{n, ex.to_parent[n][i]}});
    return SimplicialMap(ex.set, parent, std::move(a), false);
}

} // namespace straightlab::sset
