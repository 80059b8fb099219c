// JSON serialization of the public value types. Integers travel as decimal
// strings so outputs are bit-exact; keys keep insertion order so fixed inputs
// produce byte-identical documents.
#pragma once

#include "straightlab/ab.hpp"
#include "straightlab/dk.hpp"
#include "straightlab/sset.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace straightlab::io {

using json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw SchemaError("malformed integer literal: " + j.dump());
        }
    }
    throw SchemaError("expected integer or decimal string, got " + j.dump());
}

inline json int_to_json(const Int& x) { return x.str(); }

inline json vec_to_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(int_to_json(x));
    return a;
}

inline Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("expected array of integers");
    Vec v;
    for (const auto& e : j) v.push_back(int_from_json(e));
    return v;
}

inline json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const json& j, std::size_t expect_rows = SIZE_MAX) {
    if (!j.is_array()) throw SchemaError("matrix must be an array of rows");
    std::size_t rows = j.size();
    if (expect_rows != SIZE_MAX && rows != expect_rows)
        throw SchemaError("matrix row count mismatch");
    std::size_t cols = rows ? j[0].size() : 0;
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw SchemaError("matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
    }
    return m;
}

inline json group_to_json(const ab::FGAbGroup& g) {
    json j;
    j["ngens"] = g.ngens();
    j["relations"] = matrix_to_json(g.relations());
    return j;
}

inline ab::FGAbGroup group_from_json(const json& j) {
    if (!j.contains("ngens")) throw SchemaError("group needs an ngens field");
    std::size_t n = j["ngens"].get<std::size_t>();
    IntMatrix rel(n, 0);
    if (j.contains("relations") && !j["relations"].empty())
        rel = matrix_from_json(j["relations"], n);
    return ab::FGAbGroup(n, rel);
}

// group structure report: invariant factors plus free rank
inline json group_shape_json(const ab::FGAbGroup& g) {
    json j;
    j["free_rank"] = g.free_rank();
    json t = json::array();
    for (const auto& d : g.invariant_factors()) t.push_back(int_to_json(d));
    j["torsion"] = std::move(t);
    return j;
}

inline json word_to_json(const sset::Word& w) {
    json a = json::array();
    for (int i : w) a.push_back(i);
    return a;
}

inline sset::Word word_from_json(const json& j) {
    sset::Word w;
    for (const auto& e : j) w.push_back(e.get<int>());
    if (!sset::word_is_normal(w)) throw SchemaError("degeneracy word is not in normal form");
    return w;
}

inline json sset_to_json(const sset::SimplicialSet& s) {
    json j;
    j["name"] = s.name();
    j["cutoff"] = s.cutoff();
    json flags;
    flags["truncated"] = s.truncated();
    flags["fibrant"] = s.fibrant();
    flags["polyhedral"] = s.polyhedral_flag();
    j["flags"] = std::move(flags);
    json simplices;
    for (int n = 0; n <= s.cutoff(); ++n) {
        json lvl = json::array();
        for (std::size_t i = 0; i < s.nondeg_count(n); ++i)
            lvl.push_back(s.simplex_name({n, static_cast<int>(i)}));
        simplices[std::to_string(n)] = std::move(lvl);
    }
    j["simplices"] = std::move(simplices);
    json faces;
    for (int n = 1; n <= s.cutoff(); ++n)
        for (std::size_t i = 0; i < s.nondeg_count(n); ++i) {
            sset::SimplexRef r{n, static_cast<int>(i)};
            json fl = json::array();
            for (int k = 0; k <= n; ++k) {
                const sset::Simplex& f = s.stored_face(r, k);
                fl.push_back(json::array({word_to_json(f.word), s.simplex_name(f.base)}));
            }
            faces[s.simplex_name(r)] = std::move(fl);
        }
    j["faces"] = std::move(faces);
    return j;
}

inline sset::SSetPtr sset_from_json(const json& j) {
    sset::SimplicialSet::Data d;
    d.name = j.value("name", std::string("input"));
    if (!j.contains("cutoff") || !j.contains("simplices"))
        throw SchemaError("simplicial set needs cutoff and simplices fields");
    d.cutoff = j["cutoff"].get<int>();
    if (d.cutoff < 0) throw SchemaError("cutoff must be nonnegative");
    if (j.contains("flags")) {
        d.truncated = j["flags"].value("truncated", false);
        d.fibrant = j["flags"].value("fibrant", false);
        d.polyhedral = j["flags"].value("polyhedral", false);
    }
    d.names.resize(d.cutoff + 1);
    d.faces.resize(d.cutoff + 1);
    std::map<std::string, sset::SimplexRef> index;
    for (int n = 0; n <= d.cutoff; ++n) {
        auto key = std::to_string(n);
        if (!j["simplices"].contains(key)) continue;
        for (const auto& nm : j["simplices"][key]) {
            std::string name = nm.get<std::string>();
            if (index.count(name)) throw SchemaError("duplicate simplex id " + name);
            index[name] = {n, static_cast<int>(d.names[n].size())};
            d.names[n].push_back(std::move(name));
        }
    }
    for (int n = 1; n <= d.cutoff; ++n) {
        d.faces[n].resize(d.names[n].size());
        for (std::size_t i = 0; i < d.names[n].size(); ++i) {
            const std::string& nm = d.names[n][i];
            if (!j.contains("faces") || !j["faces"].contains(nm))
                throw SchemaError("missing face data for " + nm);
            const json& fl = j["faces"][nm];
            if (static_cast<int>(fl.size()) != n + 1)
                throw SchemaError("face list of " + nm + " must have " + std::to_string(n + 1) +
                                  " entries");
            for (const auto& fe : fl) {
                if (!fe.is_array() || fe.size() != 2) throw SchemaError("face entries are [word, id]");
                sset::Word w = word_from_json(fe[0]);
                std::string target = fe[1].get<std::string>();
                auto it = index.find(target);
                if (it == index.end()) throw SchemaError("unknown face target " + target);
                d.faces[n][i].push_back(sset::Simplex{std::move(w), it->second});
            }
        }
    }
    try {
        return sset::make_simplicial_set(std::move(d));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("invalid simplicial set: ") + e.what());
    }
}

inline json simplicial_map_to_json(const sset::SimplicialMap& m) {
    json assignment;
    const auto& src = *m.source();
    const auto& dst = *m.target();
    for (int n = 0; n <= src.dim(); ++n)
        for (std::size_t i = 0; i < src.nondeg_count(n); ++i) {
            sset::SimplexRef r{n, static_cast<int>(i)};
            sset::Simplex img = m.apply(r);
            assignment[src.simplex_name(r)] =
                json::array({word_to_json(img.word), dst.simplex_name(img.base)});
        }
    json j;
    j["assignment"] = std::move(assignment);
    return j;
}

inline sset::SimplicialMap simplicial_map_from_json(const json& j, const sset::SSetPtr& u,
                                                    const sset::SSetPtr& v) {
    if (!j.contains("assignment")) throw SchemaError("simplicial map needs an assignment field");
    std::vector<std::vector<sset::Simplex>> a(u->dim() + 1);
    for (int n = 0; n <= u->dim(); ++n)
        for (std::size_t i = 0; i < u->nondeg_count(n); ++i) {
            const std::string& nm = u->simplex_name({n, static_cast<int>(i)});
            if (!j["assignment"].contains(nm)) throw SchemaError("assignment misses " + nm);
            const json& fe = j["assignment"][nm];
            sset::Word w = word_from_json(fe[0]);
            auto ref = v->ref_by_name(fe[1].get<std::string>());
            if (!ref) throw SchemaError("assignment targets unknown simplex " + fe[1].dump());
            a[n].push_back(sset::Simplex{std::move(w), *ref});
        }
    try {
        return sset::SimplicialMap(u, v, std::move(a));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("invalid simplicial map: ") + e.what());
    }
}

inline json complex_to_json(const dk::ChainComplex& c) {
    json j;
    json ranks = json::array();
    for (int n = 0; n <= c.top_degree(); ++n) ranks.push_back(c.rank(n));
    j["ranks"] = std::move(ranks);
    json bnd = json::array();
    for (int n = 1; n <= c.top_degree(); ++n) bnd.push_back(matrix_to_json(c.boundary(n)));
    j["boundaries"] = std::move(bnd);
    return j;
}

inline dk::ChainComplex complex_from_json(const json& j) {
    if (!j.contains("ranks")) throw SchemaError("chain complex needs a ranks field");
    std::vector<std::size_t> ranks;
    for (const auto& r : j["ranks"]) ranks.push_back(r.get<std::size_t>());
    std::vector<IntMatrix> bnd(ranks.size());
    if (!ranks.empty()) bnd[0] = IntMatrix(0, ranks[0]);
    const json& bj = j.value("boundaries", json::array());
    if (bj.size() + 1 != ranks.size() && !(ranks.empty() && bj.empty()))
        throw SchemaError("boundaries must list one matrix per degree >= 1");
    for (std::size_t n = 1; n < ranks.size(); ++n) bnd[n] = matrix_from_json(bj[n - 1], ranks[n - 1]);
    try {
        return dk::ChainComplex(std::move(ranks), std::move(bnd));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("invalid chain complex: ") + e.what());
    }
}

} // namespace straightlab::io
