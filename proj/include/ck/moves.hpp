#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ck/graph.hpp"
#include "ck/invariants.hpp"

namespace ck {

namespace detail {

// Both moves create one vertex per edge unit, so the edge count must stay
// enumerable.
inline void require_enumerable_edges(const CKMatrix& g, const char* what) {
    Int edges = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) edges += g.entry(i, j);
    if (edges > 100000)
        throw input_error(std::string(what) + ": matrix has " + edges.str() +
                          " edges; refusing to enumerate more than 100000");
}

} // namespace detail

/// Out-split move: every vertex with a parallel edge (some entry >= 2) has its
/// outgoing edges split into singleton classes; vertices whose rows are already
/// {0,1}-valued keep the trivial partition, so a {0,1}-matrix is returned
/// unchanged. New entry rule: a class with an edge into w feeds every copy
/// of w. Preserves the condensation poset and all K-data of the matrix and of
/// every corresponding ideal.
inline CKMatrix out_split(const CKMatrix& g) {
    const std::size_t n = g.size();
    ValidationReport vr = validate(g);
    if (!vr.ok()) throw input_error("out_split: invalid matrix: " + vr.to_string());
    if (g.is_zero_one()) return g;
    detail::require_enumerable_edges(g, "out_split");

    // copies[v] lists the out-edge classes of v; an unsplit vertex has one
    // class holding its full row.
    struct Copy {
        std::size_t vertex;
        IntVec row; // out-edge counts of this class, indexed by original vertex
    };
    std::vector<Copy> copies;
    std::vector<std::size_t> first_copy(n), copy_count(n);
    for (std::size_t v = 0; v < n; ++v) {
        first_copy[v] = copies.size();
        bool needs_split = false;
        for (std::size_t w = 0; w < n; ++w)
            if (g.entry(v, w) > 1) needs_split = true;
        if (!needs_split) {
            copies.push_back({v, g.matrix().row_vec(v)});
        } else {
            for (std::size_t w = 0; w < n; ++w)
                for (Int e = 0; e < g.entry(v, w); ++e) {
                    IntVec row(n);
                    row[w] = 1;
                    copies.push_back({v, std::move(row)});
                }
        }
        copy_count[v] = copies.size() - first_copy[v];
    }

    IntMatrix out(copies.size(), copies.size());
    std::vector<std::string> labels;
    labels.reserve(copies.size());
    for (std::size_t a = 0; a < copies.size(); ++a) {
        for (std::size_t w = 0; w < n; ++w) {
            if (copies[a].row[w] == 0) continue;
            for (std::size_t b = 0; b < copy_count[w]; ++b)
                out(a, first_copy[w] + b) = copies[a].row[w];
        }
        std::size_t v = copies[a].vertex;
        labels.push_back(copy_count[v] == 1 ? g.labels()[v]
                                            : g.labels()[v] + "." +
                                                  std::to_string(a - first_copy[v]));
    }
    return CKMatrix(std::move(out), std::move(labels));
}

/// Edge matrix: vertices are the edges of the input graph, entry (e, f) = 1
/// iff e ends where f starts. Output size equals the edge count.
inline CKMatrix edge_matrix(const CKMatrix& g) {
    const std::size_t n = g.size();
    ValidationReport vr = validate(g);
    if (!vr.ok()) throw input_error("edge_matrix: invalid matrix: " + vr.to_string());
    detail::require_enumerable_edges(g, "edge_matrix");

    struct Edge {
        std::size_t tail, head;
    };
    std::vector<Edge> edges;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (Int e = 0; e < g.entry(i, j); ++e) {
                std::string name = "e" + std::to_string(i) + "_" + std::to_string(j);
                if (g.entry(i, j) > 1) name += "." + e.str();
                edges.push_back({i, j});
                labels.push_back(std::move(name));
            }

    IntMatrix out(edges.size(), edges.size());
    for (std::size_t a = 0; a < edges.size(); ++a)
        for (std::size_t b = 0; b < edges.size(); ++b)
            if (edges[a].head == edges[b].tail) out(a, b) = 1;
    return CKMatrix(std::move(out), std::move(labels));
}

/// Comparison of everything a normalization move must preserve: K0, K1, Ext
/// of the whole matrix, the condensation poset up to isomorphism, and the
/// K-data of every corresponding ideal under some poset isomorphism.
struct MoveDiff {
    bool k0_ok = false, k1_ok = false, ext_ok = false;
    bool condition_k_ok = false;
    bool poset_ok = false;  // an isomorphism matching all per-ideal K-data exists
    std::optional<std::vector<std::size_t>> iso;

    bool all_ok() const { return k0_ok && k1_ok && ext_ok && condition_k_ok && poset_ok; }
};

inline MoveDiff compare_invariants(const CKMatrix& before, const CKMatrix& after) {
    MoveDiff d;
    KData ka = k_data(before), kb = k_data(after);
    d.k0_ok = ka.k0.group() == kb.k0.group();
    d.k1_ok = ka.k1_rank() == kb.k1_rank();
    d.ext_ok = ka.ext.group() == kb.ext.group();
    d.condition_k_ok = condition_K(before).holds == condition_K(after).holds;

    CondensationPoset pa = condensation_poset(before);
    CondensationPoset pb = condensation_poset(after);
    if (pa.point_count() != pb.point_count()) return d;

    std::vector<OpenSet> opens_a = pa.open_sets();
    auto ideal_kdata = [](const CKMatrix& g, const CondensationPoset& p, const OpenSet& u) {
        return k_data(submatrix(g, ideal_vertices(g, p, u)));
    };
    auto accept = [&](const std::vector<std::size_t>& map) {
        for (const OpenSet& u : opens_a) {
            OpenSet v;
            for (std::size_t p : u) v.push_back(map[p]);
            std::sort(v.begin(), v.end());
            KData x = ideal_kdata(before, pa, u);
            KData y = ideal_kdata(after, pb, v);
            if (x.k0.group() != y.k0.group() || x.k1_rank() != y.k1_rank() ||
                x.ext.group() != y.ext.group())
                return false;
        }
        return true;
    };
    d.iso = find_poset_isomorphism(pa, pb, nullptr, accept);
    d.poset_ok = d.iso.has_value();
    return d;
}

} // namespace ck
