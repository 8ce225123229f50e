#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ck/int_matrix.hpp"

namespace ck {

/// Square non-negative integer matrix read as a directed multigraph:
/// entry (i, j) counts edges i -> j. Zero rows/columns are representable
/// (submatrices produce them); `validate` is the strict input gate.
class CKMatrix {
  public:
    explicit CKMatrix(IntMatrix a, std::vector<std::string> labels = {})
        : a_(std::move(a)), labels_(std::move(labels)) {
        if (!a_.is_square()) throw input_error("CKMatrix: matrix not square");
        for (std::size_t i = 0; i < a_.rows(); ++i)
            for (std::size_t j = 0; j < a_.cols(); ++j)
                if (a_(i, j) < 0) throw input_error("CKMatrix: negative entry");
        if (labels_.empty()) {
            labels_.reserve(a_.rows());
            for (std::size_t i = 0; i < a_.rows(); ++i) labels_.push_back("v" + std::to_string(i));
        }
        if (labels_.size() != a_.rows()) throw input_error("CKMatrix: label count mismatch");
    }

    std::size_t size() const { return a_.rows(); }
    const IntMatrix& matrix() const { return a_; }
    const Int& entry(std::size_t i, std::size_t j) const { return a_(i, j); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool is_zero_one() const {
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j)
                if (a_(i, j) > 1) return false;
        return true;
    }

  private:
    IntMatrix a_;
    std::vector<std::string> labels_;
};

struct ValidationReport {
    bool square = true;
    std::vector<std::size_t> zero_rows;
    std::vector<std::size_t> zero_cols;
    std::vector<std::pair<std::size_t, std::size_t>> negative_entries;

    bool ok() const {
        return square && zero_rows.empty() && zero_cols.empty() && negative_entries.empty();
    }

    std::string to_string() const {
        if (ok()) return "ok";
        std::ostringstream os;
        if (!square) os << "matrix is not square; ";
        for (auto& p : negative_entries)
            os << "negative entry at (" << p.first << "," << p.second << "); ";
        for (std::size_t i : zero_rows) os << "zero row " << i << " (vertex emits no edge); ";
        for (std::size_t j : zero_cols) os << "zero column " << j << " (vertex receives no edge); ";
        std::string s = os.str();
        if (s.size() >= 2) s.resize(s.size() - 2);
        return s;
    }
};

/// Strict gate: square, non-negative, no zero row, no zero column.
inline ValidationReport validate(const IntMatrix& a) {
    ValidationReport r;
    r.square = a.is_square();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) < 0) r.negative_entries.emplace_back(i, j);
    if (!r.square || !r.negative_entries.empty()) return r;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        bool row = false, col = false;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) != 0) row = true;
            if (a(j, i) != 0) col = true;
        }
        if (!row) r.zero_rows.push_back(i);
        if (!col) r.zero_cols.push_back(i);
    }
    return r;
}

inline ValidationReport validate(const CKMatrix& a) { return validate(a.matrix()); }

/// Validates and wraps, or throws with the full diagnostics.
inline CKMatrix checked_ck_matrix(IntMatrix a, std::vector<std::string> labels = {}) {
    ValidationReport r = validate(a);
    if (!r.ok()) throw input_error("invalid matrix: " + r.to_string());
    return CKMatrix(std::move(a), std::move(labels));
}

struct SccDecomposition {
    std::vector<std::vector<std::size_t>> components; // sorted vertices, ordered by min vertex
    std::vector<std::size_t> component_of;            // vertex -> component index
    std::vector<std::set<std::size_t>> dag_out;       // one-step condensation edges
    std::vector<bool> is_cycle_component;             // contains at least one edge
};

/// Tarjan, iterative.
inline SccDecomposition sccs(const CKMatrix& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g.entry(i, j) > 0) adj[i].push_back(j);

    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> raw_components;
    int next_index = 0;

    struct Frame {
        std::size_t v;
        std::size_t child = 0;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call{{root}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < adj[f.v].size()) {
                std::size_t w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<std::size_t> comp;
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp.push_back(w);
                        if (w == f.v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    raw_components.push_back(std::move(comp));
                }
                std::size_t v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }

    std::sort(raw_components.begin(), raw_components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    SccDecomposition out;
    out.components = std::move(raw_components);
    out.component_of.assign(n, 0);
    for (std::size_t c = 0; c < out.components.size(); ++c)
        for (std::size_t v : out.components[c]) out.component_of[v] = c;
    out.dag_out.assign(out.components.size(), {});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : adj[i]) {
            std::size_t a = out.component_of[i], b = out.component_of[j];
            if (a != b) out.dag_out[a].insert(b);
        }
    out.is_cycle_component.assign(out.components.size(), false);
    for (std::size_t c = 0; c < out.components.size(); ++c) {
        const auto& comp = out.components[c];
        if (comp.size() > 1) {
            out.is_cycle_component[c] = true;
        } else {
            out.is_cycle_component[c] = g.entry(comp[0], comp[0]) > 0;
        }
    }
    return out;
}

struct ConditionKResult {
    bool holds = true;
    std::vector<std::size_t> witness; // a component that is a single simple cycle

    explicit operator bool() const { return holds; }
};

/// Condition (K): no cycle-component is a single simple cycle, i.e. every
/// cycle-component has a vertex with at least two outgoing edges (with
/// multiplicity) staying inside the component.
inline ConditionKResult condition_K(const CKMatrix& g) {
    SccDecomposition s = sccs(g);
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        if (!s.is_cycle_component[c]) continue;
        bool branching = false;
        for (std::size_t v : s.components[c]) {
            Int inside = 0;
            for (std::size_t w : s.components[c]) inside += g.entry(v, w);
            if (inside >= 2) {
                branching = true;
                break;
            }
        }
        if (!branching) return {false, s.components[c]};
    }
    return {};
}

using OpenSet = std::vector<std::size_t>; // sorted point indices

/// Finite T0-space of cycle-components under reachability: p <= q iff q's
/// vertices reach p's. Open sets are the downstream-closed point sets; they
/// are exactly the (gauge-invariant) ideals.
class CondensationPoset {
  public:
    CondensationPoset(const CKMatrix& g, const SccDecomposition& s) {
        const std::size_t nc = s.components.size();
        // transitive closure over all components (including transition ones)
        std::vector<std::vector<bool>> reach(nc, std::vector<bool>(nc, false));
        for (std::size_t c = 0; c < nc; ++c) {
            reach[c][c] = true;
            for (std::size_t d : s.dag_out[c]) reach[c][d] = true;
        }
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t i = 0; i < nc; ++i)
                if (reach[i][k])
                    for (std::size_t j = 0; j < nc; ++j)
                        if (reach[k][j]) reach[i][j] = true;

        std::vector<std::size_t> cycle_comp_index(nc, SIZE_MAX);
        for (std::size_t c = 0; c < nc; ++c) {
            if (!s.is_cycle_component[c]) continue;
            cycle_comp_index[c] = points_.size();
            points_.push_back(s.components[c]);
        }
        const std::size_t np = points_.size();
        names_.reserve(np);
        for (std::size_t p = 0; p < np; ++p) names_.push_back("p" + std::to_string(p));

        leq_.assign(np, std::vector<bool>(np, false));
        for (std::size_t c = 0; c < nc; ++c) {
            if (cycle_comp_index[c] == SIZE_MAX) continue;
            for (std::size_t d = 0; d < nc; ++d)
                if (cycle_comp_index[d] != SIZE_MAX && reach[d][c])
                    leq_[cycle_comp_index[c]][cycle_comp_index[d]] = true;
        }

        vertex_reaches_.assign(g.size(), {});
        for (std::size_t v = 0; v < g.size(); ++v) {
            std::size_t c = s.component_of[v];
            for (std::size_t d = 0; d < nc; ++d)
                if (reach[c][d] && cycle_comp_index[d] != SIZE_MAX)
                    vertex_reaches_[v].push_back(cycle_comp_index[d]);
        }
    }

    std::size_t point_count() const { return points_.size(); }
    const std::vector<std::size_t>& point_vertices(std::size_t p) const { return points_[p]; }
    const std::string& point_name(std::size_t p) const { return names_[p]; }

    /// p <= q : q reaches p (p lies downstream, in every ideal containing q).
    bool leq(std::size_t p, std::size_t q) const { return leq_[p][q]; }

    const std::vector<std::size_t>& vertex_reaches(std::size_t v) const {
        return vertex_reaches_[v];
    }

    bool is_open(const OpenSet& u) const {
        std::vector<bool> in(point_count(), false);
        for (std::size_t p : u) {
            if (p >= point_count()) return false;
            in[p] = true;
        }
        for (std::size_t q : u)
            for (std::size_t p = 0; p < point_count(); ++p)
                if (leq_[p][q] && !in[p]) return false;
        return true;
    }

    /// Smallest open neighbourhood of x: everything x reaches.
    OpenSet smallest_open_neighbourhood(std::size_t x) const {
        OpenSet u;
        for (std::size_t p = 0; p < point_count(); ++p)
            if (leq_[p][x]) u.push_back(p);
        return u;
    }

    bool is_closed_point(std::size_t x) const {
        for (std::size_t q = 0; q < point_count(); ++q)
            if (q != x && leq_[x][q]) return false;
        return true;
    }

    /// All downstream-closed subsets, ordered by size then lexicographically.
    std::vector<OpenSet> open_sets() const {
        const std::size_t np = point_count();
        if (np > 25) throw input_error("open_sets: too many points to enumerate");
        std::vector<OpenSet> out;
        for (std::size_t mask = 0; mask < (std::size_t(1) << np); ++mask) {
            OpenSet u;
            for (std::size_t p = 0; p < np; ++p)
                if (mask & (std::size_t(1) << p)) u.push_back(p);
            if (is_open(u)) out.push_back(std::move(u));
        }
        std::sort(out.begin(), out.end(), [](const OpenSet& a, const OpenSet& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        return out;
    }

  private:
    std::vector<std::vector<std::size_t>> points_;
    std::vector<std::string> names_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::vector<std::size_t>> vertex_reaches_;
};

/// Ungated condensation poset (meaningful for any square non-negative matrix).
inline CondensationPoset condensation_poset(const CKMatrix& g) {
    return CondensationPoset(g, sccs(g));
}

/// Primitive-ideal space; requires Condition (K) (otherwise the ideal lattice
/// is not captured by finitely many open sets).
inline CondensationPoset prim_poset(const CKMatrix& g) {
    ConditionKResult k = condition_K(g);
    if (!k.holds) {
        std::ostringstream os;
        os << "Condition (K) fails: component {";
        for (std::size_t i = 0; i < k.witness.size(); ++i) os << (i ? " " : "") << k.witness[i];
        os << "} is a single simple cycle";
        throw input_error(os.str());
    }
    return condensation_poset(g);
}

/// H_U: all vertices from which every reachable cycle-component lies in U.
/// Hereditary and saturated; transition vertices are absorbed.
inline std::vector<std::size_t> ideal_vertices(const CKMatrix& g, const CondensationPoset& poset,
                                               const OpenSet& u) {
    if (!poset.is_open(u)) throw input_error("ideal_vertices: the given point set is not open");
    std::vector<bool> in(poset.point_count(), false);
    for (std::size_t p : u) in[p] = true;
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < g.size(); ++v) {
        bool inside = true;
        for (std::size_t p : poset.vertex_reaches(v))
            if (!in[p]) {
                inside = false;
                break;
            }
        if (inside) out.push_back(v);
    }
    return out;
}

inline std::vector<std::size_t> ideal_vertices(const CKMatrix& g, const OpenSet& u) {
    return ideal_vertices(g, prim_poset(g), u);
}

/// Entry restriction to a vertex set (order preserved as given). Zero columns
/// may appear in ideal submatrices; `validate` flags them.
inline CKMatrix submatrix(const CKMatrix& g, std::span<const std::size_t> vertices) {
    std::vector<std::string> labels;
    labels.reserve(vertices.size());
    for (std::size_t v : vertices) {
        if (v >= g.size()) throw input_error("submatrix: vertex index out of range");
        labels.push_back(g.labels()[v]);
    }
    return CKMatrix(g.matrix().select(vertices, vertices), std::move(labels));
}

/// Searches for an order isomorphism between two posets; `compatible(p, q)`
/// restricts which points may correspond and `accept` may reject a complete
/// candidate (the search then backtracks). Poset sizes here are single digits.
inline std::optional<std::vector<std::size_t>> find_poset_isomorphism(
    const CondensationPoset& p, const CondensationPoset& q,
    const std::function<bool(std::size_t, std::size_t)>& compatible = nullptr,
    const std::function<bool(const std::vector<std::size_t>&)>& accept = nullptr) {
    const std::size_t n = p.point_count();
    if (n != q.point_count()) return std::nullopt;
    std::vector<std::size_t> map(n, SIZE_MAX);
    std::vector<bool> used(n, false);

    std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
        if (i == n) return !accept || accept(map);
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            if (compatible && !compatible(i, j)) continue;
            bool ok = true;
            for (std::size_t k = 0; k < i && ok; ++k) {
                if (p.leq(i, k) != q.leq(j, map[k])) ok = false;
                if (p.leq(k, i) != q.leq(map[k], j)) ok = false;
            }
            if (!ok) continue;
            map[i] = j;
            used[j] = true;
            if (place(i + 1)) return true;
            used[j] = false;
            map[i] = SIZE_MAX;
        }
        return false;
    };
    if (!place(0)) return std::nullopt;
    return map;
}

inline bool posets_isomorphic(const CondensationPoset& p, const CondensationPoset& q) {
    return find_poset_isomorphism(p, q).has_value();
}

} // namespace ck
