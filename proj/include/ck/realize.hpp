#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ck/abelian_group.hpp"
#include "ck/graph.hpp"
#include "ck/invariants.hpp"

namespace ck {

/// Realizes K0 = Z^free_rank (+) Z/d1 (+) ... and free K1 of the same rank by
/// an irreducible non-negative matrix with every diagonal entry >= 2.
///
/// Construction: start from the presentation diag(d1,...,dk) (+) 0_r, padded
/// with a single unit entry when there is no torsion, make it entrywise
/// positive by cumulative row and column additions (these preserve cokernel
/// and kernel up to isomorphism), and return M^t + 1. The K-data of the result
/// is recomputed and compared as a built-in oracle check.
inline CKMatrix realize_simple(const IntVec& divisors, std::size_t free_rank) {
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        if (divisors[i] < 2) throw input_error("realize_simple: divisor below 2");
        if (i > 0 && divisors[i] % divisors[i - 1] != 0)
            throw input_error("realize_simple: divisors do not form a chain");
    }
    IntVec diag = divisors;
    if (diag.empty()) diag.push_back(1);
    const std::size_t n = diag.size() + free_rank;
    IntMatrix m = IntMatrix::diagonal(diag, n);
    for (std::size_t j = 1; j < n; ++j) m.add_col_multiple(j, j - 1, 1);
    for (std::size_t i = 1; i < n; ++i) m.add_row_multiple(i, i - 1, 1);

    IntMatrix a = m.transpose() + IntMatrix::identity(n);
    CKMatrix out(a);

    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i) < 2) throw internal_error("realize_simple: diagonal entry below 2");
        for (std::size_t j = 0; j < n; ++j)
            if (a(i, j) < 1) throw internal_error("realize_simple: output not positive");
    }
    AbelianGroup want = AbelianGroup::from_invariant_factors(divisors, free_rank);
    KData k = k_data(out);
    if (k.k0.group() != want || k.k1_rank() != free_rank || k.ext.group() != want)
        throw internal_error("realize_simple: K-data of the construction is off target");
    if (!condition_K(out))
        throw internal_error("realize_simple: output violates Condition (K)");
    return out;
}

/// The group Coker(A1 - 1) (x) Coker(A2'^t - 1) with a fixed cyclic-factor
/// coordinate system: rows run over the factors of Coker(A1 - 1), columns over
/// the factors of Coker(A2'^t - 1), torsion factors first (increasing divisor)
/// and then free generators. Order 0 marks a free factor.
class TensorClassSpace {
  public:
    TensorClassSpace(const CKMatrix& a1, const CKMatrix& a2p)
        : g_(cokernel(a1.matrix() - IntMatrix::identity(a1.size()))),
          h_(cokernel(a2p.matrix().transpose() - IntMatrix::identity(a2p.size()))),
          row_orders_(g_.factor_orders()), col_orders_(h_.factor_orders()),
          group_(tensor(g_.group(), h_.group())) {}

    const PresentedGroup& quotient_ext() const { return g_; }
    const PresentedGroup& ideal_k0() const { return h_; }
    const IntVec& row_orders() const { return row_orders_; }
    const IntVec& col_orders() const { return col_orders_; }
    const AbelianGroup& group() const { return group_; }
    std::size_t rows() const { return row_orders_.size(); }
    std::size_t cols() const { return col_orders_.size(); }

    Int factor_order(std::size_t i, std::size_t j) const {
        const Int& a = row_orders_[i];
        const Int& b = col_orders_[j];
        if (a == 0) return b;
        if (b == 0) return a;
        return boost::multiprecision::gcd(a, b);
    }

    /// Entrywise reduction of a coordinate matrix modulo the factor orders.
    IntMatrix reduce_coords(const IntMatrix& value) const {
        if (value.rows() != rows() || value.cols() != cols())
            throw input_error(shape_error(value));
        IntMatrix out = value;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                Int o = factor_order(i, j);
                if (o > 0) out(i, j) = mod_floor(out(i, j), o);
            }
        return out;
    }

    /// q(N'): the class of a connecting block N' (m1 x m2', any sign).
    IntMatrix project(const IntMatrix& n_prime) const {
        if (n_prime.rows() != g_.ambient_rank() || n_prime.cols() != h_.ambient_rank())
            throw input_error("tensor class: connecting block is " +
                              std::to_string(n_prime.rows()) + "x" +
                              std::to_string(n_prime.cols()) + ", expected " +
                              std::to_string(g_.ambient_rank()) + "x" +
                              std::to_string(h_.ambient_rank()));
        IntMatrix c = g_.reduce_matrix() * n_prime * h_.reduce_matrix().transpose();
        return reduce_coords(c);
    }

    /// An integer preimage of a coordinate matrix under q.
    IntMatrix lift(const IntMatrix& value) const {
        IntMatrix c = reduce_coords(value);
        return g_.lift_matrix() * c * h_.lift_matrix().transpose();
    }

    std::string describe() const {
        auto orders_str = [](const IntVec& orders) {
            std::ostringstream os;
            os << "[";
            for (std::size_t i = 0; i < orders.size(); ++i) {
                if (i) os << " ";
                if (orders[i] == 0) os << "Z";
                else os << orders[i];
            }
            os << "]";
            return os.str();
        };
        std::ostringstream os;
        os << "rows: Ext(quotient) = " << g_.group().to_string() << " with factor orders "
           << orders_str(row_orders_) << "; cols: K0(ideal part) = " << h_.group().to_string()
           << " with factor orders " << orders_str(col_orders_)
           << " (torsion factors by increasing divisor, then free generators); tensor group = "
           << group_.to_string();
        return os.str();
    }

  private:
    std::string shape_error(const IntMatrix& value) const {
        std::ostringstream os;
        os << "tensor class coordinates are " << value.rows() << "x" << value.cols()
           << ", expected " << rows() << "x" << cols() << " (" << describe() << ")";
        return os.str();
    }

    PresentedGroup g_, h_;
    IntVec row_orders_, col_orders_;
    AbelianGroup group_;
};

/// A class in Coker(A1 - 1) (x) Coker(A2'^t - 1), in normal-form coordinates
/// reduced modulo each cyclic order, with the connecting block it came from
/// when known.
struct ClassInTensor {
    IntMatrix value;
    IntVec row_orders, col_orders;
    std::optional<IntMatrix> source;

    bool operator==(const ClassInTensor& o) const {
        return value == o.value && row_orders == o.row_orders && col_orders == o.col_orders;
    }
    bool operator!=(const ClassInTensor& o) const { return !(*this == o); }
};

inline ClassInTensor extension_class(const CKMatrix& a1, const CKMatrix& a2p,
                                     const IntMatrix& n_prime) {
    TensorClassSpace space(a1, a2p);
    return {space.project(n_prime), space.row_orders(), space.col_orders(), n_prime};
}

/// The positive image vector p = (A1 - 1) * (1,...,1)^t. Every entry is >= 1
/// when every diagonal entry of A1 is >= 2; each column of the rank-one matrix
/// p * (1,...,1) then lies in Im(A1 - 1), so its class under q is zero.
inline IntVec positive_kernel_vector(const CKMatrix& a1) {
    for (std::size_t i = 0; i < a1.size(); ++i)
        if (a1.entry(i, i) < 2)
            throw input_error("positive_kernel: diagonal entry " + std::to_string(i) +
                              " is below 2");
    IntVec p(a1.size());
    for (std::size_t i = 0; i < a1.size(); ++i) {
        for (std::size_t j = 0; j < a1.size(); ++j) p[i] += a1.entry(i, j);
        p[i] -= 1;
    }
    return p;
}

inline IntMatrix positive_kernel_matrix(const CKMatrix& a1, std::size_t width) {
    IntVec p = positive_kernel_vector(a1);
    IntMatrix out(p.size(), width);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) out(i, j) = p[i];
    return out;
}

/// Chooses a strictly positive connecting block N' with q(N') = beta: lift
/// beta to any integer preimage, then add the smallest multiple of the
/// positive kernel matrix that makes every entry >= 1.
inline IntMatrix realize_extension_class(const CKMatrix& a1, const CKMatrix& a2p,
                                         const IntMatrix& beta) {
    TensorClassSpace space(a1, a2p);
    IntMatrix target = space.reduce_coords(beta);
    IntMatrix n0 = space.lift(target);
    IntVec p = positive_kernel_vector(a1);

    Int t = 0;
    for (std::size_t i = 0; i < n0.rows(); ++i)
        for (std::size_t j = 0; j < n0.cols(); ++j) {
            Int need = 1 - n0(i, j);
            if (need > 0) {
                Int ti = (need + p[i] - 1) / p[i]; // ceil
                if (ti > t) t = ti;
            }
        }
    IntMatrix np = n0;
    for (std::size_t i = 0; i < np.rows(); ++i)
        for (std::size_t j = 0; j < np.cols(); ++j) np(i, j) += t * p[i];

    for (std::size_t i = 0; i < np.rows(); ++i)
        for (std::size_t j = 0; j < np.cols(); ++j)
            if (np(i, j) < 1) throw internal_error("realize_extension_class: block not positive");
    if (space.project(np) != target)
        throw internal_error("realize_extension_class: class of the chosen block is off");
    return np;
}

inline IntMatrix realize_extension_class(const CKMatrix& a1, const CKMatrix& a2p,
                                         const ClassInTensor& beta) {
    return realize_extension_class(a1, a2p, beta.value);
}

/// Block assembly A = [[A1, N], [0, A2]] where N carries N' on the columns of
/// the attached ideal part and vanishing columns elsewhere.
inline CKMatrix assemble(const CKMatrix& a1, const CKMatrix& a2, const OpenSet& attach,
                         const IntMatrix& n_prime, std::vector<std::string> new_labels = {}) {
    CondensationPoset poset = prim_poset(a2);
    std::vector<std::size_t> h = ideal_vertices(a2, poset, attach);
    if (n_prime.rows() != a1.size() || n_prime.cols() != h.size())
        throw input_error("assemble: connecting block is " + std::to_string(n_prime.rows()) +
                          "x" + std::to_string(n_prime.cols()) + ", expected " +
                          std::to_string(a1.size()) + "x" + std::to_string(h.size()));
    for (std::size_t i = 0; i < n_prime.rows(); ++i)
        for (std::size_t j = 0; j < n_prime.cols(); ++j)
            if (n_prime(i, j) < 1)
                throw input_error("assemble: connecting block must be strictly positive");

    IntMatrix n(a1.size(), a2.size());
    for (std::size_t j = 0; j < h.size(); ++j)
        for (std::size_t i = 0; i < a1.size(); ++i) n(i, h[j]) = n_prime(i, j);

    IntMatrix a = IntMatrix::block_upper(a1.matrix(), n, a2.matrix());
    std::vector<std::string> labels;
    if (new_labels.empty()) new_labels = a1.labels();
    if (new_labels.size() != a1.size()) throw input_error("assemble: label count mismatch");
    labels.insert(labels.end(), new_labels.begin(), new_labels.end());
    labels.insert(labels.end(), a2.labels().begin(), a2.labels().end());

    ValidationReport vr = validate(a);
    if (!vr.ok()) throw internal_error("assemble: result fails validation: " + vr.to_string());
    return CKMatrix(std::move(a), std::move(labels));
}

/// Synthesis input: an ordered list of simple points. Each point after the
/// first may attach to a nonempty open set of the poset built so far (the
/// extension case) or to nothing (a new direct summand).
struct TargetPoint {
    std::string name;
    IntVec divisors;
    std::size_t free_rank = 0;
    std::vector<std::string> attach;  // names of earlier points
    std::optional<IntMatrix> beta;    // tensor coordinates; absent = zero class
};

struct TargetSpec {
    std::vector<TargetPoint> points;
};

namespace detail {

inline std::size_t point_index(const TargetSpec& spec, const std::string& name,
                               std::size_t before) {
    for (std::size_t i = 0; i < before; ++i)
        if (spec.points[i].name == name) return i;
    throw input_error("target spec: attach names unknown or later point '" + name + "'");
}

// Order relation prescribed by the spec: p < q iff p lies in the attach
// closure of q. Also validates names and that attach sets are open
// (downward closed) in the spec's own order.
inline std::vector<std::vector<bool>> spec_order(const TargetSpec& spec) {
    const std::size_t n = spec.points.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t q = 0; q < n; ++q) {
        leq[q][q] = true;
        std::vector<bool> attached(n, false);
        for (const std::string& name : spec.points[q].attach) {
            std::size_t p = point_index(spec, name, q);
            attached[p] = true;
            for (std::size_t r = 0; r < q; ++r)
                if (leq[r][p]) leq[r][q] = true;
            leq[p][q] = true;
        }
        // openness: everything below an attached point must be attached too
        for (std::size_t p = 0; p < q; ++p) {
            if (!attached[p]) continue;
            for (std::size_t r = 0; r < q; ++r)
                if (leq[r][p] && !attached[r] && r != p)
                    throw input_error("target spec: attach set of '" + spec.points[q].name +
                                      "' is not open (missing '" + spec.points[r].name + "')");
        }
    }
    return leq;
}

} // namespace detail

struct SynthesisStep {
    std::string point_name;
    IntMatrix n_prime;                  // empty for direct-summand steps
    std::optional<ClassInTensor> requested;
    std::optional<ClassInTensor> recomputed;
    std::string coordinates;            // human description of the class coordinates
};

struct SynthesisCheck {
    std::string name;
    bool ok;
    std::string detail;
};

struct SynthesisResult {
    CKMatrix matrix;
    CondensationPoset poset;
    std::vector<std::size_t> point_of_spec; // spec point index -> poset point index
    std::vector<SynthesisStep> steps;
    std::vector<SynthesisCheck> checks;

    bool all_green() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

/// Runs the inductive construction and verifies the result: the realized
/// primitive-ideal poset must be isomorphic to the prescribed one, every
/// point's K-data must match its prescription, and the extension class of
/// every assembled step, recomputed from the final matrix, must equal the
/// prescribed beta. Any verification failure is an internal bug signal.
inline SynthesisResult synthesize(const TargetSpec& spec) {
    if (spec.points.empty()) throw input_error("target spec: no points");
    for (std::size_t i = 0; i < spec.points.size(); ++i)
        for (std::size_t j = i + 1; j < spec.points.size(); ++j)
            if (spec.points[i].name == spec.points[j].name)
                throw input_error("target spec: duplicate point name '" + spec.points[i].name +
                                  "'");
    std::vector<std::vector<bool>> want_leq = detail::spec_order(spec);

    CKMatrix current(IntMatrix(0, 0));
    // vertex blocks of already placed points, in current-matrix indices
    std::vector<std::pair<std::size_t, std::size_t>> blocks; // offset, size
    std::vector<SynthesisStep> steps;

    for (std::size_t k = 0; k < spec.points.size(); ++k) {
        const TargetPoint& pt = spec.points[k];
        CKMatrix a1 = realize_simple(pt.divisors, pt.free_rank);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < a1.size(); ++i)
            labels.push_back(pt.name + "." + std::to_string(i));

        CondensationPoset poset = condensation_poset(current);
        OpenSet attach;
        for (const std::string& name : pt.attach) {
            std::size_t p = detail::point_index(spec, name, k);
            // each placed block is one irreducible component, so the point is
            // the one whose cycle component holds the block's first vertex
            bool found = false;
            for (std::size_t pp = 0; pp < poset.point_count() && !found; ++pp)
                if (std::binary_search(poset.point_vertices(pp).begin(),
                                       poset.point_vertices(pp).end(), blocks[p].first)) {
                    attach.push_back(pp);
                    found = true;
                }
            if (!found) throw internal_error("synthesize: placed point lost its component");
        }
        std::sort(attach.begin(), attach.end());
        attach.erase(std::unique(attach.begin(), attach.end()), attach.end());

        SynthesisStep step;
        step.point_name = pt.name;
        if (attach.empty()) {
            if (pt.beta && !pt.beta->empty())
                throw input_error("target spec: point '" + pt.name +
                                  "' has a beta but attaches to nothing");
            IntMatrix merged = IntMatrix::block_diag(a1.matrix(), current.matrix());
            std::vector<std::string> all_labels = labels;
            all_labels.insert(all_labels.end(), current.labels().begin(),
                              current.labels().end());
            current = CKMatrix(std::move(merged), std::move(all_labels));
        } else {
            std::vector<std::size_t> h = ideal_vertices(current, poset, attach);
            CKMatrix a2p = submatrix(current, h);
            TensorClassSpace space(a1, a2p);
            IntMatrix beta(space.rows(), space.cols());
            if (pt.beta) beta = space.reduce_coords(*pt.beta);
            IntMatrix np = realize_extension_class(a1, a2p, beta);
            step.requested = ClassInTensor{beta, space.row_orders(), space.col_orders(), {}};
            step.recomputed = extension_class(a1, a2p, np);
            step.n_prime = np;
            step.coordinates = space.describe();
            if (step.recomputed->value != beta)
                throw internal_error("synthesize: realized class differs from request at '" +
                                     pt.name + "'");
            current = assemble(a1, current, attach, np, labels);
        }
        for (auto& b : blocks) b.first += a1.size(); // previous vertices shifted down
        blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(k), {0, a1.size()});
        steps.push_back(std::move(step));
    }

    // ---- verification ----
    std::vector<SynthesisCheck> checks;
    ValidationReport vr = validate(current);
    checks.push_back({"matrix valid", vr.ok(), vr.to_string()});

    ConditionKResult ck_res = condition_K(current);
    checks.push_back({"Condition (K)", ck_res.holds, ck_res.holds ? "satisfied" : "violated"});

    CondensationPoset poset = condensation_poset(current);
    std::vector<std::size_t> point_of_spec(spec.points.size(), SIZE_MAX);
    bool points_found = poset.point_count() == spec.points.size();
    for (std::size_t k = 0; k < spec.points.size() && points_found; ++k) {
        for (std::size_t pp = 0; pp < poset.point_count(); ++pp)
            if (std::binary_search(poset.point_vertices(pp).begin(),
                                   poset.point_vertices(pp).end(), blocks[k].first))
                point_of_spec[k] = pp;
        if (point_of_spec[k] == SIZE_MAX) points_found = false;
    }
    bool order_ok = points_found;
    if (points_found)
        for (std::size_t p = 0; p < spec.points.size(); ++p)
            for (std::size_t q = 0; q < spec.points.size(); ++q)
                if (want_leq[p][q] != poset.leq(point_of_spec[p], point_of_spec[q]))
                    order_ok = false;
    checks.push_back({"Prim poset isomorphic to the prescription", order_ok,
                      points_found ? "point-by-point order comparison" : "point count differs"});

    bool kdata_ok = points_found;
    std::string kdata_detail;
    if (points_found)
        for (std::size_t k = 0; k < spec.points.size(); ++k) {
            AbelianGroup want =
                AbelianGroup::from_invariant_factors(spec.points[k].divisors,
                                                     spec.points[k].free_rank);
            KData got = point_k_data(current, poset, point_of_spec[k]);
            if (got.k0.group() != want || got.k1_rank() != spec.points[k].free_rank ||
                got.ext.group() != want) {
                kdata_ok = false;
                kdata_detail += "point '" + spec.points[k].name + "': K0 = " +
                                got.k0.group().to_string() + ", wanted " + want.to_string() +
                                "; ";
            }
        }
    checks.push_back({"per-point K-data matches", kdata_ok,
                      kdata_ok ? "all points" : kdata_detail});

    // per-step classes, recomputed from the blocks of the final matrix
    bool classes_ok = points_found && order_ok;
    std::string class_detail = classes_ok ? "" : "skipped: poset mismatch; ";
    for (std::size_t k = 0; k < spec.points.size() && classes_ok; ++k) {
        if (!steps[k].requested) continue;
        std::vector<std::size_t> rows(blocks[k].second);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = blocks[k].first + i;
        CKMatrix a1_block = submatrix(current, rows);

        // the attached ideal part, located through the spec order
        std::vector<std::size_t> ideal_cols;
        OpenSet attach_points;
        for (std::size_t p = 0; p < spec.points.size(); ++p)
            if (p != k && want_leq[p][k]) attach_points.push_back(point_of_spec[p]);
        std::sort(attach_points.begin(), attach_points.end());
        ideal_cols = ideal_vertices(current, poset, attach_points);
        CKMatrix a2p_block = submatrix(current, ideal_cols);
        IntMatrix np = current.matrix().select(rows, ideal_cols);
        ClassInTensor recomputed = extension_class(a1_block, a2p_block, np);
        if (recomputed != *steps[k].requested) {
            classes_ok = false;
            class_detail += "step '" + spec.points[k].name + "' class mismatch; ";
        }
        steps[k].recomputed = std::move(recomputed);
    }
    checks.push_back({"per-step extension classes match", classes_ok,
                      classes_ok ? "recomputed from the final matrix" : class_detail});

    SynthesisResult result{std::move(current), std::move(poset), std::move(point_of_spec),
                           std::move(steps), std::move(checks)};
    if (!result.all_green()) {
        std::string msg = "synthesize: verification failed:";
        for (const auto& c : result.checks)
            if (!c.ok) msg += " [" + c.name + ": " + c.detail + "]";
        throw internal_error(msg);
    }
    return result;
}

} // namespace ck
