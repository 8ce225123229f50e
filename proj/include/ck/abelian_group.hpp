#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ck/int_matrix.hpp"
#include "ck/snf.hpp"

namespace ck {

/// Finitely generated abelian group in normal form: an invariant-factor chain
/// d1 | d2 | ... (each >= 2) plus a free rank. Two groups are isomorphic iff
/// they are field-equal.
class AbelianGroup {
  public:
    AbelianGroup() : free_rank_(0) {}

    static AbelianGroup trivial() { return AbelianGroup(); }

    static AbelianGroup free(std::size_t rank) {
        AbelianGroup g;
        g.free_rank_ = rank;
        return g;
    }

    /// Normalized constructor: requires a valid chain (each divisor >= 2,
    /// consecutive divisibility).
    static AbelianGroup from_invariant_factors(IntVec divisors, std::size_t free_rank) {
        for (std::size_t i = 0; i < divisors.size(); ++i) {
            if (divisors[i] < 2) throw input_error("invariant factor below 2");
            if (i > 0 && divisors[i] % divisors[i - 1] != 0)
                throw input_error("invariant factors do not form a divisibility chain");
        }
        AbelianGroup g;
        g.divisors_ = std::move(divisors);
        g.free_rank_ = free_rank;
        return g;
    }

    /// Canonicalizes an arbitrary list of cyclic orders (0 meaning Z) into the
    /// invariant-factor chain, via the SNF of the diagonal presentation.
    static AbelianGroup from_cyclic_factors(const IntVec& orders, std::size_t extra_free_rank = 0) {
        SnfResult s = snf(IntMatrix::diagonal(orders, orders.size()));
        AbelianGroup g;
        g.divisors_ = s.torsion_divisors();
        g.free_rank_ = extra_free_rank + orders.size() - s.rank();
        return g;
    }

    const IntVec& divisors() const { return divisors_; }
    std::size_t free_rank() const { return free_rank_; }
    std::size_t torsion_count() const { return divisors_.size(); }
    bool is_trivial() const { return divisors_.empty() && free_rank_ == 0; }
    bool is_finite() const { return free_rank_ == 0; }

    /// Group order; only meaningful for finite groups.
    Int order() const {
        Int n = 1;
        for (const Int& d : divisors_) n *= d;
        return n;
    }

    AbelianGroup direct_sum(const AbelianGroup& o) const {
        IntVec all = divisors_;
        all.insert(all.end(), o.divisors_.begin(), o.divisors_.end());
        return from_cyclic_factors(all, free_rank_ + o.free_rank_);
    }

    bool operator==(const AbelianGroup& o) const {
        return divisors_ == o.divisors_ && free_rank_ == o.free_rank_;
    }
    bool operator!=(const AbelianGroup& o) const { return !(*this == o); }

    std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        if (free_rank_ > 0) {
            os << "Z^" << free_rank_;
            first = false;
        }
        for (const Int& d : divisors_) {
            if (!first) os << " (+) ";
            os << "Z/" << d;
            first = false;
        }
        return os.str();
    }

  private:
    IntVec divisors_;
    std::size_t free_rank_;
};

inline bool groups_isomorphic(const AbelianGroup& g, const AbelianGroup& h) { return g == h; }

/// Tensor product of normal forms: Z (x) G = G and Z/a (x) Z/b = Z/gcd(a,b),
/// distributed over the direct sums and renormalized.
inline AbelianGroup tensor(const AbelianGroup& g, const AbelianGroup& h) {
    IntVec orders;
    std::size_t free_rank = g.free_rank() * h.free_rank();
    for (const Int& a : g.divisors())
        for (const Int& b : h.divisors()) orders.push_back(boost::multiprecision::gcd(a, b));
    for (const Int& a : g.divisors())
        for (std::size_t j = 0; j < h.free_rank(); ++j) orders.push_back(a);
    for (const Int& b : h.divisors())
        for (std::size_t i = 0; i < g.free_rank(); ++i) orders.push_back(b);
    return AbelianGroup::from_cyclic_factors(orders, free_rank);
}

/// A finitely generated abelian group presented as Z^rows / column-span(M),
/// together with the coordinate data needed to reduce ambient vectors to
/// normal-form coordinates and lift them back.
///
/// Normal-form coordinates are ordered torsion factors first (by increasing
/// divisor, which is the SNF diagonal order) and then free generators.
class PresentedGroup {
  public:
    PresentedGroup() : PresentedGroup(IntMatrix(0, 0)) {}

    explicit PresentedGroup(IntMatrix relations) : presentation_(std::move(relations)) {
        SnfWithInverse s = snf_with_inverse(presentation_);
        snf_ = std::move(s.snf);
        uinv_ = std::move(s.u_inverse);
        const std::size_t rank = snf_.rank();
        const std::size_t n = std::min(presentation_.rows(), presentation_.cols());
        for (std::size_t i = 0; i < n && i < rank; ++i)
            if (snf_.d(i, i) >= 2) torsion_rows_.push_back(i);
        for (std::size_t i = rank; i < presentation_.rows(); ++i) free_rows_.push_back(i);
        group_ = AbelianGroup::from_invariant_factors(snf_.torsion_divisors(), free_rows_.size());
    }

    static PresentedGroup free_group(std::size_t rank) {
        return PresentedGroup(IntMatrix(rank, 0));
    }
    static PresentedGroup zero_group() { return PresentedGroup(IntMatrix(0, 0)); }

    const IntMatrix& presentation() const { return presentation_; }
    const AbelianGroup& group() const { return group_; }
    std::size_t ambient_rank() const { return presentation_.rows(); }
    std::size_t coord_count() const { return torsion_rows_.size() + free_rows_.size(); }

    /// Cyclic-factor orders in coordinate order; 0 marks a free factor.
    IntVec factor_orders() const {
        IntVec out;
        for (std::size_t i : torsion_rows_) out.push_back(snf_.d(i, i));
        for (std::size_t i = 0; i < free_rows_.size(); ++i) out.push_back(0);
        return out;
    }

    /// Normal-form coordinates of an ambient vector; torsion coordinates are
    /// reduced into [0, d).
    IntVec reduce(const IntVec& ambient) const {
        if (ambient.size() != ambient_rank()) throw input_error("reduce: ambient rank mismatch");
        IntVec w = snf_.u.mul_vec(ambient);
        IntVec out;
        out.reserve(coord_count());
        for (std::size_t i : torsion_rows_) out.push_back(mod_floor(w[i], snf_.d(i, i)));
        for (std::size_t i : free_rows_) out.push_back(w[i]);
        return out;
    }

    /// An ambient representative of the given normal-form coordinates.
    IntVec lift(const IntVec& coords) const {
        if (coords.size() != coord_count()) throw input_error("lift: coordinate count mismatch");
        IntVec w(ambient_rank());
        std::size_t k = 0;
        for (std::size_t i : torsion_rows_) w[i] = coords[k++];
        for (std::size_t i : free_rows_) w[i] = coords[k++];
        return uinv_.mul_vec(w);
    }

    /// Rows of U at the coordinate positions: the integer matrix whose product
    /// with an ambient vector gives (pre-reduction) normal-form coordinates.
    IntMatrix reduce_matrix() const {
        std::vector<std::size_t> rows = coordinate_rows();
        std::vector<std::size_t> cols(ambient_rank());
        for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
        return snf_.u.select(rows, cols);
    }

    /// Columns of U^-1 at the coordinate positions: ambient lifts of the
    /// normal-form generators.
    IntMatrix lift_matrix() const {
        std::vector<std::size_t> rows(ambient_rank());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        return uinv_.select(rows, coordinate_rows());
    }

    bool contains(const IntVec& ambient) const {
        for (const Int& c : reduce(ambient))
            if (c != 0) return false;
        return true;
    }

    bool elements_equal(const IntVec& a, const IntVec& b) const {
        if (a.size() != b.size()) return false;
        IntVec diff(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
        return contains(diff);
    }

    bool same_presentation(const PresentedGroup& o) const {
        return presentation_ == o.presentation_;
    }

  private:
    std::vector<std::size_t> coordinate_rows() const {
        std::vector<std::size_t> rows = torsion_rows_;
        rows.insert(rows.end(), free_rows_.begin(), free_rows_.end());
        return rows;
    }

    IntMatrix presentation_;
    SnfResult snf_;
    IntMatrix uinv_;
    AbelianGroup group_;
    std::vector<std::size_t> torsion_rows_;
    std::vector<std::size_t> free_rows_;
};

/// G = Z^rows / column-span(M).
inline PresentedGroup cokernel(const IntMatrix& m) { return PresentedGroup(m); }

/// The kernel of M as a free group together with a saturated basis.
inline std::pair<AbelianGroup, IntMatrix> kernel_group(const IntMatrix& m) {
    IntMatrix basis = kernel_basis(m);
    return {AbelianGroup::free(basis.cols()), basis};
}

/// Homomorphism between presented groups, stored as an integer matrix on the
/// ambient generators so composition stays matrix multiplication.
struct GroupHom {
    PresentedGroup source;
    PresentedGroup target;
    IntMatrix matrix; // target.ambient_rank() x source.ambient_rank()

    IntVec apply_coords(const IntVec& source_coords) const {
        return target.reduce(matrix.mul_vec(source.lift(source_coords)));
    }
};

inline GroupHom zero_hom(PresentedGroup source, PresentedGroup target) {
    IntMatrix m(target.ambient_rank(), source.ambient_rank());
    return {std::move(source), std::move(target), std::move(m)};
}

inline GroupHom identity_hom(PresentedGroup g) {
    IntMatrix m = IntMatrix::identity(g.ambient_rank());
    return {g, std::move(g), std::move(m)};
}

/// Builds the hom and checks well-definedness: the matrix must map every
/// relation of the source into the relation span of the target. Rejection
/// names a witness relation.
inline GroupHom induced_hom(IntMatrix matrix, PresentedGroup source, PresentedGroup target) {
    if (matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank())
        throw input_error("induced_hom: matrix shape does not match ambient ranks");
    const IntMatrix& rel = source.presentation();
    for (std::size_t j = 0; j < rel.cols(); ++j) {
        IntVec image = matrix.mul_vec(rel.col_vec(j));
        if (!target.contains(image)) {
            std::ostringstream os;
            os << "induced_hom: not well defined; source relation column " << j << " (";
            for (std::size_t i = 0; i < image.size(); ++i) os << (i ? " " : "") << image[i];
            os << ") does not map into the target relations";
            throw input_error(os.str());
        }
    }
    return {std::move(source), std::move(target), std::move(matrix)};
}

inline GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (!f.target.same_presentation(g.source))
        throw input_error("compose: middle groups differ");
    return {f.source, g.target, g.matrix * f.matrix};
}

struct ExactnessResult {
    bool exact = true;
    std::size_t failure_index = 0; // interior node (index of the incoming hom)
    std::string detail;

    explicit operator bool() const { return exact; }
};

namespace detail {

// Generators of ker(g) as an ambient lattice: solve g.matrix * v in
// relation-span(target) by taking the kernel of [g.matrix | target relations]
// and projecting to the v-part.
inline IntMatrix kernel_lattice_generators(const GroupHom& g) {
    IntMatrix block = IntMatrix::hstack(g.matrix, g.target.presentation());
    IntMatrix k = kernel_basis(block);
    std::vector<std::size_t> rows(g.source.ambient_rank()), cols(k.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    return k.select(rows, cols);
}

} // namespace detail

/// Exactness (image = kernel) at every interior node of a composable chain.
/// Subgroup equality is decided by double inclusion via integer solvability,
/// so infinite groups are handled uniformly.
inline ExactnessResult check_exact(const std::vector<GroupHom>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!seq[i].target.same_presentation(seq[i + 1].source))
            throw input_error("check_exact: chain is not composable at node " +
                              std::to_string(i + 1));

    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const GroupHom& f = seq[i];
        const GroupHom& g = seq[i + 1];
        const PresentedGroup& mid = f.target;

        // image generators: f(source generators) together with mid relations
        IntMatrix image_gens = IntMatrix::hstack(f.matrix, mid.presentation());
        // image <= kernel: g must kill each image generator
        for (std::size_t j = 0; j < f.matrix.cols(); ++j) {
            IntVec v = g.matrix.mul_vec(f.matrix.col_vec(j));
            if (!g.target.contains(v)) {
                ExactnessResult r;
                r.exact = false;
                r.failure_index = i;
                r.detail = "composite not zero on source generator " + std::to_string(j);
                return r;
            }
        }
        // kernel <= image
        IntMatrix ker_gens = detail::kernel_lattice_generators(g);
        for (std::size_t j = 0; j < ker_gens.cols(); ++j) {
            if (!solve_linear(image_gens, ker_gens.col_vec(j))) {
                ExactnessResult r;
                r.exact = false;
                r.failure_index = i;
                r.detail = "kernel element outside the image at interior node " +
                           std::to_string(i + 1);
                return r;
            }
        }
    }
    return {};
}

} // namespace ck
