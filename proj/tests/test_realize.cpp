#include <doctest.h>

#include "ck/realize.hpp"

#include "test_support.hpp"

using namespace ck;
using cktest::Rng;

namespace {

// torsion classes of the tensor space, enumerated lexicographically, capped
std::vector<IntMatrix> torsion_classes(const TensorClassSpace& space, std::size_t cap) {
    std::vector<IntMatrix> out;
    std::vector<std::pair<std::size_t, std::size_t>> torsion;
    for (std::size_t i = 0; i < space.rows(); ++i)
        for (std::size_t j = 0; j < space.cols(); ++j)
            if (space.factor_order(i, j) > 1) torsion.emplace_back(i, j);
    IntMatrix cur(space.rows(), space.cols());
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (out.size() >= cap) return;
        if (k == torsion.size()) {
            out.push_back(cur);
            return;
        }
        auto [i, j] = torsion[k];
        for (Int v = 0; v < space.factor_order(i, j) && out.size() < cap; ++v) {
            cur(i, j) = v;
            rec(k + 1);
        }
        cur(i, j) = 0;
    };
    rec(0);
    return out;
}

} // namespace

TEST_SUITE("realize") {

TEST_CASE("realize_simple pinned outputs") {
    CHECK(realize_simple({}, 0).matrix() == IntMatrix{{2}});
    CHECK(realize_simple({2}, 0).matrix() == IntMatrix{{3}});
    CHECK(realize_simple({}, 1).matrix() == IntMatrix{{2, 1}, {1, 2}});
    CHECK_THROWS_AS(realize_simple({3, 2}, 0), input_error); // not a chain
    CHECK_THROWS_AS(realize_simple({1}, 0), input_error);
}

TEST_CASE("realize_simple round trip on random targets") {
    Rng rng(140330);
    for (int trial = 0; trial < 40; ++trial) {
        IntVec chain = cktest::random_divisor_chain(rng, 3, 12);
        std::size_t r = rng.uniform(0, 3);
        CKMatrix a = realize_simple(chain, r);
        CHECK(validate(a).ok());
        CHECK(sccs(a).components.size() == 1);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.entry(i, i) >= 2);
        CHECK(condition_K(a).holds);
        KData k = k_data(a);
        CHECK(k.k0.group() == AbelianGroup::from_invariant_factors(chain, r));
        CHECK(k.k1_group == AbelianGroup::free(r));
    }
}

TEST_CASE("extension_class pinned values") {
    CKMatrix three(IntMatrix{{3}});
    SUBCASE("generator of Z/2 (x) Z/2") {
        ClassInTensor c = extension_class(three, three, IntMatrix{{1}});
        CHECK(c.row_orders == IntVec{2});
        CHECK(c.col_orders == IntVec{2});
        CHECK(c.value == IntMatrix{{1}});
    }
    SUBCASE("an even block has trivial class") {
        CHECK(extension_class(three, three, IntMatrix{{2}}).value == IntMatrix{{0}});
    }
    SUBCASE("trivial target group forces class zero") {
        CKMatrix two(IntMatrix{{2}});
        ClassInTensor c = extension_class(three, two, IntMatrix{{7}});
        CHECK(c.col_orders.empty());
        CHECK(c.value.cols() == 0);
    }
}

TEST_CASE("positive_kernel examples") {
    CHECK(positive_kernel_vector(CKMatrix(IntMatrix{{2, 1}, {1, 2}})) == IntVec{2, 2});
    CHECK(positive_kernel_vector(CKMatrix(IntMatrix{{3}})) == IntVec{2});
    CHECK(positive_kernel_vector(CKMatrix(IntMatrix{{2, 0}, {0, 2}})) == IntVec{1, 1});
    CHECK_THROWS_AS(positive_kernel_vector(CKMatrix(IntMatrix{{1, 1}, {1, 1}})), input_error);
    IntMatrix p = positive_kernel_matrix(CKMatrix(IntMatrix{{3}}), 3);
    CHECK(p == IntMatrix{{2, 2, 2}});
}

TEST_CASE("realize_extension_class pinned values") {
    CKMatrix three(IntMatrix{{3}});
    CKMatrix two(IntMatrix{{2}});
    CHECK(realize_extension_class(three, three, IntMatrix{{1}}) == IntMatrix{{1}});
    CHECK(realize_extension_class(three, three, IntMatrix{{0}}) == IntMatrix{{2}});
    CHECK(realize_extension_class(two, two, IntMatrix(0, 0)) == IntMatrix{{1}});
    CHECK_THROWS_AS(realize_extension_class(three, three, IntMatrix(2, 2)), input_error);
}

TEST_CASE("class round trip over all torsion classes of random pairs") {
    Rng rng(55057);
    for (int trial = 0; trial < 25; ++trial) {
        CKMatrix a1 = cktest::random_irreducible_ck(rng, rng.uniform(1, 3), 4, 2);
        CKMatrix a2p = cktest::random_valid_ck(rng, rng.uniform(1, 3), 4);
        TensorClassSpace space(a1, a2p);
        for (const IntMatrix& beta : torsion_classes(space, 16)) {
            IntMatrix np = realize_extension_class(a1, a2p, beta);
            for (std::size_t i = 0; i < np.rows(); ++i)
                for (std::size_t j = 0; j < np.cols(); ++j) CHECK(np(i, j) >= 1);
            CHECK(extension_class(a1, a2p, np).value == space.reduce_coords(beta));
        }
    }
}

TEST_CASE("classes vanish on the kernel of q and ignore kernel shifts") {
    Rng rng(988776);
    for (int trial = 0; trial < 40; ++trial) {
        CKMatrix a1 = cktest::random_irreducible_ck(rng, rng.uniform(1, 3), 3, 2);
        CKMatrix a2p = cktest::random_valid_ck(rng, rng.uniform(1, 3), 3);
        TensorClassSpace space(a1, a2p);
        const std::size_t m1 = a1.size(), m2 = a2p.size();

        IntMatrix x = cktest::random_matrix(rng, m1, m2, -3, 3);
        IntMatrix y = cktest::random_matrix(rng, m1, m2, -3, 3);
        IntMatrix in_kernel =
            (a1.matrix() - IntMatrix::identity(m1)) * x +
            y * (a2p.matrix() - IntMatrix::identity(m2));
        CHECK(space.project(in_kernel).is_zero());

        IntMatrix np = cktest::random_matrix(rng, m1, m2, -3, 3);
        IntMatrix shifted = np + positive_kernel_matrix(a1, m2) * Int(rng.uniform(0, 3));
        CHECK(space.project(np) == space.project(shifted));
    }
}

TEST_CASE("assemble") {
    CKMatrix three(IntMatrix{{3}});
    SUBCASE("pinned two-block assembly") {
        CKMatrix a = assemble(three, three, OpenSet{0}, IntMatrix{{1}});
        CHECK(a.matrix() == IntMatrix{{3, 1}, {0, 3}});
    }
    SUBCASE("proper attach pads with zero columns") {
        // A2 is an antichain of two loops; attach only to its second point
        CKMatrix a2(IntMatrix{{2, 0}, {0, 2}});
        CKMatrix a = assemble(three, a2, OpenSet{1}, IntMatrix{{5}});
        CHECK(a.matrix() == IntMatrix{{3, 0, 5}, {0, 2, 0}, {0, 0, 2}});
    }
    SUBCASE("empty ideal is the base case") {
        CKMatrix a = assemble(three, CKMatrix(IntMatrix(0, 0)), OpenSet{}, IntMatrix(1, 0));
        CHECK(a.matrix() == IntMatrix{{3}});
    }
    SUBCASE("rejects non-positive connectors and bad attach sets") {
        CHECK_THROWS_AS(assemble(three, three, OpenSet{0}, IntMatrix{{0}}), input_error);
        CKMatrix chain(IntMatrix{{2, 1}, {0, 2}});
        CHECK_THROWS_AS(assemble(three, chain, OpenSet{0}, IntMatrix{{1}}), input_error);
    }
}

TEST_CASE("synthesize pinned outputs") {
    SUBCASE("single simple point") {
        TargetSpec spec{{TargetPoint{"x", {2}, 0, {}, {}}}};
        SynthesisResult r = synthesize(spec);
        CHECK(r.matrix.matrix() == IntMatrix{{3}});
        CHECK(r.all_green());
    }
    SUBCASE("two-point chain with the generator class") {
        TargetSpec spec{{TargetPoint{"base", {2}, 0, {}, {}},
                         TargetPoint{"top", {2}, 0, {"base"}, IntMatrix{{1}}}}};
        SynthesisResult r = synthesize(spec);
        CHECK(r.matrix.matrix() == IntMatrix{{3, 1}, {0, 3}});
        CHECK(r.all_green());
        // the generator class makes the middle extension non-split
        CHECK(k_data(r.matrix).k0.group() == AbelianGroup::from_invariant_factors({4}, 0));
    }
    SUBCASE("zero class on the same data splits the middle group") {
        TargetSpec spec{{TargetPoint{"base", {2}, 0, {}, {}},
                         TargetPoint{"top", {2}, 0, {"base"}, {}}}};
        SynthesisResult r = synthesize(spec);
        CHECK(r.matrix.matrix() == IntMatrix{{3, 2}, {0, 3}});
        CHECK(k_data(r.matrix).k0.group() == AbelianGroup::from_invariant_factors({2, 2}, 0));
    }
}

TEST_CASE("three-point chain of trivial K-data") {
    TargetSpec spec{{TargetPoint{"a", {}, 0, {}, {}},
                     TargetPoint{"b", {}, 0, {"a"}, {}},
                     TargetPoint{"c", {}, 0, {"a", "b"}, {}}}};
    SynthesisResult r = synthesize(spec);
    CHECK(r.all_green());
    REQUIRE(r.matrix.size() == 3);
    const IntMatrix& m = r.matrix.matrix();
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m(i, i) == 2); // [2] blocks on the diagonal
        for (std::size_t j = 0; j < i; ++j) CHECK(m(i, j) == 0);
        for (std::size_t j = i + 1; j < 3; ++j) CHECK(m(i, j) >= 1); // positive connectors
    }
    FKBundle b = fk(r.matrix);
    CHECK(b.opens.size() == 4);
    for (const FKBundle::Step& s : b.steps) CHECK(s.seq.exactness.exact);
}

TEST_CASE("non-chain posets synthesize") {
    SUBCASE("two maximal points over one minimal") {
        TargetSpec spec{{TargetPoint{"bottom", {2}, 0, {}, {}},
                         TargetPoint{"left", {}, 1, {"bottom"}, {}},
                         TargetPoint{"right", {3}, 0, {"bottom"}, {}}}};
        SynthesisResult r = synthesize(spec);
        CHECK(r.all_green());
        CondensationPoset p = prim_poset(r.matrix);
        CHECK(p.point_count() == 3);
    }
    SUBCASE("one maximal point over an antichain, via a direct sum") {
        TargetSpec spec{{TargetPoint{"p", {2}, 0, {}, {}},
                         TargetPoint{"q", {4}, 0, {}, {}},
                         TargetPoint{"top", {}, 0, {"p", "q"}, {}}}};
        SynthesisResult r = synthesize(spec);
        CHECK(r.all_green());
    }
}

TEST_CASE("synthesized matrices have exact six-term sequences throughout") {
    Rng rng(60901);
    for (int trial = 0; trial < 8; ++trial) {
        TargetSpec spec;
        std::size_t npoints = rng.uniform(1, 3);
        for (std::size_t k = 0; k < npoints; ++k) {
            TargetPoint pt;
            pt.name = "p" + std::to_string(k);
            pt.divisors = cktest::random_divisor_chain(rng, 2, 8);
            pt.free_rank = rng.uniform(0, 2);
            std::size_t take = rng.uniform(0, k);
            for (std::size_t i = 0; i < take; ++i) pt.attach.push_back("p" + std::to_string(i));
            spec.points.push_back(std::move(pt));
        }
        SynthesisResult r = synthesize(spec);
        CHECK(r.all_green());
        FKBundle b = fk(r.matrix); // six_term throws on any exactness failure
        for (const FKBundle::Step& s : b.steps) CHECK(s.seq.exactness.exact);
    }
}

TEST_CASE("synthesize input validation") {
    CHECK_THROWS_AS(synthesize(TargetSpec{}), input_error);
    // duplicate names
    CHECK_THROWS_AS(synthesize(TargetSpec{{TargetPoint{"x", {}, 0, {}, {}},
                                           TargetPoint{"x", {}, 0, {}, {}}}}),
                    input_error);
    // unknown attach target
    CHECK_THROWS_AS(synthesize(TargetSpec{{TargetPoint{"x", {}, 0, {"y"}, {}}}}), input_error);
    // attach set not open: {top} without its down-set
    TargetSpec not_open{{TargetPoint{"a", {}, 0, {}, {}},
                         TargetPoint{"b", {}, 0, {"a"}, {}},
                         TargetPoint{"c", {}, 0, {"b"}, {}}}};
    CHECK_THROWS_AS(synthesize(not_open), input_error);
    // beta shape mismatch
    TargetSpec bad_beta{{TargetPoint{"a", {2}, 0, {}, {}},
                         TargetPoint{"b", {2}, 0, {"a"}, IntMatrix{{1, 0}}}}};
    CHECK_THROWS_AS(synthesize(bad_beta), input_error);
    // beta on a direct-summand point
    TargetSpec stray_beta{{TargetPoint{"a", {2}, 0, {}, IntMatrix{{1}}}}};
    CHECK_THROWS_AS(synthesize(stray_beta), input_error);
}

TEST_CASE("synthesized matrices carry the requested nontrivial classes") {
    TargetSpec gen{{TargetPoint{"base", {4}, 0, {}, {}},
                    TargetPoint{"top", {6}, 0, {"base"}, IntMatrix{{1}}}}};
    SynthesisResult r = synthesize(gen);
    CHECK(r.all_green());
    REQUIRE(r.steps[1].recomputed.has_value());
    CHECK(r.steps[1].recomputed->value == IntMatrix{{1}});
    CHECK(r.steps[1].recomputed->row_orders == IntVec{6});
    CHECK(r.steps[1].recomputed->col_orders == IntVec{4});

    TargetSpec zero{{TargetPoint{"base", {4}, 0, {}, {}},
                     TargetPoint{"top", {6}, 0, {"base"}, {}}}};
    SynthesisResult rz = synthesize(zero);
    CHECK(rz.all_green());
    CHECK(rz.steps[1].recomputed->value == IntMatrix{{0}});
    CHECK(rz.matrix.matrix() != r.matrix.matrix());
}

} // TEST_SUITE
