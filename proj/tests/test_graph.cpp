#include <doctest.h>

#include "ck/graph.hpp"

#include "test_support.hpp"

using namespace ck;
using cktest::Rng;

TEST_SUITE("graph") {

TEST_CASE("validate") {
    CHECK(validate(IntMatrix{{2}}).ok());
    CHECK(validate(IntMatrix{{1, 1}, {1, 0}}).ok());

    ValidationReport r = validate(IntMatrix{{0, 1}, {0, 1}});
    CHECK(!r.ok());
    CHECK(r.zero_cols == std::vector<std::size_t>{0});
    CHECK(r.zero_rows.empty());

    CHECK(!validate(IntMatrix{{1, 2}, {3, 4}, {5, 6}}).square);
    CHECK(!validate(IntMatrix{{-1}}).ok());
    CHECK_THROWS_AS(checked_ck_matrix(IntMatrix{{0, 1}, {0, 1}}), input_error);
}

TEST_CASE("sccs") {
    SUBCASE("upper triangular splits") {
        SccDecomposition s = sccs(CKMatrix(IntMatrix{{2, 1}, {0, 3}}));
        REQUIRE(s.components.size() == 2);
        CHECK(s.components[0] == std::vector<std::size_t>{0});
        CHECK(s.components[1] == std::vector<std::size_t>{1});
        CHECK(s.dag_out[0].count(1) == 1);
        CHECK(s.dag_out[1].empty());
    }
    SUBCASE("full matrix is one component") {
        SccDecomposition s = sccs(CKMatrix(IntMatrix{{1, 1}, {1, 1}}));
        CHECK(s.components.size() == 1);
    }
    SUBCASE("three components in a chain") {
        SccDecomposition s = sccs(CKMatrix(IntMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 2}}));
        REQUIRE(s.components.size() == 3);
        CHECK(s.dag_out[0].count(1) == 1);
        CHECK(s.dag_out[1].count(2) == 1);
        CHECK(s.dag_out[0].count(2) == 0); // one-step edges only
    }
}

TEST_CASE("condition (K) basics") {
    CHECK(condition_K(CKMatrix(IntMatrix{{2}})).holds);
    CHECK(condition_K(CKMatrix(IntMatrix{{1, 1}, {1, 1}})).holds);
    ConditionKResult r = condition_K(CKMatrix(IntMatrix{{0, 1}, {1, 0}}));
    CHECK(!r.holds);
    CHECK(r.witness == std::vector<std::size_t>{0, 1});
    // a figure-eight satisfies (K) although its side vertices lie on a
    // single simple cycle each
    CHECK(condition_K(CKMatrix(IntMatrix{{0, 1, 1}, {1, 0, 0}, {1, 0, 0}})).holds);
}

TEST_CASE("condition (K) agrees with the return-path oracle") {
    Rng rng(424242);
    for (int trial = 0; trial < 600; ++trial) {
        CKMatrix a = cktest::random_valid_ck(rng, rng.uniform(1, 4), 2);
        CHECK(condition_K(a).holds == cktest::condition_k_bruteforce(a));
    }
}

TEST_CASE("prim_poset examples") {
    SUBCASE("two-point chain, quotient point closed") {
        CondensationPoset p = prim_poset(CKMatrix(IntMatrix{{2, 1}, {0, 3}}));
        REQUIRE(p.point_count() == 2);
        CHECK(p.leq(1, 0)); // the lower block is in every ideal containing the top
        CHECK(!p.leq(0, 1));
        CHECK(p.is_closed_point(0));
        CHECK(!p.is_closed_point(1));
        CHECK(p.smallest_open_neighbourhood(0) == OpenSet{0, 1});
    }
    SUBCASE("single point") {
        CHECK(prim_poset(CKMatrix(IntMatrix{{3}})).point_count() == 1);
    }
    SUBCASE("block diagonal gives incomparable points") {
        CondensationPoset p = prim_poset(CKMatrix(IntMatrix{{2, 0}, {0, 2}}));
        REQUIRE(p.point_count() == 2);
        CHECK(!p.leq(0, 1));
        CHECK(!p.leq(1, 0));
    }
    SUBCASE("rejected without Condition (K)") {
        CHECK_THROWS_AS(prim_poset(CKMatrix(IntMatrix{{0, 1}, {1, 0}})), input_error);
    }
}

TEST_CASE("open set counts") {
    CHECK(prim_poset(CKMatrix(IntMatrix{{2, 1}, {0, 3}})).open_sets().size() == 3);
    CHECK(prim_poset(CKMatrix(IntMatrix{{2, 0}, {0, 2}})).open_sets().size() == 4);
    CHECK(prim_poset(CKMatrix(IntMatrix{{2, 1, 0}, {0, 2, 1}, {0, 0, 2}})).open_sets().size() ==
          4);
}

TEST_CASE("open set count is monotone under extra cross edges") {
    Rng rng(90210);
    for (int trial = 0; trial < 40; ++trial) {
        CKMatrix a = cktest::random_condition_k_ck(rng, 2, 2);
        CKMatrix b = cktest::random_condition_k_ck(rng, 2, 2);
        IntMatrix diag = IntMatrix::block_diag(a.matrix(), b.matrix());
        std::size_t before = condensation_poset(CKMatrix(diag)).open_sets().size();
        IntMatrix joined = diag;
        joined(rng.uniform(0, a.size() - 1), a.size() + rng.uniform(0, b.size() - 1)) += 1;
        std::size_t after = condensation_poset(CKMatrix(joined)).open_sets().size();
        CHECK(after <= before);
    }
}

TEST_CASE("ideal_vertices examples") {
    CKMatrix a(IntMatrix{{2, 1}, {0, 3}});
    CondensationPoset p = prim_poset(a);
    CHECK(ideal_vertices(a, p, OpenSet{1}) == std::vector<std::size_t>{1});
    CHECK(ideal_vertices(a, p, OpenSet{0, 1}) == std::vector<std::size_t>{0, 1});
    CHECK(ideal_vertices(a, p, OpenSet{}).empty());
    CHECK_THROWS_AS(ideal_vertices(a, p, OpenSet{0}), input_error); // {0} is not open
}

TEST_CASE("transition vertices are absorbed into the ideal") {
    // vertex 1 lies on no cycle and feeds only the bottom component
    CKMatrix a(IntMatrix{{2, 1, 0}, {0, 0, 1}, {0, 0, 3}});
    CondensationPoset p = prim_poset(a);
    REQUIRE(p.point_count() == 2);
    std::vector<std::size_t> h = ideal_vertices(a, p, OpenSet{1});
    CHECK(h == std::vector<std::size_t>{1, 2});
    CKMatrix sub = submatrix(a, h);
    ValidationReport vr = validate(sub);
    CHECK(vr.zero_rows.empty());
    CHECK(vr.zero_cols == std::vector<std::size_t>{0}); // flagged, not fatal
}

TEST_CASE("submatrix examples") {
    CKMatrix a(IntMatrix{{2, 1}, {0, 3}});
    std::vector<std::size_t> ideal{1}, quot{0}, all{0, 1};
    CHECK(submatrix(a, ideal).matrix() == IntMatrix{{3}});
    CHECK(submatrix(a, quot).matrix() == IntMatrix{{2}});
    CHECK(submatrix(a, all).matrix() == a.matrix());
}

TEST_CASE("ideals are hereditary and quotients keep their rows") {
    Rng rng(555);
    for (int trial = 0; trial < 60; ++trial) {
        CKMatrix a = cktest::random_condition_k_ck(rng, rng.uniform(1, 5), 3);
        CondensationPoset p = prim_poset(a);
        for (const OpenSet& u : p.open_sets()) {
            std::vector<std::size_t> h = ideal_vertices(a, p, u);
            std::vector<bool> in(a.size(), false);
            for (std::size_t v : h) in[v] = true;
            for (std::size_t v : h)
                for (std::size_t w = 0; w < a.size(); ++w)
                    if (a.entry(v, w) > 0) CHECK(in[w]); // hereditary
            std::vector<std::size_t> rest;
            for (std::size_t v = 0; v < a.size(); ++v)
                if (!in[v]) rest.push_back(v);
            if (!rest.empty()) {
                ValidationReport vr = validate(submatrix(a, rest));
                CHECK(vr.zero_rows.empty());
            }
        }
    }
}

TEST_CASE("a fully connected block matrix is a two-point chain") {
    Rng rng(8822);
    for (int trial = 0; trial < 30; ++trial) {
        CKMatrix a1 = cktest::random_irreducible_ck(rng, rng.uniform(1, 3), 2, 2);
        CKMatrix a2 = cktest::random_irreducible_ck(rng, rng.uniform(1, 3), 2, 2);
        IntMatrix n(a1.size(), a2.size());
        for (std::size_t i = 0; i < n.rows(); ++i)
            for (std::size_t j = 0; j < n.cols(); ++j) n(i, j) = rng.uniform(1, 2);
        CKMatrix whole(IntMatrix::block_upper(a1.matrix(), n, a2.matrix()));
        CondensationPoset p = prim_poset(whole);
        REQUIRE(p.point_count() == 2);
        std::size_t top = p.point_vertices(0).front() < a1.size() ? 0 : 1;
        CHECK(p.leq(1 - top, top));
        CHECK(p.is_closed_point(top));
    }
}

TEST_CASE("poset isomorphism search") {
    CondensationPoset chain = prim_poset(CKMatrix(IntMatrix{{2, 1}, {0, 3}}));
    CondensationPoset chain2 = prim_poset(CKMatrix(IntMatrix{{4, 0}, {2, 2}}));
    CondensationPoset anti = prim_poset(CKMatrix(IntMatrix{{2, 0}, {0, 2}}));
    CHECK(posets_isomorphic(chain, chain2));
    CHECK(!posets_isomorphic(chain, anti));
}

} // TEST_SUITE
