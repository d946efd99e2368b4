#include <doctest.h>

#include <cstdio>
#include <random>

#include "apcert/ap_engine.hpp"
#include "apcert/group.hpp"
#include "apcert/oracle.hpp"

using namespace apcert;

TEST_CASE("exact minima of small cyclic groups") {
    CHECK(exact_min(build_cyclic(5)).exact_min == 1);
    CHECK(exact_min(build_cyclic(4)).exact_min == 0);
    CHECK(exact_min(build_cyclic(7)).exact_min == 3);
}

TEST_CASE("stored optimal colorings reproduce the minimum") {
    for (const char* spec : {"Z5", "Z7", "Z12", "S3", "D8"}) {
        FiniteGroup g = build_group(spec);
        ExactResult r = exact_min(g);
        CAPTURE(spec);
        CHECK(!r.optimal_colorings.empty());
        for (const auto& text : r.optimal_colorings) {
            Coloring chi = parse_coloring(text, g.order());
            CHECK(chi.values[0] == 1);  // identity fixed by the color-swap symmetry
            CHECK(count_monochromatic_direct(g, chi, 3) == r.exact_min);
        }
    }
}

TEST_CASE("random colorings never beat the minimum") {
    std::mt19937_64 rng(17);
    for (const char* spec : {"Z9", "D10", "Z2 x Z4"}) {
        FiniteGroup g = build_group(spec);
        long best = exact_min(g).exact_min;
        for (int trial = 0; trial < 100; ++trial) {
            Coloring chi;
            for (int i = 0; i < g.order(); ++i)
                chi.values.push_back(rng() & 1 ? 1 : -1);
            CHECK(count_monochromatic_direct(g, chi, 3) >= best);
        }
    }
}

TEST_CASE("color swap preserves the count") {
    std::mt19937_64 rng(23);
    FiniteGroup g = build_group("D12");
    for (int trial = 0; trial < 50; ++trial) {
        Coloring chi, neg;
        for (int i = 0; i < g.order(); ++i) {
            int8_t v = rng() & 1 ? 1 : -1;
            chi.values.push_back(v);
            neg.values.push_back(static_cast<int8_t>(-v));
        }
        CHECK(count_monochromatic_direct(g, chi, 3) == count_monochromatic_direct(g, neg, 3));
    }
}

TEST_CASE("incremental search agrees with from-scratch recounts") {
    ExactSearchOptions opts;
    opts.incremental_checks = 1000;
    CHECK_NOTHROW(exact_min(build_cyclic(12), 3, opts));
    CHECK_NOTHROW(exact_min(build_symmetric(3), 3, opts));
    CHECK_NOTHROW(exact_min(build_dihedral(7), 3, opts));
}

TEST_CASE("thread count does not change the result") {
    FiniteGroup g = build_cyclic(13);
    ExactSearchOptions one, two, three;
    one.threads = 1;
    two.threads = 2;
    three.threads = 3;
    ExactResult r1 = exact_min(g, 3, one);
    ExactResult r2 = exact_min(g, 3, two);
    ExactResult r3 = exact_min(g, 3, three);
    CHECK(r1.exact_min == r2.exact_min);
    CHECK(r1.exact_min == r3.exact_min);
    CHECK(r1.optimal_colorings == r2.optimal_colorings);
    CHECK(r1.optimal_colorings == r3.optimal_colorings);
    CHECK(r1.colorings_searched == r2.colorings_searched);
}

TEST_CASE("size limit") {
    ExactSearchOptions opts;
    opts.max_size = 8;
    CHECK_THROWS_AS(exact_min(build_cyclic(9), 3, opts), SizeLimitError);
}

TEST_CASE("k > 3 searches") {
    // Z8 has 4 elements of order 8, so 4-term and 5-term APs exist.
    ExactResult r4 = exact_min(build_cyclic(8), 4);
    CHECK(r4.k == 4);
    CHECK(r4.exact_min >= 0);
    ExactResult trivial = exact_min(build_cyclic(4), 5);
    CHECK(trivial.exact_min == 0);
    CHECK(trivial.colorings_searched == 0);  // no 5-term APs at all
}

TEST_CASE("results cache round trip") {
    std::string path = "oracle_cache_test.json";
    std::remove(path.c_str());
    ExactSearchOptions opts;
    opts.cache_path = path;
    ExactResult first = exact_min(build_cyclic(11), 3, opts);
    CHECK_FALSE(first.from_cache);
    ExactResult second = exact_min(build_cyclic(11), 3, opts);
    CHECK(second.from_cache);
    CHECK(second.exact_min == first.exact_min);
    CHECK(second.optimal_colorings == first.optimal_colorings);
    std::remove(path.c_str());
}

TEST_CASE("bound verification") {
    BoundCheck z5 = verify_bound(build_cyclic(5));
    CHECK(z5.pass);
    CHECK(z5.bound == make_rational(5, 8));
    CHECK(z5.bound_ceil == 1);
    CHECK(z5.exact == 1);
    CHECK(z5.slack == 0);  // sharp

    BoundCheck z8 = verify_bound(build_cyclic(8));
    CHECK(z8.pass);
    CHECK(z8.bound == 0);
    CHECK(z8.exact == 0);

    BoundCheck s3 = verify_bound(build_symmetric(3));
    CHECK(s3.pass);
    CHECK(s3.bound == 0);
}

TEST_CASE("dihedral identity") {
    DihedralCheck d3 = dihedral_identity_check(3);
    CHECK(d3.pass);
    CHECK(d3.cyclic_exact == 0);

    DihedralCheck d5 = dihedral_identity_check(5);
    CHECK(d5.pass);
    CHECK(d5.dihedral_exact == 2);

    DihedralCheck d4 = dihedral_identity_check(4);
    CHECK(d4.pass);
    CHECK(d4.dihedral_exact == 0);
}

TEST_CASE("cyclic constants table rows") {
    CHECK(cyclic_constants(7).c1 == make_rational(1, 2));
    CHECK(cyclic_constants(7).c2 == make_rational(3, 8));
    CHECK(cyclic_constants(8).c1 == 1);
    CHECK(cyclic_constants(8).c3 == 0);
    CHECK(cyclic_constants(12).c3 == 18);
    CHECK(cyclic_constants(0).c1 == make_rational(5, 3));
    CHECK(cyclic_constants(9).c3 == make_rational(27, 8));
    CHECK(cyclic_constants(18).c2 == make_rational(1, 2));
}

TEST_CASE("cyclic table checks") {
    CyclicCheck n7 = cyclic_table_check(7);
    CHECK(n7.pass);
    CHECK(n7.lower == 3);
    CHECK(n7.upper == 3);
    CHECK(n7.exact == 3);

    CyclicCheck n8 = cyclic_table_check(8);
    CHECK(n8.pass);
    CHECK(n8.exact == 0);

    CyclicCheck n12 = cyclic_table_check(12);
    CHECK(n12.pass);
    CHECK(n12.lower == -2);
    CHECK(n12.upper == 16);
}
