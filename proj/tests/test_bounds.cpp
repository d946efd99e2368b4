#include <doctest.h>

#include "apcert/ap_engine.hpp"
#include "apcert/bounds.hpp"
#include "apcert/group.hpp"

using namespace apcert;

TEST_CASE("k_set") {
    std::vector<long> all;
    for (long k = 1; k <= 25; ++k) all.push_back(k);
    CHECK(k_set(all) == std::vector<long>{5, 7, 11, 13, 17, 19, 23, 25});
    CHECK(k_set({6, 8, 9, 10, 12}).empty());
    CHECK(k_set({35}).empty());
    CHECK_THROWS_AS(k_set({0}), std::invalid_argument);
}

TEST_CASE("theorem bound on symmetric groups") {
    CHECK(theorem1_bound(group_facts("S5")) == Rational(90));
    CHECK(theorem1_bound(group_facts("S6")) == Rational(3240));
    CHECK(theorem1_bound(group_facts("S7")) == Rational(306180));
    CHECK(theorem1_bound(group_facts("S8")) == Rational(16208640));
}

TEST_CASE("theorem bound on small groups") {
    CHECK(theorem1_bound(build_cyclic(5)) == make_rational(5, 8));
    CHECK(theorem1_bound(build_cyclic(7)) == make_rational(21, 8));
    CHECK(theorem1_bound(build_cyclic(8)) == 0);   // orders 1,2,4,8 all miss K
    CHECK(theorem1_bound(build_cyclic(6)) == 0);
    CHECK(theorem1_bound(build_symmetric(3)) == 0);
}

TEST_CASE("bound is nonnegative with per-k terms positive exactly on K") {
    for (const char* spec : {"Z4", "Z10", "Z15", "S4", "D12", "Z25"}) {
        BoundReport r = make_bound_report(group_facts(spec));
        CHECK(r.bound >= 0);
        for (const auto& [k, term] : r.per_k) {
            CHECK(4 * euler_phi(k) >= 3 * k);
            bool strict = 4 * euler_phi(k) > 3 * k;
            CHECK((strict ? term > 0 : term == 0));
        }
        if (r.k_set.empty()) CHECK(r.bound == 0);
    }
}

TEST_CASE("total AP formulas") {
    CHECK(total_aps_theorem_formula(group_facts("S5")) == Rational(4540));
    CHECK(total_aps_theorem_formula(group_facts("S6")) == Rational(205440));
    CHECK(total_aps_theorem_formula(group_facts("S7")) == Rational(11307660));
    CHECK(total_aps_theorem_formula(group_facts("S3")) == make_rational(1, 2));
    CHECK_FALSE(rat_is_integer(total_aps_theorem_formula(group_facts("S3"))));

    // The S8 theorem-formula total on the true order profile. The commonly
    // quoted 774278400 for this cell is inconsistent with every order census;
    // the verify report flags the discrepancy.
    CHECK(total_aps_theorem_formula(group_facts("S8")) == Rational(774681600));

    CHECK(total_aps_proof_formula(group_facts("S3")) == Rational(2));
    CHECK(total_aps_proof_formula(group_facts("Z5")) == Rational(10));
    CHECK(total_aps_proof_formula(group_facts("S5")) == Rational(4840));
}

TEST_CASE("proof formula equals enumeration") {
    for (const char* spec :
         {"Z4", "Z5", "Z6", "Z12", "Z24", "S3", "S4", "D8", "D16", "Z2 x Z4", "Z3 x Z3"}) {
        FiniteGroup g = build_group(spec);
        long enumerated = static_cast<long>(enumerate_aps(g, 3).size());
        CAPTURE(spec);
        CHECK(Rational(enumerated) == total_aps_proof_formula(g));
    }
}

TEST_CASE("bound_from_lambda") {
    CHECK(bound_from_lambda(-7.5, Rational(10)) == doctest::Approx(0.625));
    CHECK(bound_from_lambda(-10.0, Rational(10)) == doctest::Approx(0.0));
    CHECK(bound_from_lambda(-10.5, Rational(21)) == doctest::Approx(2.625));
}

TEST_CASE("bound report serialization") {
    BoundReport r = make_bound_report(group_facts("S5"));
    auto j = r.to_json();
    CHECK(j["group"] == "S5");
    CHECK(j["bound"] == "90");
    CHECK(j["total_aps_theorem"] == "4540");
    CHECK(j["total_aps_proof"] == "4840");
    CHECK(j["totals_disagree"] == true);
    CHECK(r.to_table_row() == "S5\t4540\t90");

    BoundReport z5 = make_bound_report(build_cyclic(5));
    CHECK(z5.to_json()["bound"] == "5/8");
    CHECK(z5.to_json()["bound_ceil"] == "1");
    CHECK(z5.to_json()["totals_disagree"] == false);
}
