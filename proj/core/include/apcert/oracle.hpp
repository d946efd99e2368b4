#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apcert/ap_engine.hpp"
#include "apcert/bounds.hpp"
#include "apcert/group.hpp"
#include "apcert/rational.hpp"

namespace apcert {

struct ExactSearchOptions {
    int max_size = 24;
    int threads = 1;
    /// How many optimal colorings to keep (the numerically smallest in
    /// bitmask order, deterministic for any thread count).
    int coloring_cap = 4;
    /// Recheck the running count from scratch at pseudo-random checkpoints.
    int incremental_checks = 0;
    /// Optional JSON results cache: hits skip the search entirely.
    std::string cache_path;
};

/// Result of an exhaustive minimum search over all 2-colorings.
struct ExactResult {
    std::string group;
    int k = 3;
    long exact_min = 0;
    std::vector<std::string> optimal_colorings;  // "+-..." with identity fixed to '+'
    unsigned long long colorings_searched = 0;
    double elapsed_seconds = 0.0;
    bool from_cache = false;

    nlohmann::json to_json() const;
};

/// Exact R(k, G, 2) over all 2^|G| colorings by Gray-code incremental
/// updates; the identity's color is fixed (global color swap preserves the
/// count), halving the search. Shards deterministically on the top
/// ceil(log2(threads)) bits.
ExactResult exact_min(const FiniteGroup& g, int k = 3, const ExactSearchOptions& opts = {});

struct BoundCheck {
    std::string group;
    Rational bound;
    Integer bound_ceil;
    long exact = 0;
    long slack = 0;  // exact - ceil(bound)
    bool pass = false;

    nlohmann::json to_json() const;
};

/// ceil(theorem1_bound) <= exact minimum, with the slack.
BoundCheck verify_bound(const FiniteGroup& g, const ExactSearchOptions& opts = {});

struct DihedralCheck {
    int n = 0;
    long dihedral_exact = 0;
    long cyclic_exact = 0;
    bool pass = false;  // R(3, D_2n, 2) == 2 R(3, Z_n, 2)

    nlohmann::json to_json() const;
};

DihedralCheck dihedral_identity_check(int n, const ExactSearchOptions& opts = {});

/// Constants of the cyclic-group bound table, keyed by n mod 24:
/// n^2/8 - c1 n + c2 <= R(3, Z_n, 2) <= n^2/8 - c1 n + c3.
struct CyclicRowConstants {
    Rational c1, c2, c3;
};
CyclicRowConstants cyclic_constants(int n_mod_24);

struct CyclicCheck {
    int n = 0;
    Rational lower, upper;
    long exact = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

CyclicCheck cyclic_table_check(int n, const ExactSearchOptions& opts = {});

}  // namespace apcert
