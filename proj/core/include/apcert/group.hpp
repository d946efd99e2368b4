#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace apcert {

/// Thrown when a construction or enumeration would exceed a configured budget.
class SizeLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown by Cayley-table ingestion; kind() names the violated group axiom.
class TableValidationError : public std::runtime_error {
  public:
    enum class Kind {
        BadShape,
        BadIndex,
        NotLatinSquare,
        NoIdentity,
        MissingInverse,
        NotAssociative,
    };

    TableValidationError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// Global ceiling on constructible group orders. Defaults to 40320 (= |S8|)
/// and can be overridden with the APCERT_MAX_ORDER environment variable or
/// set_max_group_order(). Hard-capped at 65535 by the index storage type.
int max_group_order();
void set_max_group_order(int n);

/// Finite group as a dense multiplication table over element indices
/// 0..n-1. The identity is always index 0. Immutable after construction,
/// so all operations on it are safe to call concurrently.
class FiniteGroup {
  public:
    FiniteGroup(int n, std::vector<uint16_t> mul, std::vector<std::string> labels,
                std::string descriptor);

    int order() const { return n_; }
    int mul(int i, int j) const { return mul_[static_cast<size_t>(i) * n_ + j]; }
    int inv(int i) const { return inv_[i]; }
    int identity() const { return 0; }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Human-readable construction descriptor, e.g. "Z5" or "Z2 x Z4".
    const std::string& descriptor() const { return descriptor_; }

    /// g^e for e >= 0 by repeated table lookups.
    int power(int g, long e) const;

  private:
    int n_;
    std::vector<uint16_t> mul_;
    std::vector<uint16_t> inv_;
    std::vector<std::string> labels_;
    std::string descriptor_;
};

/// Census of element orders: counts[k] = number of elements of order k.
struct OrderProfile {
    std::map<long, long> counts;

    long total() const;
    long count(long k) const;
    /// lcm of all element orders.
    long exponent() const;
    std::string to_string() const;

    bool operator==(const OrderProfile&) const = default;
};

// -- constructions ----------------------------------------------------------

/// Z_n with mul[i][j] = (i + j) mod n.
FiniteGroup build_cyclic(int n);

/// Dihedral group of order 2n (rotations r^0..r^{n-1} then reflections).
FiniteGroup build_dihedral(int n);

/// S_m as a Cayley table over all m! permutations in lexicographic rank
/// order, so element indices are reproducible across runs.
FiniteGroup build_symmetric(int m);

FiniteGroup build_direct_product(const FiniteGroup& g, const FiniteGroup& h);

struct IngestResult {
    FiniteGroup group;
    /// relabeling[old_index] = new index (identity moved to 0).
    std::vector<int> relabeling;
};

/// Validates an arbitrary Cayley table (Latin square, two-sided identity,
/// inverses, associativity) and renumbers the identity to index 0.
/// Associativity is checked exhaustively for n <= 256 and by randomized
/// triple sampling above that.
IngestResult from_cayley_table(const std::vector<std::vector<int>>& table,
                               const std::vector<std::string>& labels = {});

// -- element arithmetic ------------------------------------------------------

/// Smallest k >= 1 with g^k = identity.
int element_order(const FiniteGroup& g, int elem);

OrderProfile order_profile(const FiniteGroup& g);

/// Count of t in 1..k coprime to k, via trial-division factorization.
long euler_phi(long k);

/// Order profile of S_m computed from cycle types by iterating the m!
/// permutations directly; no Cayley table is materialized, so this works
/// for S8 where the dense table would not be reasonable to build.
OrderProfile symmetric_group_order_profile(int m);

// -- group spec mini-language -------------------------------------------------
//
//   Z<n>        cyclic of order n
//   D<2n>       dihedral of order 2n (the number is the group order)
//   S<m>        symmetric on m letters
//   A x B       direct product (left-associative)
//   @file.json  Cayley table: {"n": int, "mul": [[int]], "labels": [string]?}

/// Builds the dense group for a spec string. Throws std::invalid_argument on
/// parse errors (message carries the offending position) and SizeLimitError
/// past the order ceiling.
FiniteGroup build_group(const std::string& spec);

/// Order and order profile for a spec, computed without materializing the
/// Cayley table whenever the spec is a product of Z/D/S factors. Used for
/// groups (S8) whose profile is needed but whose table is not.
struct GroupFacts {
    std::string spec;
    long order = 0;
    OrderProfile profile;
};
GroupFacts group_facts(const std::string& spec);

}  // namespace apcert
