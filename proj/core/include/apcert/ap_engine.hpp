#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "apcert/group.hpp"

namespace apcert {

/// A k-term arithmetic progression {a, b·a, ..., b^{k-1}·a} stored as the
/// underlying element set. Different generating pairs can reach the same
/// set; every such pair is a witness (storage capped).
struct ApSet {
    std::vector<int> elements;                    // sorted, distinct
    std::vector<std::pair<int, int>> witnesses;   // (a, b) pairs, first found first
};

/// 2-coloring of a group, entries in {-1, +1}.
struct Coloring {
    std::vector<int8_t> values;

    static Coloring constant(int n, int8_t v);
};

/// Parses "+-+-..." or a JSON array of +/-1 literals.
Coloring parse_coloring(const std::string& text, int expected_size);

/// Renders as a +/- string.
std::string coloring_to_string(const Coloring& chi);

struct ApEnumOptions {
    /// Full enumeration is refused above this order unless force is set;
    /// larger groups are served by the closed-form counting in bounds.
    int max_enumeration_order = 5040;
    bool force = false;
    int witness_cap = 8;
};

/// All distinct k-element AP sets of G, sorted by element tuple.
/// Iterates (a, b) over G x {b : ord(b) >= k}; identical sets reached from
/// different pairs are returned once with all witnesses recorded.
std::vector<ApSet> enumerate_aps(const FiniteGroup& g, int k, const ApEnumOptions& opts = {});

/// Coefficients of the pair quadratic form p_G: coeff(a,b) counts how many
/// 3-AP sets contain both a and b.
class PairCoefficients {
  public:
    PairCoefficients(int n, long total_aps, std::unordered_map<uint64_t, long> coeffs)
        : n_(n), total_aps_(total_aps), coeffs_(std::move(coeffs)) {}

    long coeff(int a, int b) const;
    long total_aps() const { return total_aps_; }
    int group_order() const { return n_; }
    /// Sum of all unordered-pair coefficients (= 3 * total_aps).
    long coefficient_sum() const;
    const std::unordered_map<uint64_t, long>& raw() const { return coeffs_; }

    static uint64_t key(int a, int b);

  private:
    int n_;
    long total_aps_;
    std::unordered_map<uint64_t, long> coeffs_;
};

PairCoefficients pair_coefficients(const FiniteGroup& g, const ApEnumOptions& opts = {});

/// Number of AP sets that are monochromatic under chi, by direct inspection.
long count_monochromatic_direct(const FiniteGroup& g, const Coloring& chi, int k,
                                const ApEnumOptions& opts = {});

/// Same count through the indicator polynomial
///   ((1+x_{a_1})...(1+x_{a_k}) + (1-x_{a_1})...(1-x_{a_k})) / 2^k,
/// evaluated in exact integer arithmetic. Agrees with the direct count on
/// every +/-1 coloring.
long count_monochromatic_indicator(const FiniteGroup& g, const Coloring& chi, int k,
                                   const ApEnumOptions& opts = {});

/// Value of p_G = sum over APs of x_a x_b + x_a x_c + x_b x_c at a point of
/// the box [-1,1]^|G|.
double evaluate_pg(const FiniteGroup& g, const std::vector<double>& x,
                   const ApEnumOptions& opts = {});

/// One "{"elements":[...],"witnesses":[[a,b],...]}" line per AP set.
void write_ap_json_lines(std::ostream& os, const std::vector<ApSet>& aps);

}  // namespace apcert
