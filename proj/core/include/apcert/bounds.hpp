#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apcert/group.hpp"
#include "apcert/rational.hpp"

namespace apcert {

/// Everything the closed-form lower-bound evaluation produces for one group.
/// All arithmetic is exact rational; floats never enter here.
struct BoundReport {
    std::string group;
    long n = 0;
    OrderProfile profile;
    std::vector<long> k_set;                          // orders contributing to the bound
    std::vector<std::pair<long, Rational>> per_k;     // (k, contribution)
    Rational bound = 0;                               // sum over K of (N N_k / 8)(1 - 3(k-phi)/phi)
    Rational total_aps_theorem = 0;                   // sum_{k>=4} N N_k/2 + N N_3/24
    Rational total_aps_proof = 0;                     // sum_{k>=4} N N_k/2 + N N_3/6

    nlohmann::json to_json() const;
    /// Table row: group, total 3-APs (theorem variant), lower bound.
    std::string to_table_row() const;
};

/// The subset of the given orders with k >= 5 and 4*phi(k) >= 3*k, sorted.
std::vector<long> k_set(const std::vector<long>& orders);

BoundReport make_bound_report(const GroupFacts& facts);
BoundReport make_bound_report(const FiniteGroup& g);

Rational theorem1_bound(const FiniteGroup& g);
Rational theorem1_bound(const GroupFacts& facts);

/// Theorem-statement total (the /24 variant the reproduced table uses).
Rational total_aps_theorem_formula(const GroupFacts& facts);
Rational total_aps_theorem_formula(const FiniteGroup& g);

/// Proof-text total (the /6 variant; matches distinct-set enumeration).
Rational total_aps_proof_formula(const GroupFacts& facts);
Rational total_aps_proof_formula(const FiniteGroup& g);

/// Monochromatic-count lower bound (lambda + T)/4 from a certified lower
/// bound lambda on p_G over the box, with T the total AP count. May be
/// fractional; its ceiling is the integer bound.
double bound_from_lambda(double lambda, const Rational& total_aps);

/// The two total formulas disagree whenever the group has elements of
/// order 3 (the /24 vs /6 discrepancy between theorem statement and proof).
bool total_formulas_disagree(const GroupFacts& facts);

}  // namespace apcert
