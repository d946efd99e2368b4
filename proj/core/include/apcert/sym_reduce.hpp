#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "apcert/ap_engine.hpp"
#include "apcert/group.hpp"
#include "apcert/sdp_problem.hpp"

namespace apcert {

/// Permutation of the monomial index set Z = {1} u G: index 0 is the
/// constant slot (always fixed), index g+1 is group element g.
struct ActionGenerator {
    std::string name;
    std::vector<int> perm;
    /// Whether the generator fixes the group identity's slot; these
    /// generators make up the stabilizer used for multiplier blocks.
    bool fixes_identity = false;
};

struct PermAction {
    int z_size = 0;
    std::vector<ActionGenerator> generators;

    /// Subaction of the generators fixing the group identity's slot.
    PermAction identity_stabilizer() const;
};

struct SymmetryGenOptions {
    bool include_inversion = true;
    /// Power maps g -> g^u for u coprime to the exponent (the affine
    /// multipliers of the cyclic case), admitted per the runtime check.
    bool include_automorphisms = true;
    ApEnumOptions enumeration;
};

struct SymmetryGenResult {
    PermAction action;
    std::vector<std::string> admitted;
    /// Candidates that failed the AP-preservation check, with diagnostics.
    /// Never silently included.
    std::vector<std::string> rejected;
};

/// Generators of an AP-preserving action on {1} u G: left translations,
/// right translations, conjugations, optionally inversion and power maps.
/// Every candidate is verified to map enumerate_aps(G,3) onto itself before
/// being admitted.
SymmetryGenResult symmetry_generators(const FiniteGroup& g, const SymmetryGenOptions& opts = {});

/// The commutant's {0,1} orbit basis E_1..E_d: orbits of the diagonal action
/// on Z x Z, numbered by least pair, with transpose involution and norms
/// |E_i| = tr(E_i^T E_i).
struct OrbitBasis {
    int z = 0;
    int d = 0;
    std::vector<int> orbit_of;  // z*z entries, row-major pair -> orbit id
    std::vector<std::vector<std::pair<int, int>>> orbits;
    std::vector<int> transpose_map;
    std::vector<long> norms;

    int orbit(int i, int j) const { return orbit_of[static_cast<size_t>(i) * z + j]; }
};

OrbitBasis orbit_basis(const PermAction& action, long budget = 1000000);

/// Debug view: orbit id -> list of index pairs, plus transpose map and norms.
nlohmann::json orbit_basis_to_json(const OrbitBasis& basis);

/// Structure constants p_{ij}^k of the E-basis (E_i E_j = sum_k p E_k),
/// the normalized multiplication parameters lambda, and the L-matrices of
/// the *-isomorphism ((L_k)_{ij} = lambda_{k,j}^i).
struct MultiplicationTable {
    int d = 0;
    std::vector<long> p;         // (i*d + j)*d + k
    std::vector<double> lambda;  // same layout
    std::vector<Eigen::MatrixXd> L;

    long p_at(int i, int j, int k) const {
        return p[(static_cast<size_t>(i) * d + j) * d + k];
    }
    double lambda_at(int i, int j, int k) const {
        return lambda[(static_cast<size_t>(i) * d + j) * d + k];
    }
};

MultiplicationTable multiplication_table(const OrbitBasis& basis, long budget = 100000000);

Eigen::MatrixXd orbit_matrix(const OrbitBasis& basis, int i);             // E_i
Eigen::MatrixXd normalized_orbit_matrix(const OrbitBasis& basis, int i);  // B_i

/// Sums each constraint over the orbit of its monomial family so that every
/// matrix becomes constant on the action's orbits; equivalent on invariant
/// solutions. Constraints that aggregate to zero rows are dropped.
SdpProblem aggregate_invariant_constraints(const SdpProblem& problem, const PermAction& action);

/// Schrijver-style reduction of an invariant PrimalTrace problem to the
/// ReducedLmi form over d scalar variables per block. Every objective and
/// constraint matrix must be constant on the basis orbits; a violation
/// raises std::invalid_argument naming the offending matrix and orbit.
SdpProblem reduce_sdp(const SdpProblem& problem, const OrbitBasis& basis,
                      const MultiplicationTable& table);

/// X_b = sum_j x_{b,j} B_j for each block of a reduced problem's solution.
std::vector<Eigen::MatrixXd> lift_reduced_solution(const SdpProblem& reduced,
                                                   const OrbitBasis& basis,
                                                   const std::vector<double>& x);

/// Enumerates the full permutation group generated by the action (BFS over
/// compositions). Used by the group-averaging checks; budget-guarded.
std::vector<std::vector<int>> closure_permutation_group(const PermAction& action,
                                                        size_t budget = 1000000);

/// Reynolds average (1/|H|) sum_h P_h X P_h^T over the closure of the action.
Eigen::MatrixXd group_average(const PermAction& action, const Eigen::MatrixXd& x);

}  // namespace apcert
