#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apcert/ap_engine.hpp"
#include "apcert/group.hpp"
#include "apcert/sdp_problem.hpp"
#include "apcert/sym_reduce.hpp"

namespace apcert {

// -- degree-3 Putinar relaxation builder --------------------------------------

struct PutinarBuildOptions {
    int max_full_order = 64;
    int max_symmetric_order = 512;
    ApEnumOptions enumeration;
};

/// Builds the degree-3 Putinar relaxation of min p_G over [-1,1]^|G| as a
/// PrimalTrace SDP whose PSD variable holds the Gram blocks.
///
/// Full mode: blocks Q0 and Q_g^+/Q_g^- for every g (2|G|+1 blocks of size
/// |G|+1) with one equality constraint per monomial of degree 1..3 appearing
/// in the expansion. lambda is folded into the objective: maximizing
/// -(sum of the blocks' (1,1) entries) is maximizing the certified bound, and
/// the constant monomial matches by construction.
///
/// Symmetric mode: three blocks Q0, Q+, Q- of size |G|+1; the multiplier
/// block for g is the representative conjugated by the left-translation
/// permutation. Entry-equality constraints are imposed from the runtime
/// admitted symmetry generators: the full action on Q0, its identity
/// stabilizer on Q+/Q-.
SdpProblem build_putinar_degree3(const FiniteGroup& g, PutinarMode mode,
                                 const PutinarBuildOptions& opts = {});

/// Monomials of degree <= 3 are keyed by their sorted variable multiset.
/// Exposed for tests that count constraints against the monomial universe.
int count_monomials_up_to_degree3(int n_vars);

// -- SDPA sparse format ---------------------------------------------------------

/// Writes the problem in sparse SDPA format (.dat-s): constraint count,
/// block count, block sizes (negative = diagonal), the b vector, then
/// "matno blkno i j value" quintuples (1-based upper triangle, matno 0 for
/// the objective) with 17 significant digits.
void export_sdpa(const SdpProblem& problem, std::ostream& os);
void export_sdpa(const SdpProblem& problem, const std::string& path);

/// Parses a sparse SDPA file back into a PrimalTrace problem; exact
/// round-trip for everything export_sdpa writes from PrimalTrace problems.
SdpProblem import_sdpa(std::istream& is);
SdpProblem import_sdpa_file(const std::string& path);

// -- first-order solver ----------------------------------------------------------

struct SolveOptions {
    double tol = 1e-9;
    long max_iters = 200000;
    /// Kept for interface stability; the solver is deterministic and does
    /// not consume randomness.
    uint64_t seed = 0;
    double rho = 1.0;
    int total_dim_limit = 2000;
};

struct SdpSolution {
    bool converged = false;
    long iterations = 0;
    /// tr(C X) (PrimalTrace) or c~^T x (ReducedLmi); for Putinar problems
    /// this is the bound lambda*.
    double objective = 0.0;
    std::vector<Eigen::MatrixXd> block_values;
    std::vector<double> x;       // ReducedLmi variables
    std::vector<double> dual_y;  // PrimalTrace duals
    double dual_objective = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double duality_gap = 0.0;
};

/// ADMM solve of either problem form. Non-convergence returns the best
/// iterate with converged = false rather than throwing.
SdpSolution solve_small(const SdpProblem& problem, const SolveOptions& opts = {});

// -- Putinar certificates ----------------------------------------------------------

/// Numeric certificate p_G - lambda = v^T Q0 v + sum_g v^T Qg+ v (1+X_g)
///                                   + sum_g v^T Qg- v (1-X_g).
/// Full mode carries 2|G|+1 blocks in build order; symmetric mode carries
/// {Q0, Q+, Q-} with the remaining blocks implied by translation.
struct PutinarCertificate {
    PutinarMode mode = PutinarMode::Full;
    double lambda = 0.0;
    std::vector<Eigen::MatrixXd> gram_blocks;
};

PutinarCertificate certificate_from_solution(const SdpProblem& problem, const SdpSolution& sol);

struct CertificateValidation {
    double residual = 0.0;        // max |coefficient mismatch|
    double residual_l1 = 0.0;     // sum of |coefficient mismatches|
    double min_eig = 0.0;         // least eigenvalue across blocks
    double epsilon = 0.0;         // rigorous slack
    double degraded_bound = 0.0;  // lambda - epsilon, a true lower bound on p_G
    bool valid = false;           // residual <= tol_res and min_eig >= -tol_eig
    std::string worst_monomial;
};

/// Recomputes the polynomial identity coefficientwise and the block
/// eigenvalue floors. The degraded bound uses
///   epsilon = sum_m |residual_m| + sum_blocks max(0, -eigmin_b) (N+1) mult_b
/// with mult_b = 1 for Q0 and 2 for multiplier blocks, which is valid on the
/// box since |monomials| <= 1, ||v||^2 <= N+1 and 0 <= 1 +- X_g <= 2.
CertificateValidation validate_certificate(const FiniteGroup& g, const PutinarCertificate& cert,
                                           double tol_res = 1e-6, double tol_eig = 1e-8);

/// The exact section-6 certificate lifted to Gram blocks for G = Z_p with
/// p >= 5 prime: Q0 = (3/2) s s^T, Q_g+- = (3/4)(e_1 -+ e_g)(e_1 -+ e_g)^T,
/// lambda = -(3/2) p. All entries are dyadic rationals, so the double
/// representation is exact and validation reports residual 0.
PutinarCertificate exact_putinar_for_cyclic_prime(int p);

/// min p_G over the 2^|G| hypercube vertices by direct enumeration
/// (|G| <= 25 guard).
double hypercube_min_pg(const FiniteGroup& g);

}  // namespace apcert
