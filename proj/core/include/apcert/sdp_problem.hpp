#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace apcert {

/// One entry of a sparse symmetric block matrix, upper triangle (i <= j).
struct SparseEntry {
    int block = 0;
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct SdpBlock {
    std::string name;
    int dim = 0;
};

struct SdpConstraint {
    std::vector<SparseEntry> a;  // symmetric matrix A_i, upper triangle
    double b = 0.0;
    std::string label;
};

/// Block-structured semidefinite program. Two shapes share the type:
///
///   PrimalTrace:  max tr(C X)  s.t.  tr(A_i X) = b_i,  X >= 0 blockwise
///
///   ReducedLmi:   max c~^T x   s.t.  E x = f,
///                 sum_j x_{kd+j} L_j >= 0 for each block k (d = lmi_d)
///
/// ReducedLmi is what the Schrijver-style reduction produces: d scalar
/// variables per block with the shared d x d basis images L_1..L_d.
enum class SdpForm { PrimalTrace, ReducedLmi };

enum class PutinarMode { Full, Symmetric };

struct PutinarInfo {
    std::string group_spec;
    int group_order = 0;
    PutinarMode mode = PutinarMode::Full;
};

struct SdpProblem {
    SdpForm form = SdpForm::PrimalTrace;
    std::vector<SdpBlock> blocks;

    // PrimalTrace payload
    std::vector<SparseEntry> objective;
    std::vector<SdpConstraint> constraints;

    // ReducedLmi payload: block k owns variables [k*lmi_d, (k+1)*lmi_d).
    int lmi_d = 0;
    std::vector<Eigen::MatrixXd> lmi_basis;  // d matrices, d x d
    std::vector<double> var_objective;
    std::vector<std::vector<std::pair<int, double>>> eq_rows;
    std::vector<double> eq_rhs;

    std::optional<PutinarInfo> putinar;
    std::map<std::string, std::string> meta;

    int num_vars() const { return static_cast<int>(blocks.size()) * lmi_d; }
    int total_dim() const {
        int t = 0;
        for (const auto& b : blocks) t += b.dim;
        return t;
    }

    /// Dense symmetric view of the objective / a constraint for one block.
    Eigen::MatrixXd dense_objective(int block) const;
    Eigen::MatrixXd dense_constraint(int constraint, int block) const;
};

/// Accumulates upper-triangle entries into a dense symmetric matrix.
void scatter_symmetric(const std::vector<SparseEntry>& entries, int block, Eigen::MatrixXd& out);

/// tr(A X) for an upper-triangle entry list against dense symmetric blocks.
double trace_inner(const std::vector<SparseEntry>& entries,
                   const std::vector<Eigen::MatrixXd>& blocks);

}  // namespace apcert
