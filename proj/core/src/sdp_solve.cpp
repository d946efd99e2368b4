#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "apcert/sdp.hpp"

namespace apcert {

namespace {

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

double frob(const std::vector<Eigen::MatrixXd>& blocks) {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

// Alternating-direction augmented Lagrangian method on the dual of
//   min <Ctilde, X>  s.t.  A(X) = b, X >= 0   (Ctilde = -C; we maximize tr(CX))
// following Wen-Goldfarb-Yin: each sweep solves the y block exactly through
// the Cholesky factor of A A^T, projects the dual slack onto the PSD cone and
// recovers X from the projection residual, so X >= 0 holds at every iterate.
SdpSolution solve_primal_trace(const SdpProblem& problem, const SolveOptions& opts) {
    const int m = static_cast<int>(problem.constraints.size());
    const int nblocks = static_cast<int>(problem.blocks.size());

    std::vector<Eigen::MatrixXd> ctilde(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        ctilde[b] = -problem.dense_objective(b);
    }

    Eigen::VectorXd rhs_b(m);
    for (int i = 0; i < m; ++i) rhs_b(i) = problem.constraints[i].b;

    // Gram matrix of the constraint operator, AA^T.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    {
        std::map<std::tuple<int, int, int>, std::vector<std::pair<int, double>>> cells;
        for (int i = 0; i < m; ++i)
            for (const auto& e : problem.constraints[i].a)
                cells[{e.block, e.i, e.j}].push_back({i, e.value});
        for (const auto& [cell, lst] : cells) {
            double w = std::get<1>(cell) == std::get<2>(cell) ? 1.0 : 2.0;
            for (const auto& [ci, vi] : lst)
                for (const auto& [cj, vj] : lst) gram(ci, cj) += w * vi * vj;
        }
        double ridge = 1e-12 * (1.0 + gram.diagonal().maxCoeff());
        gram.diagonal().array() += ridge;
    }
    Eigen::LDLT<Eigen::MatrixXd> gram_ldlt(gram);

    auto apply_A = [&](const std::vector<Eigen::MatrixXd>& x) {
        Eigen::VectorXd out(m);
        for (int i = 0; i < m; ++i) out(i) = trace_inner(problem.constraints[i].a, x);
        return out;
    };
    auto apply_At = [&](const Eigen::VectorXd& y) {
        std::vector<Eigen::MatrixXd> out(nblocks);
        for (int b = 0; b < nblocks; ++b)
            out[b] = Eigen::MatrixXd::Zero(problem.blocks[b].dim, problem.blocks[b].dim);
        for (int i = 0; i < m; ++i) {
            if (y(i) == 0.0) continue;
            for (const auto& e : problem.constraints[i].a) {
                out[e.block](e.i, e.j) += y(i) * e.value;
                if (e.i != e.j) out[e.block](e.j, e.i) += y(i) * e.value;
            }
        }
        return out;
    };

    std::vector<Eigen::MatrixXd> X(nblocks), S(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        X[b] = Eigen::MatrixXd::Zero(problem.blocks[b].dim, problem.blocks[b].dim);
        S[b] = X[b];
    }

    double mu = opts.rho;
    const double bnorm = 1.0 + rhs_b.norm();
    const double cnorm = 1.0 + frob(ctilde);

    SdpSolution sol;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    long it = 0;
    for (; it < opts.max_iters; ++it) {
        Eigen::VectorXd ax = apply_A(X);
        Eigen::VectorXd a_s_c(m);
        {
            std::vector<Eigen::MatrixXd> smc(nblocks);
            for (int b = 0; b < nblocks; ++b) smc[b] = S[b] - ctilde[b];
            a_s_c = apply_A(smc);
        }
        y = gram_ldlt.solve(-(mu * (ax - rhs_b) + a_s_c));
        auto aty = apply_At(y);

        double xchange = 0.0;
        for (int b = 0; b < nblocks; ++b) {
            Eigen::MatrixXd v = ctilde[b] - aty[b] - mu * X[b];
            S[b] = project_psd(v);
            Eigen::MatrixXd xnew = (S[b] - v) / mu;
            xchange += (xnew - X[b]).squaredNorm();
            X[b] = std::move(xnew);
        }
        xchange = std::sqrt(xchange);

        if (it % 10 == 0 || it + 1 == opts.max_iters) {
            double pinf = (apply_A(X) - rhs_b).norm() / bnorm;
            double dinf = mu * xchange / cnorm;
            double pobj = 0.0, dobj = rhs_b.dot(y);
            for (int b = 0; b < nblocks; ++b) pobj += ctilde[b].cwiseProduct(X[b]).sum();
            double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
            sol.primal_infeasibility = pinf;
            sol.dual_infeasibility = dinf;
            sol.duality_gap = gap;
            if (pinf < opts.tol && dinf < opts.tol && gap < 10 * opts.tol) {
                sol.converged = true;
                ++it;
                break;
            }
            // Residual balancing; mu weights the primal against the dual.
            if (it > 0 && it % 100 == 0) {
                if (pinf > 10.0 * dinf)
                    mu = std::min(mu * 1.5, 1e6);
                else if (dinf > 10.0 * pinf)
                    mu = std::max(mu / 1.5, 1e-6);
            }
        }
    }

    sol.iterations = it;
    sol.block_values = X;
    sol.dual_y.assign(y.data(), y.data() + m);
    double pobj = 0.0;
    for (int b = 0; b < nblocks; ++b) pobj += ctilde[b].cwiseProduct(X[b]).sum();
    sol.objective = -pobj;          // tr(C X)
    sol.dual_objective = -rhs_b.dot(y);
    return sol;
}

// Consensus ADMM on   min -c~^T x  s.t.  E x = f,  M_k(x) = Z_k,  Z_k >= 0
// where M_k(x) = sum_j x_{kd+j} L_j. The x block is a fixed linear solve
// (the normal matrix is positive definite because the L_j are independent).
SdpSolution solve_reduced_lmi(const SdpProblem& problem, const SolveOptions& opts) {
    const int d = problem.lmi_d;
    const int nblocks = static_cast<int>(problem.blocks.size());
    const int nv = problem.num_vars();
    const int neq = static_cast<int>(problem.eq_rows.size());

    Eigen::MatrixXd e_mat = Eigen::MatrixXd::Zero(neq, nv);
    Eigen::VectorXd f(neq);
    for (int r = 0; r < neq; ++r) {
        f(r) = problem.eq_rhs[r];
        for (const auto& [v, coeff] : problem.eq_rows[r]) e_mat(r, v) += coeff;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v) c(v) = problem.var_objective[v];

    // Normal matrix H = E^T E + sum_b M_b^T M_b.
    Eigen::MatrixXd lgram = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            lgram(i, j) = problem.lmi_basis[i].cwiseProduct(problem.lmi_basis[j]).sum();
    Eigen::MatrixXd h = e_mat.transpose() * e_mat;
    for (int b = 0; b < nblocks; ++b) h.block(b * d, b * d, d, d) += lgram;
    h.diagonal().array() += 1e-12 * (1.0 + h.diagonal().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> h_ldlt(h);

    auto apply_m = [&](const Eigen::VectorXd& x, int blk) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
        for (int j = 0; j < d; ++j) {
            double coeff = x(blk * d + j);
            if (coeff != 0.0) out += coeff * problem.lmi_basis[j];
        }
        return out;
    };
    auto apply_mt = [&](const std::vector<Eigen::MatrixXd>& mats) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(nv);
        for (int b = 0; b < nblocks; ++b)
            for (int j = 0; j < d; ++j)
                out(b * d + j) = problem.lmi_basis[j].cwiseProduct(mats[b]).sum();
        return out;
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(neq);  // scaled dual of Ex=f
    std::vector<Eigen::MatrixXd> z(nblocks, Eigen::MatrixXd::Zero(d, d));
    std::vector<Eigen::MatrixXd> w(nblocks, Eigen::MatrixXd::Zero(d, d));  // scaled duals

    double rho = opts.rho;
    const double scale = 1.0 + c.norm() + f.norm();

    SdpSolution sol;
    long it = 0;
    for (; it < opts.max_iters; ++it) {
        std::vector<Eigen::MatrixXd> zw(nblocks);
        for (int b = 0; b < nblocks; ++b) zw[b] = z[b] - w[b];
        Eigen::VectorXd rhs = c / rho + e_mat.transpose() * (f - u) + apply_mt(zw);
        x = h_ldlt.solve(rhs);

        double zchange = 0.0;
        std::vector<Eigen::MatrixXd> mx(nblocks);
        for (int b = 0; b < nblocks; ++b) {
            mx[b] = apply_m(x, b);
            Eigen::MatrixXd znew = project_psd(mx[b] + w[b]);
            zchange += (znew - z[b]).squaredNorm();
            z[b] = std::move(znew);
        }
        Eigen::VectorXd ex = e_mat * x;
        u += ex - f;
        double prim = (ex - f).squaredNorm();
        for (int b = 0; b < nblocks; ++b) {
            w[b] += mx[b] - z[b];
            prim += (mx[b] - z[b]).squaredNorm();
        }
        prim = std::sqrt(prim) / scale;
        double dual = rho * std::sqrt(zchange) / scale;

        if (it % 10 == 0 || it + 1 == opts.max_iters) {
            sol.primal_infeasibility = prim;
            sol.dual_infeasibility = dual;
            sol.duality_gap = 0.0;
            if (prim < opts.tol && dual < opts.tol) {
                sol.converged = true;
                ++it;
                break;
            }
            if (it > 0 && it % 100 == 0) {
                if (prim > 10.0 * dual) {
                    rho = std::min(rho * 2.0, 1e6);
                    u /= 2.0;
                    for (auto& mat : w) mat /= 2.0;
                } else if (dual > 10.0 * prim) {
                    rho = std::max(rho / 2.0, 1e-6);
                    u *= 2.0;
                    for (auto& mat : w) mat *= 2.0;
                }
            }
        }
    }

    sol.iterations = it;
    sol.x.assign(x.data(), x.data() + nv);
    sol.objective = c.dot(x);
    sol.dual_objective = sol.objective;
    sol.block_values.resize(nblocks);
    for (int b = 0; b < nblocks; ++b) sol.block_values[b] = apply_m(x, b);
    return sol;
}

}  // namespace

SdpSolution solve_small(const SdpProblem& problem, const SolveOptions& opts) {
    int dim = problem.total_dim();
    if (dim > opts.total_dim_limit)
        throw SizeLimitError("solve_small: total matrix dimension " + std::to_string(dim) +
                             " exceeds the limit " + std::to_string(opts.total_dim_limit));
    if (problem.form == SdpForm::PrimalTrace) return solve_primal_trace(problem, opts);
    return solve_reduced_lmi(problem, opts);
}

}  // namespace apcert
