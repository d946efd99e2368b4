#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "apcert/sdp.hpp"

namespace apcert {

// -- SdpProblem helpers --------------------------------------------------------

void scatter_symmetric(const std::vector<SparseEntry>& entries, int block, Eigen::MatrixXd& out) {
    for (const auto& e : entries) {
        if (e.block != block) continue;
        out(e.i, e.j) += e.value;
        if (e.i != e.j) out(e.j, e.i) += e.value;
    }
}

double trace_inner(const std::vector<SparseEntry>& entries,
                   const std::vector<Eigen::MatrixXd>& blocks) {
    double total = 0.0;
    for (const auto& e : entries) {
        double w = e.i == e.j ? 1.0 : 2.0;
        total += w * e.value * blocks[e.block](e.i, e.j);
    }
    return total;
}

Eigen::MatrixXd SdpProblem::dense_objective(int block) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(blocks[block].dim, blocks[block].dim);
    scatter_symmetric(objective, block, out);
    return out;
}

Eigen::MatrixXd SdpProblem::dense_constraint(int constraint, int block) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(blocks[block].dim, blocks[block].dim);
    scatter_symmetric(constraints[constraint].a, block, out);
    return out;
}

// -- monomials -----------------------------------------------------------------

namespace {

// Monomial of degree <= 3 keyed by sorted variable indices packed into 20-bit
// fields (value v stored as v+1; 0 marks an unused slot).
uint64_t mono_key(std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    uint64_t key = 0;
    int shift = 0;
    for (int v : vars) {
        key |= (static_cast<uint64_t>(v) + 1) << shift;
        shift += 20;
    }
    return key;
}

std::vector<int> mono_vars(uint64_t key) {
    std::vector<int> vars;
    for (int shift = 0; shift < 60; shift += 20) {
        uint64_t f = (key >> shift) & 0xfffffu;
        if (f != 0) vars.push_back(static_cast<int>(f) - 1);
    }
    return vars;
}

std::string mono_name(uint64_t key) {
    auto vars = mono_vars(key);
    if (vars.empty()) return "1";
    std::string s;
    for (int v : vars) s += "x" + std::to_string(v) + ".";
    s.pop_back();
    return s;
}

// Variables of monomial-index alpha in Z = {1} u G: slot 0 is the constant.
inline void append_slot_vars(int alpha, std::vector<int>& vars) {
    if (alpha > 0) vars.push_back(alpha - 1);
}

struct Cell {
    int block;
    int i;
    int j;
    bool operator<(const Cell& o) const {
        return std::tie(block, i, j) < std::tie(o.block, o.i, o.j);
    }
};

using CoeffMap = std::map<uint64_t, std::map<Cell, double>>;

// Accumulates the functional weight of Q_{alpha,beta} (unordered cell,
// counting both orders) on the monomial.
void add_weight(CoeffMap& acc, uint64_t mono, const Cell& cell, double w) {
    acc[mono][cell] += w;
}

std::vector<SparseEntry> cells_to_entries(const std::map<Cell, double>& weights) {
    std::vector<SparseEntry> out;
    for (const auto& [cell, w] : weights) {
        if (w == 0.0) continue;
        double value = cell.i == cell.j ? w : w / 2.0;  // tr(A Q) counts off-diag twice
        out.push_back({cell.block, cell.i, cell.j, value});
    }
    return out;
}

}  // namespace

int count_monomials_up_to_degree3(int n) {
    return 1 + n + n * (n + 1) / 2 + n * (n + 1) * (n + 2) / 6;
}

// -- degree-3 Putinar relaxation builder ----------------------------------------

SdpProblem build_putinar_degree3(const FiniteGroup& g, PutinarMode mode,
                                 const PutinarBuildOptions& opts) {
    const int n = g.order();
    const int z = n + 1;
    if (mode == PutinarMode::Full && n > opts.max_full_order)
        throw SizeLimitError("build_putinar_degree3: full mode limited to |G| <= " +
                             std::to_string(opts.max_full_order));
    if (mode == PutinarMode::Symmetric && n > opts.max_symmetric_order)
        throw SizeLimitError("build_putinar_degree3: symmetric mode limited to |G| <= " +
                             std::to_string(opts.max_symmetric_order));

    SdpProblem problem;
    problem.form = SdpForm::PrimalTrace;
    problem.putinar = PutinarInfo{g.descriptor(), n, mode};
    problem.meta["relaxation"] = "putinar-degree3";

    CoeffMap acc;
    std::vector<int> vars;
    vars.reserve(3);

    auto base_mono = [&](int alpha, int beta) {
        vars.clear();
        append_slot_vars(alpha, vars);
        append_slot_vars(beta, vars);
        return mono_key(vars);
    };
    auto with_multiplier = [&](int alpha, int beta, int gvar) {
        vars.clear();
        append_slot_vars(alpha, vars);
        append_slot_vars(beta, vars);
        vars.push_back(gvar);
        return mono_key(vars);
    };

    if (mode == PutinarMode::Full) {
        // Blocks: Q0, then Q_g^+ (1..n), then Q_g^- (n+1..2n).
        problem.blocks.push_back({"Q0", z});
        for (int e = 0; e < n; ++e) problem.blocks.push_back({"Q+" + g.label(e), z});
        for (int e = 0; e < n; ++e) problem.blocks.push_back({"Q-" + g.label(e), z});

        for (int alpha = 0; alpha < z; ++alpha)
            for (int beta = alpha; beta < z; ++beta) {
                double w = alpha == beta ? 1.0 : 2.0;
                add_weight(acc, base_mono(alpha, beta), {0, alpha, beta}, w);
                for (int e = 0; e < n; ++e) {
                    add_weight(acc, base_mono(alpha, beta), {1 + e, alpha, beta}, w);
                    add_weight(acc, with_multiplier(alpha, beta, e), {1 + e, alpha, beta}, w);
                    add_weight(acc, base_mono(alpha, beta), {1 + n + e, alpha, beta}, w);
                    add_weight(acc, with_multiplier(alpha, beta, e), {1 + n + e, alpha, beta}, -w);
                }
            }
        problem.objective.push_back({0, 0, 0, -1.0});
        for (int b = 1; b <= 2 * n; ++b) problem.objective.push_back({b, 0, 0, -1.0});
    } else {
        problem.blocks.push_back({"Q0", z});
        problem.blocks.push_back({"Q+", z});
        problem.blocks.push_back({"Q-", z});

        // Left-translation permutations of the monomial index set.
        std::vector<std::vector<int>> pi(n, std::vector<int>(z));
        for (int e = 0; e < n; ++e) {
            pi[e][0] = 0;
            for (int h = 0; h < n; ++h) pi[e][h + 1] = g.mul(e, h) + 1;
        }

        for (int alpha = 0; alpha < z; ++alpha)
            for (int beta = alpha; beta < z; ++beta) {
                double w = alpha == beta ? 1.0 : 2.0;
                add_weight(acc, base_mono(alpha, beta), {0, alpha, beta}, w);
                for (int e = 0; e < n; ++e) {
                    int u = pi[e][alpha], v = pi[e][beta];
                    add_weight(acc, base_mono(u, v), {1, alpha, beta}, w);
                    add_weight(acc, with_multiplier(u, v, e), {1, alpha, beta}, w);
                    add_weight(acc, base_mono(u, v), {2, alpha, beta}, w);
                    add_weight(acc, with_multiplier(u, v, e), {2, alpha, beta}, -w);
                }
            }
        problem.objective.push_back({0, 0, 0, -1.0});
        problem.objective.push_back({1, 0, 0, -static_cast<double>(n)});
        problem.objective.push_back({2, 0, 0, -static_cast<double>(n)});
    }

    // Coefficient-matching constraints for every monomial of degree 1..3 that
    // appears. The constant matches by construction: lambda is defined as
    // -(sum of the (1,1) entries), which the objective maximizes.
    PairCoefficients pc = pair_coefficients(g, opts.enumeration);
    for (auto& [mono, cells] : acc) {
        if (mono == 0) continue;
        SdpConstraint c;
        c.a = cells_to_entries(cells);
        auto mv = mono_vars(mono);
        c.b = (mv.size() == 2 && mv[0] != mv[1]) ? static_cast<double>(pc.coeff(mv[0], mv[1]))
                                                 : 0.0;
        c.label = mono_name(mono);
        problem.constraints.push_back(std::move(c));
    }

    if (mode == PutinarMode::Symmetric) {
        // Entry equalities from the admitted symmetry generators: whole
        // action on Q0, its identity stabilizer on the multiplier blocks.
        SymmetryGenOptions sym_opts;
        sym_opts.enumeration = opts.enumeration;
        SymmetryGenResult sym = symmetry_generators(g, sym_opts);
        OrbitBasis full = orbit_basis(sym.action);
        OrbitBasis stab = orbit_basis(sym.action.identity_stabilizer());

        auto add_equalities = [&](const OrbitBasis& basis, int block, const std::string& tag) {
            for (int o = 0; o < basis.d; ++o) {
                const auto& cells = basis.orbits[o];
                auto canon = [](std::pair<int, int> p) {
                    return std::make_pair(std::min(p.first, p.second), std::max(p.first, p.second));
                };
                auto rep = canon(cells[0]);
                std::set<std::pair<int, int>> seen{rep};
                for (const auto& cell : cells) {
                    auto cc = canon(cell);
                    if (!seen.insert(cc).second) continue;
                    SdpConstraint c;
                    double wr = rep.first == rep.second ? 1.0 : 0.5;
                    double wc = cc.first == cc.second ? 1.0 : 0.5;
                    c.a.push_back({block, rep.first, rep.second, wr});
                    c.a.push_back({block, cc.first, cc.second, -wc});
                    c.b = 0.0;
                    c.label = tag + ":orbit" + std::to_string(o);
                    problem.constraints.push_back(std::move(c));
                }
            }
        };
        add_equalities(full, 0, "sym:Q0");
        add_equalities(stab, 1, "sym:Q+");
        add_equalities(stab, 2, "sym:Q-");
    }
    return problem;
}

// -- certificates ------------------------------------------------------------------

PutinarCertificate certificate_from_solution(const SdpProblem& problem, const SdpSolution& sol) {
    if (!problem.putinar)
        throw std::invalid_argument("certificate_from_solution: not a Putinar problem");
    if (problem.form != SdpForm::PrimalTrace)
        throw std::invalid_argument(
            "certificate_from_solution: reduced solutions must be lifted first");
    PutinarCertificate cert;
    cert.mode = problem.putinar->mode;
    cert.lambda = sol.objective;
    cert.gram_blocks = sol.block_values;
    return cert;
}

CertificateValidation validate_certificate(const FiniteGroup& g, const PutinarCertificate& cert,
                                           double tol_res, double tol_eig) {
    const int n = g.order();
    const int z = n + 1;
    const size_t expected =
        cert.mode == PutinarMode::Full ? static_cast<size_t>(2 * n + 1) : 3u;
    if (cert.gram_blocks.size() != expected)
        throw std::invalid_argument("validate_certificate: expected " + std::to_string(expected) +
                                    " Gram blocks, got " + std::to_string(cert.gram_blocks.size()));
    for (const auto& q : cert.gram_blocks)
        if (q.rows() != z || q.cols() != z)
            throw std::invalid_argument("validate_certificate: Gram block shape mismatch");

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(cert.gram_blocks.size());
    for (const auto& q : cert.gram_blocks) blocks.push_back(0.5 * (q + q.transpose()));

    // Assemble the expansion's coefficient map.
    std::map<uint64_t, double> assembled;
    std::vector<int> vars;
    auto add = [&](int u, int v, int gvar, double w) {
        vars.clear();
        append_slot_vars(u, vars);
        append_slot_vars(v, vars);
        if (gvar >= 0) vars.push_back(gvar);
        assembled[mono_key(vars)] += w;
    };

    auto scan_block = [&](const Eigen::MatrixXd& q, int mult_var, double mult_sign,
                          const std::vector<int>* perm) {
        for (int alpha = 0; alpha < z; ++alpha)
            for (int beta = alpha; beta < z; ++beta) {
                double w = (alpha == beta ? 1.0 : 2.0) * q(alpha, beta);
                if (w == 0.0) continue;
                int u = perm ? (*perm)[alpha] : alpha;
                int v = perm ? (*perm)[beta] : beta;
                add(u, v, -1, w);
                if (mult_var >= 0) add(u, v, mult_var, mult_sign * w);
            }
    };

    if (cert.mode == PutinarMode::Full) {
        scan_block(blocks[0], -1, 0.0, nullptr);
        for (int e = 0; e < n; ++e) scan_block(blocks[1 + e], e, +1.0, nullptr);
        for (int e = 0; e < n; ++e) scan_block(blocks[1 + n + e], e, -1.0, nullptr);
    } else {
        scan_block(blocks[0], -1, 0.0, nullptr);
        std::vector<int> pi(z);
        for (int e = 0; e < n; ++e) {
            pi[0] = 0;
            for (int h = 0; h < n; ++h) pi[h + 1] = g.mul(e, h) + 1;
            scan_block(blocks[1], e, +1.0, &pi);
            scan_block(blocks[2], e, -1.0, &pi);
        }
    }

    // Target: p_G - lambda.
    std::map<uint64_t, double> target;
    target[0] = -cert.lambda;
    PairCoefficients pc = pair_coefficients(g);
    for (const auto& [key, c] : pc.raw()) {
        int a = static_cast<int>(key >> 32);
        int b = static_cast<int>(key & 0xffffffffu);
        target[mono_key({a, b})] = static_cast<double>(c);
    }

    CertificateValidation v;
    std::map<uint64_t, double> residuals = target;
    for (const auto& [m, val] : assembled) residuals[m] -= val;
    for (const auto& [m, r] : residuals) {
        double a = std::abs(r);
        v.residual_l1 += a;
        if (a > v.residual) {
            v.residual = a;
            v.worst_monomial = mono_name(m);
        }
    }

    v.min_eig = std::numeric_limits<double>::infinity();
    double eig_slack = 0.0;
    for (size_t b = 0; b < blocks.size(); ++b) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[b],
                                                          Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        v.min_eig = std::min(v.min_eig, lo);
        double mult_bound = (cert.mode == PutinarMode::Full)
                                ? (b == 0 ? 1.0 : 2.0)
                                : (b == 0 ? 1.0 : 2.0 * n);
        eig_slack += std::max(0.0, -lo) * static_cast<double>(z) * mult_bound;
    }
    v.epsilon = v.residual_l1 + eig_slack;
    v.degraded_bound = cert.lambda - v.epsilon;
    v.valid = v.residual <= tol_res && v.min_eig >= -tol_eig;
    return v;
}

PutinarCertificate exact_putinar_for_cyclic_prime(int p) {
    if (p < 5) throw std::invalid_argument("exact_putinar_for_cyclic_prime: p must be >= 5");
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0)
            throw std::invalid_argument("exact_putinar_for_cyclic_prime: p must be prime");
    const int z = p + 1;
    PutinarCertificate cert;
    cert.mode = PutinarMode::Full;
    cert.lambda = -1.5 * p;

    // Q0 = (3/2) s s^T realizes (3/2) I_2.
    Eigen::VectorXd s = Eigen::VectorXd::Ones(z);
    s(0) = 0.0;
    cert.gram_blocks.push_back(1.5 * s * s.transpose());
    // (3/2)(1 - X_g^2) splits as (3/4)(1-X_g)^2 (1+X_g) + (3/4)(1+X_g)^2 (1-X_g).
    std::vector<Eigen::MatrixXd> minus_blocks;
    for (int e = 0; e < p; ++e) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(z);
        u(0) = 1.0;
        u(e + 1) = -1.0;
        cert.gram_blocks.push_back(0.75 * u * u.transpose());
        Eigen::VectorXd w = Eigen::VectorXd::Zero(z);
        w(0) = 1.0;
        w(e + 1) = 1.0;
        minus_blocks.push_back(0.75 * w * w.transpose());
    }
    for (auto& q : minus_blocks) cert.gram_blocks.push_back(std::move(q));
    return cert;
}

double hypercube_min_pg(const FiniteGroup& g) {
    const int n = g.order();
    if (n > 25) throw SizeLimitError("hypercube_min_pg: |G| <= 25 only");
    PairCoefficients pc = pair_coefficients(g);
    std::vector<std::tuple<int, int, double>> pairs;
    for (const auto& [key, c] : pc.raw())
        pairs.push_back({static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu),
                         static_cast<double>(c)});
    double best = std::numeric_limits<double>::infinity();
    // p_G(-x) = p_G(x), so fixing the sign of element 0 loses nothing.
    const uint64_t count = n >= 1 ? (1ull << (n - 1)) : 1;
    for (uint64_t mask = 0; mask < count; ++mask) {
        double total = 0.0;
        for (const auto& [a, b, c] : pairs) {
            int xa = (a == 0 || !((mask >> (a - 1)) & 1)) ? 1 : -1;
            int xb = (b == 0 || !((mask >> (b - 1)) & 1)) ? 1 : -1;
            total += c * xa * xb;
        }
        best = std::min(best, total);
    }
    return best;
}

}  // namespace apcert
