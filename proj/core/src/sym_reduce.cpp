#include "apcert/sym_reduce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace apcert {

namespace {

struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
        size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Disjoint-set over pair indices.
class UnionFind {
  public:
    explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<size_t> parent_;
};

}  // namespace

PermAction PermAction::identity_stabilizer() const {
    PermAction sub;
    sub.z_size = z_size;
    for (const auto& g : generators)
        if (g.fixes_identity) sub.generators.push_back(g);
    return sub;
}

SymmetryGenResult symmetry_generators(const FiniteGroup& g, const SymmetryGenOptions& opts) {
    const int n = g.order();
    const int z = n + 1;

    // Oracle for the admission check: the set of AP element-sets.
    auto aps = enumerate_aps(g, 3, opts.enumeration);
    std::unordered_set<std::vector<int>, VecHash> ap_index;
    for (const auto& s : aps) ap_index.insert(s.elements);

    auto preserves_aps = [&](const std::vector<int>& perm, std::string& why) {
        for (const auto& s : aps) {
            std::vector<int> img;
            img.reserve(3);
            for (int e : s.elements) img.push_back(perm[e + 1] - 1);
            std::sort(img.begin(), img.end());
            if (!ap_index.count(img)) {
                std::ostringstream os;
                os << "image of AP {" << s.elements[0] << "," << s.elements[1] << ","
                   << s.elements[2] << "} is not an AP";
                why = os.str();
                return false;
            }
        }
        return true;
    };

    SymmetryGenResult result;
    result.action.z_size = z;
    std::unordered_set<std::vector<int>, VecHash> seen;

    std::vector<int> identity(z);
    std::iota(identity.begin(), identity.end(), 0);
    seen.insert(identity);

    auto offer = [&](std::vector<int> perm, const std::string& name) {
        if (!seen.insert(perm).second) return;
        std::string why;
        if (preserves_aps(perm, why)) {
            ActionGenerator gen;
            gen.fixes_identity = perm[1] == 1;
            gen.name = name;
            gen.perm = std::move(perm);
            result.admitted.push_back(name);
            result.action.generators.push_back(std::move(gen));
        } else {
            result.rejected.push_back(name + ": " + why);
        }
    };

    auto make_perm = [&](auto&& element_map) {
        std::vector<int> perm(z);
        perm[0] = 0;
        for (int h = 0; h < n; ++h) perm[h + 1] = element_map(h) + 1;
        return perm;
    };

    for (int a = 1; a < n; ++a) {
        offer(make_perm([&](int h) { return g.mul(a, h); }), "L" + g.label(a));
        offer(make_perm([&](int h) { return g.mul(h, a); }), "R" + g.label(a));
        offer(make_perm([&](int h) { return g.mul(g.mul(a, h), g.inv(a)); }), "C" + g.label(a));
    }
    if (opts.include_inversion)
        offer(make_perm([&](int h) { return g.inv(h); }), "inv");
    if (opts.include_automorphisms) {
        long exponent = order_profile(g).exponent();
        for (long u = 2; u < exponent; ++u) {
            if (std::gcd(u, exponent) != 1) continue;
            auto perm = make_perm([&](int h) { return g.power(h, u); });
            // Power maps need not be bijective off the abelian case.
            std::vector<char> hit(z, 0);
            bool bijective = true;
            for (int v : perm) {
                if (hit[v]) {
                    bijective = false;
                    break;
                }
                hit[v] = 1;
            }
            std::string name = "pow" + std::to_string(u);
            if (!bijective) {
                result.rejected.push_back(name + ": not a bijection");
                continue;
            }
            offer(std::move(perm), name);
        }
    }

    // A trivial group admits nothing above; keep the identity so downstream
    // orbit code always has an action to chew on.
    if (result.action.generators.empty()) {
        ActionGenerator gen;
        gen.name = "id";
        gen.perm = identity;
        gen.fixes_identity = true;
        result.admitted.push_back("id");
        result.action.generators.push_back(std::move(gen));
    }
    return result;
}

OrbitBasis orbit_basis(const PermAction& action, long budget) {
    const int z = action.z_size;
    const size_t pairs = static_cast<size_t>(z) * z;
    if (static_cast<long>(pairs) > budget)
        throw SizeLimitError("orbit_basis: |Z|^2 = " + std::to_string(pairs) +
                             " exceeds budget " + std::to_string(budget));

    UnionFind uf(pairs);
    for (const auto& gen : action.generators) {
        for (int i = 0; i < z; ++i)
            for (int j = 0; j < z; ++j)
                uf.unite(static_cast<size_t>(i) * z + j,
                         static_cast<size_t>(gen.perm[i]) * z + gen.perm[j]);
    }

    OrbitBasis basis;
    basis.z = z;
    basis.orbit_of.assign(pairs, -1);
    // Deterministic numbering: orbits ordered by least (row-major) pair.
    std::vector<int> root_to_orbit(pairs, -1);
    for (size_t p = 0; p < pairs; ++p) {
        size_t r = uf.find(p);
        if (root_to_orbit[r] < 0) {
            root_to_orbit[r] = basis.d++;
            basis.orbits.emplace_back();
        }
        int o = root_to_orbit[r];
        basis.orbit_of[p] = o;
        basis.orbits[o].push_back({static_cast<int>(p / z), static_cast<int>(p % z)});
    }
    basis.norms.reserve(basis.d);
    for (const auto& orbit : basis.orbits) basis.norms.push_back(static_cast<long>(orbit.size()));
    basis.transpose_map.resize(basis.d);
    for (int o = 0; o < basis.d; ++o) {
        auto [i, j] = basis.orbits[o][0];
        basis.transpose_map[o] = basis.orbit(j, i);
    }
    return basis;
}

MultiplicationTable multiplication_table(const OrbitBasis& basis, long budget) {
    const int d = basis.d;
    const size_t cube = static_cast<size_t>(d) * d * d;
    if (static_cast<long>(cube) > budget)
        throw SizeLimitError("multiplication_table: d^3 = " + std::to_string(cube) +
                             " exceeds budget " + std::to_string(budget));

    MultiplicationTable table;
    table.d = d;
    table.p.assign(cube, 0);
    // p_{ij}^k counts two-step walks u -> w -> v with (u,w) in orbit i and
    // (w,v) in orbit j, for any representative (u,v) of orbit k; the count is
    // representative-independent because the E_i span an algebra.
    for (int k = 0; k < d; ++k) {
        auto [u, v] = basis.orbits[k][0];
        for (int w = 0; w < basis.z; ++w) {
            int i = basis.orbit(u, w), j = basis.orbit(w, v);
            ++table.p[(static_cast<size_t>(i) * d + j) * d + k];
        }
    }
    table.lambda.assign(cube, 0.0);
    std::vector<double> sqrt_norm(d);
    for (int i = 0; i < d; ++i) sqrt_norm[i] = std::sqrt(static_cast<double>(basis.norms[i]));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                size_t at = (static_cast<size_t>(i) * d + j) * d + k;
                if (table.p[at] != 0)
                    table.lambda[at] =
                        static_cast<double>(table.p[at]) * sqrt_norm[k] / (sqrt_norm[i] * sqrt_norm[j]);
            }
    table.L.reserve(d);
    for (int k = 0; k < d; ++k) {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) L(i, j) = table.lambda_at(k, j, i);
        table.L.push_back(std::move(L));
    }
    return table;
}

nlohmann::json orbit_basis_to_json(const OrbitBasis& basis) {
    nlohmann::json j;
    j["z"] = basis.z;
    j["d"] = basis.d;
    j["transpose_map"] = basis.transpose_map;
    j["norms"] = basis.norms;
    nlohmann::json orbits = nlohmann::json::object();
    for (int o = 0; o < basis.d; ++o) {
        nlohmann::json pairs = nlohmann::json::array();
        for (auto [r, c] : basis.orbits[o]) pairs.push_back({r, c});
        orbits[std::to_string(o)] = std::move(pairs);
    }
    j["orbits"] = std::move(orbits);
    return j;
}

Eigen::MatrixXd orbit_matrix(const OrbitBasis& basis, int i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(basis.z, basis.z);
    for (auto [r, c] : basis.orbits[i]) e(r, c) = 1.0;
    return e;
}

Eigen::MatrixXd normalized_orbit_matrix(const OrbitBasis& basis, int i) {
    return orbit_matrix(basis, i) / std::sqrt(static_cast<double>(basis.norms[i]));
}

namespace {

// Reynolds projection of one entry list onto the commutant of the action:
// replace each entry by its orbit average. Exact for the dyadic values the
// builders produce.
std::vector<SparseEntry> project_entries(const std::vector<SparseEntry>& entries,
                                         const std::vector<OrbitBasis>& block_bases) {
    std::vector<SparseEntry> out;
    // Accumulate <A, E_o> per (block, orbit). The (i,j) and (j,i) cells of a
    // symmetric matrix can land in different orbits, so credit them apart.
    std::map<std::pair<int, int>, double> inner;
    for (const auto& e : entries) {
        const OrbitBasis& basis = block_bases[e.block];
        inner[{e.block, basis.orbit(e.i, e.j)}] += e.value;
        if (e.i != e.j) inner[{e.block, basis.orbit(e.j, e.i)}] += e.value;
    }
    for (const auto& [key, sum] : inner) {
        auto [block, o] = key;
        const OrbitBasis& basis = block_bases[block];
        double avg = sum / static_cast<double>(basis.norms[o]);
        if (avg == 0.0) continue;
        for (auto [i, j] : basis.orbits[o])
            if (i <= j) out.push_back({block, i, j, avg});
    }
    return out;
}

std::string entries_key(const std::vector<SparseEntry>& entries, double b) {
    std::ostringstream os;
    os.precision(17);
    os << b << ";";
    std::vector<SparseEntry> sorted = entries;
    std::sort(sorted.begin(), sorted.end(), [](const SparseEntry& x, const SparseEntry& y) {
        return std::tie(x.block, x.i, x.j) < std::tie(y.block, y.i, y.j);
    });
    for (const auto& e : sorted) os << e.block << "," << e.i << "," << e.j << "=" << e.value << ";";
    return os.str();
}

}  // namespace

SdpProblem aggregate_invariant_constraints(const SdpProblem& problem, const PermAction& action) {
    if (problem.form != SdpForm::PrimalTrace)
        throw std::invalid_argument("aggregate_invariant_constraints: needs a PrimalTrace problem");
    for (const auto& b : problem.blocks)
        if (b.dim != action.z_size)
            throw std::invalid_argument("aggregate_invariant_constraints: block '" + b.name +
                                        "' does not live on the action's index set");

    OrbitBasis basis = orbit_basis(action);
    std::vector<OrbitBasis> per_block(problem.blocks.size(), basis);

    SdpProblem out;
    out.form = SdpForm::PrimalTrace;
    out.blocks = problem.blocks;
    out.putinar = problem.putinar;
    out.meta = problem.meta;
    out.meta["aggregated"] = "orbit-projected";
    out.objective = project_entries(problem.objective, per_block);

    std::set<std::string> seen;
    for (const auto& c : problem.constraints) {
        SdpConstraint pc;
        pc.a = project_entries(c.a, per_block);
        pc.b = c.b;
        pc.label = c.label;
        if (pc.a.empty()) {
            if (std::abs(pc.b) > 1e-12)
                throw std::invalid_argument(
                    "aggregate_invariant_constraints: constraint '" + c.label +
                    "' projects to 0 = " + std::to_string(pc.b));
            continue;  // implied by invariance
        }
        if (seen.insert(entries_key(pc.a, pc.b)).second) out.constraints.push_back(std::move(pc));
    }
    return out;
}

SdpProblem reduce_sdp(const SdpProblem& problem, const OrbitBasis& basis,
                      const MultiplicationTable& table) {
    if (problem.form != SdpForm::PrimalTrace)
        throw std::invalid_argument("reduce_sdp: needs a PrimalTrace problem");
    const int z = basis.z;
    const int d = basis.d;
    for (const auto& b : problem.blocks)
        if (b.dim != z)
            throw std::invalid_argument("reduce_sdp: block '" + b.name + "' has dimension " +
                                        std::to_string(b.dim) + ", expected |Z| = " +
                                        std::to_string(z));

    const int nblocks = static_cast<int>(problem.blocks.size());

    // Invariance check: every matrix must be constant on each orbit.
    auto check_invariant = [&](const std::vector<SparseEntry>& entries, const std::string& what) {
        for (int blk = 0; blk < nblocks; ++blk) {
            Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(z, z);
            scatter_symmetric(entries, blk, dense);
            for (int o = 0; o < d; ++o) {
                auto [i0, j0] = basis.orbits[o][0];
                double ref = dense(i0, j0);
                for (auto [i, j] : basis.orbits[o]) {
                    if (std::abs(dense(i, j) - ref) > 1e-9 * (1.0 + std::abs(ref)))
                        throw std::invalid_argument("reduce_sdp: " + what + " (block '" +
                                                    problem.blocks[blk].name +
                                                    "') is not constant on orbit " +
                                                    std::to_string(o));
                }
            }
        }
    };
    check_invariant(problem.objective, "objective");
    for (size_t i = 0; i < problem.constraints.size(); ++i)
        check_invariant(problem.constraints[i].a,
                        "constraint " + std::to_string(i) +
                            (problem.constraints[i].label.empty()
                                 ? ""
                                 : " ('" + problem.constraints[i].label + "')"));

    // tr(M B_j) = <M, E_j> / sqrt(|E_j|) per block.
    auto basis_coeffs = [&](const std::vector<SparseEntry>& entries, int blk) {
        std::vector<double> c(d, 0.0);
        for (const auto& e : entries) {
            if (e.block != blk) continue;
            c[basis.orbit(e.i, e.j)] += e.value;
            if (e.i != e.j) c[basis.orbit(e.j, e.i)] += e.value;
        }
        for (int o = 0; o < d; ++o) c[o] /= std::sqrt(static_cast<double>(basis.norms[o]));
        return c;
    };

    SdpProblem out;
    out.form = SdpForm::ReducedLmi;
    out.lmi_d = d;
    out.lmi_basis = table.L;
    out.putinar = problem.putinar;
    out.meta = problem.meta;
    out.meta["reduced"] = "schrijver-lmi";
    out.var_objective.assign(static_cast<size_t>(nblocks) * d, 0.0);
    for (int blk = 0; blk < nblocks; ++blk) {
        out.blocks.push_back({problem.blocks[blk].name + "~reduced", d});
        auto c = basis_coeffs(problem.objective, blk);
        for (int j = 0; j < d; ++j) out.var_objective[static_cast<size_t>(blk) * d + j] = c[j];
    }
    for (const auto& con : problem.constraints) {
        std::vector<std::pair<int, double>> row;
        for (int blk = 0; blk < nblocks; ++blk) {
            auto c = basis_coeffs(con.a, blk);
            for (int j = 0; j < d; ++j)
                if (c[j] != 0.0) row.push_back({blk * d + j, c[j]});
        }
        out.eq_rows.push_back(std::move(row));
        out.eq_rhs.push_back(con.b);
    }
    return out;
}

std::vector<Eigen::MatrixXd> lift_reduced_solution(const SdpProblem& reduced,
                                                   const OrbitBasis& basis,
                                                   const std::vector<double>& x) {
    if (reduced.form != SdpForm::ReducedLmi)
        throw std::invalid_argument("lift_reduced_solution: needs a ReducedLmi problem");
    if (static_cast<int>(x.size()) != reduced.num_vars())
        throw std::invalid_argument("lift_reduced_solution: variable count mismatch");
    const int d = reduced.lmi_d;
    std::vector<Eigen::MatrixXd> out;
    for (size_t blk = 0; blk < reduced.blocks.size(); ++blk) {
        Eigen::MatrixXd X = Eigen::MatrixXd::Zero(basis.z, basis.z);
        for (int j = 0; j < d; ++j) {
            double coeff = x[blk * d + j] / std::sqrt(static_cast<double>(basis.norms[j]));
            if (coeff == 0.0) continue;
            for (auto [r, c] : basis.orbits[j]) X(r, c) += coeff;
        }
        out.push_back(std::move(X));
    }
    return out;
}

std::vector<std::vector<int>> closure_permutation_group(const PermAction& action, size_t budget) {
    std::set<std::vector<int>> group;
    std::vector<int> identity(action.z_size);
    std::iota(identity.begin(), identity.end(), 0);
    std::queue<std::vector<int>> frontier;
    group.insert(identity);
    frontier.push(identity);
    while (!frontier.empty()) {
        auto cur = frontier.front();
        frontier.pop();
        for (const auto& gen : action.generators) {
            std::vector<int> next(action.z_size);
            for (int i = 0; i < action.z_size; ++i) next[i] = gen.perm[cur[i]];
            if (group.insert(next).second) {
                if (group.size() > budget)
                    throw SizeLimitError("closure_permutation_group: budget exceeded");
                frontier.push(std::move(next));
            }
        }
    }
    return {group.begin(), group.end()};
}

Eigen::MatrixXd group_average(const PermAction& action, const Eigen::MatrixXd& x) {
    auto group = closure_permutation_group(action);
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (const auto& perm : group) {
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j) avg(perm[i], perm[j]) += x(i, j);
    }
    return avg / static_cast<double>(group.size());
}

}  // namespace apcert
