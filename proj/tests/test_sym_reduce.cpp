#include <doctest.h>

#include <random>

#include "apcert/group.hpp"
#include "apcert/sdp.hpp"
#include "apcert/sym_reduce.hpp"

using namespace apcert;

namespace {

Eigen::MatrixXd combine_b(const OrbitBasis& basis, const std::vector<double>& x) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.z, basis.z);
    for (int i = 0; i < basis.d; ++i) m += x[i] * normalized_orbit_matrix(basis, i);
    return m;
}

Eigen::MatrixXd combine_l(const MultiplicationTable& table, const std::vector<double>& x) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(table.d, table.d);
    for (int i = 0; i < table.d; ++i) m += x[i] * table.L[i];
    return m;
}

std::vector<double> random_transpose_symmetric(const OrbitBasis& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    std::vector<double> x(basis.d);
    for (int i = 0; i < basis.d; ++i) x[i] = dist(rng);
    for (int i = 0; i < basis.d; ++i) {
        int t = basis.transpose_map[i];
        double avg = 0.5 * (x[i] + x[t]);
        x[i] = x[t] = avg;
    }
    return x;
}

double min_eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("symmetry generators admit the affine maps of Z5") {
    FiniteGroup z5 = build_cyclic(5);
    SymmetryGenResult sym = symmetry_generators(z5);
    CHECK(sym.rejected.empty());
    CHECK(!sym.action.generators.empty());

    // The admitted action realizes the full affine group + inversion: the
    // pair orbits on {1} u Z5 are (c,c), (c,*), (*,c), diag, off-diag.
    OrbitBasis basis = orbit_basis(sym.action);
    CHECK(basis.d == 5);
    long total = 0;
    for (long n : basis.norms) total += n;
    CHECK(total == 36);

    auto group = closure_permutation_group(sym.action);
    CHECK(group.size() == 20);  // translations x multipliers; inversion = mult by 4
}

TEST_CASE("power maps that break APs are rejected with a diagnostic") {
    // On S4 the coprime power maps x -> x^5 and x -> x^7 are bijections but
    // do not map AP sets to AP sets; they must be reported, never admitted.
    SymmetryGenResult sym = symmetry_generators(build_symmetric(4));
    REQUIRE(sym.rejected.size() == 2);
    for (const auto& r : sym.rejected) {
        CHECK(r.find("pow") != std::string::npos);
        CHECK(r.find("not an AP") != std::string::npos);
    }
    for (const auto& name : sym.admitted) CHECK((name.find("pow5") == std::string::npos));
}

TEST_CASE("generator option flags") {
    FiniteGroup z5 = build_cyclic(5);
    SymmetryGenOptions no_auto;
    no_auto.include_automorphisms = false;
    CHECK(orbit_basis(symmetry_generators(z5, no_auto).action).d == 6);

    SymmetryGenOptions translations_only;
    translations_only.include_automorphisms = false;
    translations_only.include_inversion = false;
    CHECK(orbit_basis(symmetry_generators(z5, translations_only).action).d == 8);
}

TEST_CASE("trivial group action") {
    FiniteGroup z1 = build_cyclic(1);
    SymmetryGenResult sym = symmetry_generators(z1);
    REQUIRE(sym.action.generators.size() == 1);
    CHECK(sym.action.generators[0].perm == std::vector<int>{0, 1});
    OrbitBasis basis = orbit_basis(sym.action);
    CHECK(basis.d == 4);
    for (long n : basis.norms) CHECK(n == 1);
}

TEST_CASE("S3 generators preserve both APs; closure includes the inverse map") {
    FiniteGroup s3 = build_symmetric(3);
    SymmetryGenResult sym = symmetry_generators(s3);
    CHECK(sym.rejected.empty());
    auto group = closure_permutation_group(sym.action);
    CHECK(group.size() == 72);  // maps x -> a x b and x -> a x^{-1} b

    OrbitBasis basis = orbit_basis(sym.action);
    CHECK(basis.d == 6);  // (c,c),(c,*),(*,c),diag, transposition-difference, 3-cycle-difference
    long total = 0;
    for (long n : basis.norms) total += n;
    CHECK(total == 49);
}

TEST_CASE("orbit partition, generator stability and transpose involution") {
    for (const char* spec : {"Z5", "Z7", "S3"}) {
        FiniteGroup g = build_group(spec);
        SymmetryGenResult sym = symmetry_generators(g);
        OrbitBasis basis = orbit_basis(sym.action);
        CAPTURE(spec);

        long total = 0;
        for (long n : basis.norms) total += n;
        CHECK(total == static_cast<long>(basis.z) * basis.z);

        for (int o = 0; o < basis.d; ++o) {
            CHECK(basis.transpose_map[basis.transpose_map[o]] == o);
            for (auto [i, j] : basis.orbits[o]) {
                CHECK(basis.orbit(j, i) == basis.transpose_map[o]);
                for (const auto& gen : sym.action.generators)
                    CHECK(basis.orbit(gen.perm[i], gen.perm[j]) == o);
            }
        }
    }
}

TEST_CASE("structure constants are representative independent") {
    for (const char* spec : {"Z5", "Z7", "S3"}) {
        FiniteGroup g = build_group(spec);
        OrbitBasis basis = orbit_basis(symmetry_generators(g).action);
        MultiplicationTable table = multiplication_table(basis);
        CAPTURE(spec);

        for (int k = 0; k < basis.d; ++k) {
            size_t reps = std::min<size_t>(5, basis.orbits[k].size());
            for (size_t r = 1; r < reps; ++r) {
                auto [u, v] = basis.orbits[k][r];
                std::vector<long> counts(static_cast<size_t>(basis.d) * basis.d, 0);
                for (int w = 0; w < basis.z; ++w)
                    ++counts[static_cast<size_t>(basis.orbit(u, w)) * basis.d +
                             basis.orbit(w, v)];
                for (int i = 0; i < basis.d; ++i)
                    for (int j = 0; j < basis.d; ++j)
                        CHECK(counts[static_cast<size_t>(i) * basis.d + j] ==
                              table.p_at(i, j, k));
            }
        }
    }
}

TEST_CASE("identity-only action yields matrix units") {
    PermAction action;
    action.z_size = 2;
    action.generators.push_back({"id", {0, 1}, true});
    OrbitBasis basis = orbit_basis(action);
    REQUIRE(basis.d == 4);
    MultiplicationTable table = multiplication_table(basis);

    // E_i E_j = sum_k p E_k with p in {0,1}: the matrix-unit algebra.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Eigen::MatrixXd lhs = orbit_matrix(basis, i) * orbit_matrix(basis, j);
            Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2, 2);
            for (int k = 0; k < 4; ++k) {
                long p = table.p_at(i, j, k);
                CHECK((p == 0 || p == 1));
                rhs += static_cast<double>(p) * orbit_matrix(basis, k);
            }
            CHECK((lhs - rhs).norm() == 0.0);
        }
}

TEST_CASE("B-basis multiplication matches the lambda parameters") {
    for (const char* spec : {"Z5", "S3"}) {
        FiniteGroup g = build_group(spec);
        OrbitBasis basis = orbit_basis(symmetry_generators(g).action);
        MultiplicationTable table = multiplication_table(basis);
        CAPTURE(spec);
        for (int i = 0; i < basis.d; ++i)
            for (int j = 0; j < basis.d; ++j) {
                Eigen::MatrixXd lhs =
                    normalized_orbit_matrix(basis, i) * normalized_orbit_matrix(basis, j);
                Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(basis.z, basis.z);
                for (int k = 0; k < basis.d; ++k)
                    rhs += table.lambda_at(i, j, k) * normalized_orbit_matrix(basis, k);
                CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
            }
    }
}

TEST_CASE("the unit of the algebra maps to the unit of the L-algebra") {
    FiniteGroup z5 = build_cyclic(5);
    OrbitBasis basis = orbit_basis(symmetry_generators(z5).action);
    MultiplicationTable table = multiplication_table(basis);
    // I = sum over diagonal orbits of E_o, so phi(I) = sum sqrt(n_o) L_o = I_d.
    Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(basis.d, basis.d);
    for (int o = 0; o < basis.d; ++o) {
        auto [i, j] = basis.orbits[o][0];
        if (i == j) unit += std::sqrt(static_cast<double>(basis.norms[o])) * table.L[o];
    }
    CHECK((unit - Eigen::MatrixXd::Identity(basis.d, basis.d)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("star isomorphism: multiplicative, transpose-respecting, sign-preserving") {
    std::mt19937_64 rng(42);
    for (const char* spec : {"Z5", "Z7", "S3"}) {
        FiniteGroup g = build_group(spec);
        OrbitBasis basis = orbit_basis(symmetry_generators(g).action);
        MultiplicationTable table = multiplication_table(basis);
        CAPTURE(spec);

        // L_{transpose(i)} = L_i^T.
        for (int i = 0; i < basis.d; ++i)
            CHECK((table.L[basis.transpose_map[i]] - table.L[i].transpose())
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);

        // phi(XY) = phi(X) phi(Y) through the lambda expansion.
        std::normal_distribution<double> dist;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> x(basis.d), y(basis.d);
            for (auto& v : x) v = dist(rng);
            for (auto& v : y) v = dist(rng);
            std::vector<double> z(basis.d, 0.0);
            for (int i = 0; i < basis.d; ++i)
                for (int j = 0; j < basis.d; ++j)
                    for (int k = 0; k < basis.d; ++k)
                        z[k] += x[i] * y[j] * table.lambda_at(i, j, k);
            CHECK((combine_b(basis, x) * combine_b(basis, y) - combine_b(basis, z))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
            CHECK((combine_l(table, x) * combine_l(table, y) - combine_l(table, z))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }

        // Sign agreement of the least eigenvalue on 20 random symmetric elements.
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_transpose_symmetric(basis, rng);
            double eb = min_eig(combine_b(basis, x));
            double el = min_eig(combine_l(table, x));
            bool b_psd = eb >= -1e-8, l_psd = el >= -1e-8;
            CHECK(b_psd == l_psd);
        }
    }
}

TEST_CASE("reduce_sdp rejects non-invariant matrices with a diagnostic") {
    FiniteGroup z5 = build_cyclic(5);
    OrbitBasis basis = orbit_basis(symmetry_generators(z5).action);
    MultiplicationTable table = multiplication_table(basis);

    SdpProblem problem;
    problem.blocks.push_back({"X", basis.z});
    problem.objective.push_back({0, 0, 0, 1.0});
    SdpConstraint c;
    c.a.push_back({0, 1, 2, 1.0});  // a single off-diagonal cell: not orbit-constant
    c.b = 1.0;
    c.label = "poke";
    problem.constraints.push_back(c);
    CHECK_THROWS_WITH_AS(reduce_sdp(problem, basis, table),
                         doctest::Contains("not constant on orbit"), std::invalid_argument);

    SdpProblem mismatched;
    mismatched.blocks.push_back({"X", basis.z + 1});
    CHECK_THROWS_AS(reduce_sdp(mismatched, basis, table), std::invalid_argument);
}

TEST_CASE("reduction under the trivial action preserves the problem") {
    // max tr(CX), tr(I X) = 1 on 2x2 PSD: optimum 1 at X = e1 e1^T.
    PermAction action;
    action.z_size = 2;
    action.generators.push_back({"id", {0, 1}, true});
    OrbitBasis basis = orbit_basis(action);
    MultiplicationTable table = multiplication_table(basis);

    SdpProblem problem;
    problem.blocks.push_back({"X", 2});
    problem.objective.push_back({0, 0, 0, 1.0});
    problem.objective.push_back({0, 1, 1, -1.0});
    SdpConstraint trace1;
    trace1.a.push_back({0, 0, 0, 1.0});
    trace1.a.push_back({0, 1, 1, 1.0});
    trace1.b = 1.0;
    problem.constraints.push_back(trace1);

    SdpProblem reduced = reduce_sdp(problem, basis, table);
    CHECK(reduced.form == SdpForm::ReducedLmi);
    CHECK(reduced.lmi_d == 4);
    CHECK(reduced.num_vars() == 4);  // one scalar per matrix entry

    SdpSolution full = solve_small(problem);
    SdpSolution red = solve_small(reduced);
    CHECK(full.objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(red.objective == doctest::Approx(full.objective).epsilon(1e-6));

    auto lifted = lift_reduced_solution(reduced, basis, red.x);
    REQUIRE(lifted.size() == 1);
    CHECK(lifted[0].trace() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(min_eig(lifted[0]) > -1e-6);
}

TEST_CASE("aggregation drops implied equalities and keeps invariant content") {
    FiniteGroup z5 = build_cyclic(5);
    SdpProblem problem = build_putinar_degree3(z5, PutinarMode::Symmetric);
    PermAction stab = symmetry_generators(z5).action.identity_stabilizer();
    CHECK(!stab.generators.empty());
    SdpProblem aggregated = aggregate_invariant_constraints(problem, stab);
    CHECK(aggregated.constraints.size() < problem.constraints.size());

    OrbitBasis basis = orbit_basis(stab);
    MultiplicationTable table = multiplication_table(basis);
    SdpProblem reduced = reduce_sdp(aggregated, basis, table);  // must not throw
    CHECK(reduced.lmi_d == basis.d);
    CHECK(reduced.num_vars() == basis.d * 3);
}

TEST_CASE("orbit basis json export") {
    FiniteGroup z5 = build_cyclic(5);
    OrbitBasis basis = orbit_basis(symmetry_generators(z5).action);
    auto j = orbit_basis_to_json(basis);
    CHECK(j["z"] == 6);
    CHECK(j["d"] == 5);
    CHECK(j["orbits"].size() == 5);
    size_t pairs = 0;
    for (const auto& [id, lst] : j["orbits"].items()) pairs += lst.size();
    CHECK(pairs == 36);
}

TEST_CASE("group averaging keeps matrices in the commutant") {
    FiniteGroup z5 = build_cyclic(5);
    SymmetryGenResult sym = symmetry_generators(z5);
    OrbitBasis basis = orbit_basis(sym.action);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd x(basis.z, basis.z);
    for (int i = 0; i < basis.z; ++i)
        for (int j = 0; j < basis.z; ++j) x(i, j) = dist(rng);
    Eigen::MatrixXd avg = group_average(sym.action, x);
    for (int o = 0; o < basis.d; ++o) {
        auto [i0, j0] = basis.orbits[o][0];
        for (auto [i, j] : basis.orbits[o]) CHECK(avg(i, j) == doctest::Approx(avg(i0, j0)));
    }
    // Averaging an already-averaged matrix is a no-op.
    CHECK((group_average(sym.action, avg) - avg).cwiseAbs().maxCoeff() < 1e-12);
}
