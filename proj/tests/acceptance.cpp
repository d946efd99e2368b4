// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "apcert/ap_engine.hpp"
#include "apcert/bounds.hpp"
#include "apcert/certificate.hpp"
#include "apcert/group.hpp"
#include "apcert/oracle.hpp"
#include "apcert/sdp.hpp"
#include "apcert/sym_reduce.hpp"

using namespace apcert;

namespace {

std::string g_cli_path;
int g_threads = 2;

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

std::vector<Criterion> g_results;

template <typename Fn>
void run_criterion(const std::string& name, Fn&& body) {
    Criterion c;
    c.name = name;
    auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s (%.2fs)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.seconds);
    for (const auto& n : c.notes) std::printf("       - %s\n", n.c_str());
    std::fflush(stdout);
    g_results.push_back(std::move(c));
}

std::string run_cli(const std::string& args) {
    std::string cmd = g_cli_path + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + cmd);
    std::string out;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
    pclose(pipe);
    return out;
}

const std::vector<std::string>& test_set() {
    static std::vector<std::string> groups = [] {
        std::vector<std::string> g;
        for (int n = 4; n <= 24; ++n) g.push_back("Z" + std::to_string(n));
        g.insert(g.end(), {"S3", "S4", "D6", "D8", "D10", "D12", "D14", "D16",
                           "Z2 x Z4", "Z3 x Z3", "Z2 x Z2 x Z2"});
        return g;
    }();
    return groups;
}

// Q8 is reachable only through a Cayley table; the test set includes it via
// this fixture.
FiniteGroup make_q8() {
    auto enc = [](int sign, int axis) { return axis * 2 + (sign < 0 ? 1 : 0); };
    static const int prod_axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int prod_sign[4][4] = {
        {+1, +1, +1, +1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}, {+1, +1, -1, -1}};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int as = a % 2 ? -1 : 1, ax = a / 2;
            int bs = b % 2 ? -1 : 1, bx = b / 2;
            t[a][b] = enc(as * bs * prod_sign[ax][bx], prod_axis[ax][bx]);
        }
    return from_cayley_table(t).group;
}

void criterion1_table(Criterion& c) {
    std::string out = run_cli("bound --table");
    struct Row {
        const char* group;
        const char* total;
        const char* bound;
    };
    const Row expected[] = {{"S5", "4540", "90"},
                            {"S6", "205440", "3240"},
                            {"S7", "11307660", "306180"},
                            {"S8", "774278400", "16208640"}};
    std::istringstream lines(out);
    std::string line;
    std::map<std::string, std::pair<std::string, std::string>> seen;
    while (std::getline(lines, line)) {
        std::istringstream ls(line);
        std::string g, total, bound;
        if (ls >> g >> total >> bound && g.size() == 2 && g[0] == 'S')
            seen[g] = {total, bound};
    }
    for (const auto& row : expected) {
        auto it = seen.find(row.group);
        if (it == seen.end()) {
            c.expect(false, std::string(row.group) + ": row missing from `bound --table`");
            continue;
        }
        c.expect(it->second.first == row.total,
                 std::string(row.group) + " 3-AP total: expected " + row.total + ", computed " +
                     it->second.first);
        c.expect(it->second.second == row.bound,
                 std::string(row.group) + " bound: expected " + row.bound + ", computed " +
                     it->second.second);
    }
}

void criterion2_certificates(Criterion& c) {
    int checked = 0;
    for (int k = 5; k <= 500; ++k) {
        if (k % 2 == 0 || k % 3 == 0) continue;
        auto v = verify_certificate(k);
        ++checked;
        if (!v.identity_holds)
            c.expect(false, "k = " + std::to_string(k) + ": " + v.first_difference);
    }
    c.expect(checked == 166, "eligible k count " + std::to_string(checked));
}

void criterion3_cyclic_sweep(Criterion& c) {
    ExactSearchOptions opts;
    opts.threads = g_threads;
    for (int n = 4; n <= 24; ++n) {
        CyclicCheck check = cyclic_table_check(n, opts);
        if (!check.pass)
            c.expect(false, "Z" + std::to_string(n) + ": exact " + std::to_string(check.exact) +
                                " outside [" + rat_str(check.lower) + ", " +
                                rat_str(check.upper) + "]");
        if (n == 5) c.expect(check.exact == 1, "Z5 exact should be 1");
        if (n == 7) c.expect(check.exact == 3, "Z7 exact should be 3");
        if (n == 8) c.expect(check.exact == 0, "Z8 exact should be 0");
    }
}

void criterion4_soundness(Criterion& c) {
    ExactSearchOptions opts;
    opts.threads = g_threads;
    auto check_group = [&](const FiniteGroup& g, const std::string& name) {
        BoundCheck bc = verify_bound(g, opts);
        if (!bc.pass)
            c.expect(false, name + ": ceil(bound) " + bc.bound_ceil.get_str() + " > exact " +
                                std::to_string(bc.exact));
        return bc;
    };
    for (const auto& spec : test_set()) check_group(build_group(spec), spec);
    check_group(make_q8(), "Q8");

    for (int p : {5, 7, 11, 13}) {
        BoundCheck bc = verify_bound(build_cyclic(p), opts);
        c.expect(bc.slack == 0, "Z" + std::to_string(p) + ": bound not sharp (slack " +
                                    std::to_string(bc.slack) + ")");
    }
}

void criterion5_dihedral(Criterion& c) {
    ExactSearchOptions opts;
    opts.threads = g_threads;
    for (int n = 3; n <= 8; ++n) {
        DihedralCheck check = dihedral_identity_check(n, opts);
        if (!check.pass)
            c.expect(false, "n = " + std::to_string(n) + ": R(3,D" + std::to_string(2 * n) +
                                ",2) = " + std::to_string(check.dihedral_exact) + " but 2R(3,Z" +
                                std::to_string(n) + ",2) = " +
                                std::to_string(2 * check.cyclic_exact));
    }
}

void criterion6_counting(Criterion& c) {
    auto check_count = [&](const FiniteGroup& g, const std::string& name) {
        long enumerated = static_cast<long>(enumerate_aps(g, 3).size());
        Rational formula = total_aps_proof_formula(g);
        if (Rational(enumerated) != formula)
            c.expect(false, name + ": enumeration " + std::to_string(enumerated) +
                                " != proof formula " + rat_str(formula));
    };
    for (const auto& spec : test_set()) check_count(build_group(spec), spec);
    check_count(make_q8(), "Q8");

    Rational s3_theorem = total_aps_theorem_formula(group_facts("S3"));
    c.expect(s3_theorem == make_rational(1, 2), "S3 theorem total should be 1/2");
    c.expect(!rat_is_integer(s3_theorem), "S3 theorem total should be non-integer");

    std::string out = run_cli("verify S3");
    c.expect(out.find("non-integer") != std::string::npos,
             "verify S3 should flag the non-integer theorem total");
    c.expect(out.find("differs from proof total") != std::string::npos,
             "verify S3 should flag the theorem/proof discrepancy");
}

void criterion7_indicator(Criterion& c) {
    std::mt19937_64 rng(20240817);
    for (const char* spec : {"Z8", "Z9", "S3", "D8"}) {
        FiniteGroup g = build_group(spec);
        for (int k : {3, 4, 5}) {
            if (enumerate_aps(g, k).empty()) continue;
            for (int trial = 0; trial < 1000; ++trial) {
                Coloring chi;
                for (int i = 0; i < g.order(); ++i)
                    chi.values.push_back(rng() & 1 ? 1 : -1);
                long direct = count_monochromatic_direct(g, chi, k);
                long indicator = count_monochromatic_indicator(g, chi, k);
                if (direct != indicator) {
                    c.expect(false, std::string(spec) + " k=" + std::to_string(k) +
                                        ": indicator " + std::to_string(indicator) +
                                        " != direct " + std::to_string(direct));
                    break;
                }
            }
        }
    }
}

void criterion8_sdp(Criterion& c) {
    FiniteGroup z3 = build_cyclic(3);
    FiniteGroup z5 = build_cyclic(5);
    FiniteGroup z7 = build_cyclic(7);

    SdpSolution z5_sym = solve_small(build_putinar_degree3(z5, PutinarMode::Symmetric));
    c.expect(z5_sym.converged, "Z5 symmetric solve did not converge");
    c.expect(std::abs(z5_sym.objective - (-7.5)) <= 1e-3,
             "Z5 symmetric lambda* = " + std::to_string(z5_sym.objective) + ", expected -7.5");
    double bound = bound_from_lambda(z5_sym.objective, total_aps_proof_formula(z5));
    c.expect(std::abs(bound - 0.625) <= 1e-3,
             "Z5 bound = " + std::to_string(bound) + ", expected 0.625");

    SdpSolution z5_full = solve_small(build_putinar_degree3(z5, PutinarMode::Full));
    c.expect(std::abs(z5_full.objective - z5_sym.objective) <= 1e-5,
             "Z5 full/symmetric gap " +
                 std::to_string(std::abs(z5_full.objective - z5_sym.objective)));

    SdpSolution z7_full = solve_small(build_putinar_degree3(z7, PutinarMode::Full));
    SdpSolution z7_sym = solve_small(build_putinar_degree3(z7, PutinarMode::Symmetric));
    c.expect(std::abs(z7_full.objective - z7_sym.objective) <= 1e-5,
             "Z7 full/symmetric gap " +
                 std::to_string(std::abs(z7_full.objective - z7_sym.objective)));

    SdpSolution z3_full = solve_small(build_putinar_degree3(z3, PutinarMode::Full));
    double z3_vertex_min = hypercube_min_pg(z3);
    c.expect(std::abs(z3_full.objective - (-1.0)) <= 1e-3,
             "Z3 lambda* = " + std::to_string(z3_full.objective) +
                 ", expected the hypercube minimum " + std::to_string(z3_vertex_min) +
                 " (the degree-3 relaxation optimum is -1.5, independently confirmed; the "
                 "relaxation is not tight for Z3)");
    c.expect(z3_full.objective <= z3_vertex_min + 1e-6,
             "Z3 lambda* must not exceed the hypercube minimum");

    SdpProblem z3_problem = build_putinar_degree3(z3, PutinarMode::Full);
    std::stringstream file;
    export_sdpa(z3_problem, file);
    SdpProblem back = import_sdpa(file);
    bool roundtrip = back.constraints.size() == z3_problem.constraints.size() &&
                     back.blocks.size() == z3_problem.blocks.size();
    if (roundtrip) {
        for (size_t blk = 0; blk < z3_problem.blocks.size() && roundtrip; ++blk)
            roundtrip = z3_problem.dense_objective(static_cast<int>(blk)) ==
                        back.dense_objective(static_cast<int>(blk));
        for (size_t cc = 0; cc < z3_problem.constraints.size() && roundtrip; ++cc) {
            roundtrip = z3_problem.constraints[cc].b == back.constraints[cc].b;
            for (size_t blk = 0; blk < z3_problem.blocks.size() && roundtrip; ++blk)
                roundtrip = z3_problem.dense_constraint(static_cast<int>(cc),
                                                        static_cast<int>(blk)) ==
                            back.dense_constraint(static_cast<int>(cc), static_cast<int>(blk));
        }
    }
    c.expect(roundtrip, "SDPA export/import round trip is not bit-exact");
}

void criterion9_sym_reduce(Criterion& c) {
    std::mt19937_64 rng(99);
    for (const char* spec : {"Z5", "Z7", "S3"}) {
        FiniteGroup g = build_group(spec);
        OrbitBasis basis = orbit_basis(symmetry_generators(g).action);
        MultiplicationTable table = multiplication_table(basis);
        std::string name(spec);

        long total = 0;
        for (long n : basis.norms) total += n;
        c.expect(total == static_cast<long>(basis.z) * basis.z,
                 name + ": orbit sizes sum to " + std::to_string(total));

        for (int o = 0; o < basis.d; ++o)
            if (basis.transpose_map[basis.transpose_map[o]] != o)
                c.expect(false, name + ": transpose involution broken at orbit " +
                                    std::to_string(o));

        for (int k = 0; k < basis.d; ++k) {
            size_t reps = std::min<size_t>(5, basis.orbits[k].size());
            for (size_t r = 1; r < reps; ++r) {
                auto [u, v] = basis.orbits[k][r];
                for (int i = 0; i < basis.d && c.pass; ++i)
                    for (int j = 0; j < basis.d && c.pass; ++j) {
                        long count = 0;
                        for (int w = 0; w < basis.z; ++w)
                            count += basis.orbit(u, w) == i && basis.orbit(w, v) == j;
                        if (count != table.p_at(i, j, k))
                            c.expect(false,
                                     name + ": structure constant depends on the representative");
                    }
            }
        }

        std::normal_distribution<double> dist;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(basis.d);
            for (auto& v : x) v = dist(rng);
            for (int i = 0; i < basis.d; ++i) {
                int t = basis.transpose_map[i];
                double avg = 0.5 * (x[i] + x[t]);
                x[i] = x[t] = avg;
            }
            Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(basis.z, basis.z);
            for (int i = 0; i < basis.d; ++i) bm += x[i] * normalized_orbit_matrix(basis, i);
            Eigen::MatrixXd lm = Eigen::MatrixXd::Zero(basis.d, basis.d);
            for (int i = 0; i < basis.d; ++i) lm += x[i] * table.L[i];
            auto eig = [](const Eigen::MatrixXd& m) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                                  Eigen::EigenvaluesOnly);
                return es.eigenvalues().minCoeff();
            };
            bool b_psd = eig(bm) >= -1e-8, l_psd = eig(lm) >= -1e-8;
            if (b_psd != l_psd)
                c.expect(false, name + ": PSD sign disagreement between B and L combinations");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    g_cli_path = argc > 1 ? argv[1] : "./tools/apcert";
    if (const char* t = std::getenv("APCERT_ACCEPT_THREADS")) g_threads = std::atoi(t);

    run_criterion("1: S5..S8 table reproduction (exact)", criterion1_table);
    run_criterion("2: certificate identity, eligible k in 5..500 (exact)",
                  criterion2_certificates);
    run_criterion("3: cyclic exact values vs the n mod 24 table, n in 4..24",
                  criterion3_cyclic_sweep);
    run_criterion("4: theorem bound soundness + sharpness on Z5/Z7/Z11/Z13",
                  criterion4_soundness);
    run_criterion("5: dihedral identity R(3,D2n,2) = 2 R(3,Zn,2), n in 3..8",
                  criterion5_dihedral);
    run_criterion("6: proof-formula counting + flagged theorem/proof discrepancy",
                  criterion6_counting);
    run_criterion("7: indicator equals direct count on 1000 random colorings",
                  criterion7_indicator);
    run_criterion("8: SDP pipeline (Z5 -7.5/0.625, mode agreement, Z3, SDPA round trip)",
                  criterion8_sdp);
    run_criterion("9: orbit basis algebra + *-isomorphism sign checks", criterion9_sym_reduce);

    // Stated runtime budgets.
    for (auto& r : g_results) {
        auto over = [&](const char* prefix, double limit) {
            return r.name.rfind(prefix, 0) == 0 && r.seconds > limit;
        };
        if (over("1:", 30.0) || over("2:", 10.0) || over("3:", 300.0) || over("8:", 60.0)) {
            r.pass = false;
            std::printf("[FAIL] criterion %s exceeded its runtime budget (%.2fs)\n",
                        r.name.c_str(), r.seconds);
        }
    }

    int failures = 0;
    for (const auto& r : g_results) failures += r.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures == 0 ? 0 : 1;
}
