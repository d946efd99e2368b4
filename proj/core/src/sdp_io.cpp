#include <cstdio>
#include <fstream>
#include <sstream>

#include "apcert/sdp.hpp"

namespace apcert {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_entry(std::ostream& os, int matno, int blkno, int i, int j, double value) {
    if (value == 0.0) return;
    os << matno << " " << blkno << " " << i + 1 << " " << j + 1 << " " << fmt17(value) << "\n";
}

}  // namespace

void export_sdpa(const SdpProblem& problem, std::ostream& os) {
    if (problem.form == SdpForm::PrimalTrace) {
        os << "* apcert sdpa export: primal-trace problem";
        if (problem.putinar) os << " (" << problem.putinar->group_spec << ")";
        os << "\n";
        os << problem.constraints.size() << "\n";
        os << problem.blocks.size() << "\n";
        for (size_t b = 0; b < problem.blocks.size(); ++b)
            os << problem.blocks[b].dim << (b + 1 < problem.blocks.size() ? " " : "\n");
        if (problem.blocks.empty()) os << "\n";
        for (size_t c = 0; c < problem.constraints.size(); ++c)
            os << fmt17(problem.constraints[c].b) << (c + 1 < problem.constraints.size() ? " " : "");
        os << "\n";
        for (const auto& e : problem.objective) write_entry(os, 0, e.block + 1, e.i, e.j, e.value);
        for (size_t c = 0; c < problem.constraints.size(); ++c)
            for (const auto& e : problem.constraints[c].a)
                write_entry(os, static_cast<int>(c) + 1, e.block + 1, e.i, e.j, e.value);
        return;
    }

    // ReducedLmi: the file is the natural SDPA primal
    //   min c^T x  s.t.  sum_i x_i F_i - F0 >= 0
    // with c = -var_objective (the reduced problem maximizes), the LMI basis
    // symmetrized (sound: objective and equality data are constant on
    // transpose-paired coordinates), and each equality a^T x = f written as a
    // +/- pair of diagonal-block rows.
    const int nblocks = static_cast<int>(problem.blocks.size());
    const int d = problem.lmi_d;
    const int neq = static_cast<int>(problem.eq_rows.size());
    os << "* apcert sdpa export: reduced-lmi problem (objective negated for minimization)\n";
    os << problem.num_vars() << "\n";
    os << nblocks + (neq > 0 ? 1 : 0) << "\n";
    for (int b = 0; b < nblocks; ++b) os << d << (b + 1 < nblocks || neq > 0 ? " " : "\n");
    if (neq > 0) os << -2 * neq << "\n";
    for (int v = 0; v < problem.num_vars(); ++v)
        os << fmt17(-problem.var_objective[v]) << (v + 1 < problem.num_vars() ? " " : "");
    os << "\n";
    // F0: only the equality right-hand sides.
    for (int r = 0; r < neq; ++r) {
        write_entry(os, 0, nblocks + 1, r, r, problem.eq_rhs[r]);
        write_entry(os, 0, nblocks + 1, neq + r, neq + r, -problem.eq_rhs[r]);
    }
    // F_v: the symmetrized LMI basis in the variable's block plus its
    // coefficients in the equality rows.
    for (int v = 0; v < problem.num_vars(); ++v) {
        int blk = v / d, j = v % d;
        Eigen::MatrixXd sym = 0.5 * (problem.lmi_basis[j] + problem.lmi_basis[j].transpose());
        for (int r = 0; r < d; ++r)
            for (int c = r; c < d; ++c) write_entry(os, v + 1, blk + 1, r, c, sym(r, c));
        for (int r = 0; r < neq; ++r)
            for (const auto& [var, coeff] : problem.eq_rows[r])
                if (var == v) {
                    write_entry(os, v + 1, nblocks + 1, r, r, coeff);
                    write_entry(os, v + 1, nblocks + 1, neq + r, neq + r, -coeff);
                }
    }
}

void export_sdpa(const SdpProblem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_sdpa: cannot open " + path);
    export_sdpa(problem, out);
    if (!out) throw std::runtime_error("export_sdpa: write failed for " + path);
}

SdpProblem import_sdpa(std::istream& is) {
    // Comment lines start with '*' or '"'. Block sizes may be negative
    // (diagonal blocks); we keep the dense dimension and note the sign.
    auto next_data_line = [&](std::string& line) {
        while (std::getline(is, line)) {
            size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            if (line[first] == '*' || line[first] == '"') continue;
            return true;
        }
        return false;
    };

    std::string line;
    auto read_values = [&](const char* what) {
        if (!next_data_line(line)) throw std::runtime_error(std::string("import_sdpa: missing ") + what);
        // Tolerate separators used in the wild: commas, parens, braces.
        for (char& ch : line)
            if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        return vals;
    };

    auto mvals = read_values("constraint count");
    int m = static_cast<int>(mvals.at(0));
    auto nbvals = read_values("block count");
    int nblocks = static_cast<int>(nbvals.at(0));
    auto sizes = read_values("block sizes");
    if (static_cast<int>(sizes.size()) < nblocks)
        throw std::runtime_error("import_sdpa: not enough block sizes");
    std::vector<double> b;
    if (m > 0) {
        b = read_values("b vector");
        if (static_cast<int>(b.size()) < m) throw std::runtime_error("import_sdpa: short b vector");
    }

    SdpProblem problem;
    problem.form = SdpForm::PrimalTrace;
    std::string diag_note;
    for (int i = 0; i < nblocks; ++i) {
        int s = static_cast<int>(sizes[i]);
        problem.blocks.push_back({"B" + std::to_string(i + 1), std::abs(s)});
        diag_note += s < 0 ? "d" : ".";
    }
    problem.meta["sdpa_block_kinds"] = diag_note;
    problem.constraints.resize(m);
    for (int i = 0; i < m; ++i) problem.constraints[i].b = b[i];

    while (next_data_line(line)) {
        for (char& ch : line)
            if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
        std::istringstream ls(line);
        int matno, blkno, i, j;
        double value;
        if (!(ls >> matno >> blkno >> i >> j >> value)) continue;
        if (blkno < 1 || blkno > nblocks) throw std::runtime_error("import_sdpa: bad block number");
        if (i > j) std::swap(i, j);
        SparseEntry e{blkno - 1, i - 1, j - 1, value};
        if (matno == 0)
            problem.objective.push_back(e);
        else if (matno >= 1 && matno <= m)
            problem.constraints[matno - 1].a.push_back(e);
        else
            throw std::runtime_error("import_sdpa: bad matrix number");
    }
    return problem;
}

SdpProblem import_sdpa_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_sdpa: cannot open " + path);
    return import_sdpa(in);
}

}  // namespace apcert
