#include "apcert/group.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace apcert {

namespace {

constexpr int kHardOrderCap = 65535;  // index storage is uint16_t

std::atomic<int> g_max_order{0};  // 0 = uninitialized

int default_max_order() {
    if (const char* env = std::getenv("APCERT_MAX_ORDER")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= kHardOrderCap) return static_cast<int>(v);
    }
    return 40320;  // |S8|, the largest group the bound tables need
}

void check_order_limit(long n, const std::string& what) {
    long cap = max_group_order();
    if (n < 1) throw std::invalid_argument(what + ": order must be >= 1");
    if (n > cap)
        throw SizeLimitError(what + ": order " + std::to_string(n) +
                             " exceeds the configured ceiling " + std::to_string(cap) +
                             " (override with APCERT_MAX_ORDER)");
}

long gcd_long(long a, long b) { return std::gcd(a, b); }
long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

int max_group_order() {
    int v = g_max_order.load(std::memory_order_relaxed);
    if (v == 0) {
        v = default_max_order();
        g_max_order.store(v, std::memory_order_relaxed);
    }
    return v;
}

void set_max_group_order(int n) {
    if (n < 1 || n > kHardOrderCap)
        throw std::invalid_argument("max group order must be in 1.." + std::to_string(kHardOrderCap));
    g_max_order.store(n, std::memory_order_relaxed);
}

FiniteGroup::FiniteGroup(int n, std::vector<uint16_t> mul, std::vector<std::string> labels,
                         std::string descriptor)
    : n_(n), mul_(std::move(mul)), labels_(std::move(labels)), descriptor_(std::move(descriptor)) {
    if (n_ < 1 || mul_.size() != static_cast<size_t>(n_) * n_)
        throw std::invalid_argument("FiniteGroup: bad table shape");
    if (labels_.empty()) {
        labels_.reserve(n_);
        for (int i = 0; i < n_; ++i) labels_.push_back("g" + std::to_string(i));
    }
    for (int j = 0; j < n_; ++j) {
        if (this->mul(0, j) != j || this->mul(j, 0) != j)
            throw std::logic_error("FiniteGroup: index 0 is not a two-sided identity");
    }
    inv_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
        int found = -1;
        for (int j = 0; j < n_; ++j) {
            if (this->mul(i, j) == 0 && this->mul(j, i) == 0) {
                found = j;
                break;
            }
        }
        if (found < 0) throw std::logic_error("FiniteGroup: element without inverse");
        inv_[i] = static_cast<uint16_t>(found);
    }
}

int FiniteGroup::power(int g, long e) const {
    if (g < 0 || g >= n_) throw std::out_of_range("power: element index out of range");
    if (e < 0) throw std::invalid_argument("power: negative exponent");
    int acc = 0, base = g;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

long OrderProfile::total() const {
    long t = 0;
    for (const auto& [k, c] : counts) t += c;
    return t;
}

long OrderProfile::count(long k) const {
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
}

long OrderProfile::exponent() const {
    long e = 1;
    for (const auto& [k, c] : counts) e = lcm_long(e, k);
    return e;
}

std::string OrderProfile::to_string() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [k, c] : counts) {
        if (!first) os << ", ";
        os << k << ":" << c;
        first = false;
    }
    os << "}";
    return os.str();
}

// -- constructions ------------------------------------------------------------

FiniteGroup build_cyclic(int n) {
    check_order_limit(n, "build_cyclic");
    std::vector<uint16_t> mul(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mul[static_cast<size_t>(i) * n + j] = static_cast<uint16_t>((i + j) % n);
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return FiniteGroup(n, std::move(mul), std::move(labels), "Z" + std::to_string(n));
}

FiniteGroup build_dihedral(int n) {
    if (n < 1) throw std::invalid_argument("build_dihedral: n must be >= 1");
    long order = 2L * n;
    check_order_limit(order, "build_dihedral");
    // Element (eps, i) = s^eps r^i, index eps*n + i, with s r = r^{-1} s.
    // (e1,i1)*(e2,i2) = (e1 xor e2, i2 + (-1)^{e2} i1 mod n).
    int N = static_cast<int>(order);
    std::vector<uint16_t> mul(static_cast<size_t>(N) * N);
    auto idx = [n](int eps, int i) { return eps * n + i; };
    for (int e1 = 0; e1 < 2; ++e1)
        for (int i1 = 0; i1 < n; ++i1)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int i2 = 0; i2 < n; ++i2) {
                    int i = e2 == 0 ? (i1 + i2) % n : ((i2 - i1) % n + n) % n;
                    mul[static_cast<size_t>(idx(e1, i1)) * N + idx(e2, i2)] =
                        static_cast<uint16_t>(idx(e1 ^ e2, i));
                }
    std::vector<std::string> labels;
    labels.reserve(N);
    for (int i = 0; i < n; ++i) labels.push_back("r" + std::to_string(i));
    for (int i = 0; i < n; ++i) labels.push_back("sr" + std::to_string(i));
    return FiniteGroup(N, std::move(mul), std::move(labels), "D" + std::to_string(order));
}

namespace {

long factorial(int m) {
    long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

// Lexicographic rank of a permutation of 0..m-1 (Lehmer code).
long perm_rank(const std::vector<int>& p) {
    int m = static_cast<int>(p.size());
    long rank = 0;
    for (int i = 0; i < m; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < m; ++j)
            if (p[j] < p[i]) ++smaller;
        rank += smaller * factorial(m - 1 - i);
    }
    return rank;
}

}  // namespace

FiniteGroup build_symmetric(int m) {
    if (m < 1) throw std::invalid_argument("build_symmetric: m must be >= 1");
    long order = 1;
    for (int i = 2; i <= m; ++i) {
        order *= i;
        if (order > kHardOrderCap) break;
    }
    check_order_limit(order, "build_symmetric(S" + std::to_string(m) + ")");
    int N = static_cast<int>(order);

    std::vector<std::vector<int>> perms;
    perms.reserve(N);
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    std::vector<uint16_t> mul(static_cast<size_t>(N) * N);
    std::vector<int> comp(m);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            // (p_i . p_j)(x) = p_i(p_j(x))
            for (int x = 0; x < m; ++x) comp[x] = perms[i][perms[j][x]];
            mul[static_cast<size_t>(i) * N + j] = static_cast<uint16_t>(perm_rank(comp));
        }
    }
    std::vector<std::string> labels;
    labels.reserve(N);
    for (const auto& q : perms) {
        std::string s;
        for (int x : q) s += static_cast<char>('0' + x);
        labels.push_back(s);
    }
    return FiniteGroup(N, std::move(mul), std::move(labels), "S" + std::to_string(m));
}

FiniteGroup build_direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    long order = static_cast<long>(g.order()) * h.order();
    check_order_limit(order, "build_direct_product");
    int N = static_cast<int>(order);
    int nh = h.order();
    std::vector<uint16_t> mul(static_cast<size_t>(N) * N);
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < nh; ++b)
            for (int c = 0; c < g.order(); ++c)
                for (int d = 0; d < nh; ++d) {
                    int lhs = a * nh + b, rhs = c * nh + d;
                    int prod = g.mul(a, c) * nh + h.mul(b, d);
                    mul[static_cast<size_t>(lhs) * N + rhs] = static_cast<uint16_t>(prod);
                }
    std::vector<std::string> labels;
    labels.reserve(N);
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < nh; ++b) labels.push_back("(" + g.label(a) + "," + h.label(b) + ")");
    return FiniteGroup(N, std::move(mul), std::move(labels),
                       g.descriptor() + " x " + h.descriptor());
}

IngestResult from_cayley_table(const std::vector<std::vector<int>>& table,
                               const std::vector<std::string>& labels) {
    using Kind = TableValidationError::Kind;
    size_t n = table.size();
    if (n == 0) throw TableValidationError(Kind::BadShape, "empty table");
    if (n > static_cast<size_t>(max_group_order()))
        throw SizeLimitError("from_cayley_table: order exceeds ceiling");
    for (size_t i = 0; i < n; ++i) {
        if (table[i].size() != n)
            throw TableValidationError(Kind::BadShape,
                                       "row " + std::to_string(i) + " has wrong length");
        for (size_t j = 0; j < n; ++j)
            if (table[i][j] < 0 || static_cast<size_t>(table[i][j]) >= n)
                throw TableValidationError(Kind::BadIndex, "entry (" + std::to_string(i) + "," +
                                                               std::to_string(j) + ") out of range");
    }
    if (!labels.empty() && labels.size() != n)
        throw TableValidationError(Kind::BadShape, "label count does not match order");

    // Latin square: rows and columns are permutations.
    std::vector<char> seen(n);
    for (size_t i = 0; i < n; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        for (size_t j = 0; j < n; ++j) {
            if (seen[table[i][j]]++)
                throw TableValidationError(Kind::NotLatinSquare,
                                           "row " + std::to_string(i) + " repeats entry " +
                                               std::to_string(table[i][j]));
        }
        std::fill(seen.begin(), seen.end(), 0);
        for (size_t j = 0; j < n; ++j) {
            if (seen[table[j][i]]++)
                throw TableValidationError(Kind::NotLatinSquare,
                                           "column " + std::to_string(i) + " repeats entry " +
                                               std::to_string(table[j][i]));
        }
    }

    int e = -1;
    for (size_t c = 0; c < n && e < 0; ++c) {
        bool ok = true;
        for (size_t j = 0; j < n && ok; ++j)
            ok = table[c][j] == static_cast<int>(j) && table[j][c] == static_cast<int>(j);
        if (ok) e = static_cast<int>(c);
    }
    if (e < 0) throw TableValidationError(Kind::NoIdentity, "no two-sided identity element");

    for (size_t i = 0; i < n; ++i) {
        bool ok = false;
        for (size_t j = 0; j < n && !ok; ++j) ok = table[i][j] == e && table[j][i] == e;
        if (!ok)
            throw TableValidationError(Kind::MissingInverse,
                                       "element " + std::to_string(i) + " has no inverse");
    }

    auto assoc_fail = [&](size_t i, size_t j, size_t k) {
        return TableValidationError(
            Kind::NotAssociative, "associativity fails at (" + std::to_string(i) + "," +
                                      std::to_string(j) + "," + std::to_string(k) + ")");
    };
    if (n <= 256) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (table[table[i][j]][k] != table[i][table[j][k]]) throw assoc_fail(i, j, k);
    } else {
        // Above the exhaustive threshold: deterministic random sampling.
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<size_t> dist(0, n - 1);
        for (int t = 0; t < 200000; ++t) {
            size_t i = dist(rng), j = dist(rng), k = dist(rng);
            if (table[table[i][j]][k] != table[i][table[j][k]]) throw assoc_fail(i, j, k);
        }
    }

    // Renumber so the identity sits at index 0 (swap 0 <-> e).
    std::vector<int> relabel(n);
    for (size_t i = 0; i < n; ++i) relabel[i] = static_cast<int>(i);
    if (e != 0) std::swap(relabel[0], relabel[e]);

    std::vector<uint16_t> mul(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            mul[static_cast<size_t>(relabel[i]) * n + relabel[j]] =
                static_cast<uint16_t>(relabel[table[i][j]]);
    std::vector<std::string> out_labels(n);
    for (size_t i = 0; i < n; ++i)
        out_labels[relabel[i]] = labels.empty() ? "g" + std::to_string(i) : labels[i];

    return IngestResult{FiniteGroup(static_cast<int>(n), std::move(mul), std::move(out_labels),
                                    "table" + std::to_string(n)),
                        std::move(relabel)};
}

// -- element arithmetic --------------------------------------------------------

int element_order(const FiniteGroup& g, int elem) {
    if (elem < 0 || elem >= g.order()) throw std::out_of_range("element_order: index out of range");
    int k = 1, cur = elem;
    while (cur != 0) {
        cur = g.mul(cur, elem);
        ++k;
    }
    return k;
}

OrderProfile order_profile(const FiniteGroup& g) {
    OrderProfile p;
    for (int i = 0; i < g.order(); ++i) ++p.counts[element_order(g, i)];
    return p;
}

long euler_phi(long k) {
    if (k < 1) throw std::invalid_argument("euler_phi: k must be >= 1");
    long result = k, m = k;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

OrderProfile symmetric_group_order_profile(int m) {
    if (m < 1 || m > 12)
        throw SizeLimitError("symmetric_group_order_profile: supported for 1 <= m <= 12");
    OrderProfile profile;
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::vector<char> visited(m);
    do {
        std::fill(visited.begin(), visited.end(), 0);
        long order = 1;
        for (int i = 0; i < m; ++i) {
            if (visited[i]) continue;
            int len = 0, j = i;
            while (!visited[j]) {
                visited[j] = 1;
                j = p[j];
                ++len;
            }
            order = lcm_long(order, len);
        }
        ++profile.counts[order];
    } while (std::next_permutation(p.begin(), p.end()));
    return profile;
}

// -- spec mini-language ---------------------------------------------------------

namespace {

struct SpecAtom {
    char kind;         // 'Z', 'D', 'S', '@'
    long param = 0;    // n for Z, order for D, m for S
    std::string path;  // for '@'
};

std::vector<SpecAtom> parse_spec_atoms(const std::string& spec) {
    std::vector<std::string> tokens;
    std::istringstream is(spec);
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    if (tokens.empty()) throw std::invalid_argument("empty group spec");

    std::vector<SpecAtom> atoms;
    for (size_t t = 0; t < tokens.size(); ++t) {
        if (t % 2 == 1) {
            if (tokens[t] != "x")
                throw std::invalid_argument("group spec: expected 'x' at token " +
                                            std::to_string(t) + ", got '" + tokens[t] + "'");
            continue;
        }
        const std::string& a = tokens[t];
        SpecAtom atom;
        if (a[0] == '@') {
            atom.kind = '@';
            atom.path = a.substr(1);
            if (atom.path.empty())
                throw std::invalid_argument("group spec: empty file path at token " +
                                            std::to_string(t));
        } else if (a[0] == 'Z' || a[0] == 'D' || a[0] == 'S') {
            atom.kind = a[0];
            char* end = nullptr;
            atom.param = std::strtol(a.c_str() + 1, &end, 10);
            if (!end || *end != '\0' || atom.param < 1)
                throw std::invalid_argument("group spec: bad atom '" + a + "' at token " +
                                            std::to_string(t));
            if (atom.kind == 'D') {
                if (atom.param % 2 != 0 || atom.param < 2)
                    throw std::invalid_argument("group spec: dihedral order must be even, got '" +
                                                a + "'");
            }
        } else {
            throw std::invalid_argument("group spec: unknown atom '" + a + "' at token " +
                                        std::to_string(t));
        }
        atoms.push_back(std::move(atom));
    }
    if (tokens.size() % 2 == 0)
        throw std::invalid_argument("group spec: trailing 'x' without right factor");
    return atoms;
}

FiniteGroup build_atom(const SpecAtom& atom) {
    switch (atom.kind) {
        case 'Z':
            return build_cyclic(static_cast<int>(atom.param));
        case 'D':
            return build_dihedral(static_cast<int>(atom.param / 2));
        case 'S':
            return build_symmetric(static_cast<int>(atom.param));
        case '@': {
            std::ifstream in(atom.path);
            if (!in) throw std::invalid_argument("group spec: cannot open file " + atom.path);
            nlohmann::json j;
            in >> j;
            if (!j.contains("n") || !j.contains("mul"))
                throw TableValidationError(TableValidationError::Kind::BadShape,
                                           atom.path + ": expected keys \"n\" and \"mul\"");
            auto table = j.at("mul").get<std::vector<std::vector<int>>>();
            if (j.at("n").get<size_t>() != table.size())
                throw TableValidationError(TableValidationError::Kind::BadShape,
                                           atom.path + ": \"n\" does not match table size");
            std::vector<std::string> labels;
            if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
            return from_cayley_table(table, labels).group;
        }
        default:
            throw std::logic_error("unreachable");
    }
}

OrderProfile cyclic_profile(long n) {
    OrderProfile p;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) p.counts[d] = euler_phi(d);
    return p;
}

OrderProfile convolve_profiles(const OrderProfile& a, const OrderProfile& b) {
    OrderProfile out;
    for (const auto& [k1, c1] : a.counts)
        for (const auto& [k2, c2] : b.counts) out.counts[lcm_long(k1, k2)] += c1 * c2;
    return out;
}

OrderProfile atom_profile(const SpecAtom& atom) {
    switch (atom.kind) {
        case 'Z':
            return cyclic_profile(atom.param);
        case 'D': {
            OrderProfile p = cyclic_profile(atom.param / 2);
            p.counts[2] += atom.param / 2;  // the reflections
            return p;
        }
        case 'S':
            return symmetric_group_order_profile(static_cast<int>(atom.param));
        case '@':
            return order_profile(build_atom(atom));
        default:
            throw std::logic_error("unreachable");
    }
}

}  // namespace

FiniteGroup build_group(const std::string& spec) {
    auto atoms = parse_spec_atoms(spec);
    FiniteGroup g = build_atom(atoms[0]);
    for (size_t i = 1; i < atoms.size(); ++i) g = build_direct_product(g, build_atom(atoms[i]));
    return g;
}

GroupFacts group_facts(const std::string& spec) {
    auto atoms = parse_spec_atoms(spec);
    GroupFacts facts;
    facts.spec = spec;
    OrderProfile profile = atom_profile(atoms[0]);
    for (size_t i = 1; i < atoms.size(); ++i)
        profile = convolve_profiles(profile, atom_profile(atoms[i]));
    facts.profile = std::move(profile);
    facts.order = facts.profile.total();
    return facts;
}

}  // namespace apcert
