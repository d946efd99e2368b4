#include "apcert/ap_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace apcert {

namespace {

void check_enumeration_budget(const FiniteGroup& g, const ApEnumOptions& opts) {
    if (!opts.force && g.order() > opts.max_enumeration_order)
        throw SizeLimitError("enumerate_aps: |G| = " + std::to_string(g.order()) +
                             " exceeds the enumeration budget " +
                             std::to_string(opts.max_enumeration_order) +
                             "; use the formula-based counts or force enumeration");
}

// Sorted element tuples hash to a map key; k <= a few dozen is fine.
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

}  // namespace

Coloring Coloring::constant(int n, int8_t v) {
    Coloring c;
    c.values.assign(n, v);
    return c;
}

Coloring parse_coloring(const std::string& text, int expected_size) {
    Coloring c;
    std::string t = text;
    // Accept a JSON array of +/-1 as well as a "+-" string.
    auto first = t.find_first_not_of(" \t");
    if (first != std::string::npos && t[first] == '[') {
        auto arr = nlohmann::json::parse(t);
        for (const auto& e : arr) {
            int v = e.get<int>();
            if (v != 1 && v != -1) throw std::invalid_argument("coloring entries must be +/-1");
            c.values.push_back(static_cast<int8_t>(v));
        }
    } else {
        for (char ch : t) {
            if (ch == '+')
                c.values.push_back(1);
            else if (ch == '-')
                c.values.push_back(-1);
            else if (ch != ' ' && ch != '\t')
                throw std::invalid_argument(std::string("bad coloring character '") + ch + "'");
        }
    }
    if (expected_size >= 0 && static_cast<int>(c.values.size()) != expected_size)
        throw std::invalid_argument("coloring length " + std::to_string(c.values.size()) +
                                    " does not match group order " + std::to_string(expected_size));
    return c;
}

std::string coloring_to_string(const Coloring& chi) {
    std::string s;
    s.reserve(chi.values.size());
    for (int8_t v : chi.values) s += v > 0 ? '+' : '-';
    return s;
}

std::vector<ApSet> enumerate_aps(const FiniteGroup& g, int k, const ApEnumOptions& opts) {
    if (k < 3) throw std::invalid_argument("enumerate_aps: k must be >= 3");
    check_enumeration_budget(g, opts);

    const int n = g.order();
    std::vector<int> order_of(n);
    for (int i = 0; i < n; ++i) order_of[i] = element_order(g, i);

    // {b^i a : 0 <= i < k} has k distinct elements exactly when ord(b) >= k.
    std::unordered_map<std::vector<int>, size_t, VecHash> index;
    std::vector<ApSet> sets;
    std::vector<int> tuple(k);
    for (int b = 0; b < n; ++b) {
        if (order_of[b] < k) continue;
        for (int a = 0; a < n; ++a) {
            int cur = a;
            for (int i = 0; i < k; ++i) {
                tuple[i] = cur;
                cur = g.mul(b, cur);
            }
            std::vector<int> key = tuple;
            std::sort(key.begin(), key.end());
            auto [it, inserted] = index.try_emplace(std::move(key), sets.size());
            if (inserted) {
                ApSet s;
                s.elements = std::vector<int>(tuple);
                std::sort(s.elements.begin(), s.elements.end());
                s.witnesses.push_back({a, b});
                sets.push_back(std::move(s));
            } else {
                ApSet& s = sets[it->second];
                if (static_cast<int>(s.witnesses.size()) < opts.witness_cap)
                    s.witnesses.push_back({a, b});
            }
        }
    }
    std::sort(sets.begin(), sets.end(),
              [](const ApSet& x, const ApSet& y) { return x.elements < y.elements; });
    return sets;
}

uint64_t PairCoefficients::key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

long PairCoefficients::coeff(int a, int b) const {
    if (a == b) throw std::invalid_argument("pair coefficient is undefined on the diagonal");
    auto it = coeffs_.find(key(a, b));
    return it == coeffs_.end() ? 0 : it->second;
}

long PairCoefficients::coefficient_sum() const {
    long s = 0;
    for (const auto& [k, v] : coeffs_) s += v;
    return s;
}

PairCoefficients pair_coefficients(const FiniteGroup& g, const ApEnumOptions& opts) {
    auto aps = enumerate_aps(g, 3, opts);
    std::unordered_map<uint64_t, long> coeffs;
    for (const auto& s : aps) {
        const auto& e = s.elements;
        ++coeffs[PairCoefficients::key(e[0], e[1])];
        ++coeffs[PairCoefficients::key(e[0], e[2])];
        ++coeffs[PairCoefficients::key(e[1], e[2])];
    }
    return PairCoefficients(g.order(), static_cast<long>(aps.size()), std::move(coeffs));
}

namespace {

void check_coloring(const FiniteGroup& g, const Coloring& chi, bool strict_pm1) {
    if (static_cast<int>(chi.values.size()) != g.order())
        throw std::invalid_argument("coloring length does not match group order");
    if (strict_pm1)
        for (int8_t v : chi.values)
            if (v != 1 && v != -1) throw std::invalid_argument("coloring entries must be +/-1");
}

}  // namespace

long count_monochromatic_direct(const FiniteGroup& g, const Coloring& chi, int k,
                                const ApEnumOptions& opts) {
    check_coloring(g, chi, false);
    long count = 0;
    for (const auto& s : enumerate_aps(g, k, opts)) {
        int8_t c0 = chi.values[s.elements[0]];
        bool mono = true;
        for (int e : s.elements)
            if (chi.values[e] != c0) {
                mono = false;
                break;
            }
        if (mono) ++count;
    }
    return count;
}

long count_monochromatic_indicator(const FiniteGroup& g, const Coloring& chi, int k,
                                   const ApEnumOptions& opts) {
    check_coloring(g, chi, true);
    // Each term (prod(1+x) + prod(1-x)) is 0 or 2^k at +/-1 points; the total
    // divides exactly.
    long long numer = 0;
    const long long two_k = 1LL << k;
    for (const auto& s : enumerate_aps(g, k, opts)) {
        long long plus = 1, minus = 1;
        for (int e : s.elements) {
            plus *= 1 + chi.values[e];
            minus *= 1 - chi.values[e];
        }
        numer += plus + minus;
    }
    return static_cast<long>(numer / two_k);
}

double evaluate_pg(const FiniteGroup& g, const std::vector<double>& x, const ApEnumOptions& opts) {
    if (static_cast<int>(x.size()) != g.order())
        throw std::invalid_argument("point length does not match group order");
    for (double v : x)
        if (!(v >= -1.0 && v <= 1.0))
            throw std::invalid_argument("evaluate_pg: coordinate outside [-1,1]");
    auto pc = pair_coefficients(g, opts);
    double total = 0;
    for (const auto& [key, c] : pc.raw()) {
        int a = static_cast<int>(key >> 32);
        int b = static_cast<int>(key & 0xffffffffu);
        total += static_cast<double>(c) * x[a] * x[b];
    }
    return total;
}

void write_ap_json_lines(std::ostream& os, const std::vector<ApSet>& aps) {
    for (const auto& s : aps) {
        nlohmann::json j;
        j["elements"] = s.elements;
        auto& w = j["witnesses"] = nlohmann::json::array();
        for (auto [a, b] : s.witnesses) w.push_back({a, b});
        os << j.dump() << "\n";
    }
}

}  // namespace apcert
