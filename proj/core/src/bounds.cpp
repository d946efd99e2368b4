#include "apcert/bounds.hpp"

#include <algorithm>
#include <sstream>

namespace apcert {

std::vector<long> k_set(const std::vector<long>& orders) {
    std::vector<long> out;
    for (long k : orders) {
        if (k < 1) throw std::invalid_argument("k_set: orders must be positive");
        if (k >= 5 && 4 * euler_phi(k) >= 3 * k) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

GroupFacts facts_of(const FiniteGroup& g) {
    GroupFacts f;
    f.spec = g.descriptor();
    f.profile = order_profile(g);
    f.order = f.profile.total();
    return f;
}

}  // namespace

BoundReport make_bound_report(const GroupFacts& facts) {
    BoundReport r;
    r.group = facts.spec;
    r.n = facts.order;
    r.profile = facts.profile;

    std::vector<long> orders;
    for (const auto& [k, c] : facts.profile.counts) orders.push_back(k);
    r.k_set = k_set(orders);

    const Rational n(facts.order);
    for (long k : r.k_set) {
        const Rational nk(facts.profile.count(k));
        const Rational phi(euler_phi(k));
        // (N N_k / 8) * (1 - 3 (k - phi) / phi), nonnegative on K by construction
        Rational term = n * nk / 8 * (1 - 3 * (Rational(k) - phi) / phi);
        term.canonicalize();
        r.per_k.push_back({k, term});
        r.bound += term;
    }
    r.bound.canonicalize();

    Rational tail = 0;  // sum_{k>=4} N N_k / 2
    for (const auto& [k, c] : facts.profile.counts)
        if (k >= 4) tail += n * Rational(c) / 2;
    const Rational n3(facts.profile.count(3));
    r.total_aps_theorem = tail + n * n3 / 24;
    r.total_aps_proof = tail + n * n3 / 6;
    r.total_aps_theorem.canonicalize();
    r.total_aps_proof.canonicalize();
    return r;
}

BoundReport make_bound_report(const FiniteGroup& g) { return make_bound_report(facts_of(g)); }

Rational theorem1_bound(const GroupFacts& facts) { return make_bound_report(facts).bound; }
Rational theorem1_bound(const FiniteGroup& g) { return make_bound_report(g).bound; }

Rational total_aps_theorem_formula(const GroupFacts& facts) {
    return make_bound_report(facts).total_aps_theorem;
}
Rational total_aps_theorem_formula(const FiniteGroup& g) {
    return make_bound_report(g).total_aps_theorem;
}

Rational total_aps_proof_formula(const GroupFacts& facts) {
    return make_bound_report(facts).total_aps_proof;
}
Rational total_aps_proof_formula(const FiniteGroup& g) {
    return make_bound_report(g).total_aps_proof;
}

double bound_from_lambda(double lambda, const Rational& total_aps) {
    return (lambda + total_aps.get_d()) / 4.0;
}

bool total_formulas_disagree(const GroupFacts& facts) { return facts.profile.count(3) > 0; }

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["group"] = group;
    j["order"] = n;
    nlohmann::json prof = nlohmann::json::object();
    for (const auto& [k, c] : profile.counts) prof[std::to_string(k)] = c;
    j["order_profile"] = prof;
    j["k_set"] = k_set;
    nlohmann::json per = nlohmann::json::array();
    for (const auto& [k, term] : per_k) per.push_back({{"k", k}, {"contribution", rat_str(term)}});
    j["per_k"] = per;
    j["bound"] = rat_str(bound);
    j["bound_ceil"] = rat_ceil(bound).get_str();
    j["total_aps_theorem"] = rat_str(total_aps_theorem);
    j["total_aps_proof"] = rat_str(total_aps_proof);
    j["totals_disagree"] = profile.count(3) > 0;
    return j;
}

std::string BoundReport::to_table_row() const {
    std::ostringstream os;
    os << group << "\t" << rat_str(total_aps_theorem) << "\t" << rat_str(bound);
    return os.str();
}

}  // namespace apcert
