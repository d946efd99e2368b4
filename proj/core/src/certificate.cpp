#include "apcert/certificate.hpp"

#include <numeric>
#include <sstream>

#include "apcert/group.hpp"

namespace apcert {

namespace {

void check_regime(int k, const char* what) {
    if (k < 5 || k % 2 == 0 || k % 3 == 0)
        throw RegimeError(std::string(what) +
                          ": requires k >= 5 with k odd and 3 not dividing k, got k = " +
                          std::to_string(k));
}

}  // namespace

QuadForm::QuadForm(int k) : k_(k), constant_(0), diag_(0), off_(std::max(k, 1), Rational(0)) {
    if (k < 1) throw std::invalid_argument("QuadForm: k must be >= 1");
}

const Rational& QuadForm::offdiag(int t) const {
    if (t < 1 || t >= k_) throw std::out_of_range("QuadForm::offdiag: offset out of range");
    return off_[t];
}

void QuadForm::set_offdiag(int t, const Rational& v) {
    if (t < 1 || t >= k_) throw std::out_of_range("QuadForm::set_offdiag: offset out of range");
    off_[t] = v;
    off_[k_ - t] = v;
}

void QuadForm::add_scaled(const QuadForm& other, const Rational& scale) {
    if (other.k_ != k_) throw std::invalid_argument("QuadForm::add_scaled: size mismatch");
    constant_ += scale * other.constant_;
    diag_ += scale * other.diag_;
    for (int t = 1; t < k_; ++t) off_[t] += scale * other.off_[t];
}

Rational QuadForm::evaluate(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) != k_)
        throw std::invalid_argument("QuadForm::evaluate: point size mismatch");
    Rational total = constant_;
    for (int i = 0; i < k_; ++i) total += diag_ * x[i] * x[i];
    for (int t = 1; 2 * t <= k_; ++t) {
        if (off_[t] == 0) continue;
        // t == k - t (k even): pairs {i, i+t} repeat after k/2 steps.
        int upto = (2 * t == k_) ? k_ / 2 : k_;
        for (int i = 0; i < upto; ++i) total += off_[t] * x[i] * x[(i + t) % k_];
    }
    return total;
}

Rational QuadForm::evaluate_naive(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) != k_)
        throw std::invalid_argument("QuadForm::evaluate_naive: point size mismatch");
    Rational total = constant_;
    for (int i = 0; i < k_; ++i) total += diag_ * x[i] * x[i];
    for (int i = 0; i < k_; ++i)
        for (int j = i + 1; j < k_; ++j) total += off_[(j - i) % k_] * x[i] * x[j];
    return total;
}

bool QuadForm::operator==(const QuadForm& other) const {
    return k_ == other.k_ && constant_ == other.constant_ && diag_ == other.diag_ &&
           off_ == other.off_;
}

std::string QuadForm::first_difference(const QuadForm& other) const {
    if (k_ != other.k_) return "variable counts differ";
    std::ostringstream os;
    if (constant_ != other.constant_) {
        os << "constant: " << rat_str(constant_) << " vs " << rat_str(other.constant_);
        return os.str();
    }
    if (diag_ != other.diag_) {
        os << "diagonal: " << rat_str(diag_) << " vs " << rat_str(other.diag_);
        return os.str();
    }
    for (int t = 1; t < k_; ++t)
        if (off_[t] != other.off_[t]) {
            os << "offset " << t << ": " << rat_str(off_[t]) << " vs " << rat_str(other.off_[t]);
            return os.str();
        }
    return "";
}

QuadForm i1(int k) {
    QuadForm f(k);
    f.set_constant(Rational(k));
    f.set_diag(Rational(-1));
    return f;
}

QuadForm i2(int k) {
    QuadForm f(k);
    f.set_diag(Rational(1));
    for (int t = 1; 2 * t <= k; ++t) f.set_offdiag(t, Rational(2));
    return f;
}

QuadForm i3(int k, int j) {
    if (j < 1 || j > k - 1) throw std::out_of_range("i3: offset must satisfy 1 <= j <= k-1");
    QuadForm f(k);
    f.set_diag(Rational(1));
    f.set_offdiag(j, 2 * j == k ? Rational(-2) : Rational(-1));
    return f;
}

QuadForm build_pk1b(int k) {
    check_regime(k, "build_pk1b");
    QuadForm f(k);
    for (int t = 1; 2 * t <= k; ++t)
        if (std::gcd(t, k) == 1) f.set_offdiag(t, Rational(3));
    return f;
}

ProofCertificate build_certificate(int k) {
    if (k < 5) throw std::invalid_argument("build_certificate: k must be >= 5");
    ProofCertificate c;
    c.k = k;
    c.coeff_i2 = make_rational(3, 2);
    c.coeff_i3 = make_rational(3, 2);
    for (int j = 1; j < k; ++j)
        if (std::gcd(j, k) > 1) c.offsets.push_back(j);
    long phi = euler_phi(k);
    c.coeff_i1 = make_rational(3, 2) * Rational(k - phi);
    c.constant_shift = make_rational(-3, 2) * Rational(k - phi) * Rational(k);
    return c;
}

QuadForm ProofCertificate::reconstruct() const {
    QuadForm acc(k);
    acc.add_scaled(i2(k), coeff_i2);
    for (int j : offsets) acc.add_scaled(i3(k, j), coeff_i3);
    acc.add_scaled(i1(k), coeff_i1);
    acc.add_constant(constant_shift);
    return acc;
}

nlohmann::json ProofCertificate::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["phi"] = euler_phi(k);
    j["offsets"] = offsets;
    j["coefficients"] = {{"i2", rat_str(coeff_i2)},
                         {"i3", rat_str(coeff_i3)},
                         {"i1", rat_str(coeff_i1)},
                         {"constant_shift", rat_str(constant_shift)}};
    j["bound"] = rat_str(constant_shift);
    return j;
}

CertificateVerification verify_certificate(int k) {
    check_regime(k, "verify_certificate");
    CertificateVerification v;
    v.k = k;
    ProofCertificate cert = build_certificate(k);
    QuadForm lhs = cert.reconstruct();
    QuadForm rhs = build_pk1b(k);
    v.first_difference = lhs.first_difference(rhs);
    v.identity_holds = v.first_difference.empty();
    // The certificate value: every I-term is nonnegative on the box, so the
    // form is bounded below by the constant shift -(3/2)(k - phi(k)) k.
    v.bound = cert.constant_shift;
    return v;
}

nlohmann::json CertificateVerification::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["identity_holds"] = identity_holds;
    if (!identity_holds) j["first_difference"] = first_difference;
    j["bound"] = rat_str(bound);
    return j;
}

Rational certificate_bound(long k, long group_order, long n_k) {
    if (k < 5) throw std::invalid_argument("certificate_bound: k must be >= 5");
    long phi = euler_phi(k);
    if (4 * phi < 3 * k) return Rational(0);  // trivial bound regime
    Rational half_count = Rational(group_order) * Rational(n_k) / 2;
    Rational factor = 1 - 3 * (Rational(k) - Rational(phi)) / Rational(phi);
    Rational out = half_count * factor;
    out.canonicalize();
    return out;
}

}  // namespace apcert
