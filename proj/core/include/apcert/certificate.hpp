#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apcert/rational.hpp"

namespace apcert {

/// Thrown when a certificate operation is asked for a k outside the regime
/// the construction covers (even k, or 3 | k).
class RegimeError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Circulant quadratic form over variables indexed by Z_k:
///
///   value = constant + diag * sum_i X_i^2
///         + sum over unordered pairs {i, i+t} of offdiag(t) * X_i X_{i+t}
///
/// with each unordered pair counted exactly once and offdiag(t) = offdiag(k-t)
/// enforced. This is the unique convention for the circulant double-sum
/// sigma(a; b_0, ..., b_{k-1}) under which I_1, I_2, I_3^j and the
/// certificate identity are all simultaneously correct (verified symbolically
/// for k = 5 before fixing it). All coefficients are exact rationals.
class QuadForm {
  public:
    explicit QuadForm(int k);

    int k() const { return k_; }
    const Rational& constant() const { return constant_; }
    const Rational& diag() const { return diag_; }
    /// Coefficient of the pair class {i, i+t}; offdiag(t) == offdiag(k-t).
    const Rational& offdiag(int t) const;

    void set_constant(const Rational& v) { constant_ = v; }
    void set_diag(const Rational& v) { diag_ = v; }
    /// Sets both slots t and k-t.
    void set_offdiag(int t, const Rational& v);

    void add_scaled(const QuadForm& other, const Rational& scale);
    void add_constant(const Rational& v) { constant_ += v; }

    /// Exact evaluation; iterates each unordered pair once.
    Rational evaluate(std::span<const Rational> x) const;
    /// Reference evaluation by the naive double loop over i < j with
    /// coefficient b_{(j-i) mod k}; used as an internal convention check.
    Rational evaluate_naive(std::span<const Rational> x) const;

    bool operator==(const QuadForm& other) const;
    /// Human-readable description of the first differing coefficient, or ""
    /// when equal.
    std::string first_difference(const QuadForm& other) const;

  private:
    int k_;
    Rational constant_;
    Rational diag_;
    std::vector<Rational> off_;  // index 1..k-1, symmetric
};

/// I_1 = sum_i (1 - X_i^2): constant k, diagonal -1. Nonnegative on the box.
QuadForm i1(int k);

/// I_2 = (sum_i X_i)^2: diagonal 1, every pair coefficient 2. A square.
QuadForm i2(int k);

/// I_3^j = (1/2) sum_i (X_i - X_{i+j})^2: diagonal 1, pair class {j, k-j}
/// coefficient -1 (-2 when j = k-j). A sum of squares.
QuadForm i3(int k, int j);

/// p_k^{(1,b)}: pair coefficient 3 at offsets coprime to k, 0 elsewhere.
/// Only defined in the regime k >= 5, k odd, 3 does not divide k.
QuadForm build_pk1b(int k);

/// The proof's decomposition of p_k^{(1,b)}:
///   (3/2) I_2 + (3/2) sum_{j in offsets} I_3^j + (3/2)(k - phi(k)) I_1
///   - (3/2)(k - phi(k)) k
/// where offsets = { j in 1..k-1 : gcd(j,k) > 1 }. Both j and k-j appear as
/// separate terms; that is what makes the pair cancellation against I_2 and
/// the diagonal bookkeeping work.
struct ProofCertificate {
    int k = 0;
    Rational coeff_i2;       // 3/2
    std::vector<int> offsets;
    Rational coeff_i3;       // 3/2 for every offset
    Rational coeff_i1;       // (3/2)(k - phi(k))
    Rational constant_shift; // -(3/2)(k - phi(k)) k

    QuadForm reconstruct() const;
    nlohmann::json to_json() const;
};

ProofCertificate build_certificate(int k);

struct CertificateVerification {
    int k = 0;
    bool identity_holds = false;
    std::string first_difference;  // empty when the identity holds
    Rational bound;                // -(3/2)(k - phi(k)) k

    nlohmann::json to_json() const;
};

/// Exact coefficientwise comparison of the certificate reconstruction
/// against build_pk1b(k). Throws RegimeError outside k odd, 3 not| k, k >= 5.
CertificateVerification verify_certificate(int k);

/// Per-k lower bound on N N_k / 2 + p_k:
///   (N N_k / 2)(1 - 3 (k - phi(k)) / phi(k)),
/// clamped at 0 when phi(k) < 3k/4 (the trivial bound takes over there).
Rational certificate_bound(long k, long group_order, long n_k);

}  // namespace apcert
