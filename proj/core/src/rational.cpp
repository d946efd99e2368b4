#include "apcert/rational.hpp"

#include <stdexcept>

namespace apcert {

Integer rat_ceil(const Rational& q) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

Integer rat_floor(const Rational& q) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

bool rat_is_integer(const Rational& q) {
    return mpz_cmp_ui(q.get_den_mpz_t(), 1) == 0;
}

std::string rat_str(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (mpz_sgn(r.get_den_mpz_t()) == 0)
        throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

}  // namespace apcert
