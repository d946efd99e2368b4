#pragma once

#include <gmpxx.h>

#include <string>

namespace apcert {

// Exact rational arithmetic used by the bound and certificate modules.
// Floats only ever appear at the SDP solver boundary.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Smallest integer >= q.
Integer rat_ceil(const Rational& q);

/// Largest integer <= q.
Integer rat_floor(const Rational& q);

bool rat_is_integer(const Rational& q);

/// Canonical "p/q" rendering; integers render without the "/q" part.
std::string rat_str(const Rational& q);

/// Parses "p" or "p/q". Throws std::invalid_argument on anything else.
Rational rat_parse(const std::string& s);

}  // namespace apcert
