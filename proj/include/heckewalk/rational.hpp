#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hw {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/r", an integer, or a terminating decimal ("0.25", "-1.5e-2" is
/// not accepted) into an exact canonical rational. Throws hw::Error.
Rational parse_rational(std::string_view text);

/// Always "p/r", even for integers ("1/1"), so the format is fixed.
std::string rational_to_string(const Rational& r);

Rational rational_pow(const Rational& base, long exponent);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace hw
