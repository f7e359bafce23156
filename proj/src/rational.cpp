#include "heckewalk/rational.hpp"

#include <cctype>

#include "heckewalk/error.hpp"

namespace hw {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  require(all_digits(s), "not a rational number: '" + std::string(whole) + "'");
  BigInt v(std::string(s), 10);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  require(!text.empty(), "empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    require(all_digits(den_text), "bad denominator in '" + std::string(text) + "'");
    BigInt den(std::string(den_text), 10);
    require(den != 0, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool neg = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+'))
      int_part.remove_prefix(1);
    require((int_part.empty() || all_digits(int_part)) &&
                (frac_part.empty() || all_digits(frac_part)) &&
                !(int_part.empty() && frac_part.empty()),
            "not a rational number: '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    BigInt ip = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part), 10);
    BigInt fp = frac_part.empty() ? BigInt(0) : BigInt(std::string(frac_part), 10);
    Rational r(ip * scale + fp, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  return Rational(parse_integer(text, text));
}

std::string rational_to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    require(base != 0, "zero to a negative power", ErrorCode::kDomain);
    return rational_pow(Rational(1) / base, -exponent);
  }
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace hw
