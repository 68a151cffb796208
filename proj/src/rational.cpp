#include "lopt/rational.hpp"

#include <cctype>

#include "lopt/errors.hpp"

namespace lopt {

namespace {

bool is_decimal_integer(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_decimal_integer(num) || !is_decimal_integer(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorKind::InvalidConfig, "malformed rational '" + text + "'");
  }
  mpz_class n(num[0] == '+' ? num.substr(1) : num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw Error(ErrorKind::InvalidConfig, "zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::size_t storage_bytes(const Rational& q) {
  return (mpz_size(q.get_num_mpz_t()) + mpz_size(q.get_den_mpz_t())) * sizeof(mp_limb_t);
}

Rational factorial(unsigned long k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rational(f);
}

mpz_class double_factorial_odd(unsigned long p) {
  if (p == 0) return 1;
  mpz_class f;
  mpz_2fac_ui(f.get_mpz_t(), 2 * p - 1);
  return f;
}

}  // namespace lopt
