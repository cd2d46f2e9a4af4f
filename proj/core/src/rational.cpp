#include "foliate/rational.hpp"

#include "foliate/error.hpp"

namespace foliate {

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error("parse", "bad rational literal '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error("evaluation-domain", "division by zero");
    return rational_pow(Rational(1) / base, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

bool exact_sqrt(const Rational& r, Rational& root) {
  if (r < 0) return false;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) return false;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  root = Rational(n, d);
  root.canonicalize();
  return true;
}

std::size_t hash_rational(const Rational& r) {
  auto limb = [](const mpz_class& z) -> std::size_t {
    std::size_t h = static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0));
    return h * 31 + static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
  };
  return limb(r.get_num()) * 1000003u ^ limb(r.get_den());
}

}  // namespace foliate
