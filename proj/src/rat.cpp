#include "lharv/rat.hpp"

#include <cctype>
#include <cstddef>

namespace lharv {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rat> parse_rat(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) return std::nullopt;

  Rat magnitude;
  std::size_t slash = s.find('/');
  std::size_t dot = s.find('.');
  if (slash != std::string::npos) {
    if (dot != std::string::npos) return std::nullopt;
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(den);
    if (d == 0) return std::nullopt;
    magnitude = Rat(mpz_class(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class units = whole.empty() ? mpz_class(0) : mpz_class(whole);
    mpz_class cents = frac.empty() ? mpz_class(0) : mpz_class(frac);
    magnitude = Rat(units * scale + cents, scale);
  } else {
    if (!all_digits(s)) return std::nullopt;
    magnitude = Rat(mpz_class(s));
  }
  magnitude.canonicalize();
  if (negative) magnitude = -magnitude;
  return magnitude;
}

std::string rat_str(const Rat& value) {
  Rat v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rat rat_of_double(double value) {
  mpq_t tmp;
  mpq_init(tmp);
  mpq_set_d(tmp, value);
  Rat out(tmp);
  mpq_clear(tmp);
  return out;
}

double rat_to_double(const Rat& value) { return value.get_d(); }

}  // namespace lharv
