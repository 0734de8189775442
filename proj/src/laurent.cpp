#include "cellkit/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "cellkit/error.hpp"

namespace cellkit {

namespace checked {
Coeff add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer overflow in addition");
  return r;
}
Coeff sub(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer overflow in subtraction");
  return r;
}
Coeff mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer overflow in multiplication");
  return r;
}
}  // namespace checked

LaurentPoly::LaurentPoly(Coeff c) {
  if (c != 0) terms_.push_back({0, c});
}

LaurentPoly LaurentPoly::monomial(int degree, Coeff c) {
  LaurentPoly p;
  if (c != 0) p.terms_.push_back({degree, c});
  return p;
}

LaurentPoly LaurentPoly::quantum_two() {
  return from_pairs({{-1, 1}, {1, 1}});
}

LaurentPoly LaurentPoly::from_pairs(const std::vector<std::pair<int, Coeff>>& pairs) {
  std::map<int, Coeff> acc;
  for (auto [d, c] : pairs) acc[d] = checked::add(acc[d], c);
  LaurentPoly p;
  for (auto [d, c] : acc)
    if (c != 0) p.terms_.push_back({d, c});
  return p;
}

Coeff LaurentPoly::coeff(int degree) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), degree,
                             [](const Term& t, int d) { return t.degree < d; });
  return (it != terms_.end() && it->degree == degree) ? it->coeff : 0;
}

std::optional<int> LaurentPoly::min_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().degree;
}

std::optional<int> LaurentPoly::max_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.back().degree;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly p;
  p.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) p.terms_.push_back({-it->degree, it->coeff});
  return p;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.degree += k;
  return p;
}

Coeff LaurentPoly::eval_at_one() const {
  Coeff s = 0;
  for (const auto& t : terms_) s = checked::add(s, t.coeff);
  return s;
}

bool LaurentPoly::all_nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff > 0; });
}

void LaurentPoly::add_scaled(const LaurentPoly& other, Coeff sign) {
  if (other.terms_.empty()) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->degree < b->degree)) {
      out.push_back(*a++);
    } else if (a == terms_.end() || b->degree < a->degree) {
      out.push_back({b->degree, checked::mul(sign, b->coeff)});
      ++b;
    } else {
      Coeff c = checked::add(a->coeff, checked::mul(sign, b->coeff));
      if (c != 0) out.push_back({a->degree, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  add_scaled(other, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  add_scaled(other, -1);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  int lo = a.terms_.front().degree + b.terms_.front().degree;
  int hi = a.terms_.back().degree + b.terms_.back().degree;
  std::vector<Coeff> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) {
      auto& slot = dense[static_cast<std::size_t>(s.degree + t.degree - lo)];
      slot = checked::add(slot, checked::mul(s.coeff, t.coeff));
    }
  LaurentPoly p;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) p.terms_.push_back({lo + static_cast<int>(i), dense[i]});
  return p;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) {
  *this = *this * other;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(Coeff c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff = checked::mul(t.coeff, c);
  return *this;
}

LaurentPoly operator-(LaurentPoly a) { return a *= -1; }

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Coeff c = it->coeff;
    int d = it->degree;
    if (c < 0) {
      out += '-';
    } else if (!out.empty()) {
      out += '+';
    }
    Coeff mag = c < 0 ? -c : c;
    if (d == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag);
    out += 'v';
    if (d != 1) out += '^' + std::to_string(d);
  }
  return out;
}

std::vector<std::pair<int, Coeff>> LaurentPoly::to_pairs() const {
  std::vector<std::pair<int, Coeff>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(t.degree, t.coeff);
  return out;
}

LaurentPoly LaurentPoly::parse(std::string_view text) {
  std::vector<std::pair<int, Coeff>> pairs;
  std::size_t i = 0;
  auto bad = [&](const char* why) {
    fail(ErrorCode::ParseError, std::string("bad Laurent polynomial '") + std::string(text) + "': " + why);
  };
  auto read_int = [&](bool allow_sign) -> Coeff {
    bool neg = false;
    if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) bad("expected digits");
    Coeff v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      v = checked::add(checked::mul(v, 10), text[i++] - '0');
    return neg ? -v : v;
  };
  if (text == "0") return {};
  if (text.empty()) bad("empty");
  while (i < text.size()) {
    Coeff sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (!pairs.empty()) {
      bad("missing sign between terms");
    }
    Coeff c = 1;
    bool has_digits = i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]));
    if (has_digits) c = read_int(false);
    int d = 0;
    if (i < text.size() && text[i] == 'v') {
      ++i;
      d = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        d = static_cast<int>(read_int(true));
      }
    } else if (!has_digits) {
      bad("expected a term");
    }
    pairs.emplace_back(d, sign * c);
  }
  return from_pairs(pairs);
}

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }
LaurentPoly lp_bar(const LaurentPoly& a) { return a.bar(); }
Coeff lp_coeff(const LaurentPoly& a, int degree) { return a.coeff(degree); }

}  // namespace cellkit
