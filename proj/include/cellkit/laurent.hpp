#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cellkit {

using Coeff = std::int64_t;

/// Element of Z[v, v^-1] stored as a sparse, degree-sorted list of nonzero
/// terms. All arithmetic is overflow-checked and throws ErrorCode::Overflow
/// rather than wrapping.
class LaurentPoly {
 public:
  struct Term {
    int degree;
    Coeff coeff;
    bool operator==(const Term&) const = default;
  };

  LaurentPoly() = default;
  /// The constant polynomial c.
  explicit LaurentPoly(Coeff c);

  static LaurentPoly monomial(int degree, Coeff c = 1);
  /// v + v^-1
  static LaurentPoly quantum_two();
  /// Builds from arbitrary (degree, coefficient) pairs; merges duplicates and
  /// drops zeros.
  static LaurentPoly from_pairs(const std::vector<std::pair<int, Coeff>>& pairs);
  /// Parses the textual form produced by to_string(), e.g. "v^2+2+v^-2".
  static LaurentPoly parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coeff coeff(int degree) const;
  /// Lowest / highest degree; nullopt for the zero polynomial.
  std::optional<int> min_degree() const;
  std::optional<int> max_degree() const;

  LaurentPoly bar() const;
  /// Multiplication by v^k.
  LaurentPoly shifted(int k) const;
  Coeff eval_at_one() const;
  bool all_nonnegative() const;
  bool is_bar_invariant() const { return bar() == *this; }

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);
  LaurentPoly& operator*=(Coeff c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, Coeff c) { return a *= c; }
  friend LaurentPoly operator-(LaurentPoly a);

  bool operator==(const LaurentPoly&) const = default;

  /// Descending degrees with explicit signs: "v^6+3v^4+5v^2+6+5v^-2".
  std::string to_string() const;
  /// Ascending [degree, coefficient] pairs, the on-disk cache encoding.
  std::vector<std::pair<int, Coeff>> to_pairs() const;

 private:
  void add_scaled(const LaurentPoly& other, Coeff sign);
  std::vector<Term> terms_;
};

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_bar(const LaurentPoly& a);
Coeff lp_coeff(const LaurentPoly& a, int degree);

namespace checked {
Coeff add(Coeff a, Coeff b);
Coeff sub(Coeff a, Coeff b);
Coeff mul(Coeff a, Coeff b);
}  // namespace checked

}  // namespace cellkit
