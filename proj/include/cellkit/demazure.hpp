#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "cellkit/coxeter.hpp"
#include "cellkit/laurent.hpp"
#include "cellkit/report.hpp"

namespace cellkit {

/// Rational polynomial in y, x_1..x_n. Variable 0 is y. Exponents are packed
/// one byte per variable with y in the top byte, so the key order is the lex
/// order y > x_1 > ... > x_n.
class MultiPoly {
 public:
  using Key = std::uint64_t;
  static constexpr int kMaxStrands = 7;

  MultiPoly() = default;
  explicit MultiPoly(int n) : n_(n) {}
  static MultiPoly constant(int n, const mpq_class& c);
  static MultiPoly var(int n, int index);  // 0 = y, i = x_i
  static MultiPoly y(int n) { return var(n, 0); }
  static MultiPoly x(int n, int i) { return var(n, i); }
  static MultiPoly monomial(int n, Key key, const mpq_class& c = 1);
  static MultiPoly parse(int n, std::string_view text);

  int n() const { return n_; }
  const std::map<Key, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // total degree, -1 for zero
  bool is_homogeneous() const;
  mpq_class coeff(Key key) const;
  /// Q-linear substitution x_i -> images[i] (images[0] is the image of y).
  MultiPoly substitute(const std::vector<MultiPoly>& images) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const mpq_class& c);
  void add_term(Key key, const mpq_class& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const mpq_class& c) { return a *= c; }
  MultiPoly operator-() const { return *this * mpq_class(-1); }
  bool operator==(const MultiPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  /// "x1^2*x2 - 1/2*y*x3", terms in decreasing lex order; "0" for zero.
  std::string str() const;

  static int exponent(Key key, int var) { return static_cast<int>((key >> (8 * (7 - var))) & 0xffu); }
  static Key with_exponent(Key key, int var, int e);
  static int key_degree(Key key);

 private:
  int n_ = 0;
  std::map<Key, mpq_class> terms_;
};

/// All monomial keys of total degree exactly d in y, x_1..x_n, increasing order.
std::vector<MultiPoly::Key> monomials_of_degree(int n, int d);

/// Image of p under a simple reflection (label 0..n-1, label 0 = s_0).
MultiPoly act_generator(int label, const MultiPoly& p);
/// Image of p under rho^k.
MultiPoly act_rho(int k, const MultiPoly& p);
/// Image of p under a group element of finite, affine or extended affine type
/// A with the same number of strands.
MultiPoly act(const GroupDescriptor& g, const Element& w, const MultiPoly& p);

/// (x_i - x_{i+1}) for 1 <= i < n, x_n - x_1 - y for i = 0.
MultiPoly simple_root(int n, int label);
/// Exact quotient; DivisionFailure when a is not a factor.
MultiPoly divide_exact(const MultiPoly& p, const MultiPoly& a);

MultiPoly demazure_s(int label, const MultiPoly& p);
/// Composite along reduced_word(w); a leading rho^k acts as the automorphism.
MultiPoly demazure_w(const GroupDescriptor& g, const Element& w, const MultiPoly& p);
/// Composite along an explicit word, rightmost letter first.
MultiPoly demazure_word(const std::vector<int>& letters, const MultiPoly& p);

inline constexpr std::size_t kMaxParabolicOrder = 24;

enum class BasisChoice {
  Artin,         // prod z_k^{a_k}, a_k <= m - k on each component
  ReverseArtin,  // prod z_k^{a_k}, a_k <= k
};

struct DualBases {
  int n = 0;
  std::vector<int> subset;
  std::vector<int> longest_word;  // rex of w_I
  std::vector<MultiPoly> basis;
  std::vector<MultiPoly> dual;
  std::size_t r() const { return basis.size(); }
};

/// Demazure operator of w_I.
MultiPoly trace(const DualBases& db, const MultiPoly& p);

/// Errors: InfiniteParabolic, ResourceLimit (|W_I| > 24), IndexOutOfRange,
/// SolveFailure.
DualBases dual_bases(const std::vector<int>& subset, int n, BasisChoice choice = BasisChoice::Artin);
MultiPoly p_top(const DualBases& db);

/// Element of R (x)_{R^I} ... (x)_{R^I} R with k factors in left normal form
/// sum_J c_J (x) f^{j_2} (x) ... (x) f^{j_k}.
struct Tensor {
  int arity = 0;
  std::map<std::vector<int>, MultiPoly> terms;  // no zero coefficients
  /// The zero tensor compares equal across arities.
  bool operator==(const Tensor& o) const { return terms == o.terms && (terms.empty() || arity == o.arity); }
  Tensor& operator+=(const Tensor& o);
  std::string str() const;
};

/// Normal form of the pure tensor factors[0] (x) ... (x) factors[k-1].
Tensor tensor_normal_form(const std::vector<MultiPoly>& factors, const DualBases& db);
inline Tensor tensor_normal_form(const MultiPoly& f, const MultiPoly& g, const DualBases& db) {
  return tensor_normal_form(std::vector<MultiPoly>{f, g}, db);
}
/// sum_J c_J f^{j_2} ... f^{j_k}, the multiplication map to R.
MultiPoly collapse(const Tensor& t, const DualBases& db);

/// Left graded rank sum_j v^{-2 deg f^j} of R (x)_{R^I} R.
LaurentPoly graded_rank(const DualBases& db);

/// Frobenius algebra, coalgebra and separability axioms of R (x)_{R^I} R on
/// spanning tensors of monomials: f (x) g with deg f, deg g <= deg_bound, and
/// 1 (x) g_2 (x) ... (x) g_k with three or four factors of total degree
/// <= deg_bound. Also the graded rank identity.
Report frobenius_check(const std::vector<int>& subset, int n, int deg_bound, bool parallel = true);
/// d_I(p_top) = 1 and m o sigma = id.
Report separability_check(const std::vector<int>& subset, int n, int deg_bound, bool parallel = true);

}  // namespace cellkit
