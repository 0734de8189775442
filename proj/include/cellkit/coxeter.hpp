#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cellkit {

enum class Family { FiniteA, AffineA, ExtAffineA, Universal };

/// A supported group: finite S_n, affine S_n, extended affine S_n (rank
/// parameter = number of strands) or the universal Coxeter group on n
/// generators.
struct GroupDescriptor {
  Family family = Family::FiniteA;
  int n = 1;
  bool operator==(const GroupDescriptor&) const = default;
};

/// Short tags used on the command line and in the cache format.
std::string_view family_tag(Family f);
Family parse_family(std::string_view tag);
void validate(const GroupDescriptor& g);
bool is_affine(const GroupDescriptor& g);

/// Family-dependent canonical form: one-line permutation (finite), window
/// [w(1),...,w(n)] (affine, extended) or the reduced word (universal).
struct Element {
  std::vector<int> form;
  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

/// A word in the simple generators, optionally preceded by rho^rho
/// (extended affine family only).
struct Word {
  int rho = 0;
  std::vector<int> letters;
  bool operator==(const Word&) const = default;
};

enum class Side { Left, Right };

/// Generator labels: {1..n-1} finite, {0..n-1} affine, {1..n} universal.
std::vector<int> generators(const GroupDescriptor& g);
int generator_slot(const GroupDescriptor& g, int label);
bool is_generator(const GroupDescriptor& g, int label);

Element identity(const GroupDescriptor& g);
Element generator(const GroupDescriptor& g, int label);
/// rho^k as a window; extended family only.
Element rho_power(const GroupDescriptor& g, int k);
/// Exponent k with w = rho^k x, x in the Coxeter part; 0 outside the extended family.
int rho_exponent(const GroupDescriptor& g, const Element& w);

Element element_from_word(const GroupDescriptor& g, const Word& w);
Element multiply(const GroupDescriptor& g, const Element& a, const Element& b);
Element inverse(const GroupDescriptor& g, const Element& a);
Element left_mul_gen(const GroupDescriptor& g, int label, const Element& w);
Element right_mul_gen(const GroupDescriptor& g, const Element& w, int label);
int length(const GroupDescriptor& g, const Element& w);
bool has_right_descent(const GroupDescriptor& g, const Element& w, int label);
bool has_left_descent(const GroupDescriptor& g, const Element& w, int label);
std::vector<int> descent_set(const GroupDescriptor& g, const Element& w, Side side);
/// Deterministic rex: repeatedly strips the smallest right descent.
Word reduced_word(const GroupDescriptor& g, const Element& w);

/// Bruhat order via the descent recursion along reduced_word(w).
bool bruhat_leq(const GroupDescriptor& g, const Element& x, const Element& w);
/// Same, along a caller-supplied rex of w.
bool bruhat_leq_along(const GroupDescriptor& g, const Element& x, const Word& rex_of_w);

/// rho^k w rho^-k. Affine and extended families only.
Element rho_shift(const GroupDescriptor& g, const Element& w, int k);

bool parabolic_is_finite(const GroupDescriptor& g, const std::vector<int>& subset);
Element longest_parabolic(const GroupDescriptor& g, const std::vector<int>& subset);

/// Total order used for all deterministic output: length, then canonical form.
bool canonical_less(const GroupDescriptor& g, const Element& a, const Element& b);

/// All elements of length <= radius, ordered by canonical_less. For the
/// extended family the length-0 layer is {rho^k : |k| <= rho_range}.
std::vector<Element> ball(const GroupDescriptor& g, int radius, std::size_t max_elements = 200000,
                          int rho_range = 0);

/// Text forms: "2,1,4,3" (finite), "[0,2,3,5]" or "w:0130" (affine and
/// extended; 'r'/'R' letters stand for rho^{+1}/rho^{-1}), "u:1213"
/// (universal), "e" for the identity.
Element parse_element(const GroupDescriptor& g, std::string_view text);
Word parse_word(const GroupDescriptor& g, std::string_view letters);
std::string format_word(const GroupDescriptor& g, const Word& w);
/// Canonical text: one-line for finite, "w:<rex>" for affine/extended,
/// "u:<word>" for universal.
std::string format_element(const GroupDescriptor& g, const Element& w);
std::string format_window(const Element& w);
/// Human-readable "s_1s_0s_2", "e", "rho^2 s_1".
std::string pretty_element(const GroupDescriptor& g, const Element& w);

}  // namespace cellkit
