#include "doctest.h"

#include <map>
#include <queue>
#include <random>
#include <set>

#include "cellkit/coxeter.hpp"
#include "cellkit/error.hpp"
#include "cellkit/group.hpp"

using namespace cellkit;

namespace {

const GroupDescriptor kAff4{Family::AffineA, 4};
const GroupDescriptor kAff3{Family::AffineA, 3};
const GroupDescriptor kExt4{Family::ExtAffineA, 4};
const GroupDescriptor kS4{Family::FiniteA, 4};
const GroupDescriptor kU3{Family::Universal, 3};

Element w(const GroupDescriptor& g, const char* text) { return parse_element(g, text); }

// Word-length by breadth-first search in the Cayley graph.
std::map<Element, int> bfs_lengths(const GroupDescriptor& g, int radius) {
  std::map<Element, int> dist{{identity(g), 0}};
  std::queue<Element> q;
  q.push(identity(g));
  while (!q.empty()) {
    Element cur = q.front();
    q.pop();
    int d = dist[cur];
    if (d == radius) continue;
    for (int s : generators(g)) {
      Element nxt = right_mul_gen(g, cur, s);
      if (dist.emplace(nxt, d + 1).second) q.push(nxt);
    }
  }
  return dist;
}

// x <= w iff some subword of a rex of w multiplies to x.
bool subword_leq(const GroupDescriptor& g, const Element& x, const Word& rex) {
  const std::size_t k = rex.letters.size();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Element cur = identity(g);
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) cur = right_mul_gen(g, cur, rex.letters[i]);
    if (cur == x) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("window conventions") {
  CHECK(element_from_word(kAff4, Word{0, {0}}) == Element{{0, 2, 3, 5}});
  CHECK(element_from_word(kAff4, Word{}) == Element{{1, 2, 3, 4}});
  CHECK(w(kAff4, "w:121") == w(kAff4, "w:212"));
  CHECK(w(kAff4, "w:02") == w(kAff4, "w:20"));
  CHECK(w(kAff4, "w:010") == w(kAff4, "w:101"));
  CHECK(w(kAff4, "w:030") == w(kAff4, "w:303"));
  CHECK(w(kAff4, "w:13") == w(kAff4, "w:31"));
  CHECK(w(kAff4, "w:00") == identity(kAff4));
  CHECK(w(kAff4, "[0,2,3,5]") == w(kAff4, "w:0"));
  CHECK(rho_power(kExt4, 1) == Element{{2, 3, 4, 5}});
  for (int i = 0; i < 4; ++i)
    CHECK(rho_shift(kExt4, generator(kExt4, i), 1) == generator(kExt4, (i + 1) % 4));
  CHECK(multiply(kExt4, rho_power(kExt4, 4), identity(kExt4)) == multiply(kExt4, identity(kExt4), rho_power(kExt4, 4)));
  CHECK(length(kExt4, rho_power(kExt4, 3)) == 0);
  CHECK(rho_exponent(kExt4, rho_power(kExt4, -2)) == -2);
}

TEST_CASE("length agrees with breadth-first search") {
  for (const auto& g : {kAff3, kAff4, kS4, kExt4}) {
    auto dist = bfs_lengths(g, 6);
    for (const auto& [e, d] : dist) CHECK(length(g, e) == d);
  }
  CHECK(length(kAff4, w(kAff4, "w:30121030121031")) == 14);
  CHECK(length(kAff4, w(kAff4, "w:101210")) == 6);
  CHECK(length(kAff4, w(kAff4, "w:101201")) == 4);
  CHECK(length(kAff4, w(kAff4, "w:31012103")) == 8);
}

TEST_CASE("ball sizes") {
  std::vector<std::size_t> expect{1, 5, 15, 35, 69, 121, 195};
  for (int r = 0; r <= 6; ++r) CHECK(ball(kAff4, r).size() == expect[static_cast<std::size_t>(r)]);
  CHECK(ball(kU3, 5).size() == 1 + 3 * 31);
  CHECK(ball(kS4, 10).size() == 24);
  CHECK(ball(kExt4, 2, 200000, 1).size() == 45);
  CHECK_THROWS_AS(ball(kAff4, 12, 100), Error);
}

TEST_CASE("reduced words, inverses and descents") {
  std::mt19937_64 rng(3);
  for (const auto& g : {kAff4, kExt4, kS4, kU3}) {
    auto elems = ball(g, 5, 200000, g.family == Family::ExtAffineA ? 1 : 0);
    for (const auto& e : elems) {
      Word rex = reduced_word(g, e);
      CHECK(static_cast<int>(rex.letters.size()) == length(g, e));
      CHECK(element_from_word(g, rex) == e);
      CHECK(parse_element(g, format_element(g, e)) == e);
      Element inv = inverse(g, e);
      CHECK(multiply(g, e, inv) == identity(g));
      for (int s : generators(g)) {
        bool rdesc = length(g, right_mul_gen(g, e, s)) < length(g, e);
        bool ldesc = length(g, left_mul_gen(g, s, e)) < length(g, e);
        CHECK(has_right_descent(g, e, s) == rdesc);
        CHECK(has_left_descent(g, e, s) == ldesc);
      }
    }
  }
}

TEST_CASE("Bruhat order matches the subword property") {
  for (const auto& g : {kS4, kAff3}) {
    auto elems = ball(g, g.family == Family::FiniteA ? 6 : 4);
    for (const auto& big : elems) {
      Word rex = reduced_word(g, big);
      for (const auto& small : elems) CHECK(bruhat_leq(g, small, big) == subword_leq(g, small, rex));
    }
  }
}

TEST_CASE("parabolic subgroups") {
  CHECK(length(kAff4, longest_parabolic(kAff4, {1, 3})) == 2);
  CHECK(length(kAff4, longest_parabolic(kAff4, {1, 2, 3})) == 6);
  CHECK(length(kAff4, longest_parabolic(kAff4, {0, 1})) == 3);
  CHECK(longest_parabolic(kAff4, {}) == identity(kAff4));
  CHECK_FALSE(parabolic_is_finite(kAff4, {0, 1, 2, 3}));
  CHECK_THROWS_AS(longest_parabolic(kAff4, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(longest_parabolic(kU3, {1, 2}), Error);
  CHECK(length(kU3, longest_parabolic(kU3, {2})) == 1);
}

TEST_CASE("text forms") {
  CHECK(format_element(kAff4, identity(kAff4)) == "w:");
  CHECK(format_element(kExt4, rho_power(kExt4, 2)) == "w:rr");
  CHECK(pretty_element(kExt4, w(kExt4, "w:r0")) == "rho s_0");
  CHECK(w(kExt4, "w:1r") == w(kExt4, "w:r0"));
  CHECK(pretty_element(kAff4, w(kAff4, "w:10")) == "s_1s_0");
  CHECK(pretty_element(kAff4, identity(kAff4)) == "e");
  CHECK(w(kS4, "1324") == w(kS4, "1,3,2,4"));
  CHECK(format_element(kS4, w(kS4, "3412")) == "3,4,1,2");
  CHECK(w(kU3, "u:1213").form == std::vector<int>{1, 2, 1, 3});
  CHECK(w(kU3, "u:1221") == identity(kU3));
  CHECK_THROWS_AS(w(kAff4, "w:5"), Error);
  CHECK_THROWS_AS(w(kAff4, "[0,2,3,4]"), Error);
  CHECK_THROWS_AS(w(kAff4, "w:r"), Error);
  CHECK_THROWS_AS(w(kS4, "1,1,2,3"), Error);
}

TEST_CASE("group session caches") {
  Group g(kExt4);
  auto ids = g.ball(4, 1);
  CHECK(ids.size() == 3 * 69);
  for (ElementId id : ids) {
    CHECK(g.find(g.element(id)) == id);
    CHECK(g.inverse(g.inverse(id)) == id);
    ElementId cox = g.coxeter_part(id);
    CHECK(g.rho(cox) == 0);
    CHECK(g.rho_times(g.rho(id), cox) == id);
    for (int s = 0; s < g.num_generators(); ++s) {
      CHECK(g.lmul(s, g.lmul(s, id)) == id);
      CHECK(g.is_left_descent(s, id) == (g.length(g.lmul(s, id)) < g.length(id)));
      CHECK(g.is_right_descent(id, s) == (g.length(g.rmul(id, s)) < g.length(id)));
    }
  }
  Group small(kAff4, 10);
  CHECK_THROWS_AS(small.ball(3), Error);
}
