#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "cellkit/cells.hpp"
#include "cellkit/error.hpp"
#include "cellkit/typea.hpp"
#include "combinatorics_oracles.hpp"

using namespace cellkit;

namespace {
std::uint64_t fact(int n) { return n <= 1 ? 1 : static_cast<std::uint64_t>(n) * fact(n - 1); }
}  // namespace

TEST_CASE("partitions, duals and n_lambda") {
  CHECK(dual_partition({2, 2}) == Partition{2, 2});
  CHECK(dual_partition({4}) == Partition{1, 1, 1, 1});
  CHECK(dual_partition({3, 1}) == Partition{2, 1, 1});
  for (int n = 1; n <= 8; ++n)
    for (const Partition& p : partitions_of(n)) {
      CHECK(dual_partition(dual_partition(p)) == p);
      CHECK(partition_size(dual_partition(p)) == n);
    }
  CHECK(partitions_of(4).size() == 5);
  CHECK(partitions_of(8).size() == 22);

  CHECK(n_lambda({2, 2}, 4) == 6);
  CHECK(n_lambda({4}, 4) == 24);
  CHECK(n_lambda({3, 1}, 4) == 12);
  CHECK(n_lambda({2, 1, 1}, 4) == 4);
  for (int n = 1; n <= 7; ++n) CHECK(n_lambda(Partition(static_cast<std::size_t>(n), 1), n) == 1);
  CHECK_THROWS_AS(n_lambda({2, 2}, 5), Error);
  try {
    n_lambda({3}, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeMismatch);
  }
  CHECK(parse_partition("2,2") == Partition{2, 2});
  CHECK(format_partition({3, 1}) == "3,1");
  CHECK_THROWS_AS(parse_partition("1,2"), Error);
  CHECK_THROWS_AS(parse_partition("2,x"), Error);
}

TEST_CASE("RSK is a bijection onto pairs of tableaux of equal shape") {
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    std::iota(w.begin(), w.end(), 1);
    std::set<std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>> seen;
    std::map<Partition, std::uint64_t> by_shape;
    do {
      RSKResult r = rsk(w);
      CHECK(seen.emplace(r.insertion, r.recording).second);
      ++by_shape[r.shape()];
      for (const auto& row : r.insertion) CHECK(std::is_sorted(row.begin(), row.end()));
    } while (std::next_permutation(w.begin(), w.end()));
    CHECK(seen.size() == fact(n));
    std::uint64_t total = 0;
    for (const Partition& p : partitions_of(n)) {
      CHECK(by_shape[p] == syt_count(p) * syt_count(p));
      total += syt_count(p) * syt_count(p);
    }
    CHECK(total == fact(n));
  }
}

TEST_CASE("parabolic data and pi_I") {
  const GroupDescriptor ext{Family::ExtAffineA, 4};
  ParabolicData d = parabolic_data({2, 2}, ext);
  CHECK(d.subset == std::vector<int>{1, 3});
  CHECK(format_element(ext, d.longest) == "w:31");
  CHECK(d.a == 2);
  CHECK(parabolic_data({4}, ext).a == 6);
  CHECK(parabolic_data({1, 1, 1, 1}, ext).subset.empty());
  CHECK(length(ext, parabolic_data({1, 1, 1, 1}, ext).longest) == 0);
  for (const Partition& p : partitions_of(5)) {
    ParabolicData q = parabolic_data(p, GroupDescriptor{Family::AffineA, 5});
    CHECK(q.a == length(GroupDescriptor{Family::AffineA, 5}, q.longest));
  }
  CHECK_THROWS_AS(parabolic_data({2, 2}, GroupDescriptor{Family::AffineA, 5}), Error);

  CHECK(pi_I(ext, {}) == LaurentPoly(1));
  CHECK(pi_I(ext, {1}) == LaurentPoly::parse("v+v^-1"));
  CHECK(pi_I(ext, {1, 2}) == LaurentPoly::parse("v^3+2v+2v^-1+v^-3"));
  CHECK(pi_I(ext, {0, 1, 2}) == LaurentPoly::parse("v^6+3v^4+5v^2+6+5v^-2+3v^-4+v^-6"));
  for (const std::vector<int>& I : {std::vector<int>{1, 3}, std::vector<int>{0, 2}, std::vector<int>{1, 2, 3}}) {
    const LaurentPoly p = pi_I(ext, I);
    const int top = length(ext, longest_parabolic(ext, I));
    CHECK(p.is_bar_invariant());
    CHECK(*p.min_degree() == -top);
    CHECK(*p.max_degree() == top);
  }
  CHECK(pi_I(ext, {1, 2, 3}).eval_at_one() == 24);
  CHECK(pi_I(GroupDescriptor{Family::Universal, 3}, {1}).eval_at_one() == 2);
  try {
    pi_I(GroupDescriptor{Family::Universal, 3}, {1, 2});
    FAIL("expected InfiniteParabolic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfiniteParabolic);
  }
  try {
    pi_I(ext, {0, 1, 2, 3});
    FAIL("expected InfiniteParabolic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfiniteParabolic);
  }
}

TEST_CASE("Littlewood-Richardson coefficients against Schur polynomial products") {
  CHECK(lr_coeff({1}, {1}, {2}) == 1);
  CHECK(lr_coeff({1}, {1}, {1, 1}) == 1);
  CHECK(lr_coeff({2, 1}, {2, 1}, {3, 2, 1}) == 2);
  CHECK(lr_coeff({2, 1}, {2, 1}, {4, 2}) == 1);
  CHECK(lr_coeff({2}, {2}, {3, 1, 1}) == 0);

  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (const Partition& mu : partitions_of(a))
        for (const Partition& nu : partitions_of(b)) {
          const int m = static_cast<int>(mu.size() + nu.size());
          auto expansion =
              oracle::schur_expand(oracle::poly_mul(oracle::schur_polynomial(mu, m), oracle::schur_polynomial(nu, m)), m);
          for (const Partition& lam : partitions_of(a + b)) {
            const auto it = expansion.find(lam);
            const std::int64_t want = it == expansion.end() ? 0 : it->second;
            CHECK(static_cast<std::int64_t>(lr_coeff(mu, nu, lam)) == want);
            CHECK(lr_coeff(mu, nu, lam) == lr_coeff(nu, mu, lam));
          }
        }
}

TEST_CASE("fusion tensor and Weyl dimensions") {
  auto t = fusion_tensor({2}, {{1, 0}}, {{1, 0}});
  CHECK(t == std::map<Weight, std::uint64_t>{{{{2, 0}}, 1}, {{{1, 1}}, 1}});
  auto u = fusion_tensor({2}, {{1, -1}}, {{1, -1}});
  CHECK(u == std::map<Weight, std::uint64_t>{{{{2, -2}}, 1}, {{{1, -1}}, 1}, {{{0, 0}}, 1}});
  auto torus = fusion_tensor({1, 1}, {{3}, {-1}}, {{-5}, {2}});
  CHECK(torus == std::map<Weight, std::uint64_t>{{{{-2}, {1}}, 1}});
  CHECK(fusion_tensor({2, 1}, trivial_weight({2, 1}), {{2, -1}, {4}}) ==
        std::map<Weight, std::uint64_t>{{{{2, -1}, {4}}, 1}});
  CHECK_THROWS_AS(fusion_tensor({2}, {{0, 1}}, {{0, 0}}), Error);
  CHECK_THROWS_AS(fusion_tensor({2}, {{0}}, {{0, 0}}), Error);
  CHECK(format_weight({{2, 0}, {1}}) == "(2,0)|(1)");

  CHECK(levi_of({2, 2}) == LeviDescriptor{2});
  CHECK(levi_of({1, 1, 1, 1}) == LeviDescriptor{1});
  CHECK(levi_of({4}) == LeviDescriptor{4});
  CHECK(levi_of({2, 1, 1}) == LeviDescriptor{1, 1});

  // dim(x) dim(y) = sum of dimensions over the decomposition.
  for (int m = 1; m <= 3; ++m) {
    std::vector<std::vector<int>> weights;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int cap) -> void {
      if (static_cast<int>(cur.size()) == m) {
        weights.push_back(cur);
        return;
      }
      for (int e = cap; e >= -1; --e) {
        cur.push_back(e);
        self(self, e);
        cur.pop_back();
      }
    };
    rec(rec, 2);
    for (const auto& x : weights)
      for (const auto& y : weights) {
        std::uint64_t total = 0;
        for (const auto& [w, c] : fusion_tensor({m}, {x}, {y})) total += c * weight_dimension(w);
        CHECK(total == weight_dimension({x}) * weight_dimension({y}));
      }
  }
  CHECK(weight_dimension({{2, 1, 0}}) == 8);
  CHECK(weight_dimension({{1, 0, 0}, {3, 0}}) == 12);
}

TEST_CASE("Schur multiplier of finite abelian groups against the bar complex") {
  CHECK(schur_multiplier_torus(0, {2, 2}) == std::vector<std::int64_t>{2});
  CHECK(schur_multiplier_torus(3, {7}).empty());
  CHECK(schur_multiplier_torus(1, {2, 3}).empty());
  CHECK(schur_multiplier_torus(2, {4, 6, 10}) == std::vector<std::int64_t>{2, 2, 2});
  CHECK_THROWS_AS(schur_multiplier_torus(0, {1}), Error);

  const std::vector<std::vector<int>> groups = {
      {2}, {2, 2}, {4}, {2, 2, 2}, {2, 4}, {3, 3}, {2, 3}, {2, 6}, {2, 2, 3}, {4, 3}, {2, 2, 2, 2}, {2, 2, 4},
      {4, 4}, {2, 8}, {16}, {5}, {3, 5}, {2, 7},
  };
  for (const auto& ds : groups) {
    std::vector<std::int64_t> d64(ds.begin(), ds.end());
    CAPTURE(d64);
    CHECK(oracle::prime_powers(schur_multiplier_torus(0, d64)) == oracle::h2_prime_powers(ds));
  }
}

TEST_CASE("canonical left cell members") {
  const GroupDescriptor ext{Family::ExtAffineA, 4};
  Group g(ext);
  Hecke hk(g);
  CellOptions o;
  o.radius = 10;
  o.margin = 2;
  CellData cd = cell_partition(hk, o);
  CHECK(canonical_cell_member(g, g.intern(parse_element(ext, "w:0130")), {2, 2}, cd));
  CHECK_FALSE(canonical_cell_member(g, g.intern(parse_element(ext, "w:13")), {2, 2}, cd));
  CHECK(canonical_cell_member(g, g.identity(), {1, 1, 1, 1}, cd));
  CHECK_FALSE(canonical_cell_member(g, g.intern(parse_element(ext, "w:0130")), {3, 1}, cd));

  // Elements with right descents inside {s_0} meet each J_lambda in one left class.
  for (const Partition& lam : partitions_of(4)) {
    std::set<int> classes;
    for (ElementId w : cd.ball)
      if (canonical_cell_member(g, w, lam, cd)) classes.insert(cd.left_class(g, w));
    CAPTURE(format_partition(lam));
    CHECK(classes.size() == 1);
  }
  CHECK_THROWS_AS(canonical_cell_member(g, g.intern(parse_element(ext, "w:012301230123012")), {2, 2}, cd), Error);
}
