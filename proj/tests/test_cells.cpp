#include <doctest.h>

#include <set>

#include "cellkit/cells.hpp"
#include "cellkit/error.hpp"
#include "cellkit/typea.hpp"

using namespace cellkit;

namespace {

std::set<std::set<std::string>> classes_as_text(const Group& g, const CellPartition& p, int radius) {
  std::set<std::set<std::string>> out;
  for (const CellClass& c : p.classes) {
    std::set<std::string> s;
    for (ElementId w : c.members)
      if (g.length(w) <= radius) s.insert(g.format(w));
    if (!s.empty()) out.insert(s);
  }
  return out;
}

ElementId el(Group& g, const std::string& text) { return g.intern(parse_element(g.descriptor(), text)); }

std::vector<int> one_line(const Element& e) { return e.form; }

}  // namespace

TEST_CASE("finite S_3 cells") {
  Group g(GroupDescriptor{Family::FiniteA, 3});
  Hecke hk(g);
  CellOptions o;
  o.radius = 3;
  CellData cd = cell_partition(hk, o);
  CHECK(cd.two_sided_classes_in_ball(g).size() == 3);
  CHECK(cd.left_classes_in_ball(g).size() == 4);
  auto text = [&](const char* w) { return format_element(g.descriptor(), parse_element(g.descriptor(), w)); };
  const std::set<std::set<std::string>> want = {
      {text("w:")}, {text("w:1"), text("w:21")}, {text("w:2"), text("w:12")}, {text("w:121")}};
  CHECK(classes_as_text(g, cd.left, 3) == want);
  for (const CellClass& c : cd.left.classes) CHECK(c.complete);
  CHECK(a_value(g, el(g, "w:121"), cd) == 3);
  CHECK(a_value(g, el(g, "w:21"), cd) == 1);
  CHECK(a_value(g, g.identity(), cd) == 0);

  auto duflo = duflo_involutions(hk, cd);
  REQUIRE(duflo.size() == 4);
  std::set<std::string> ds;
  for (const auto& e : duflo) {
    REQUIRE(e.duflo);
    CHECK(e.tested == cd.left.classes[e.left_class].members.size());
    ds.insert(g.format(*e.duflo));
  }
  CHECK(ds == std::set<std::string>{text("w:"), text("w:1"), text("w:2"), text("w:121")});
}

TEST_CASE("finite S_4 and S_5 cells agree with RSK") {
  for (int n : {4, 5}) {
    Group g(GroupDescriptor{Family::FiniteA, n});
    Hecke hk(g);
    CellOptions o;
    o.radius = n * (n - 1) / 2;
    CellData cd = cell_partition(hk, o);
    REQUIRE(cd.ball.size() == (n == 4 ? 24u : 120u));
    // Left classes are the fibres of the recording tableau, two-sided ones
    // the fibres of the shape.
    std::map<std::vector<std::vector<int>>, std::set<int>> by_recording;
    std::map<Partition, std::set<int>> by_shape;
    for (ElementId w : cd.ball) {
      const RSKResult r = rsk(one_line(g.element(w)));
      by_recording[r.recording].insert(cd.left_class(g, w));
      by_shape[r.shape()].insert(cd.two_sided_class(g, w));
    }
    CHECK(by_recording.size() == cd.left.classes.size());
    for (const auto& [q, cls] : by_recording) CHECK(cls.size() == 1);
    CHECK(by_shape.size() == cd.two_sided.classes.size());
    for (const auto& [shape, cls] : by_shape) {
      CHECK(cls.size() == 1);
      // a on the cell of shape lambda is the length of the longest element of
      // the Young subgroup of the dual shape.
      const Partition mu = dual_partition(shape);
      int a = 0;
      for (int part : mu) a += part * (part - 1) / 2;
      CHECK(cd.a_values[*cls.begin()].exact());
      CHECK(cd.a_values[*cls.begin()].lower == a);
    }
    for (const auto& e : duflo_involutions(hk, cd)) CHECK(e.duflo.has_value());
  }
}

TEST_CASE("universal rank 3 cells") {
  Group g(GroupDescriptor{Family::Universal, 3});
  Hecke hk(g);
  CellOptions o;
  o.radius = 8;
  CellData cd = cell_partition(hk, o);
  const auto two = cd.two_sided_classes_in_ball(g);
  REQUIRE(two.size() == 2);
  CHECK(cd.two_sided.classes[two[0]].members == std::vector<ElementId>{g.identity()});
  const int big = cd.two_sided_class(g, el(g, "u:1"));
  CHECK(a_value(g, el(g, "u:123"), cd) == 1);
  CHECK(cd.a_values[big].exact());

  std::map<int, std::set<int>> by_last;
  for (ElementId w : cd.ball) {
    if (w == g.identity()) continue;
    const std::string t = g.format(w);
    by_last[t.back() - '0'].insert(cd.left_class(g, w));
  }
  CHECK(by_last.size() == 3);
  std::set<int> all;
  for (const auto& [s, cls] : by_last) {
    CHECK(cls.size() == 1);
    all.insert(*cls.begin());
  }
  CHECK(all.size() == 3);

  std::set<std::string> ds;
  for (const auto& e : duflo_involutions(hk, cd)) {
    REQUIRE(e.duflo);
    ds.insert(g.format(*e.duflo));
  }
  CHECK(ds == std::set<std::string>{"u:", "u:1", "u:2", "u:3"});
}

TEST_CASE("affine A_2 cells in ball 8") {
  Group g(GroupDescriptor{Family::AffineA, 3});
  Hecke hk(g);
  CellOptions o;
  o.radius = 8;
  CellData cd = cell_partition(hk, o);
  for (const Partition& lam : partitions_of(3)) {
    const int t = two_sided_class_of(g, lam, cd);
    REQUIRE(t >= 0);
    std::size_t left = 0;
    for (int c : cd.left_classes_in_ball(g))
      if (cd.left_to_two_sided[c] == t) ++left;
    CHECK(left == n_lambda(lam, 3));
    CHECK(cd.a_values[t].exact());
    CHECK(cd.a_values[t].lower == parabolic_data(lam, g.descriptor()).a);
  }
  CHECK(cd.two_sided_classes_in_ball(g).size() == 3);
}

TEST_CASE("extended affine A_3: Example 6 cells") {
  Group g(GroupDescriptor{Family::ExtAffineA, 4});
  Hecke hk(g);
  CellOptions o;
  o.radius = 10;
  CellData cd = cell_partition(hk, o);
  CHECK(cd.margin == 10);
  CHECK(cd.two_sided_classes_in_ball(g).size() == 5);
  for (const Partition& lam : partitions_of(4)) {
    CAPTURE(format_partition(lam));
    const int t = two_sided_class_of(g, lam, cd);
    REQUIRE(t >= 0);
    std::size_t left = 0;
    for (int c : cd.left_classes_in_ball(g))
      if (cd.left_to_two_sided[c] == t) ++left;
    CHECK(left == n_lambda(lam, 4));
    CHECK(cd.a_values[t].exact());
    CHECK(cd.a_values[t].lower == parabolic_data(lam, g.descriptor()).a);
  }
  const ElementId d1 = el(g, "w:13");
  CHECK(a_value(g, d1, cd) == 2);
  CHECK(a_value(g, el(g, "w:012010"), cd) == 6);
  CHECK(a_value(g, g.rho_times(3, d1), cd) == 2);
  CHECK(gamma(hk, d1, d1, d1, cd) == 1);
  CHECK(gamma(hk, g.identity(), g.identity(), g.identity(), cd) == 1);

  const int j22 = cd.two_sided_class(g, d1);
  std::set<std::string> ds;
  for (const auto& e : duflo_involutions(hk, cd)) {
    if (cd.left_to_two_sided[e.left_class] != j22) continue;
    REQUIRE(e.duflo);
    CHECK(e.tested > 0);
    ds.insert(g.format(*e.duflo));
  }
  std::set<std::string> want;
  for (const char* w : {"w:13", "w:02", "w:0130", "w:1021", "w:2132", "w:3023"})
    want.insert(format_element(g.descriptor(), parse_element(g.descriptor(), w)));
  CHECK(ds == want);
  // rho-conjugacy classes of the six involutions have sizes 2 and 4.
  std::multiset<std::size_t> orbit_sizes;
  std::set<std::string> seen;
  for (const std::string& w : ds) {
    if (seen.count(w)) continue;
    std::size_t size = 0;
    ElementId x = el(g, w);
    for (int k = 0; k < 4; ++k) {
      const std::string t = g.format(g.rho_conjugate(x, k));
      if (seen.insert(t).second) ++size;
    }
    orbit_sizes.insert(size);
  }
  CHECK(orbit_sizes == std::multiset<std::size_t>{2, 4});

  // Left classes refine two-sided ones, and a is constant on each class.
  for (std::size_t c = 0; c < cd.left.classes.size(); ++c)
    for (ElementId w : cd.left.classes[c].members) CHECK(cd.two_sided.find(w) == cd.left_to_two_sided[c]);

  try {
    a_value(g, el(g, "w:0123012301230123012301230"), cd);
    FAIL("expected TruncationInsufficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationInsufficient);
  }
}

TEST_CASE("partition is deterministic across serial and parallel runs") {
  const GroupDescriptor desc{Family::AffineA, 4};
  Group g1(desc), g2(desc);
  Hecke h1(g1), h2(g2);
  CellOptions o;
  o.radius = 7;
  o.parallel = false;
  CellData a = cell_partition(h1, o);
  o.parallel = true;
  CellData b = cell_partition(h2, o);
  CHECK(classes_as_text(g1, a.left, 9) == classes_as_text(g2, b.left, 9));
  CHECK(classes_as_text(g1, a.right, 9) == classes_as_text(g2, b.right, 9));
  CHECK(classes_as_text(g1, a.two_sided, 9) == classes_as_text(g2, b.two_sided, 9));
  // Right classes are the inverses of left classes.
  std::set<std::set<std::string>> inv;
  for (const CellClass& c : a.left.classes) {
    std::set<std::string> s;
    for (ElementId w : c.members)
      if (g1.length(w) <= 7) s.insert(g1.format(g1.inverse(w)));
    if (!s.empty()) inv.insert(s);
  }
  CHECK(inv == classes_as_text(g1, a.right, 7));
}

TEST_CASE("J-ring of the infinite dihedral H-cell") {
  Group g(GroupDescriptor{Family::Universal, 2});
  Hecke hk(g);
  CellOptions o;
  o.radius = 9;
  CellData cd = cell_partition(hk, o);
  const ElementId s = el(g, "u:1");
  CHECK(gamma(hk, s, s, s, cd) == 1);
  const std::vector<ElementId> h = h_cell(g, s, cd);
  REQUIRE(h.size() == 5);
  GammaTable t = jring_structure(hk, h, cd);
  CHECK(t.a == 1);
  // w_k alternates 1 and 2 with length 2k+1.
  auto index = [&](ElementId w) { return (g.length(w) - 1) / 2; };
  for (const GammaEntry& e : t.entries) {
    const int a = index(t.elements[e.i]), b = index(t.elements[e.j]);
    CHECK(e.certified == (a + b <= 4));
    std::set<int> got;
    for (const auto& [z, c] : e.terms) {
      CHECK(c == 1);
      got.insert(index(z));
    }
    std::set<int> want;
    for (int c = std::abs(a - b); c <= std::min(a + b, 4); ++c) want.insert(c);
    CHECK(got == want);
  }
  auto m = fusion_match(t, {1});
  CHECK_FALSE(m.has_value());
}

TEST_CASE("J-ring of the lowest cell and of H_(2,2)") {
  Group g(GroupDescriptor{Family::ExtAffineA, 4});
  Hecke hk(g);
  CellOptions o;
  o.radius = 10;
  o.rho_range = 2;
  CellData cd = cell_partition(hk, o);

  const std::vector<ElementId> low = h_cell(g, g.identity(), cd);
  REQUIRE(low.size() == 5);
  GammaTable lt = jring_structure(hk, low, cd);
  CHECK(lt.a == 0);
  for (const GammaEntry& e : lt.entries) {
    const int k = g.rho(lt.elements[e.i]) + g.rho(lt.elements[e.j]);
    CHECK(e.certified == (std::abs(k) <= 2));
    if (!e.certified) continue;
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].first == g.rho_times(k, g.identity()));
    CHECK(e.terms[0].second == 1);
  }
  auto lm = fusion_match(lt, {1});
  REQUIRE(lm.has_value());
  // GL_1 fusion is matched up to the automorphism k -> -k.
  int sign = 0;
  for (const auto& [x, w] : lm->assignment)
    if (g.rho(x) == 1) sign = w[0][0];
  CHECK(std::abs(sign) == 1);
  for (const auto& [x, w] : lm->assignment) CHECK(w == Weight{{sign * g.rho(x)}});

  const ElementId d = el(g, "w:13");
  const std::vector<ElementId> h = h_cell(g, d, cd);
  CHECK(h.size() == 13);
  GammaTable t = jring_structure(hk, h, cd);
  CHECK(t.a == 2);
  const std::size_t n = t.elements.size();
  const std::size_t u = *t.index_of(d);
  for (std::size_t x = 0; x < n; ++x) {
    // Unit row and column.
    CHECK(t.at(u, x).certified);
    CHECK(t.at(u, x).terms == std::vector<std::pair<ElementId, Coeff>>{{t.elements[x], 1}});
    CHECK(t.at(x, u).terms == std::vector<std::pair<ElementId, Coeff>>{{t.elements[x], 1}});
  }
  // Associativity wherever all the entries involved are certified.
  std::size_t checked = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const GammaEntry& xy = t.at(x, y);
        const GammaEntry& yz = t.at(y, z);
        if (!xy.certified || !yz.certified) continue;
        std::map<ElementId, Coeff> left, right;
        bool ok = true;
        for (const auto& [w, c] : xy.terms) {
          const GammaEntry& e = t.at(*t.index_of(w), z);
          ok = ok && e.certified;
          for (const auto& [v, c2] : e.terms) left[v] += c * c2;
        }
        for (const auto& [w, c] : yz.terms) {
          const GammaEntry& e = t.at(x, *t.index_of(w));
          ok = ok && e.certified;
          for (const auto& [v, c2] : e.terms) right[v] += c * c2;
        }
        if (!ok) continue;
        ++checked;
        CHECK(left == right);
      }
  CHECK(checked > 100);

  auto m = fusion_match(t, {2});
  REQUIRE(m.has_value());
  CHECK(m->assignment.size() == 13);
  for (const auto& [x, w] : m->assignment)
    if (x == d) CHECK(w == trivial_weight({2}));
  CHECK_FALSE(fusion_match(t, {1, 1}).has_value());
}

TEST_CASE("connection finiteness on the H-cell of s_1 s_3") {
  Group g(GroupDescriptor{Family::ExtAffineA, 4});
  Hecke hk(g);
  CellOptions o;
  o.radius = 8;
  o.rho_range = 1;
  CellData cd = cell_partition(hk, o);
  const std::vector<ElementId> h = h_cell(g, el(g, "w:13"), cd);
  const std::set<ElementId> in_h(h.begin(), h.end());
  GammaTable t = jring_structure(hk, h, cd);
  // Every y with a leading term v^{-a} in h_{x,y,z}, x and z in H, is a
  // column of the table.
  std::size_t hits = 0;
  for (ElementId x : h)
    for (ElementId y : cd.ball) {
      const HeckeElt p = hk.mult_kl(x, y);
      for (ElementId z : h) {
        const LaurentPoly c = p.coeff(z);
        if (!c.is_zero()) CHECK(*c.min_degree() >= -t.a);
        if (c.coeff(-t.a) == 0) continue;
        ++hits;
        CHECK(in_h.count(y));
      }
    }
  CHECK(hits > 0);
}

TEST_CASE("positivity properties and fault injection") {
  Group g(GroupDescriptor{Family::AffineA, 3});
  Hecke hk(g);
  CellOptions o;
  o.radius = 8;
  CellData cd = cell_partition(hk, o);
  ProductTable table = collect_products(hk, cd, 8);
  Report r = verify_positivity_properties(hk, cd, table);
  CHECK(r.ok());
  for (const PropertyResult& p : r.properties) {
    CAPTURE(p.name);
    CHECK(p.instances > 0);
  }

  // Corrupt a single coefficient.
  const ElementId x = el(g, "w:12"), y = el(g, "w:21");
  ProductTable bad = table;
  auto it = bad.find({x, y});
  REQUIRE(it != bad.end());
  const ElementId z = it->second.terms().begin()->first;
  it->second.add(z, LaurentPoly::monomial(3));
  Report rb = verify_positivity_properties(hk, cd, bad);
  CHECK_FALSE(rb.ok());
  bool found = false;
  for (const PropertyResult& p : rb.properties)
    for (const Failure& f : p.failures) {
      CHECK(f.where.find("z=" + g.format(z)) != std::string::npos);
      found = found || (p.name == "bar-invariance" && f.where == "x=" + g.format(x) + " y=" + g.format(y) + " z=" + g.format(z));
    }
  CHECK(found);
}

TEST_CASE("h = pi(I) gamma on parabolic H-cells") {
  {
    Group g(GroupDescriptor{Family::ExtAffineA, 4});
    Hecke hk(g);
    CellOptions o;
    o.radius = 10;
    o.rho_range = 1;
    CellData cd = cell_partition(hk, o);
    Report r = verify_gammacan(hk, {1, 3}, cd);
    CHECK(r.ok());
    CHECK(r.properties[0].instances == 343);
    Report e = verify_gammacan(hk, {}, cd);
    CHECK(e.ok());
    CHECK(e.properties[0].instances == 27);
  }
  {
    Group g(GroupDescriptor{Family::Universal, 2});
    Hecke hk(g);
    CellOptions o;
    o.radius = 9;
    CellData cd = cell_partition(hk, o);
    Report r = verify_gammacan(hk, {1}, cd);
    CHECK(r.ok());
    CHECK(r.properties[0].instances == 125);
    CHECK_THROWS_AS(verify_gammacan(hk, {1, 2}, cd), Error);
  }
}
