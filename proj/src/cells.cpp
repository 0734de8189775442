#include "cellkit/cells.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cellkit/error.hpp"
#include "cellkit/typea.hpp"

namespace cellkit {

int CellPartition::find(ElementId id) const {
  auto it = class_of.find(id);
  return it == class_of.end() ? -1 : it->second;
}

namespace {

bool extended(const GroupDescriptor& g) { return g.family == Family::ExtAffineA; }

using Adjacency = std::vector<std::vector<int>>;

// Iterative Tarjan; returns the component of every vertex.
std::vector<int> strongly_connected(const Adjacency& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, std::size_t>> calls;
  int counter = 0;
  count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    calls.emplace_back(root, 0);
    while (!calls.empty()) {
      const int v = calls.back().first;
      std::size_t& next = calls.back().second;
      if (next < adj[v].size()) {
        const int w = adj[v][next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      calls.pop_back();
      if (!calls.empty()) low[calls.back().first] = std::min(low[calls.back().first], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

struct Graphs {
  Adjacency left, right, two_sided;
  std::vector<char> left_leak, right_leak;
};

// Generating relations of the preorders: b_x occurs in b_s b_y (left) or in
// b_y b_s (right). For s outside the descent set of y these are sy (ys) and
// the z in the mu-list of y having s as a descent.
Graphs build_graphs(Hecke& hk, const std::vector<ElementId>& outer, const std::vector<int>& local) {
  Group& g = hk.group();
  KLTable& kl = hk.kl();
  const int n = static_cast<int>(outer.size());
  const int gens = g.num_generators();
  Graphs gr;
  gr.left.resize(n);
  gr.right.resize(n);
  gr.two_sided.resize(n);
  gr.left_leak.assign(n, 0);
  gr.right_leak.assign(n, 0);
  auto index = [&](ElementId id) { return id < local.size() ? local[id] : -1; };
  for (int i = 0; i < n; ++i) {
    const ElementId y = outer[i];
    const std::uint64_t dl = g.left_descents(y);
    const std::uint64_t dr = g.right_descents(y);
    for (int s = 0; s < gens; ++s) {
      if (!((dl >> s) & 1u)) {
        const int t = index(g.lmul(s, y));
        if (t < 0) gr.left_leak[i] = 1; else gr.left[i].push_back(t);
      }
      if (!((dr >> s) & 1u)) {
        const int t = index(g.rmul(y, s));
        if (t < 0) gr.right_leak[i] = 1; else gr.right[i].push_back(t);
      }
    }
    for (const auto& [z, m] : kl.column(y).mu) {
      (void)m;
      if (g.left_descents(z) & ~dl) gr.left[i].push_back(index(z));
      if (g.right_descents(z) & ~dr) gr.right[i].push_back(index(z));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (auto* adj : {&gr.left[i], &gr.right[i]}) {
      std::sort(adj->begin(), adj->end());
      adj->erase(std::unique(adj->begin(), adj->end()), adj->end());
    }
    std::set_union(gr.left[i].begin(), gr.left[i].end(), gr.right[i].begin(), gr.right[i].end(),
                   std::back_inserter(gr.two_sided[i]));
  }
  if (extended(g.descriptor())) {
    // Conjugation by rho is a composite of unit multiplications on both sides.
    for (int i = 0; i < n; ++i)
      for (int k : {1, -1}) gr.two_sided[i].push_back(index(g.rho_conjugate(outer[i], k)));
  }
  return gr;
}

CellPartition make_partition(const Group& g, const std::vector<ElementId>& outer, const std::vector<int>& comp, int count,
                         const std::vector<char>& leak) {
  std::vector<CellClass> raw(static_cast<std::size_t>(count));
  std::vector<char> leaky(static_cast<std::size_t>(count), 0);
  for (std::size_t i = 0; i < outer.size(); ++i) {
    raw[comp[i]].members.push_back(outer[i]);
    if (!leak.empty() && leak[i]) leaky[comp[i]] = 1;
  }
  for (int c = 0; c < count; ++c) {
    raw[c].complete = !leaky[c];
    g.sort_canonical(raw[c].members);
  }
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.less(raw[a].members.front(), raw[b].members.front()); });
  CellPartition p;
  for (int c : order) {
    const int id = static_cast<int>(p.classes.size());
    for (ElementId w : raw[c].members) p.class_of.emplace(w, id);
    p.classes.push_back(std::move(raw[c]));
  }
  return p;
}

// Component ids after relabelling by a partition built with make_partition.
std::vector<int> relabel(const CellPartition& p, const std::vector<ElementId>& outer) {
  std::vector<int> comp(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) comp[i] = p.find(outer[i]);
  return comp;
}

// Reachability between components of a graph, as bit rows.
std::vector<std::vector<std::uint64_t>> class_reachability(const Adjacency& adj, const std::vector<int>& comp,
                                                           int count) {
  const std::size_t words = (static_cast<std::size_t>(count) + 63) / 64;
  std::vector<std::set<int>> dag(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (int j : adj[i])
      if (j >= 0 && comp[i] != comp[j]) dag[comp[i]].insert(comp[j]);
  std::vector<std::vector<std::uint64_t>> reach(static_cast<std::size_t>(count), std::vector<std::uint64_t>(words, 0));
  std::vector<int> state(static_cast<std::size_t>(count), 0);
  std::vector<std::pair<int, std::set<int>::const_iterator>> calls;
  for (int root = 0; root < count; ++root) {
    if (state[root]) continue;
    state[root] = 1;
    calls.emplace_back(root, dag[root].cbegin());
    while (!calls.empty()) {
      auto& [v, it] = calls.back();
      if (it != dag[v].cend()) {
        const int w = *it++;
        if (!state[w]) {
          state[w] = 1;
          calls.emplace_back(w, dag[w].cbegin());
        }
        continue;
      }
      const int done = v;
      calls.pop_back();
      auto& row = reach[done];
      row[done / 64] |= std::uint64_t{1} << (done % 64);
      for (int w : dag[done])
        for (std::size_t k = 0; k < words; ++k) row[k] |= reach[w][k];
    }
  }
  return reach;
}

bool reaches(const std::vector<std::vector<std::uint64_t>>& r, int a, int b) { return (r[a][b / 64] >> (b % 64)) & 1u; }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int root(int a) { return parent[a] == a ? a : parent[a] = root(parent[a]); }
  void unite(int a, int b) { parent[root(a)] = root(b); }
};

Coeff leading_gamma(const LaurentPoly& h, int a) { return h.coeff(-a); }

std::string triple_text(const Group& g, ElementId x, ElementId y, ElementId z) {
  return "x=" + g.format(x) + " y=" + g.format(y) + " z=" + g.format(z);
}

}  // namespace

CellData cell_partition(Hecke& hk, const CellOptions& options) {
  Group& g = hk.group();
  KLTable& kl = hk.kl();
  if (options.radius < 0) fail(ErrorCode::IndexOutOfRange, "negative ball radius");
  CellData cd;
  cd.group = g.descriptor();
  cd.radius = options.radius;
  cd.rho_range = extended(cd.group) ? std::max(0, options.rho_range) : 0;
  cd.ball = g.ball(cd.radius, cd.rho_range);
  if (options.margin >= 0) {
    cd.margin = options.margin;
    cd.outer = g.ball(cd.radius + cd.margin);
  } else {
    // ball(2L) unless that exceeds the element budget; never below L + 2.
    cd.margin = std::max(options.radius, 2);
    cd.outer = g.ball(cd.radius + 2);
    for (int m = 3; m <= cd.margin; ++m) {
      std::vector<ElementId> next = g.ball(cd.radius + m);
      if (next.size() > kDefaultOuterBudget) {
        cd.margin = m - 1;
        break;
      }
      cd.outer = std::move(next);
    }
  }
  const int outer_radius = cd.radius + cd.margin;
  if (options.parallel)
    kl.precompute_parallel(outer_radius);
  else
    kl.precompute_serial(outer_radius);

  std::vector<int> local(g.size(), -1);
  for (std::size_t i = 0; i < cd.outer.size(); ++i) local[cd.outer[i]] = static_cast<int>(i);
  Graphs gr = build_graphs(hk, cd.outer, local);

  int nl = 0, nr = 0, nt = 0;
  std::vector<int> cl = strongly_connected(gr.left, nl);
  std::vector<int> cr = strongly_connected(gr.right, nr);
  std::vector<int> ct = strongly_connected(gr.two_sided, nt);
  std::vector<char> two_leak(cd.outer.size());
  for (std::size_t i = 0; i < two_leak.size(); ++i) two_leak[i] = gr.left_leak[i] | gr.right_leak[i];
  cd.left = make_partition(g, cd.outer, cl, nl, gr.left_leak);
  cd.right = make_partition(g, cd.outer, cr, nr, gr.right_leak);
  cd.two_sided = make_partition(g, cd.outer, ct, nt, two_leak);

  for (ElementId z : cd.outer) {
    const KLColumn& col = kl.column(z);
    const std::size_t at = col.find(g.identity());
    if (at == KLColumn::npos) fail(ErrorCode::InvariantViolation, "identity missing from a KL column");
    cd.delta.emplace(z, *col.entry(at).min_degree());
  }

  auto certify = [&](const CellPartition& two) {
    std::vector<AValue> out(two.classes.size());
    for (std::size_t c = 0; c < two.classes.size(); ++c) {
      AValue& a = out[c];
      std::vector<ElementId> involutions;
      for (ElementId z : two.classes[c].members) {
        const int d = cd.delta.at(z);
        if (d < a.upper) {
          a.upper = d;
          a.upper_witness = z;
        }
        if (g.length(z) <= cd.radius && g.inverse(z) == z) involutions.push_back(z);
      }
      std::stable_sort(involutions.begin(), involutions.end(),
                       [&](ElementId p, ElementId q) { return cd.delta.at(p) < cd.delta.at(q); });
      const std::size_t tries = std::min<std::size_t>(involutions.size(), 4);
      for (std::size_t k = 0; k < tries && !a.exact(); ++k) {
        const ElementId d = involutions[k];
        const LaurentPoly h = hk.mult_kl(d, d).coeff(d);
        if (h.is_zero()) continue;
        const int bound = -*h.min_degree();
        if (bound > a.lower || a.lower_witness == kNoElement) {
          a.lower = std::max(a.lower, bound);
          a.lower_witness = d;
        }
      }
    }
    return out;
  };
  cd.a_values = certify(cd.two_sided);

  if (options.merge_comparable) {
    // Classes of the truncated graphs are pieces of true cells. Comparable
    // pieces with the same a-value belong to one cell.
    std::vector<int> tcomp = relabel(cd.two_sided, cd.outer);
    const int tcount = static_cast<int>(cd.two_sided.classes.size());
    auto treach = class_reachability(gr.two_sided, tcomp, tcount);
    UnionFind tuf(tcount);
    for (int a = 0; a < tcount; ++a)
      for (int b = 0; b < tcount; ++b)
        if (a != b && reaches(treach, a, b) && cd.a_values[a].exact() && cd.a_values[b].exact() &&
            cd.a_values[a].lower == cd.a_values[b].lower)
          tuf.unite(a, b);
    std::vector<int> merged(cd.outer.size());
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i] = tuf.root(tcomp[i]);
    std::vector<int> ids(static_cast<std::size_t>(tcount), -1);
    int nt2 = 0;
    for (int& m : merged) {
      if (ids[m] < 0) ids[m] = nt2++;
      m = ids[m];
    }
    if (nt2 != tcount) {
      cd.two_sided = make_partition(g, cd.outer, merged, nt2, two_leak);
      cd.a_values = certify(cd.two_sided);
    }

    auto merge_side = [&](CellPartition& side, const Adjacency& adj, const std::vector<char>& leak) {
      std::vector<int> comp = relabel(side, cd.outer);
      const int count = static_cast<int>(side.classes.size());
      auto reach = class_reachability(adj, comp, count);
      std::vector<int> two(static_cast<std::size_t>(count));
      for (int c = 0; c < count; ++c) two[c] = cd.two_sided.find(side.classes[c].members.front());
      UnionFind uf(count);
      for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b)
          if (a != b && two[a] == two[b] && cd.a_values[two[a]].exact() && reaches(reach, a, b)) uf.unite(a, b);
      std::vector<int> ids2(static_cast<std::size_t>(count), -1);
      int n2 = 0;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        int r = uf.root(comp[i]);
        if (ids2[r] < 0) ids2[r] = n2++;
        comp[i] = ids2[r];
      }
      if (n2 != count) side = make_partition(g, cd.outer, comp, n2, leak);
    };
    merge_side(cd.left, gr.left, gr.left_leak);
    merge_side(cd.right, gr.right, gr.right_leak);
  }

  cd.left_to_two_sided.resize(cd.left.classes.size());
  cd.duflo_candidate.assign(cd.left.classes.size(), kNoElement);
  for (std::size_t c = 0; c < cd.left.classes.size(); ++c) {
    const int t = cd.two_sided.find(cd.left.classes[c].members.front());
    cd.left_to_two_sided[c] = t;
    const AValue& a = cd.a_values[t];
    if (!a.exact()) continue;
    for (ElementId z : cd.left.classes[c].members) {
      if (g.inverse(z) != z || cd.delta.at(z) != a.lower) continue;
      if (cd.duflo_candidate[c] == kNoElement) cd.duflo_candidate[c] = z;
    }
  }
  return cd;
}

int CellData::left_class(Group& g, ElementId w) const {
  if (extended(group)) w = g.coxeter_part(w);
  return left.find(w);
}

int CellData::right_class(Group& g, ElementId w) const {
  if (extended(group)) w = g.rho_conjugate(g.coxeter_part(w), g.rho(w));
  return right.find(w);
}

int CellData::two_sided_class(Group& g, ElementId w) const {
  if (extended(group)) w = g.coxeter_part(w);
  return two_sided.find(w);
}

namespace {
std::vector<int> classes_meeting(const CellPartition& p, const Group& g, int radius) {
  std::vector<int> out;
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (g.length(p.classes[c].members.front()) <= radius) out.push_back(static_cast<int>(c));
  return out;
}
}  // namespace

std::vector<int> CellData::left_classes_in_ball(const Group& g) const { return classes_meeting(left, g, radius); }

std::vector<int> CellData::two_sided_classes_in_ball(const Group& g) const {
  return classes_meeting(two_sided, g, radius);
}

int a_value(Group& g, ElementId z, const CellData& cd) {
  const int c = cd.two_sided_class(g, z);
  if (c < 0) fail(ErrorCode::TruncationInsufficient, g.format(z) + " lies outside the computed ball");
  const AValue& a = cd.a_values[c];
  if (!a.exact())
    fail(ErrorCode::TruncationInsufficient, "a-value of " + g.format(z) + " only bounded: " + std::to_string(a.lower) +
                                                " <= a <= " + std::to_string(a.upper));
  return a.lower;
}

Coeff gamma(Hecke& hk, ElementId x, ElementId y, ElementId z, const CellData& cd) {
  Group& g = hk.group();
  const ElementId zi = g.inverse(z);
  const int a = a_value(g, zi, cd);
  return leading_gamma(hk.mult_kl(x, y).coeff(zi), a);
}

std::vector<DufloEntry> duflo_involutions(Hecke& hk, const CellData& cd) {
  Group& g = hk.group();
  std::vector<DufloEntry> out;
  for (int c : cd.left_classes_in_ball(g)) {
    DufloEntry e;
    e.left_class = c;
    const CellClass& cls = cd.left.classes[c];
    const AValue& a = cd.a_values[cd.left_to_two_sided[c]];
    if (!a.exact()) {
      e.note = "a-value not certified";
      out.push_back(std::move(e));
      continue;
    }
    std::vector<ElementId> candidates;
    for (ElementId z : cls.members)
      if (g.length(z) <= cd.radius && g.inverse(z) == z && cd.delta.at(z) == a.lower) candidates.push_back(z);
    if (candidates.size() != 1) {
      e.note = candidates.empty() ? "no involution with Delta = a inside the ball"
                                  : "several involutions with Delta = a inside the ball";
      out.push_back(std::move(e));
      continue;
    }
    const ElementId d = candidates.front();
    std::vector<ElementId> xs;
    for (ElementId x : cls.members)
      if (g.length(x) <= cd.radius) xs.push_back(x);
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (ElementId x : xs) pairs.emplace_back(g.inverse(x), x);
    std::vector<HeckeElt> prods = hk.mult_batch_parallel(pairs);
    bool ok = true;
    for (std::size_t i = 0; i < xs.size() && ok; ++i) {
      if (leading_gamma(prods[i].coeff(d), a.lower) != 1) {
        ok = false;
        e.note = "gamma_{x^-1,x,d} != 1 for x = " + g.format(xs[i]);
      }
    }
    if (ok) {
      e.duflo = d;
      e.tested = xs.size();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<std::size_t> GammaTable::index_of(ElementId id) const {
  auto it = std::find(elements.begin(), elements.end(), id);
  if (it == elements.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements.begin());
}

std::vector<ElementId> h_cell(Group& g, ElementId d, const CellData& cd) {
  const int c = cd.left_class(g, d);
  if (c < 0) fail(ErrorCode::TruncationInsufficient, g.format(d) + " lies outside the computed ball");
  std::vector<ElementId> out;
  for (ElementId x : cd.ball)
    if (cd.left_class(g, x) == c && cd.left_class(g, g.inverse(x)) == c) out.push_back(x);
  return out;
}

GammaTable jring_structure(Hecke& hk, const std::vector<ElementId>& h, const CellData& cd) {
  Group& g = hk.group();
  if (h.empty()) fail(ErrorCode::SizeMismatch, "empty H-cell");
  GammaTable t;
  t.elements = h;
  g.sort_canonical(t.elements);
  t.a = a_value(g, t.elements.front(), cd);
  const std::size_t n = t.elements.size();
  std::set<ElementId> members(t.elements.begin(), t.elements.end());
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (ElementId x : t.elements)
    for (ElementId y : t.elements) pairs.emplace_back(x, y);
  std::vector<HeckeElt> prods = hk.mult_batch_parallel(pairs);
  t.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      GammaEntry& e = t.entries[i * n + j];
      e.i = i;
      e.j = j;
      e.certified = true;
      for (const auto& [z, c] : prods[i * n + j].sorted(g)) {
        const Coeff gz = leading_gamma(c, t.a);
        if (members.count(z)) {
          if (gz != 0) e.terms.emplace_back(z, gz);
          continue;
        }
        if (gz == 0) continue;
        // A term outside the H-cell only matters when its a-value could equal a.
        const int cls = cd.two_sided_class(g, z);
        if (cls < 0 || g.length(z) > cd.radius || !cd.a_values[cls].exact() || cd.a_values[cls].lower == t.a)
          e.certified = false;
      }
    }
  }
  return t;
}

ProductTable collect_products(Hecke& hk, const CellData& cd, int bound, bool parallel) {
  Group& g = hk.group();
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (ElementId x : cd.ball)
    for (ElementId y : cd.ball)
      if (g.length(x) + g.length(y) <= bound) pairs.emplace_back(x, y);
  std::vector<HeckeElt> prods = parallel ? hk.mult_batch_parallel(pairs) : hk.mult_batch_serial(pairs);
  ProductTable table;
  for (std::size_t i = 0; i < pairs.size(); ++i) table.emplace(pairs[i], std::move(prods[i]));
  return table;
}

Report verify_positivity_properties(Hecke& hk, const CellData& cd, const ProductTable& table) {
  Group& g = hk.group();
  Report r;
  r.title = "positivity";
  for (const char* name : {"bar-invariance", "nonnegativity", "degree-bound", "inverse-symmetry", "gamma-cyclicity",
                           "duflo-orthogonality"})
    r.properties.push_back(PropertyResult{name, 0, {}});
  PropertyResult& bar = r.property("bar-invariance");
  PropertyResult& pos = r.property("nonnegativity");
  PropertyResult& deg = r.property("degree-bound");
  PropertyResult& inv = r.property("inverse-symmetry");
  PropertyResult& cyc = r.property("gamma-cyclicity");
  PropertyResult& p2 = r.property("duflo-orthogonality");

  std::set<ElementId> duflo;
  for (ElementId d : cd.duflo_candidate)
    if (d != kNoElement) duflo.insert(d);

  auto lookup = [&](ElementId x, ElementId y) -> HeckeElt {
    auto it = table.find({x, y});
    return it != table.end() ? it->second : hk.mult_kl(x, y);
  };
  auto exact_a = [&](ElementId z) -> std::optional<int> {
    const int c = cd.two_sided_class(g, z);
    if (c < 0 || !cd.a_values[c].exact()) return std::nullopt;
    return cd.a_values[c].lower;
  };

  for (const auto& [key, prod] : table) {
    const auto [x, y] = key;
    const ElementId xi = g.inverse(x), yi = g.inverse(y);
    auto mirror = table.find({yi, xi});
    for (const auto& [z, c] : prod.terms()) {
      const std::string where = triple_text(g, x, y, z);
      ++bar.instances;
      if (!c.is_bar_invariant()) bar.failures.push_back({where, c.to_string(), c.bar().to_string()});
      ++pos.instances;
      if (!c.all_nonnegative()) pos.failures.push_back({where, c.to_string(), "nonnegative coefficients"});
      if (mirror != table.end()) {
        ++inv.instances;
        const LaurentPoly other = mirror->second.coeff(g.inverse(z));
        if (other != c) inv.failures.push_back({where, c.to_string(), other.to_string()});
      }
      const auto az = exact_a(z);
      if (!az) continue;
      ++deg.instances;
      if (*c.min_degree() < -*az)
        deg.failures.push_back({where, "min degree " + std::to_string(*c.min_degree()), ">= " + std::to_string(-*az)});

      const Coeff gxyw = leading_gamma(c, *az);  // gamma_{x,y,w} with w = z^-1
      if (duflo.count(z)) {
        ++p2.instances;
        if (gxyw != 0 && (x != yi || gxyw != 1))
          p2.failures.push_back({where, "gamma = " + std::to_string(gxyw), x != yi ? "0 unless x = y^-1" : "1"});
      }
      if (gxyw == 0) continue;
      const ElementId w = g.inverse(z);
      const auto ax = exact_a(xi);
      const auto ay = exact_a(yi);
      if (!ax || !ay) continue;
      ++cyc.instances;
      const Coeff gywx = leading_gamma(lookup(y, w).coeff(xi), *ax);
      const Coeff gwxy = leading_gamma(lookup(w, x).coeff(yi), *ay);
      if (gywx != gxyw || gwxy != gxyw)
        cyc.failures.push_back({where, std::to_string(gxyw),
                                std::to_string(gywx) + " and " + std::to_string(gwxy)});
    }
  }
  return r;
}

Report verify_gammacan(Hecke& hk, const std::vector<int>& subset, const CellData& cd) {
  Group& g = hk.group();
  if (!parabolic_is_finite(cd.group, subset)) fail(ErrorCode::InfiniteParabolic, "parabolic subgroup is infinite");
  const ElementId wi = g.intern(longest_parabolic(cd.group, subset));
  const LaurentPoly pi = pi_I(cd.group, subset);
  const std::vector<ElementId> h = h_cell(g, wi, cd);
  const int a = a_value(g, wi, cd);
  Report r;
  r.title = "gammacan";
  PropertyResult& p = r.property("h = pi(I) gamma");
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (ElementId x : h)
    for (ElementId y : h) pairs.emplace_back(x, y);
  std::vector<HeckeElt> prods = hk.mult_batch_parallel(pairs);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (ElementId z : h) {
      ++p.instances;
      const LaurentPoly c = prods[k].coeff(z);
      const LaurentPoly expect = pi * leading_gamma(c, a);
      if (c != expect)
        p.failures.push_back({triple_text(g, pairs[k].first, pairs[k].second, z), c.to_string(), expect.to_string()});
    }
  }
  return r;
}

}  // namespace cellkit
