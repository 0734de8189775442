#include "cellkit/typea.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "cellkit/cells.hpp"
#include "cellkit/error.hpp"

namespace cellkit {

void validate_partition(const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1) fail(ErrorCode::ShapeMismatch, "partition parts must be positive");
    if (i > 0 && p[i] > p[i - 1]) fail(ErrorCode::ShapeMismatch, "partition parts must be weakly decreasing");
  }
}

int partition_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int left, int cap) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(left, cap); part >= 1; --part) {
      cur.push_back(part);
      self(self, left - part, part);
      cur.pop_back();
    }
  };
  if (n >= 0) rec(rec, n, n);
  return out;
}

Partition dual_partition(const Partition& p) {
  validate_partition(p);
  Partition out;
  for (int col = 1; !p.empty() && col <= p.front(); ++col) {
    int len = 0;
    for (int part : p)
      if (part >= col) ++len;
    out.push_back(len);
  }
  return out;
}

namespace {
std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}
}  // namespace

std::uint64_t n_lambda(const Partition& lambda, int n) {
  validate_partition(lambda);
  if (partition_size(lambda) != n)
    fail(ErrorCode::SizeMismatch, "partition " + format_partition(lambda) + " does not have size " + std::to_string(n));
  if (n > 20) fail(ErrorCode::Overflow, "n! exceeds 64 bits");
  std::uint64_t r = factorial(n);
  for (int m : dual_partition(lambda)) r /= factorial(m);
  return r;
}

std::uint64_t syt_count(const Partition& p) {
  validate_partition(p);
  const int n = partition_size(p);
  if (n > 20) fail(ErrorCode::Overflow, "n! exceeds 64 bits");
  const Partition d = dual_partition(p);
  std::uint64_t hooks = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int j = 0; j < p[i]; ++j) hooks *= static_cast<std::uint64_t>(p[i] - j + d[j] - static_cast<int>(i) - 1);
  return factorial(n) / hooks;
}

std::string format_partition(const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

Partition parse_partition(const std::string& text) {
  Partition p;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      p.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad partition text '" + text + "'");
    }
  }
  if (p.empty()) fail(ErrorCode::ParseError, "empty partition");
  try {
    validate_partition(p);
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return p;
}

ParabolicData parabolic_data(const Partition& lambda, const GroupDescriptor& g) {
  validate_partition(lambda);
  if (g.family == Family::Universal) fail(ErrorCode::UnsupportedFamily, "parabolic data needs a type A family");
  if (partition_size(lambda) != g.n)
    fail(ErrorCode::SizeMismatch, "partition " + format_partition(lambda) + " does not have size " + std::to_string(g.n));
  ParabolicData d;
  std::set<int> boundaries;
  int acc = 0;
  for (int part : lambda) boundaries.insert(acc += part);
  for (int i = 1; i < g.n; ++i)
    if (!boundaries.count(i)) d.subset.push_back(i);
  d.longest = longest_parabolic(g, d.subset);
  for (int part : lambda) d.a += part * (part - 1) / 2;
  return d;
}

LaurentPoly pi_I(const GroupDescriptor& g, const std::vector<int>& subset) {
  for (int s : subset)
    if (!is_generator(g, s)) fail(ErrorCode::IndexOutOfRange, "generator " + std::to_string(s) + " not in the group");
  if (!parabolic_is_finite(g, subset)) fail(ErrorCode::InfiniteParabolic, "parabolic subgroup is infinite");
  // Breadth-first enumeration of W_I by length.
  std::set<Element> seen{identity(g)};
  std::vector<Element> layer{identity(g)};
  std::vector<std::size_t> counts;
  while (!layer.empty()) {
    counts.push_back(layer.size());
    std::vector<Element> next;
    for (const Element& w : layer)
      for (int s : subset) {
        Element sw = left_mul_gen(g, s, w);
        if (length(g, sw) == static_cast<int>(counts.size()) && seen.insert(sw).second) next.push_back(std::move(sw));
      }
    layer = std::move(next);
  }
  const int top = static_cast<int>(counts.size()) - 1;
  std::vector<std::pair<int, Coeff>> pairs;
  for (int k = 0; k <= top; ++k) pairs.emplace_back(top - 2 * k, static_cast<Coeff>(counts[k]));
  return LaurentPoly::from_pairs(pairs);
}

int two_sided_class_of(Group& g, const Partition& lambda, const CellData& cd) {
  const ParabolicData d = parabolic_data(lambda, g.descriptor());
  return cd.two_sided_class(g, g.intern(d.longest));
}

bool canonical_cell_member(Group& g, ElementId w, const Partition& lambda, const CellData& cd) {
  if (!is_affine(g.descriptor())) fail(ErrorCode::UnsupportedFamily, "canonical left cells need an affine family");
  const int target = two_sided_class_of(g, lambda, cd);
  const int c = cd.two_sided_class(g, w);
  if (target < 0 || c < 0) fail(ErrorCode::TruncationInsufficient, "element or w_lambda outside the computed ball");
  const std::uint64_t allowed = std::uint64_t{1} << g.slot(0);
  return (g.right_descents(w) & ~allowed) == 0 && c == target;
}

Partition RSKResult::shape() const {
  Partition p;
  for (const auto& row : insertion) p.push_back(static_cast<int>(row.size()));
  return p;
}

RSKResult rsk(const std::vector<int>& word) {
  RSKResult r;
  for (std::size_t pos = 0; pos < word.size(); ++pos) {
    int x = word[pos];
    std::size_t row = 0;
    for (;; ++row) {
      if (row == r.insertion.size()) {
        r.insertion.push_back({x});
        r.recording.push_back({static_cast<int>(pos) + 1});
        break;
      }
      auto& cur = r.insertion[row];
      auto it = std::upper_bound(cur.begin(), cur.end(), x);
      if (it == cur.end()) {
        cur.push_back(x);
        r.recording[row].push_back(static_cast<int>(pos) + 1);
        break;
      }
      std::swap(x, *it);
    }
  }
  return r;
}

std::uint64_t lr_coeff(const Partition& mu, const Partition& nu, const Partition& lambda) {
  validate_partition(mu);
  validate_partition(nu);
  validate_partition(lambda);
  if (partition_size(lambda) != partition_size(mu) + partition_size(nu)) return 0;
  if (mu.size() > lambda.size()) return 0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > lambda[i]) return 0;
  auto mu_at = [&](std::size_t r) { return r < mu.size() ? mu[r] : 0; };

  // Cells of lambda/mu in reading order: rows top to bottom, right to left.
  std::vector<std::pair<std::size_t, int>> cells;
  for (std::size_t r = 0; r < lambda.size(); ++r)
    for (int c = lambda[r] - 1; c >= mu_at(r); --c) cells.emplace_back(r, c);
  std::vector<std::vector<int>> fill(lambda.size());
  for (std::size_t r = 0; r < lambda.size(); ++r) fill[r].assign(static_cast<std::size_t>(lambda[r]), 0);
  std::vector<int> used(nu.size() + 1, 0);
  std::uint64_t count = 0;

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == cells.size()) {
      ++count;
      return;
    }
    const auto [r, c] = cells[k];
    const std::size_t cu = static_cast<std::size_t>(c);
    int hi = static_cast<int>(nu.size());
    if (cu + 1 < fill[r].size() && cu + 1 < static_cast<std::size_t>(lambda[r])) hi = std::min(hi, fill[r][cu + 1]);
    int lo = 1;
    if (r > 0 && c >= mu_at(r - 1)) lo = fill[r - 1][cu] + 1;
    for (int v = lo; v <= hi; ++v) {
      if (used[v] >= nu[v - 1]) continue;
      if (v > 1 && used[v] + 1 > used[v - 1]) continue;
      fill[r][cu] = v;
      ++used[v];
      self(self, k + 1);
      --used[v];
      fill[r][cu] = 0;
    }
  };
  rec(rec, 0);
  return count;
}

std::string format_weight(const Weight& w) {
  std::string out;
  for (std::size_t f = 0; f < w.size(); ++f) {
    if (f) out += '|';
    out += '(';
    for (std::size_t i = 0; i < w[f].size(); ++i) {
      if (i) out += ',';
      out += std::to_string(w[f][i]);
    }
    out += ')';
  }
  return out;
}

Weight trivial_weight(const LeviDescriptor& f) {
  Weight w;
  for (int m : f) w.emplace_back(static_cast<std::size_t>(m), 0);
  return w;
}

void validate_weight(const LeviDescriptor& f, const Weight& w) {
  if (w.size() != f.size()) fail(ErrorCode::ShapeMismatch, "weight has the wrong number of factors");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 1) fail(ErrorCode::ShapeMismatch, "Levi multiplicities must be positive");
    if (w[i].size() != static_cast<std::size_t>(f[i]))
      fail(ErrorCode::ShapeMismatch, "weight factor " + std::to_string(i) + " has the wrong length");
    for (std::size_t j = 1; j < w[i].size(); ++j)
      if (w[i][j] > w[i][j - 1]) fail(ErrorCode::ShapeMismatch, "weight factor is not dominant");
  }
}

namespace {

// GL(m) tensor product of two dominant weights.
std::map<std::vector<int>, std::uint64_t> gl_tensor(const std::vector<int>& x, const std::vector<int>& y) {
  const int m = static_cast<int>(x.size());
  const int cx = std::max(0, -x.back());
  const int cy = std::max(0, -y.back());
  auto to_partition = [](const std::vector<int>& w, int shift) {
    Partition p;
    for (int e : w)
      if (e + shift > 0) p.push_back(e + shift);
    return p;
  };
  const Partition px = to_partition(x, cx), py = to_partition(y, cy);
  std::map<std::vector<int>, std::uint64_t> out;
  for (const Partition& lam : partitions_of(partition_size(px) + partition_size(py))) {
    if (static_cast<int>(lam.size()) > m) continue;
    const std::uint64_t c = lr_coeff(px, py, lam);
    if (!c) continue;
    std::vector<int> w(static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < lam.size(); ++i) w[i] = lam[i];
    for (int& e : w) e -= cx + cy;
    out[w] += c;
  }
  return out;
}

}  // namespace

std::map<Weight, std::uint64_t> fusion_tensor(const LeviDescriptor& f, const Weight& x, const Weight& y) {
  validate_weight(f, x);
  validate_weight(f, y);
  std::map<Weight, std::uint64_t> acc{{Weight{}, 1}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::map<Weight, std::uint64_t> next;
    const auto factor = gl_tensor(x[i], y[i]);
    for (const auto& [partial, c] : acc)
      for (const auto& [w, d] : factor) {
        Weight extended = partial;
        extended.push_back(w);
        next[extended] += c * d;
      }
    acc = std::move(next);
  }
  return acc;
}

std::uint64_t weight_dimension(const Weight& w) {
  std::uint64_t dim = 1;
  for (const auto& factor : w) {
    // Weyl dimension formula; the quotient of the two products is exact.
    std::uint64_t num = 1, den = 1;
    const std::size_t m = factor.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        num *= static_cast<std::uint64_t>(factor[i] - factor[j] + static_cast<int>(j - i));
        den *= static_cast<std::uint64_t>(j - i);
      }
    dim *= num / den;
  }
  return dim;
}

LeviDescriptor levi_of(const Partition& lambda) {
  const Partition mu = dual_partition(lambda);
  LeviDescriptor f;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (i == 0 || mu[i] != mu[i - 1])
      f.push_back(1);
    else
      ++f.back();
  }
  return f;
}

namespace {

std::vector<Weight> dominant_weights(const LeviDescriptor& f, int bound) {
  std::vector<Weight> out{Weight{}};
  for (int m : f) {
    std::vector<std::vector<int>> factor;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int cap) -> void {
      if (static_cast<int>(cur.size()) == m) {
        factor.push_back(cur);
        return;
      }
      for (int e = cap; e >= -bound; --e) {
        cur.push_back(e);
        self(self, e);
        cur.pop_back();
      }
    };
    rec(rec, bound);
    std::vector<Weight> next;
    for (const Weight& partial : out)
      for (const auto& fw : factor) {
        Weight w = partial;
        w.push_back(fw);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  // Smallest weights first, so truncated tables prefer the minimal match.
  auto size = [](const Weight& w) {
    int t = 0;
    for (const auto& part : w)
      for (int e : part) t += std::abs(e);
    return t;
  };
  std::stable_sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) { return size(a) < size(b); });
  return out;
}

}  // namespace

std::optional<FusionMatch> fusion_match(const GammaTable& table, const LeviDescriptor& f, int bound) {
  const std::size_t n = table.elements.size();
  std::vector<std::pair<std::size_t, std::size_t>> certified;
  for (const GammaEntry& e : table.entries)
    if (e.certified) certified.emplace_back(e.i, e.j);
  if (certified.empty()) fail(ErrorCode::TruncationInsufficient, "no certified rows in the gamma table");

  // The unit: t_u t_x = t_x on every certified entry of its row and column.
  std::optional<std::size_t> unit;
  for (std::size_t u = 0; u < n && !unit; ++u) {
    bool ok = true, any = false;
    for (std::size_t x = 0; x < n && ok; ++x)
      for (const GammaEntry* e : {&table.at(u, x), &table.at(x, u)}) {
        if (!e->certified) continue;
        any = true;
        if (e->terms.size() != 1 || e->terms[0].first != table.elements[x] || e->terms[0].second != 1) ok = false;
      }
    if (ok && any) unit = u;
  }
  if (!unit) return std::nullopt;

  std::map<ElementId, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[table.elements[i]] = i;
  std::vector<std::vector<std::size_t>> involving(n);
  for (std::size_t k = 0; k < certified.size(); ++k) {
    involving[certified[k].first].push_back(k);
    if (certified[k].second != certified[k].first) involving[certified[k].second].push_back(k);
  }
  // Elements with the most certified entries are placed first.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (i != *unit) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return involving[a].size() > involving[b].size(); });
  order.insert(order.begin(), *unit);

  const std::vector<Weight> pool = dominant_weights(f, bound);
  std::map<std::pair<std::size_t, std::size_t>, std::map<Weight, std::uint64_t>> memo;
  auto tensor = [&](std::size_t a, std::size_t b) -> const std::map<Weight, std::uint64_t>& {
    auto it = memo.find({a, b});
    if (it == memo.end()) it = memo.emplace(std::make_pair(a, b), fusion_tensor(f, pool[a], pool[b])).first;
    return it->second;
  };

  std::vector<long> assigned(n, -1);
  std::map<Weight, std::size_t> image;  // weight -> element
  // An entry is consistent when its certified terms agree with the tensor
  // product on every weight already in the image and the totals agree.
  auto consistent = [&](std::size_t k) {
    const auto [i, j] = certified[k];
    if (assigned[i] < 0 || assigned[j] < 0) return true;
    const auto& prod = tensor(static_cast<std::size_t>(assigned[i]), static_cast<std::size_t>(assigned[j]));
    const GammaEntry& e = table.at(i, j);
    std::uint64_t total_terms = 0, total_prod = 0;
    for (const auto& [z, c] : e.terms) {
      total_terms += static_cast<std::uint64_t>(c);
      const long wz = assigned[pos.at(z)];
      if (wz < 0) continue;
      auto it = prod.find(pool[static_cast<std::size_t>(wz)]);
      if (it == prod.end() || it->second != static_cast<std::uint64_t>(c)) return false;
    }
    for (const auto& [w, c] : prod) {
      total_prod += c;
      auto im = image.find(w);
      if (im == image.end()) continue;
      const ElementId z = table.elements[im->second];
      auto t = std::find_if(e.terms.begin(), e.terms.end(), [&](const auto& p) { return p.first == z; });
      if (t == e.terms.end()) return false;
    }
    return total_terms == total_prod;
  };

  const std::size_t trivial =
      static_cast<std::size_t>(std::find(pool.begin(), pool.end(), trivial_weight(f)) - pool.begin());
  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    const std::size_t e = order[depth];
    for (std::size_t w = 0; w < pool.size(); ++w) {
      if (depth == 0 && w != trivial) continue;
      if (image.count(pool[w])) continue;
      assigned[e] = static_cast<long>(w);
      image.emplace(pool[w], e);
      bool ok = true;
      for (std::size_t k : involving[e])
        if (!consistent(k)) {
          ok = false;
          break;
        }
      // Earlier entries may now see e in their products.
      if (ok)
        for (std::size_t d = 0; d < depth && ok; ++d)
          for (std::size_t k : involving[order[d]])
            if (!consistent(k)) {
              ok = false;
              break;
            }
      if (ok && self(self, depth + 1)) return true;
      image.erase(pool[w]);
      assigned[e] = -1;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;

  FusionMatch m;
  m.certified_entries = certified.size();
  for (std::size_t i = 0; i < n; ++i)
    m.assignment.emplace_back(table.elements[i], pool[static_cast<std::size_t>(assigned[i])]);
  return m;
}

std::vector<std::int64_t> schur_multiplier_torus(int torus_rank, const std::vector<std::int64_t>& ds) {
  if (torus_rank < 0) fail(ErrorCode::IndexOutOfRange, "negative torus rank");
  for (std::int64_t d : ds)
    if (d < 2) fail(ErrorCode::IndexOutOfRange, "cyclic factor orders must be at least 2");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const std::int64_t g = std::gcd(ds[i], ds[j]);
      if (g != 1) out.push_back(g);
    }
  return out;
}

}  // namespace cellkit
