#include "cellkit/demazure.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "cellkit/error.hpp"
#include "cellkit/typea.hpp"

namespace cellkit {

// ---------------------------------------------------------------------------
// MultiPoly

namespace {

void check_strands(int n) {
  if (n < 1 || n > MultiPoly::kMaxStrands)
    fail(ErrorCode::IndexOutOfRange, "number of strands must be in 1.." + std::to_string(MultiPoly::kMaxStrands));
}

void check_same_ring(const MultiPoly& a, const MultiPoly& b) {
  if (a.n() != b.n()) fail(ErrorCode::SizeMismatch, "polynomials over different rings");
}

MultiPoly::Key add_keys(MultiPoly::Key a, MultiPoly::Key b) {
  MultiPoly::Key out = 0;
  for (int v = 0; v < 8; ++v) {
    const int e = MultiPoly::exponent(a, v) + MultiPoly::exponent(b, v);
    if (e > 255) fail(ErrorCode::Overflow, "exponent above 255");
    out = MultiPoly::with_exponent(out, v, e);
  }
  return out;
}

}  // namespace

MultiPoly::Key MultiPoly::with_exponent(Key key, int var, int e) {
  const int shift = 8 * (7 - var);
  return (key & ~(Key{0xff} << shift)) | (static_cast<Key>(e) << shift);
}

int MultiPoly::key_degree(Key key) {
  int d = 0;
  for (int v = 0; v < 8; ++v) d += exponent(key, v);
  return d;
}

MultiPoly MultiPoly::constant(int n, const mpq_class& c) { return monomial(n, 0, c); }

MultiPoly MultiPoly::var(int n, int index) {
  check_strands(n);
  if (index < 0 || index > n) fail(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(index));
  return monomial(n, with_exponent(0, index, 1));
}

MultiPoly MultiPoly::monomial(int n, Key key, const mpq_class& c) {
  MultiPoly p(n);
  p.add_term(key, c);
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, key_degree(k));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  const int d = degree();
  return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return key_degree(t.first) == d; });
}

mpq_class MultiPoly::coeff(Key key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

void MultiPoly::add_term(Key key, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_same_ring(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_same_ring(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const mpq_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  MultiPoly out(a.n());
  if (a.terms_.size() == 1 && a.terms_.begin()->first == 0) return b * a.terms_.begin()->second;
  if (b.terms_.size() == 1 && b.terms_.begin()->first == 0) return a * b.terms_.begin()->second;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) out.add_term(add_keys(ka, kb), ca * cb);
  return out;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
  if (static_cast<int>(images.size()) != n_ + 1) fail(ErrorCode::SizeMismatch, "substitution needs n+1 images");
  std::vector<std::vector<MultiPoly>> powers(images.size());
  auto power = [&](int v, int e) -> const MultiPoly& {
    auto& cache = powers[static_cast<std::size_t>(v)];
    if (cache.empty()) cache.push_back(constant(n_, 1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[static_cast<std::size_t>(v)]);
    return cache[static_cast<std::size_t>(e)];
  };
  MultiPoly out(n_);
  for (const auto& [k, c] : terms_) {
    MultiPoly t = constant(n_, c);
    for (int v = 0; v <= n_; ++v) {
      const int e = exponent(k, v);
      if (e > 0) t = t * power(v, e);
    }
    out += t;
  }
  return out;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, c] = *it;
    const bool negative = c < 0;
    const mpq_class a = abs(c);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    std::vector<std::string> factors;
    for (int v = 0; v <= n_; ++v) {
      const int e = exponent(k, v);
      if (e == 0) continue;
      std::string f = v == 0 ? "y" : "x" + std::to_string(v);
      if (e > 1) f += "^" + std::to_string(e);
      factors.push_back(f);
    }
    if (factors.empty()) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

MultiPoly MultiPoly::parse(int n, std::string_view text) {
  check_strands(n);
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) fail(ErrorCode::ParseError, "empty polynomial");
  std::size_t pos = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::ParseError, "polynomial '" + std::string(text) + "': " + why);
  };
  auto number = [&]() {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) bad("expected a number");
    return std::stoi(s.substr(start, pos - start));
  };
  MultiPoly out(n);
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      bad("expected + or -");
    }
    mpq_class c = sign;
    Key key = 0;
    bool any = false;
    for (;;) {
      if (pos >= s.size()) bad("dangling operator");
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
        const std::string tok = s.substr(start, pos - start);
        const std::size_t slash = tok.find('/');
        mpz_class num, den = 1;
        if (num.set_str(tok.substr(0, slash), 10) != 0) bad("bad coefficient");
        if (slash != std::string::npos && (den.set_str(tok.substr(slash + 1), 10) != 0 || den == 0))
          bad("bad coefficient");
        mpq_class q(num, den);
        q.canonicalize();
        c *= q;
      } else if (s[pos] == 'y' || s[pos] == 'x') {
        int v = 0;
        if (s[pos++] == 'x') {
          v = number();
          if (v < 1 || v > n) fail(ErrorCode::IndexOutOfRange, "variable x" + std::to_string(v));
        }
        int e = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          e = number();
          if (e > 255) bad("exponent above 255");
        }
        key = add_keys(key, with_exponent(0, v, e));
      } else {
        bad("unexpected character");
      }
      any = true;
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any) bad("empty term");
    out.add_term(key, c);
  }
  return out;
}

std::vector<MultiPoly::Key> monomials_of_degree(int n, int d) {
  std::vector<MultiPoly::Key> out;
  MultiPoly::Key cur = 0;
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == n) {
      out.push_back(MultiPoly::with_exponent(cur, v, left));
      return;
    }
    for (int e = left; e >= 0; --e) {
      const MultiPoly::Key saved = cur;
      cur = MultiPoly::with_exponent(cur, v, e);
      rec(v + 1, left - e);
      cur = saved;
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Group action and divided differences

namespace {

MultiPoly swap_vars(const MultiPoly& p, int a, int b) {
  MultiPoly out(p.n());
  for (const auto& [k, c] : p.terms()) {
    const int ea = MultiPoly::exponent(k, a), eb = MultiPoly::exponent(k, b);
    out.add_term(MultiPoly::with_exponent(MultiPoly::with_exponent(k, a, eb), b, ea), c);
  }
  return out;
}

std::vector<MultiPoly> identity_images(int n) {
  std::vector<MultiPoly> im;
  for (int v = 0; v <= n; ++v) im.push_back(MultiPoly::var(n, v));
  return im;
}

// x_j for any integer j, with x_{j+n} = x_j + y.
MultiPoly shifted_var(int n, int j) {
  const int q = (j - 1 >= 0) ? (j - 1) / n : -((n - j) / n);
  const int idx = j - q * n;
  return MultiPoly::var(n, idx) + MultiPoly::y(n) * mpq_class(q);
}

}  // namespace

MultiPoly act_generator(int label, const MultiPoly& p) {
  const int n = p.n();
  if (label < 0 || label >= n || (label == 0 && n < 2))
    fail(ErrorCode::IndexOutOfRange, "generator s_" + std::to_string(label) + " for n = " + std::to_string(n));
  if (label > 0) return swap_vars(p, label, label + 1);
  std::vector<MultiPoly> im = identity_images(n);
  im[1] = MultiPoly::x(n, n) - MultiPoly::y(n);
  im[static_cast<std::size_t>(n)] = MultiPoly::x(n, 1) + MultiPoly::y(n);
  return p.substitute(im);
}

MultiPoly act_rho(int k, const MultiPoly& p) {
  if (k == 0) return p;
  const int n = p.n();
  std::vector<MultiPoly> im = identity_images(n);
  for (int i = 1; i <= n; ++i) im[static_cast<std::size_t>(i)] = shifted_var(n, i + k);
  return p.substitute(im);
}

MultiPoly act(const GroupDescriptor& g, const Element& w, const MultiPoly& p) {
  if (g.family == Family::Universal) fail(ErrorCode::UnsupportedFamily, "no polynomial action for universal groups");
  if (g.n != p.n()) fail(ErrorCode::SizeMismatch, "group and polynomial ring have different n");
  const Word rex = reduced_word(g, w);
  MultiPoly out = p;
  for (auto it = rex.letters.rbegin(); it != rex.letters.rend(); ++it) out = act_generator(*it, out);
  return act_rho(rex.rho, out);
}

MultiPoly simple_root(int n, int label) {
  if (label < 0 || label >= n || (label == 0 && n < 2))
    fail(ErrorCode::IndexOutOfRange, "generator s_" + std::to_string(label) + " for n = " + std::to_string(n));
  if (label > 0) return MultiPoly::x(n, label) - MultiPoly::x(n, label + 1);
  return MultiPoly::x(n, n) - MultiPoly::x(n, 1) - MultiPoly::y(n);
}

MultiPoly divide_exact(const MultiPoly& p, const MultiPoly& a) {
  check_same_ring(p, a);
  if (a.is_zero()) fail(ErrorCode::DivisionFailure, "division by zero");
  const auto [lead_key, lead_coeff] = *a.terms().rbegin();
  MultiPoly rem = p, q(p.n());
  while (!rem.is_zero()) {
    const auto [k, c] = *rem.terms().rbegin();
    MultiPoly::Key t = 0;
    for (int v = 0; v < 8; ++v) {
      const int e = MultiPoly::exponent(k, v) - MultiPoly::exponent(lead_key, v);
      if (e < 0) fail(ErrorCode::DivisionFailure, "(" + a.str() + ") does not divide (" + p.str() + ")");
      t = MultiPoly::with_exponent(t, v, e);
    }
    const MultiPoly step = MultiPoly::monomial(p.n(), t, c / lead_coeff);
    q += step;
    rem -= step * a;
  }
  return q;
}

MultiPoly demazure_s(int label, const MultiPoly& p) {
  const MultiPoly num = p - act_generator(label, p);
  if (num.is_zero()) return MultiPoly(p.n());
  return divide_exact(num, simple_root(p.n(), label));
}

MultiPoly demazure_word(const std::vector<int>& letters, const MultiPoly& p) {
  MultiPoly out = p;
  for (auto it = letters.rbegin(); it != letters.rend() && !out.is_zero(); ++it) out = demazure_s(*it, out);
  return out;
}

MultiPoly demazure_w(const GroupDescriptor& g, const Element& w, const MultiPoly& p) {
  if (g.family == Family::Universal) fail(ErrorCode::UnsupportedFamily, "no polynomial action for universal groups");
  if (g.n != p.n()) fail(ErrorCode::SizeMismatch, "group and polynomial ring have different n");
  const Word rex = reduced_word(g, w);
  return act_rho(rex.rho, demazure_word(rex.letters, p));
}

// ---------------------------------------------------------------------------
// Dual bases

namespace {

struct Component {
  int start = 0;  // first generator label
  int size = 0;   // number of generators
};

std::vector<Component> components(const std::vector<int>& subset, int n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int s : subset) {
    if (s < 0 || s >= n || (s == 0 && n < 2)) fail(ErrorCode::IndexOutOfRange, "generator s_" + std::to_string(s));
    in[static_cast<std::size_t>(s)] = 1;
  }
  if (n >= 2 && std::all_of(in.begin(), in.end(), [](char c) { return c; }))
    fail(ErrorCode::InfiniteParabolic, "all affine generators give an infinite parabolic");
  std::vector<Component> out;
  for (int j = 0; j < n; ++j) {
    if (!in[static_cast<std::size_t>(j)] || in[static_cast<std::size_t>((j + n - 1) % n)]) continue;
    Component c{j, 0};
    while (in[static_cast<std::size_t>((j + c.size) % n)]) ++c.size;
    out.push_back(c);
  }
  return out;
}

// Position p of the affine line, as a polynomial: x_0 = x_n - y.
MultiPoly position_var(int n, int p) { return shifted_var(n, p); }

struct SparseRow {
  std::map<int, mpq_class> coeffs;  // column -> value
  std::vector<mpq_class> rhs;
};

}  // namespace

MultiPoly trace(const DualBases& db, const MultiPoly& p) { return demazure_word(db.longest_word, p); }

DualBases dual_bases(const std::vector<int>& subset_in, int n, BasisChoice choice) {
  check_strands(n);
  std::vector<int> subset = subset_in;
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  const std::vector<Component> comps = components(subset, n);

  std::size_t order = 1;
  for (const Component& c : comps)
    for (int k = 2; k <= c.size + 1; ++k) order *= static_cast<std::size_t>(k);
  if (order > kMaxParabolicOrder)
    fail(ErrorCode::ResourceLimit, "|W_I| = " + std::to_string(order) + " exceeds " + std::to_string(kMaxParabolicOrder));

  DualBases db;
  db.n = n;
  db.subset = subset;
  if (!subset.empty()) {
    const GroupDescriptor aff{Family::AffineA, n};
    db.longest_word = reduced_word(aff, longest_parabolic(aff, subset)).letters;
  }
  const int ell = static_cast<int>(db.longest_word.size());

  // Exponent tuples, component by component.
  std::vector<std::vector<int>> tuples{{}};
  std::vector<MultiPoly> coords;
  for (const Component& c : comps) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tuples) {
      std::vector<int> cur = t;
      std::function<void(int)> rec = [&](int k) {
        if (k > c.size) {
          next.push_back(cur);
          return;
        }
        const int cap = choice == BasisChoice::Artin ? c.size - k : k;
        for (int e = cap; e >= 0; --e) {
          cur.push_back(e);
          rec(k + 1);
          cur.pop_back();
        }
      };
      rec(0);
    }
    tuples = std::move(next);
    for (int k = 0; k <= c.size; ++k) coords.push_back(position_var(n, c.start + k));
  }
  auto total = [](const std::vector<int>& t) {
    int s = 0;
    for (int e : t) s += e;
    return s;
  };
  std::stable_sort(tuples.begin(), tuples.end(), [&](const auto& a, const auto& b) { return total(a) > total(b); });
  for (const auto& t : tuples) {
    MultiPoly f = MultiPoly::constant(n, 1);
    for (std::size_t k = 0; k < t.size(); ++k)
      for (int e = 0; e < t[k]; ++e) f = f * coords[k];
    db.basis.push_back(std::move(f));
  }
  const std::size_t r = db.basis.size();

  // Solve d_I(f_i f^j) = delta_ij for each degree class of j. Within a class
  // the unknowns are the coefficients of f^j on monomials of degree ell - d_j.
  db.dual.assign(r, MultiPoly(n));
  std::map<int, std::vector<std::size_t>> by_degree;
  for (std::size_t j = 0; j < r; ++j) by_degree[ell - db.basis[j].degree()].push_back(j);
  for (const auto& [deg, js] : by_degree) {
    const std::vector<MultiPoly::Key> cols = monomials_of_degree(n, deg);
    std::map<std::pair<std::size_t, MultiPoly::Key>, SparseRow> rows;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const MultiPoly t = trace(db, db.basis[i] * MultiPoly::monomial(n, cols[c]));
        for (const auto& [k, v] : t.terms()) {
          SparseRow& row = rows[{i, k}];
          row.coeffs[static_cast<int>(c)] = v;
        }
      }
      for (std::size_t q = 0; q < js.size(); ++q)
        if (js[q] == i) rows[{i, 0}];
    }
    // Right-hand sides.
    std::vector<SparseRow> system;
    for (auto& [key, row] : rows) {
      row.rhs.assign(js.size(), 0);
      for (std::size_t q = 0; q < js.size(); ++q)
        if (js[q] == key.first && key.second == 0) row.rhs[q] = 1;
      system.push_back(std::move(row));
    }
    // Incremental elimination into a reduced row echelon form.
    std::map<int, SparseRow> pivots;
    std::size_t inconsistent = 0;
    for (SparseRow& row : system) {
      for (auto& [pc, prow] : pivots) {
        auto it = row.coeffs.find(pc);
        if (it == row.coeffs.end()) continue;
        const mpq_class f = it->second;
        for (const auto& [c, v] : prow.coeffs) {
          mpq_class& e = row.coeffs[c];
          e -= f * v;
        }
        for (std::size_t q = 0; q < row.rhs.size(); ++q) row.rhs[q] -= f * prow.rhs[q];
        for (auto e = row.coeffs.begin(); e != row.coeffs.end();) e = e->second == 0 ? row.coeffs.erase(e) : std::next(e);
      }
      if (row.coeffs.empty()) {
        if (std::any_of(row.rhs.begin(), row.rhs.end(), [](const mpq_class& v) { return v != 0; })) ++inconsistent;
        continue;
      }
      const int pc = row.coeffs.begin()->first;
      const mpq_class lead = row.coeffs.begin()->second;
      for (auto& [c, v] : row.coeffs) v /= lead;
      for (auto& v : row.rhs) v /= lead;
      for (auto& [oc, orow] : pivots) {
        auto it = orow.coeffs.find(pc);
        if (it == orow.coeffs.end()) continue;
        const mpq_class f = it->second;
        for (const auto& [c, v] : row.coeffs) orow.coeffs[c] -= f * v;
        for (std::size_t q = 0; q < orow.rhs.size(); ++q) orow.rhs[q] -= f * row.rhs[q];
        for (auto e = orow.coeffs.begin(); e != orow.coeffs.end();) e = e->second == 0 ? orow.coeffs.erase(e) : std::next(e);
      }
      pivots.emplace(pc, std::move(row));
    }
    if (inconsistent > 0)
      fail(ErrorCode::SolveFailure, "dual basis system in degree " + std::to_string(deg) + " is inconsistent (" +
                                        std::to_string(inconsistent) + " independent conditions fail, rank " +
                                        std::to_string(pivots.size()) + " of " + std::to_string(cols.size()) + ")");
    // Free variables are set to zero.
    for (std::size_t q = 0; q < js.size(); ++q) {
      MultiPoly f(n);
      for (const auto& [pc, prow] : pivots) f.add_term(cols[static_cast<std::size_t>(pc)], prow.rhs[q]);
      db.dual[js[q]] = std::move(f);
    }
  }
  // The pairing must be perfect; a free direction would leave it degenerate.
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (trace(db, db.basis[i] * db.dual[j]) != MultiPoly::constant(n, i == j ? 1 : 0))
        fail(ErrorCode::SolveFailure, "dual basis pairing is degenerate at (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
  return db;
}

MultiPoly p_top(const DualBases& db) {
  MultiPoly s(db.n);
  for (std::size_t i = 0; i < db.r(); ++i) s += db.basis[i] * db.dual[i];
  return s * mpq_class(1, static_cast<long>(db.r()));
}

// ---------------------------------------------------------------------------
// Tensors

Tensor& Tensor::operator+=(const Tensor& o) {
  if (arity == 0) arity = o.arity;
  if (o.arity != arity && !o.terms.empty()) fail(ErrorCode::SizeMismatch, "adding tensors of different arity");
  for (const auto& [j, c] : o.terms) {
    auto [it, inserted] = terms.try_emplace(j, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return *this;
}

std::string Tensor::str() const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [j, c] : terms) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (int idx : j) out += " (x) f^" + std::to_string(idx + 1);
  }
  return out;
}

namespace {

// Normal forms with a per-monomial cache of d_I(m f_j).
class Normalizer {
 public:
  explicit Normalizer(const DualBases& db) : db_(db) {}

  std::vector<MultiPoly> expand(const MultiPoly& p) {
    std::vector<MultiPoly> out(db_.r(), MultiPoly(db_.n));
    for (const auto& [k, c] : p.terms()) {
      const std::vector<MultiPoly>& e = monomial(k);
      for (std::size_t j = 0; j < out.size(); ++j)
        if (!e[j].is_zero()) out[j] += e[j] * c;
    }
    return out;
  }

  Tensor normal_form(const std::vector<MultiPoly>& factors) {
    if (factors.empty()) fail(ErrorCode::SizeMismatch, "empty tensor");
    std::vector<std::pair<std::vector<int>, MultiPoly>> cur{{{}, MultiPoly::constant(db_.n, 1)}};
    for (std::size_t k = factors.size(); k-- > 1;) {
      std::vector<std::pair<std::vector<int>, MultiPoly>> next;
      for (const auto& [js, carry] : cur) {
        const std::vector<MultiPoly> cs = expand(factors[k] * carry);
        for (std::size_t j = 0; j < cs.size(); ++j) {
          if (cs[j].is_zero()) continue;
          std::vector<int> nj{static_cast<int>(j)};
          nj.insert(nj.end(), js.begin(), js.end());
          next.emplace_back(std::move(nj), cs[j]);
        }
      }
      cur = std::move(next);
    }
    Tensor t;
    t.arity = static_cast<int>(factors.size());
    for (const auto& [js, carry] : cur) {
      MultiPoly c = factors[0] * carry;
      if (!c.is_zero()) t.terms.emplace(js, std::move(c));
    }
    return t;
  }

  /// Applies a map given on pure tensors to every term of t.
  Tensor apply(const Tensor& t, const std::function<Tensor(const std::vector<MultiPoly>&)>& f) {
    Tensor out;
    for (const auto& [js, c] : t.terms) {
      std::vector<MultiPoly> pure{c};
      for (int j : js) pure.push_back(db_.dual[static_cast<std::size_t>(j)]);
      out += f(pure);
    }
    return out;
  }

 private:
  const std::vector<MultiPoly>& monomial(MultiPoly::Key k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    std::vector<MultiPoly> e;
    const MultiPoly m = MultiPoly::monomial(db_.n, k);
    for (const MultiPoly& f : db_.basis) e.push_back(trace(db_, m * f));
    return cache_.emplace(k, std::move(e)).first->second;
  }

  const DualBases& db_;
  std::unordered_map<MultiPoly::Key, std::vector<MultiPoly>> cache_;
};

}  // namespace

Tensor tensor_normal_form(const std::vector<MultiPoly>& factors, const DualBases& db) {
  Normalizer nf(db);
  return nf.normal_form(factors);
}

MultiPoly collapse(const Tensor& t, const DualBases& db) {
  MultiPoly out(db.n);
  for (const auto& [js, c] : t.terms) {
    MultiPoly p = c;
    for (int j : js) p = p * db.dual[static_cast<std::size_t>(j)];
    out += p;
  }
  return out;
}

LaurentPoly graded_rank(const DualBases& db) {
  LaurentPoly out;
  for (const MultiPoly& f : db.dual) out += LaurentPoly::monomial(-2 * f.degree());
  return out;
}

namespace {

// Pure tensors of monomials. Two-factor tensors f (x) g take each factor of
// degree <= bound. Longer ones start with 1 (every map checked multiplies the
// first factor through) and bound the total degree of the rest.
std::vector<std::vector<MultiPoly>> spanning_tensors(int n, int arity, int bound) {
  std::vector<std::vector<MultiPoly::Key>> by_degree;
  for (int d = 0; d <= bound; ++d) by_degree.push_back(monomials_of_degree(n, d));
  std::vector<std::vector<MultiPoly>> out;
  std::vector<MultiPoly> cur;
  if (arity > 2) cur.push_back(MultiPoly::constant(n, 1));
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == arity) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= left; ++d)
      for (MultiPoly::Key m : by_degree[static_cast<std::size_t>(d)]) {
        cur.push_back(MultiPoly::monomial(n, m));
        rec(k + 1, arity == 2 ? bound : left - d);
        cur.pop_back();
      }
  };
  rec(static_cast<int>(cur.size()), bound);
  return out;
}

std::string pure_text(const std::vector<MultiPoly>& pure) {
  std::string s;
  for (std::size_t i = 0; i < pure.size(); ++i) s += (i ? " (x) " : "") + pure[i].str();
  return s;
}

// One identity checked on a list of inputs; results merged in input order.
struct Check {
  std::string name;
  std::function<std::optional<Failure>(Normalizer&, const std::vector<MultiPoly>&)> run;
  const std::vector<std::vector<MultiPoly>>* inputs;
};

void run_checks(Report& report, const DualBases& db, const std::vector<Check>& checks, bool parallel) {
  for (const Check& c : checks) report.property(c.name);
  for (const Check& c : checks) {
    const auto& inputs = *c.inputs;
    std::vector<std::optional<Failure>> results(inputs.size());
    std::string error;
#pragma omp parallel if (parallel)
    {
      Normalizer nf(db);
#pragma omp for schedule(dynamic, 16)
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        try {
          results[i] = c.run(nf, inputs[i]);
        } catch (const std::exception& e) {
#pragma omp critical
          if (error.empty()) error = e.what();
        }
      }
    }
    if (!error.empty()) fail(ErrorCode::InvariantViolation, c.name + ": " + error);
    PropertyResult& p = report.property(c.name);
    p.instances += inputs.size();
    for (auto& r : results)
      if (r) p.failures.push_back(std::move(*r));
  }
}

std::optional<Failure> compare(const std::vector<MultiPoly>& input, const Tensor& lhs, const Tensor& rhs) {
  if (lhs == rhs) return std::nullopt;
  return Failure{pure_text(input), lhs.str(), rhs.str()};
}

}  // namespace

Report frobenius_check(const std::vector<int>& subset, int n, int deg_bound, bool parallel) {
  const DualBases db = dual_bases(subset, n);
  const MultiPoly one = MultiPoly::constant(n, 1);
  Report report;
  report.title = "Frobenius structure of R (x)_{R^I} R";

  const auto c1 = spanning_tensors(n, 2, deg_bound);
  const auto c2 = spanning_tensors(n, 3, deg_bound);
  const auto c3 = spanning_tensors(n, 4, deg_bound);

  // Maps on pure tensors, named after the structure maps.
  auto m = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0] * trace(db, t[1]), t[2]}); };
  };
  auto m_id = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0] * trace(db, t[1]), t[2], t[3]}); };
  };
  auto id_m = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0], t[1] * trace(db, t[2]), t[3]}); };
  };
  auto delta = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0], one, t[1]}); };
  };
  auto delta_id = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0], one, t[1], t[2]}); };
  };
  auto id_delta = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0], t[1], one, t[2]}); };
  };

  std::vector<Check> checks;
  checks.push_back({"associativity",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      const Tensor lhs = nf.apply(m_id(nf)(t), m(nf));
                      const Tensor rhs = nf.apply(id_m(nf)(t), m(nf));
                      return compare(t, lhs, rhs);
                    },
                    &c3});
  checks.push_back({"left unitality",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      // m applied term by term to u(1) (x) t = sum_i f_i (x) f^i t_0 (x) t_1.
                      Tensor lhs;
                      for (std::size_t i = 0; i < db.r(); ++i) lhs += m(nf)({db.basis[i], db.dual[i] * t[0], t[1]});
                      return compare(t, lhs, nf.normal_form(t));
                    },
                    &c1});
  checks.push_back({"right unitality",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      Tensor lhs;
                      for (std::size_t i = 0; i < db.r(); ++i) lhs += m(nf)({t[0], t[1] * db.basis[i], db.dual[i]});
                      return compare(t, lhs, nf.normal_form(t));
                    },
                    &c1});
  checks.push_back({"coassociativity",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      const Tensor d = delta(nf)(t);
                      return compare(t, nf.apply(d, delta_id(nf)), nf.apply(d, id_delta(nf)));
                    },
                    &c1});
  checks.push_back({"left counitality",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      const Tensor d = delta(nf)(t);
                      const Tensor lhs =
                          nf.apply(d, [&](const std::vector<MultiPoly>& s) { return nf.normal_form({s[0] * s[1], s[2]}); });
                      return compare(t, lhs, nf.normal_form(t));
                    },
                    &c1});
  checks.push_back({"right counitality",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      const Tensor d = delta(nf)(t);
                      const Tensor lhs =
                          nf.apply(d, [&](const std::vector<MultiPoly>& s) { return nf.normal_form({s[0], s[1] * s[2]}); });
                      return compare(t, lhs, nf.normal_form(t));
                    },
                    &c1});
  checks.push_back({"Frobenius compatibility",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) -> std::optional<Failure> {
                      const Tensor dm = nf.apply(m(nf)(t), delta(nf));
                      const Tensor left = nf.apply(id_delta(nf)(t), m_id(nf));
                      const Tensor right = nf.apply(delta_id(nf)(t), id_m(nf));
                      if (auto f = compare(t, dm, left)) return f;
                      return compare(t, dm, right);
                    },
                    &c2});
  const MultiPoly p = p_top(db);
  checks.push_back({"separability",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      return compare(t, m(nf)({t[0], p, t[1]}), nf.normal_form(t));
                    },
                    &c1});
  run_checks(report, db, checks, parallel);

  PropertyResult& top = report.property("trace of p_top");
  ++top.instances;
  const MultiPoly tp = trace(db, p);
  if (tp != one) top.failures.push_back(Failure{"d_I(p_top)", tp.str(), "1"});

  // Left graded rank of R (x) R (x) R from its normal-form basis against the
  // Poincare polynomial of W_I times that of R (x) R.
  PropertyResult& rank = report.property("graded rank");
  ++rank.instances;
  LaurentPoly triple;
  for (const MultiPoly& a : db.dual)
    for (const MultiPoly& b : db.dual) triple += LaurentPoly::monomial(-2 * (a.degree() + b.degree()));
  const GroupDescriptor aff{n >= 2 ? Family::AffineA : Family::FiniteA, n};
  const LaurentPoly tilde_pi = pi_I(aff, db.subset).shifted(-static_cast<int>(db.longest_word.size()));
  const LaurentPoly expected = tilde_pi * graded_rank(db);
  if (triple != expected) rank.failures.push_back(Failure{"grk(R (x) R (x) R)", triple.to_string(), expected.to_string()});
  return report;
}

Report separability_check(const std::vector<int>& subset, int n, int deg_bound, bool parallel) {
  const DualBases db = dual_bases(subset, n);
  const MultiPoly one = MultiPoly::constant(n, 1);
  const MultiPoly p = p_top(db);
  Report report;
  report.title = "separability of R (x)_{R^I} R";
  PropertyResult& top = report.property("trace of p_top");
  ++top.instances;
  const MultiPoly tp = trace(db, p);
  if (tp != one) top.failures.push_back(Failure{"d_I(p_top)", tp.str(), "1"});

  const auto c1 = spanning_tensors(n, 2, deg_bound);
  const auto c2 = spanning_tensors(n, 3, deg_bound);
  std::vector<Check> checks;
  auto m = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0] * trace(db, t[1]), t[2]}); };
  };
  checks.push_back({"separability",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) {
                      return compare(t, m(nf)({t[0], p, t[1]}), nf.normal_form(t));
                    },
                    &c1});
  auto m_id = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0] * trace(db, t[1]), t[2], t[3]}); };
  };
  auto id_m = [&](Normalizer& nf) {
    return [&](const std::vector<MultiPoly>& t) { return nf.normal_form({t[0], t[1] * trace(db, t[2]), t[3]}); };
  };
  // On a (x) b (x) c = (a (x) b)(1 (x) c): sigma(xy) = sigma(x) y and sigma(xy) = x sigma(y).
  checks.push_back({"sigma bimodule map",
                    [&](Normalizer& nf, const std::vector<MultiPoly>& t) -> std::optional<Failure> {
                      const Tensor lhs = nf.apply(m(nf)(t), [&](const std::vector<MultiPoly>& s) {
                        return nf.normal_form({s[0], p, s[1]});
                      });
                      if (auto f = compare(t, lhs, id_m(nf)({t[0], p, t[1], t[2]}))) return f;
                      return compare(t, lhs, m_id(nf)({t[0], t[1], p, t[2]}));
                    },
                    &c2});
  run_checks(report, db, checks, parallel);
  return report;
}

}  // namespace cellkit
