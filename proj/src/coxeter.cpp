#include "cellkit/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "cellkit/error.hpp"

namespace cellkit {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int pos_mod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

// w(j) for arbitrary integer j, using w(j + n) = w(j) + n.
int window_at(const Element& w, int j, int n) {
  int r = pos_mod(j - 1, n) + 1;
  int m = (j - r) / n;
  return w.form[static_cast<std::size_t>(r - 1)] + m * n;
}

bool window_family(const GroupDescriptor& g) {
  return g.family == Family::AffineA || g.family == Family::ExtAffineA;
}

void require_label(const GroupDescriptor& g, int label) {
  if (!is_generator(g, label))
    fail(ErrorCode::IndexOutOfRange,
         "generator index " + std::to_string(label) + " out of range for " +
             std::string(family_tag(g.family)) + " n=" + std::to_string(g.n));
}

void require_window(const GroupDescriptor& g, const char* what) {
  if (!window_family(g))
    fail(ErrorCode::UnsupportedFamily, std::string(what) + " requires an affine or extended affine group");
}

}  // namespace

std::string_view family_tag(Family f) {
  switch (f) {
    case Family::FiniteA: return "finA";
    case Family::AffineA: return "affA";
    case Family::ExtAffineA: return "extA";
    case Family::Universal: return "univ";
  }
  return "?";
}

Family parse_family(std::string_view tag) {
  if (tag == "finA" || tag == "finiteA") return Family::FiniteA;
  if (tag == "affA" || tag == "affineA") return Family::AffineA;
  if (tag == "extA" || tag == "extAffineA" || tag == "extAffA") return Family::ExtAffineA;
  if (tag == "univ" || tag == "universal") return Family::Universal;
  fail(ErrorCode::ParseError, "unknown group family '" + std::string(tag) + "'");
}

void validate(const GroupDescriptor& g) {
  if (g.n < 1) fail(ErrorCode::IndexOutOfRange, "rank parameter must be >= 1");
  if (window_family(g) && g.n < 2)
    fail(ErrorCode::IndexOutOfRange, "affine families require n >= 2");
  if (g.n > 64) fail(ErrorCode::ResourceLimit, "rank parameter above 64 is not supported");
}

bool is_affine(const GroupDescriptor& g) { return window_family(g); }

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : e.form) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h ^ e.form.size();
}

std::vector<int> generators(const GroupDescriptor& g) {
  std::vector<int> out;
  switch (g.family) {
    case Family::FiniteA:
      for (int i = 1; i < g.n; ++i) out.push_back(i);
      break;
    case Family::AffineA:
    case Family::ExtAffineA:
      for (int i = 0; i < g.n; ++i) out.push_back(i);
      break;
    case Family::Universal:
      for (int i = 1; i <= g.n; ++i) out.push_back(i);
      break;
  }
  return out;
}

int generator_slot(const GroupDescriptor& g, int label) {
  require_label(g, label);
  return window_family(g) ? label : label - 1;
}

bool is_generator(const GroupDescriptor& g, int label) {
  switch (g.family) {
    case Family::FiniteA: return label >= 1 && label < g.n;
    case Family::AffineA:
    case Family::ExtAffineA: return label >= 0 && label < g.n;
    case Family::Universal: return label >= 1 && label <= g.n;
  }
  return false;
}

Element identity(const GroupDescriptor& g) {
  Element e;
  if (g.family == Family::Universal) return e;
  e.form.resize(static_cast<std::size_t>(g.n));
  std::iota(e.form.begin(), e.form.end(), 1);
  return e;
}

Element generator(const GroupDescriptor& g, int label) {
  return right_mul_gen(g, identity(g), label);
}

Element rho_power(const GroupDescriptor& g, int k) {
  if (g.family != Family::ExtAffineA)
    fail(ErrorCode::UnsupportedFamily, "rho belongs to the extended affine family only");
  Element e = identity(g);
  for (auto& v : e.form) v += k;
  return e;
}

int rho_exponent(const GroupDescriptor& g, const Element& w) {
  if (!window_family(g)) return 0;
  int s = 0;
  for (int i = 0; i < g.n; ++i) s += w.form[static_cast<std::size_t>(i)] - (i + 1);
  return floor_div(s, g.n);
}

Element right_mul_gen(const GroupDescriptor& g, const Element& w, int label) {
  require_label(g, label);
  Element r = w;
  switch (g.family) {
    case Family::FiniteA:
      std::swap(r.form[static_cast<std::size_t>(label - 1)], r.form[static_cast<std::size_t>(label)]);
      break;
    case Family::AffineA:
    case Family::ExtAffineA:
      if (label == 0) {
        int n = g.n;
        int first = w.form.front();
        r.form.front() = w.form.back() - n;
        r.form.back() = first + n;
      } else {
        std::swap(r.form[static_cast<std::size_t>(label - 1)], r.form[static_cast<std::size_t>(label)]);
      }
      break;
    case Family::Universal:
      if (!r.form.empty() && r.form.back() == label) {
        r.form.pop_back();
      } else {
        r.form.push_back(label);
      }
      break;
  }
  return r;
}

Element left_mul_gen(const GroupDescriptor& g, int label, const Element& w) {
  require_label(g, label);
  Element r = w;
  switch (g.family) {
    case Family::FiniteA:
      for (auto& v : r.form) {
        if (v == label) v = label + 1;
        else if (v == label + 1) v = label;
      }
      break;
    case Family::AffineA:
    case Family::ExtAffineA: {
      int n = g.n;
      for (auto& v : r.form) {
        int m = pos_mod(v, n);
        if (m == label) ++v;
        else if (m == pos_mod(label + 1, n)) --v;
      }
      break;
    }
    case Family::Universal:
      if (!r.form.empty() && r.form.front() == label) {
        r.form.erase(r.form.begin());
      } else {
        r.form.insert(r.form.begin(), label);
      }
      break;
  }
  return r;
}

Element multiply(const GroupDescriptor& g, const Element& a, const Element& b) {
  Element r;
  switch (g.family) {
    case Family::FiniteA:
      r.form.resize(b.form.size());
      for (std::size_t j = 0; j < b.form.size(); ++j)
        r.form[j] = a.form[static_cast<std::size_t>(b.form[j] - 1)];
      break;
    case Family::AffineA:
    case Family::ExtAffineA:
      r.form.resize(b.form.size());
      for (std::size_t j = 0; j < b.form.size(); ++j) r.form[j] = window_at(a, b.form[j], g.n);
      break;
    case Family::Universal:
      r = a;
      for (int letter : b.form) {
        if (!r.form.empty() && r.form.back() == letter) r.form.pop_back();
        else r.form.push_back(letter);
      }
      break;
  }
  return r;
}

Element inverse(const GroupDescriptor& g, const Element& a) {
  Element r;
  switch (g.family) {
    case Family::FiniteA:
      r.form.resize(a.form.size());
      for (std::size_t j = 0; j < a.form.size(); ++j)
        r.form[static_cast<std::size_t>(a.form[j] - 1)] = static_cast<int>(j) + 1;
      break;
    case Family::AffineA:
    case Family::ExtAffineA: {
      int n = g.n;
      r.form.resize(a.form.size());
      for (int j = 1; j <= n; ++j) {
        int v = a.form[static_cast<std::size_t>(j - 1)];
        int rr = pos_mod(v - 1, n) + 1;
        int m = (v - rr) / n;
        r.form[static_cast<std::size_t>(rr - 1)] = j - m * n;
      }
      break;
    }
    case Family::Universal:
      r.form.assign(a.form.rbegin(), a.form.rend());
      break;
  }
  return r;
}

int length(const GroupDescriptor& g, const Element& w) {
  int len = 0;
  switch (g.family) {
    case Family::FiniteA:
      for (std::size_t i = 0; i < w.form.size(); ++i)
        for (std::size_t j = i + 1; j < w.form.size(); ++j)
          if (w.form[i] > w.form[j]) ++len;
      break;
    case Family::AffineA:
    case Family::ExtAffineA:
      for (std::size_t i = 0; i < w.form.size(); ++i)
        for (std::size_t j = i + 1; j < w.form.size(); ++j)
          len += std::abs(floor_div(w.form[j] - w.form[i], g.n));
      break;
    case Family::Universal:
      len = static_cast<int>(w.form.size());
      break;
  }
  return len;
}

bool has_right_descent(const GroupDescriptor& g, const Element& w, int label) {
  require_label(g, label);
  switch (g.family) {
    case Family::FiniteA:
      return w.form[static_cast<std::size_t>(label - 1)] > w.form[static_cast<std::size_t>(label)];
    case Family::AffineA:
    case Family::ExtAffineA:
      if (label == 0) return w.form.back() - g.n > w.form.front();
      return w.form[static_cast<std::size_t>(label - 1)] > w.form[static_cast<std::size_t>(label)];
    case Family::Universal:
      return !w.form.empty() && w.form.back() == label;
  }
  return false;
}

bool has_left_descent(const GroupDescriptor& g, const Element& w, int label) {
  if (g.family == Family::Universal) {
    require_label(g, label);
    return !w.form.empty() && w.form.front() == label;
  }
  return has_right_descent(g, inverse(g, w), label);
}

std::vector<int> descent_set(const GroupDescriptor& g, const Element& w, Side side) {
  std::vector<int> out;
  Element probe = side == Side::Left && g.family != Family::Universal ? inverse(g, w) : w;
  for (int s : generators(g)) {
    bool d = (side == Side::Right || g.family != Family::Universal) ? has_right_descent(g, probe, s)
                                                                     : has_left_descent(g, w, s);
    if (d) out.push_back(s);
  }
  return out;
}

Word reduced_word(const GroupDescriptor& g, const Element& w) {
  Word out;
  if (g.family == Family::Universal) {
    out.letters = w.form;
    return out;
  }
  Element cur = w;
  std::vector<int> rev;
  const auto gens = generators(g);
  while (true) {
    int found = -1;
    for (int s : gens)
      if (has_right_descent(g, cur, s)) {
        found = s;
        break;
      }
    if (found < 0) break;
    rev.push_back(found);
    cur = right_mul_gen(g, cur, found);
  }
  out.rho = rho_exponent(g, cur);
  out.letters.assign(rev.rbegin(), rev.rend());
  return out;
}

Element element_from_word(const GroupDescriptor& g, const Word& w) {
  validate(g);
  Element cur = identity(g);
  if (w.rho != 0) cur = rho_power(g, w.rho);
  for (int s : w.letters) cur = right_mul_gen(g, cur, s);
  return cur;
}

bool bruhat_leq_along(const GroupDescriptor& g, const Element& x, const Word& rex) {
  if (g.family == Family::Universal)
    fail(ErrorCode::UnsupportedFamily, "Bruhat order is not provided for the universal family");
  if (rho_exponent(g, x) != rex.rho) return false;
  Element cur = x;
  if (rex.rho != 0) cur = multiply(g, rho_power(g, -rex.rho), x);
  int cur_len = length(g, cur);
  int remaining = static_cast<int>(rex.letters.size());
  for (int s : rex.letters) {
    if (cur_len > remaining) return false;
    if (cur_len > 0 && has_left_descent(g, cur, s)) {
      cur = left_mul_gen(g, s, cur);
      --cur_len;
    }
    --remaining;
  }
  return cur_len == 0;
}

bool bruhat_leq(const GroupDescriptor& g, const Element& x, const Element& w) {
  if (g.family == Family::Universal)
    fail(ErrorCode::UnsupportedFamily, "Bruhat order is not provided for the universal family");
  return bruhat_leq_along(g, x, reduced_word(g, w));
}

Element rho_shift(const GroupDescriptor& g, const Element& w, int k) {
  require_window(g, "rho_shift");
  // The window arithmetic is the same for both families; rho itself is
  // only used as an intermediate.
  Element rk = identity(g);
  Element rinv = identity(g);
  for (auto& v : rk.form) v += k;
  for (auto& v : rinv.form) v -= k;
  return multiply(g, multiply(g, rk, w), rinv);
}

bool parabolic_is_finite(const GroupDescriptor& g, const std::vector<int>& subset) {
  for (int s : subset) require_label(g, s);
  std::vector<int> uniq = subset;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  switch (g.family) {
    case Family::FiniteA: return true;
    case Family::AffineA:
    case Family::ExtAffineA: return static_cast<int>(uniq.size()) < g.n;
    case Family::Universal: return uniq.size() <= 1;
  }
  return false;
}

Element longest_parabolic(const GroupDescriptor& g, const std::vector<int>& subset) {
  if (!parabolic_is_finite(g, subset))
    fail(ErrorCode::InfiniteParabolic, "the parabolic subgroup is infinite");
  Element cur = identity(g);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s : subset)
      if (!has_right_descent(g, cur, s)) {
        cur = right_mul_gen(g, cur, s);
        grew = true;
      }
  }
  return cur;
}

bool canonical_less(const GroupDescriptor& g, const Element& a, const Element& b) {
  int la = length(g, a);
  int lb = length(g, b);
  if (la != lb) return la < lb;
  return a.form < b.form;
}

std::vector<Element> ball(const GroupDescriptor& g, int radius, std::size_t max_elements, int rho_range) {
  validate(g);
  if (radius < 0) fail(ErrorCode::IndexOutOfRange, "ball radius must be >= 0");
  std::vector<Element> out;
  std::vector<Element> layer;
  if (g.family == Family::ExtAffineA) {
    for (int k = -rho_range; k <= rho_range; ++k) layer.push_back(rho_power(g, k));
  } else {
    layer.push_back(identity(g));
  }
  const auto gens = generators(g);
  for (int len = 0;; ++len) {
    std::sort(layer.begin(), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
    if (out.size() > max_elements)
      fail(ErrorCode::ResourceLimit, "ball exceeds the element cap of " + std::to_string(max_elements));
    if (len == radius) break;
    std::unordered_set<Element, ElementHash> next;
    for (const auto& w : layer)
      for (int s : gens)
        if (!has_right_descent(g, w, s)) next.insert(right_mul_gen(g, w, s));
    layer.assign(next.begin(), next.end());
  }
  return out;
}

Word parse_word(const GroupDescriptor& g, std::string_view text) {
  Word w;
  auto push_rho = [&](int delta) {
    if (g.family != Family::ExtAffineA)
      fail(ErrorCode::ParseError, "rho letters are only valid in the extended affine family");
    // s_i rho = rho s_{i-1}; s_i rho^-1 = rho^-1 s_{i+1}
    for (auto& s : w.letters) s = pos_mod(s - delta, g.n);
    w.rho += delta;
  };
  auto push_label = [&](int label) {
    if (!is_generator(g, label))
      fail(ErrorCode::IndexOutOfRange, "generator index " + std::to_string(label) + " out of range");
    w.letters.push_back(label);
  };
  bool commas = text.find(',') != std::string_view::npos;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == 'r' || c == 'R') {
      push_rho(c == 'r' ? 1 : -1);
      ++i;
    } else if (c == ',') {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (commas) {
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = v * 10 + (text[i++] - '0');
        push_label(v);
      } else {
        push_label(c - '0');
        ++i;
      }
    } else {
      fail(ErrorCode::ParseError, "unexpected character '" + std::string(1, c) + "' in word");
    }
  }
  return w;
}

Element parse_element(const GroupDescriptor& g, std::string_view text) {
  validate(g);
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "e") return identity(g);
  if (text.starts_with("w:") || text.starts_with("u:")) {
    bool universal_form = text[0] == 'u';
    if (universal_form != (g.family == Family::Universal))
      fail(ErrorCode::ParseError, "element '" + std::string(text) + "' does not match the group family");
    return element_from_word(g, parse_word(g, text.substr(2)));
  }
  std::vector<int> values;
  std::string_view body = text;
  bool bracketed = !body.empty() && body.front() == '[';
  if (bracketed) {
    if (body.back() != ']') fail(ErrorCode::ParseError, "unterminated window '" + std::string(text) + "'");
    body = body.substr(1, body.size() - 2);
  }
  const bool compact = g.family == Family::FiniteA && g.n < 10 && !bracketed &&
                       static_cast<int>(body.size()) == g.n &&
                       std::all_of(body.begin(), body.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (compact)
    for (char c : body) values.push_back(c - '0');
  std::size_t i = compact ? body.size() : 0;
  while (i < body.size()) {
    while (i < body.size() && (body[i] == ',' || std::isspace(static_cast<unsigned char>(body[i])))) ++i;
    if (i >= body.size()) break;
    bool neg = false;
    if (body[i] == '-') {
      neg = true;
      ++i;
    }
    if (i >= body.size() || !std::isdigit(static_cast<unsigned char>(body[i])))
      fail(ErrorCode::ParseError, "bad element text '" + std::string(text) + "'");
    int v = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) v = v * 10 + (body[i++] - '0');
    values.push_back(neg ? -v : v);
  }
  if (static_cast<int>(values.size()) != g.n || g.family == Family::Universal)
    fail(ErrorCode::ParseError, "element '" + std::string(text) + "' has the wrong shape for this group");
  Element e{values};
  if (g.family == Family::FiniteA) {
    std::vector<int> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < g.n; ++k)
      if (sorted[static_cast<std::size_t>(k)] != k + 1)
        fail(ErrorCode::ParseError, "'" + std::string(text) + "' is not a permutation");
    return e;
  }
  std::vector<int> residues;
  int sum = 0;
  for (int k = 0; k < g.n; ++k) {
    residues.push_back(pos_mod(values[static_cast<std::size_t>(k)], g.n));
    sum += values[static_cast<std::size_t>(k)] - (k + 1);
  }
  std::sort(residues.begin(), residues.end());
  if (std::adjacent_find(residues.begin(), residues.end()) != residues.end())
    fail(ErrorCode::ParseError, "window entries of '" + std::string(text) + "' are not distinct mod n");
  if (g.family == Family::AffineA && sum != 0)
    fail(ErrorCode::ParseError, "window '" + std::string(text) + "' does not lie in the affine group");
  return e;
}

std::string format_word(const GroupDescriptor& g, const Word& w) {
  std::string out;
  for (int k = 0; k < std::abs(w.rho); ++k) out += w.rho > 0 ? 'r' : 'R';
  bool commas = std::any_of(w.letters.begin(), w.letters.end(), [](int s) { return s >= 10; });
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (commas && i > 0) out += ',';
    out += std::to_string(w.letters[i]);
  }
  (void)g;
  return out;
}

std::string format_window(const Element& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.form.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w.form[i]);
  }
  return out + "]";
}

std::string format_element(const GroupDescriptor& g, const Element& w) {
  switch (g.family) {
    case Family::FiniteA: {
      std::string out;
      for (std::size_t i = 0; i < w.form.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(w.form[i]);
      }
      return out;
    }
    case Family::AffineA:
    case Family::ExtAffineA:
      return "w:" + format_word(g, reduced_word(g, w));
    case Family::Universal:
      return "u:" + format_word(g, Word{0, w.form});
  }
  return {};
}

std::string pretty_element(const GroupDescriptor& g, const Element& w) {
  Word rex = reduced_word(g, w);
  std::string out;
  if (rex.rho != 0) {
    out = rex.rho == 1 ? "rho" : "rho^" + std::to_string(rex.rho);
    if (!rex.letters.empty()) out += ' ';
  }
  for (int s : rex.letters) out += "s_" + std::to_string(s);
  return out.empty() ? "e" : out;
}

}  // namespace cellkit
