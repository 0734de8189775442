// Command-line front end: one verb per invocation, data on stdout, progress
// and diagnostics on stderr.

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "cellkit/cells.hpp"
#include "cellkit/demazure.hpp"
#include "cellkit/error.hpp"
#include "cellkit/hecke.hpp"
#include "cellkit/kl_cache.hpp"
#include "cellkit/typea.hpp"

using json = nlohmann::ordered_json;
using namespace cellkit;

namespace {

struct Options {
  std::string group = "affA";
  int n = 4;
  std::string format = "table";
  std::string cache_dir;
  int threads = 0;
  std::size_t max_elements = 200000;
  double timeout = 0;
  bool quiet = false;

  int ball = 6;
  int margin = -1;
  int rho_range = 0;
  int bound = -1;
  int deg_bound = 6;
  std::string subset;
  std::string lambda;
  std::string levi;
  std::string ds;
  int torus_rank = 0;
  int weight_bound = 4;
  std::vector<std::string> elements;
};

// Output document: the JSON value and the table rendering of the same data.
struct Output {
  json doc = json::object();
  std::vector<std::string> lines;
};

void progress(const Options& o, const std::string& msg) {
  if (!o.quiet) std::cerr << "[cellkit] " << msg << std::endl;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, std::string("bad ") + what + " '" + text + "'");
    }
  }
  return out;
}

class Session {
 public:
  explicit Session(const Options& o) : opt_(o) {
    desc_ = GroupDescriptor{parse_family(o.group), o.n};
    validate(desc_);
    group_ = std::make_unique<Group>(desc_, o.max_elements);
    hecke_ = std::make_unique<Hecke>(*group_);
    std::string dir = o.cache_dir;
    if (dir.empty())
      if (const char* env = std::getenv(KLCache::kEnvVar)) dir = env;
    if (!dir.empty()) cache_ = std::make_unique<KLCache>(dir);
  }

  const GroupDescriptor& desc() const { return desc_; }
  Group& group() { return *group_; }
  Hecke& hecke() { return *hecke_; }
  KLCache* cache() { return cache_.get(); }

  /// Parses an element and reports words that are not reduced.
  ElementId element(const std::string& text) {
    const Element e = parse_element(desc_, text);
    if ((text.rfind("w:", 0) == 0 || text.rfind("u:", 0) == 0)) {
      const Word w = parse_word(desc_, text.substr(2));
      if (static_cast<int>(w.letters.size()) != length(desc_, e))
        progress(opt_, "note: word " + text + " is not reduced; it denotes " + format_element(desc_, e));
    }
    return group_->intern(e);
  }

  CellData cells(int rho_range) {
    CellOptions co;
    co.radius = opt_.ball;
    co.margin = opt_.margin;
    co.rho_range = rho_range;
    progress(opt_, "cells: ball(" + std::to_string(opt_.ball) + ") of " + std::string(family_tag(desc_.family)) + " " +
                       std::to_string(desc_.n));
    CellData cd = cell_partition(*hecke_, co);
    progress(opt_, "cells: " + std::to_string(cd.ball.size()) + " elements, outer ball " +
                       std::to_string(cd.outer.size()) + ", margin " + std::to_string(cd.margin));
    return cd;
  }

 private:
  const Options& opt_;
  GroupDescriptor desc_;
  std::unique_ptr<Group> group_;
  std::unique_ptr<Hecke> hecke_;
  std::unique_ptr<KLCache> cache_;
};

std::string term_text(const GroupDescriptor& g, const std::string& elem, const LaurentPoly& c) {
  const std::string b = "b_{" + pretty_element(g, parse_element(g, elem)) + "}";
  if (c == LaurentPoly(1)) return b;
  return "(" + c.to_string() + ") " + b;
}

json product_json(const GroupDescriptor& g, const ProductRecord& r) {
  json terms = json::array();
  for (const auto& [z, c] : r.terms)
    terms.push_back({{"element", z}, {"pretty", pretty_element(g, parse_element(g, z))}, {"coeff", c.to_string()}});
  return terms;
}

ProductRecord product(Session& s, ElementId x, ElementId y) {
  Group& g = s.group();
  const std::string xs = g.format(x), ys = g.format(y);
  if (KLCache* c = s.cache())
    if (const ProductRecord* r = c->find_product(s.desc(), xs, ys)) return *r;
  ProductRecord r = compute_product_record(s.hecke(), xs, ys);
  if (KLCache* c = s.cache()) c->put(r);
  return r;
}

std::string a_text(const AValue& a) {
  if (a.exact()) return std::to_string(a.lower);
  return "[" + std::to_string(a.lower) + "," + (a.upper == INT_MAX ? std::string("?") : std::to_string(a.upper)) + "]";
}

json members_json(Group& g, const std::vector<ElementId>& ids, int radius) {
  json out = json::array();
  for (ElementId w : ids)
    if (g.length(w) <= radius) out.push_back(g.format(w));
  return out;
}

std::string members_text(Group& g, const std::vector<ElementId>& ids, int radius) {
  std::string s;
  for (ElementId w : ids)
    if (g.length(w) <= radius) s += (s.empty() ? "" : " ") + g.format(w);
  return s;
}

std::optional<Partition> partition_of_class(Group& g, const CellData& cd, int t) {
  if (!is_affine(g.descriptor())) return std::nullopt;
  for (const Partition& lam : partitions_of(g.descriptor().n))
    if (two_sided_class_of(g, lam, cd) == t) return lam;
  return std::nullopt;
}

void report_output(const Report& r, Output& out) {
  json props = json::array();
  for (const PropertyResult& p : r.properties) {
    json fails = json::array();
    for (const Failure& f : p.failures) fails.push_back({{"where", f.where}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    props.push_back({{"name", p.name}, {"instances", p.instances}, {"failures", p.failures.size()}, {"counterexamples", fails}});
    out.lines.push_back(p.name + ": " + std::to_string(p.instances) + " instances, " + std::to_string(p.failures.size()) +
                        " failures");
    for (std::size_t i = 0; i < p.failures.size() && i < 5; ++i)
      out.lines.push_back("  at " + p.failures[i].where + ": " + p.failures[i].lhs + " != " + p.failures[i].rhs);
  }
  out.doc["title"] = r.title;
  out.doc["ok"] = r.ok();
  out.doc["properties"] = props;
  out.lines.push_back(r.ok() ? "PASS" : "FAIL");
}

// ---------------------------------------------------------------------------
// Verbs

int run_klpoly(const Options& o, Output& out) {
  if (o.elements.size() != 2) fail(ErrorCode::ParseError, "klpoly takes two elements y w");
  Session s(o);
  const std::string y = s.group().format(s.element(o.elements[0]));
  const std::string w = s.group().format(s.element(o.elements[1]));
  std::optional<LaurentPoly> h;
  if (KLCache* c = s.cache()) h = c->find_kl(s.desc(), y, w);
  if (!h) {
    KLRecord r = compute_kl_record(s.hecke(), y, w);
    h = r.h;
    if (KLCache* c = s.cache()) c->put(r);
  }
  out.doc = {{"y", y}, {"w", w}, {"h", h->to_string()}};
  out.lines.push_back(h->to_string());
  return 0;
}

int run_mult(const Options& o, Output& out) {
  if (o.elements.size() != 2) fail(ErrorCode::ParseError, "mult takes two elements x y");
  Session s(o);
  const ElementId x = s.element(o.elements[0]), y = s.element(o.elements[1]);
  const ProductRecord r = product(s, x, y);
  out.doc = {{"x", r.x}, {"y", r.y}, {"terms", product_json(s.desc(), r)}};
  for (const auto& [z, c] : r.terms) out.lines.push_back(term_text(s.desc(), z, c));
  if (r.terms.empty()) out.lines.push_back("0");
  return 0;
}

int run_cells(const Options& o, Output& out) {
  Session s(o);
  Group& g = s.group();
  const CellData cd = s.cells(o.rho_range);
  json two = json::array();
  for (int t : cd.two_sided_classes_in_ball(g)) {
    const CellClass& c = cd.two_sided.classes[static_cast<std::size_t>(t)];
    json left = json::array();
    std::size_t nleft = 0;
    for (int l : cd.left_classes_in_ball(g)) {
      if (cd.left_to_two_sided[static_cast<std::size_t>(l)] != t) continue;
      ++nleft;
      const CellClass& lc = cd.left.classes[static_cast<std::size_t>(l)];
      left.push_back({{"members", members_json(g, lc.members, cd.radius)}, {"complete", lc.complete}});
    }
    const AValue& a = cd.a_values[static_cast<std::size_t>(t)];
    json entry = {{"a", a_text(a)}, {"a_exact", a.exact()}, {"complete", c.complete}};
    const auto lam = partition_of_class(g, cd, t);
    if (lam) entry["partition"] = format_partition(*lam);
    entry["left_classes"] = left;
    two.push_back(entry);
    out.lines.push_back("two-sided class" + (lam ? " (" + format_partition(*lam) + ")" : std::string()) + ": a=" +
                        a_text(a) + ", " + std::to_string(nleft) + " left classes" + (c.complete ? "" : ", truncated"));
    for (const auto& l : left) {
      std::string m;
      for (const auto& e : l["members"]) m += (m.empty() ? "" : " ") + e.get<std::string>();
      out.lines.push_back("  {" + m + "}" + (l["complete"].get<bool>() ? "" : " (truncated)"));
    }
  }
  out.doc = {{"group", std::string(family_tag(s.desc().family))}, {"n", s.desc().n}, {"ball", cd.radius},
             {"margin", cd.margin}, {"two_sided", two}};
  return 0;
}

int run_aval(const Options& o, Output& out) {
  if (o.elements.size() != 1) fail(ErrorCode::ParseError, "aval takes one element");
  Session s(o);
  const ElementId z = s.element(o.elements[0]);
  const CellData cd = s.cells(o.rho_range);
  const int a = a_value(s.group(), z, cd);
  out.doc = {{"element", s.group().format(z)}, {"a", a}};
  out.lines.push_back(std::to_string(a));
  return 0;
}

int run_gamma(const Options& o, Output& out) {
  if (o.elements.size() != 3) fail(ErrorCode::ParseError, "gamma takes three elements x y z");
  Session s(o);
  const ElementId x = s.element(o.elements[0]), y = s.element(o.elements[1]), z = s.element(o.elements[2]);
  const CellData cd = s.cells(o.rho_range);
  const Coeff c = gamma(s.hecke(), x, y, z, cd);
  out.doc = {{"x", s.group().format(x)}, {"y", s.group().format(y)}, {"z", s.group().format(z)}, {"gamma", c}};
  out.lines.push_back(std::to_string(c));
  return 0;
}

int run_duflo(const Options& o, Output& out) {
  Session s(o);
  Group& g = s.group();
  const CellData cd = s.cells(o.rho_range);
  std::optional<int> only;
  if (!o.lambda.empty()) {
    only = two_sided_class_of(g, parse_partition(o.lambda), cd);
    if (*only < 0) fail(ErrorCode::TruncationInsufficient, "no class for lambda " + o.lambda + " in the ball");
  }
  json list = json::array();
  for (const DufloEntry& e : duflo_involutions(s.hecke(), cd)) {
    const int t = cd.left_to_two_sided[static_cast<std::size_t>(e.left_class)];
    if (only && t != *only) continue;
    const CellClass& lc = cd.left.classes[static_cast<std::size_t>(e.left_class)];
    const std::string d = e.duflo ? g.format(*e.duflo) : "unknown";
    list.push_back({{"left_class", members_json(g, lc.members, cd.radius)},
                    {"duflo", e.duflo ? json(d) : json(nullptr)},
                    {"tested", e.tested},
                    {"note", e.note}});
    out.lines.push_back(d + "  (" + std::to_string(e.tested) + " checked" + (e.note.empty() ? "" : "; " + e.note) + ")");
  }
  out.doc = {{"ball", cd.radius}, {"duflo", list}};
  return 0;
}

json gamma_table_json(Group& g, const GammaTable& t, Output& out) {
  json rows = json::array();
  for (const GammaEntry& e : t.entries) {
    json terms = json::array();
    std::string text;
    for (const auto& [z, c] : e.terms) {
      terms.push_back({{"element", g.format(z)}, {"gamma", c}});
      text += (text.empty() ? "" : " + ") + (c == 1 ? "" : std::to_string(c) + " ") + "t_" + g.format(z);
    }
    rows.push_back({{"x", g.format(t.elements[e.i])}, {"y", g.format(t.elements[e.j])}, {"terms", terms},
                    {"certified", e.certified}});
    out.lines.push_back("t_" + g.format(t.elements[e.i]) + " t_" + g.format(t.elements[e.j]) + " = " +
                        (text.empty() ? "0" : text) + (e.certified ? "" : "  [uncertified]"));
  }
  return rows;
}

int run_jring(const Options& o, Output& out) {
  if (o.elements.size() != 1) fail(ErrorCode::ParseError, "jring takes the Duflo involution d");
  Session s(o);
  Group& g = s.group();
  const ElementId d = s.element(o.elements[0]);
  const CellData cd = s.cells(o.rho_range);
  const std::vector<ElementId> h = h_cell(g, d, cd);
  const GammaTable t = jring_structure(s.hecke(), h, cd);
  json elems = json::array();
  for (ElementId w : t.elements) elems.push_back(g.format(w));
  out.lines.push_back("H-cell of " + g.format(d) + ": " + std::to_string(t.elements.size()) + " elements, a=" +
                      std::to_string(t.a));
  json rows = gamma_table_json(g, t, out);
  out.doc = {{"d", g.format(d)}, {"a", t.a}, {"elements", elems}, {"table", rows}};
  return 0;
}

int run_fusion_match(const Options& o, Output& out) {
  if (o.elements.size() != 1) fail(ErrorCode::ParseError, "fusion-match takes the Duflo involution d");
  Session s(o);
  Group& g = s.group();
  LeviDescriptor f;
  if (!o.levi.empty())
    f = parse_int_list(o.levi, "levi");
  else if (!o.lambda.empty())
    f = levi_of(parse_partition(o.lambda));
  else
    fail(ErrorCode::ParseError, "fusion-match needs --levi or --lambda");
  const ElementId d = s.element(o.elements[0]);
  const CellData cd = s.cells(o.rho_range);
  const GammaTable t = jring_structure(s.hecke(), h_cell(g, d, cd), cd);
  const auto m = fusion_match(t, f, o.weight_bound);
  std::string ftext;
  for (int x : f) ftext += (ftext.empty() ? "GL(" : " x GL(") + std::to_string(x) + ")";
  out.doc = {{"d", g.format(d)}, {"levi", ftext}, {"match", m.has_value()}};
  if (!m) {
    out.lines.push_back("NoMatch against " + ftext);
    return 0;
  }
  json assign = json::array();
  for (const auto& [x, w] : m->assignment) {
    assign.push_back({{"element", g.format(x)}, {"weight", format_weight(w)}});
    out.lines.push_back(g.format(x) + " -> " + format_weight(w));
  }
  out.doc["certified_entries"] = m->certified_entries;
  out.doc["assignment"] = assign;
  return 0;
}

int run_verify(const std::string& target, const Options& o, Output& out) {
  Report r;
  if (target == "frobenius" || target == "separability") {
    const std::vector<int> subset = parse_int_list(o.subset, "subset");
    progress(o, target + " check, degree bound " + std::to_string(o.deg_bound));
    r = target == "frobenius" ? frobenius_check(subset, o.n, o.deg_bound) : separability_check(subset, o.n, o.deg_bound);
  } else {
    Session s(o);
    const CellData cd = s.cells(o.rho_range);
    if (target == "positivity") {
      const int bound = o.bound >= 0 ? o.bound : o.ball;
      const ProductTable table = collect_products(s.hecke(), cd, bound);
      progress(o, "positivity: " + std::to_string(table.size()) + " products");
      r = verify_positivity_properties(s.hecke(), cd, table);
    } else {
      r = verify_gammacan(s.hecke(), parse_int_list(o.subset, "subset"), cd);
    }
  }
  report_output(r, out);
  return r.ok() ? 0 : 5;
}

int run_typea(const std::string& target, const Options& o, Output& out) {
  if (target == "dual") {
    const Partition mu = dual_partition(parse_partition(o.lambda));
    out.doc = {{"lambda", o.lambda}, {"dual", format_partition(mu)}};
    out.lines.push_back(format_partition(mu));
  } else if (target == "nlambda") {
    const std::uint64_t k = n_lambda(parse_partition(o.lambda), o.n);
    out.doc = {{"lambda", o.lambda}, {"n", o.n}, {"n_lambda", k}};
    out.lines.push_back(std::to_string(k));
  } else if (target == "pi") {
    const GroupDescriptor g{parse_family(o.group), o.n};
    validate(g);
    const LaurentPoly p = pi_I(g, parse_int_list(o.subset, "subset"));
    out.doc = {{"subset", o.subset}, {"pi", p.to_string()}};
    out.lines.push_back(p.to_string());
  } else {
    const std::vector<int> ds = parse_int_list(o.ds, "ds");
    const auto h = schur_multiplier_torus(o.torus_rank, std::vector<std::int64_t>(ds.begin(), ds.end()));
    json arr = json::array();
    std::string text;
    for (auto x : h) {
      arr.push_back(x);
      text += (text.empty() ? "Z/" : " x Z/") + std::to_string(x);
    }
    out.doc = {{"torus_rank", o.torus_rank}, {"ds", ds}, {"multiplier", arr}};
    out.lines.push_back(text.empty() ? "0" : text);
  }
  return 0;
}

int run_cache(const Options& o, Output& out) {
  std::string dir = o.cache_dir;
  if (dir.empty())
    if (const char* env = std::getenv(KLCache::kEnvVar)) dir = env;
  if (dir.empty()) fail(ErrorCode::ParseError, "cache roundtrip needs --cache-dir or " + std::string(KLCache::kEnvVar));
  const CacheReport r = cache_roundtrip(dir);
  json mism = json::array();
  for (const auto& m : r.mismatches) mism.push_back(m);
  out.doc = {{"dir", dir},
             {"kl_records", r.kl_records},
             {"product_records", r.product_records},
             {"replayed", r.replayed},
             {"ok", r.ok()},
             {"mismatches", mism}};
  out.lines.push_back(std::to_string(r.kl_records + r.product_records) + " records (" + std::to_string(r.kl_records) +
                      " kl, " + std::to_string(r.product_records) + " products), " + std::to_string(r.replayed) +
                      " replayed");
  for (const auto& m : r.mismatches) out.lines.push_back("  " + m);
  out.lines.push_back(r.ok() ? "PASS" : "FAIL");
  return r.ok() ? 0 : 5;
}

// ---------------------------------------------------------------------------
// Reproduction targets

int reproduce_example6_decomp(const Options& o, Output& out) {
  Options q = o;
  q.group = "affA";
  q.n = 4;
  Session s(q);
  Group& g = s.group();
  json items = json::array();
  bool all = true;
  struct Case {
    std::string label, input, element;
    std::vector<std::pair<std::string, std::string>> expected;
  };
  // The literal word 101201 is not reduced; the decomposition matches w = s_1s_0s_1s_2s_1s_0.
  const std::vector<Case> cases = {
      {"b_{101201}^2", "w:101201", "w:101210", {{"w:101210", "v^6+3v^4+5v^2+6+5v^-2+3v^-4+v^-6"}}},
      {"b_{31012103}^2", "w:31012103", "w:31012103",
       {{"w:31012103", "v^6+3v^4+5v^2+6+5v^-2+3v^-4+v^-6"}, {"w:30121030121031", "v^2+2+v^-2"}}},
  };
  for (const Case& c : cases) {
    progress(o, "computing " + c.label);
    const auto t0 = std::chrono::steady_clock::now();
    const ElementId x = s.element(c.element);
    const ProductRecord r = product(s, x, x);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& [z, p] : r.terms) got.emplace_back(z, p.to_string());
    std::vector<std::pair<std::string, std::string>> want;
    for (const auto& [z, p] : c.expected) want.emplace_back(g.format(s.element(z)), p);
    const bool match = got == want;
    all = all && match;
    items.push_back({{"product", c.label},
                     {"input_word", c.input},
                     {"element", g.format(x)},
                     {"terms", product_json(s.desc(), r)},
                     {"paper_terms", [&] {
                        json a = json::array();
                        for (const auto& [z, p] : want) a.push_back({{"element", z}, {"coeff", p}});
                        return a;
                      }()},
                     {"matches_paper", match},
                     {"seconds", std::round(secs * 100) / 100}});
    out.lines.push_back(c.label + " (element " + g.format(x) + "):");
    for (const auto& [z, p] : r.terms) out.lines.push_back("  " + term_text(s.desc(), z, p));
    out.lines.push_back(std::string("  matches paper: ") + (match ? "yes" : "no"));
  }
  out.doc = {{"target", "example-6-decomp"}, {"items", items}, {"all_match", all}};
  return 0;
}

int reproduce_example6_duflo(const Options& o, Output& out) {
  Options q = o;
  q.group = "extA";
  q.n = 4;
  q.ball = 10;
  Session s(q);
  Group& g = s.group();
  const CellData cd = s.cells(0);
  json cells = json::array();
  for (const Partition& lam : partitions_of(4)) {
    const int t = two_sided_class_of(g, lam, cd);
    std::size_t left = 0;
    for (int l : cd.left_classes_in_ball(g))
      if (cd.left_to_two_sided[static_cast<std::size_t>(l)] == t) ++left;
    const AValue& a = cd.a_values[static_cast<std::size_t>(t)];
    cells.push_back({{"lambda", format_partition(lam)}, {"left_classes", left}, {"n_lambda", n_lambda(lam, 4)},
                     {"a", a_text(a)}});
    out.lines.push_back("lambda=" + format_partition(lam) + ": " + std::to_string(left) + " left cells (n_lambda " +
                        std::to_string(n_lambda(lam, 4)) + "), a=" + a_text(a));
  }
  const int j22 = two_sided_class_of(g, {2, 2}, cd);
  std::set<std::string> duflo;
  std::vector<ElementId> ids;
  for (const DufloEntry& e : duflo_involutions(s.hecke(), cd))
    if (cd.left_to_two_sided[static_cast<std::size_t>(e.left_class)] == j22 && e.duflo) {
      duflo.insert(g.format(*e.duflo));
      ids.push_back(*e.duflo);
    }
  g.sort_canonical(ids);
  json orbits = json::array();
  std::set<ElementId> seen;
  std::string orbit_text;
  for (ElementId d : ids) {
    if (seen.count(d)) continue;
    json orbit = json::array();
    for (int k = 0; k < 4; ++k) {
      const ElementId c = g.rho_conjugate(d, k);
      if (seen.insert(c).second) orbit.push_back(g.pretty(c));
    }
    orbit_text += (orbit_text.empty() ? "" : " | ") + std::to_string(orbit.size());
    orbits.push_back(orbit);
  }
  json dj = json::array();
  std::string dtext;
  for (ElementId d : ids) {
    dj.push_back(g.pretty(d));
    dtext += (dtext.empty() ? "" : ", ") + g.pretty(d);
  }
  out.lines.push_back("Duflo involutions of lambda=(2,2): " + dtext);
  out.lines.push_back("rho-conjugacy class sizes: " + orbit_text);
  out.doc = {{"target", "example-6-duflo"}, {"ball", 10}, {"cells", cells}, {"duflo_2_2", dj}, {"rho_orbits", orbits}};
  return 0;
}

int reproduce_universal_cells(const Options& o, Output& out) {
  Options q = o;
  q.group = "univ";
  q.n = 3;
  q.ball = 8;
  Session s(q);
  Group& g = s.group();
  const CellData cd = s.cells(0);
  const auto two = cd.two_sided_classes_in_ball(g);
  json classes = json::array();
  for (int t : two) {
    std::map<char, std::set<int>> by_last;
    for (ElementId w : cd.two_sided.classes[static_cast<std::size_t>(t)].members)
      if (w != g.identity() && g.length(w) <= cd.radius) by_last[g.format(w).back()].insert(cd.left_class(g, w));
    json left = json::object();
    bool by_letter = true;
    for (const auto& [c, ls] : by_last) {
      left[std::string(1, c)] = ls.size();
      by_letter = by_letter && ls.size() == 1;
    }
    std::size_t nleft = 0;
    for (int l : cd.left_classes_in_ball(g))
      if (cd.left_to_two_sided[static_cast<std::size_t>(l)] == t) ++nleft;
    by_letter = by_letter && by_last.size() == nleft;
    const AValue& a = cd.a_values[static_cast<std::size_t>(t)];
    classes.push_back({{"a", a_text(a)}, {"left_classes", nleft}, {"left_classes_by_last_letter", by_letter}});
    out.lines.push_back("two-sided class: a=" + a_text(a) + ", " + std::to_string(nleft) + " left classes" +
                        (by_last.empty() ? "" : by_letter ? ", classified by last letter" : ", NOT by last letter"));
  }
  json duflo = json::array();
  std::string dtext;
  for (const DufloEntry& e : duflo_involutions(s.hecke(), cd)) {
    const std::string d = e.duflo ? g.format(*e.duflo) : "unknown";
    duflo.push_back(d);
    dtext += (dtext.empty() ? "" : ", ") + d;
  }
  out.lines.push_back("Duflo involutions: " + dtext);
  out.doc = {{"target", "universal-cells"}, {"rank", 3}, {"ball", 8}, {"two_sided", classes}, {"duflo", duflo}};
  return 0;
}

int reproduce_dihedral_so3(const Options& o, Output& out) {
  Options q = o;
  q.group = "univ";
  q.n = 2;
  q.ball = 9;
  Session s(q);
  Group& g = s.group();
  const CellData cd = s.cells(0);
  const ElementId sref = s.element("u:1");
  const GammaTable t = jring_structure(s.hecke(), h_cell(g, sref, cd), cd);
  // w_k is the alternating word of length 2k+1; SO(3) fusion t_a t_b = sum_{|a-b|}^{a+b} t_c.
  auto index = [&](ElementId w) { return (g.length(w) - 1) / 2; };
  const int top = static_cast<int>(t.elements.size()) - 1;
  std::size_t certified = 0;
  bool match = true;
  for (const GammaEntry& e : t.entries) {
    if (!e.certified) continue;
    ++certified;
    const int a = index(t.elements[e.i]), b = index(t.elements[e.j]);
    std::set<int> want, got;
    for (int c = std::abs(a - b); c <= std::min(a + b, top); ++c) want.insert(c);
    for (const auto& [z, c] : e.terms) {
      if (c != 1) match = false;
      got.insert(index(z));
    }
    match = match && got == want;
  }
  json rows = gamma_table_json(g, t, out);
  out.lines.push_back("certified entries: " + std::to_string(certified) + ", SO(3) fusion: " + (match ? "yes" : "no"));
  out.doc = {{"target", "dihedral-so3"}, {"ball", 9},  {"a", t.a},
             {"certified_entries", certified}, {"so3_match", match}, {"table", rows}};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Kazhdan-Lusztig cells, asymptotic rings and type A data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--cache-dir", o.cache_dir, std::string("Cache directory (default: $") + KLCache::kEnvVar + ")");
  app.add_option("--threads", o.threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--max-elements", o.max_elements, "Cap on interned group elements");
  app.add_option("--timeout", o.timeout, "Wall-clock limit in seconds (0: none)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", o.quiet, "No progress on stderr");

  auto group_flags = [&](CLI::App* c) {
    c->add_option("--group", o.group, "finA | affA | extA | univ");
    c->add_option("--n", o.n, "Strands (type A) or generators (universal)");
  };
  auto cell_flags = [&](CLI::App* c) {
    group_flags(c);
    c->add_option("--ball", o.ball, "Ball radius");
    c->add_option("--margin", o.margin, "Extra layers for the preorder graphs (default: automatic)");
    c->add_option("--rho-range", o.rho_range, "Extended family: include rho^k, |k| <= range");
  };

  auto* klpoly = app.add_subcommand("klpoly", "KL polynomial h_{y,w}");
  group_flags(klpoly);
  klpoly->add_option("elements", o.elements)->required();
  auto* mult = app.add_subcommand("mult", "Product b_x b_y in the KL basis");
  group_flags(mult);
  mult->add_option("elements", o.elements)->required();
  auto* cells = app.add_subcommand("cells", "Truncated left, right and two-sided cells");
  cell_flags(cells);
  auto* aval = app.add_subcommand("aval", "Certified a-value");
  cell_flags(aval);
  aval->add_option("elements", o.elements)->required();
  auto* gam = app.add_subcommand("gamma", "gamma_{x,y,z}");
  cell_flags(gam);
  gam->add_option("elements", o.elements)->required();
  auto* duflo = app.add_subcommand("duflo", "Duflo involutions of left classes");
  cell_flags(duflo);
  duflo->add_option("--lambda", o.lambda, "Only the two-sided cell of this partition");
  auto* jring = app.add_subcommand("jring", "Asymptotic ring structure constants on an H-cell");
  cell_flags(jring);
  jring->add_option("elements", o.elements)->required();
  auto* fm = app.add_subcommand("fusion-match", "Match an H-cell table with Rep(GL) fusion data");
  cell_flags(fm);
  fm->add_option("elements", o.elements)->required();
  fm->add_option("--levi", o.levi, "Block sizes, e.g. 2 or 1,1");
  fm->add_option("--lambda", o.lambda, "Use the Levi factor attached to this partition");
  fm->add_option("--weight-bound", o.weight_bound, "Largest |entry| of candidate weights");

  auto* verify = app.add_subcommand("verify", "Property sweeps");
  verify->require_subcommand(1);
  std::string verify_target;
  for (const char* t : {"positivity", "gammacan", "frobenius", "separability"}) {
    auto* c = verify->add_subcommand(t);
    c->callback([&verify_target, t] { verify_target = t; });
    cell_flags(c);
    c->add_option("--bound", o.bound, "Largest l(x)+l(y) for positivity (default: ball)");
    c->add_option("--subset", o.subset, "Generator labels, e.g. 1,3");
    c->add_option("--deg-bound", o.deg_bound, "Degree bound for spanning tensors");
  }
  auto* typea = app.add_subcommand("typea", "Type A partition data");
  typea->require_subcommand(1);
  std::string typea_target;
  for (const char* t : {"dual", "nlambda", "pi", "schur"}) {
    auto* c = typea->add_subcommand(t);
    c->callback([&typea_target, t] { typea_target = t; });
    group_flags(c);
    c->add_option("--lambda", o.lambda, "Partition, e.g. 2,2");
    c->add_option("--subset", o.subset, "Generator labels");
    c->add_option("--ds", o.ds, "Cyclic factor orders, e.g. 2,2");
    c->add_option("--torus-rank", o.torus_rank, "Rank of the torus factor");
  }
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce the worked examples");
  reproduce->require_subcommand(1);
  std::string reproduce_target;
  for (const char* t : {"example-6-decomp", "example-6-duflo", "universal-cells", "dihedral-so3"}) {
    auto* c = reproduce->add_subcommand(t);
    c->callback([&reproduce_target, t] { reproduce_target = t; });
  }
  auto* cache = app.add_subcommand("cache", "Cache maintenance");
  cache->require_subcommand(1);
  cache->add_subcommand("roundtrip", "Rewrite, reopen and replay the cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);
  if (o.timeout > 0) {
    const bool json_out = o.format == "json";
    std::thread([timeout = o.timeout, json_out] {
      std::this_thread::sleep_for(std::chrono::duration<double>(timeout));
      if (json_out)
        std::cout << json{{"error", {{"code", "ResourceLimit"}, {"message", "timeout"}}}}.dump(2) << std::endl;
      std::cerr << "error: ResourceLimit: timeout after " << timeout << " s" << std::endl;
      std::_Exit(4);
    }).detach();
  }

  Output out;
  int status = 0;
  try {
    if (klpoly->parsed()) status = run_klpoly(o, out);
    else if (mult->parsed()) status = run_mult(o, out);
    else if (cells->parsed()) status = run_cells(o, out);
    else if (aval->parsed()) status = run_aval(o, out);
    else if (gam->parsed()) status = run_gamma(o, out);
    else if (duflo->parsed()) status = run_duflo(o, out);
    else if (jring->parsed()) status = run_jring(o, out);
    else if (fm->parsed()) status = run_fusion_match(o, out);
    else if (verify->parsed()) status = run_verify(verify_target, o, out);
    else if (typea->parsed()) status = run_typea(typea_target, o, out);
    else if (cache->parsed()) status = run_cache(o, out);
    else if (reproduce_target == "example-6-decomp") status = reproduce_example6_decomp(o, out);
    else if (reproduce_target == "example-6-duflo") status = reproduce_example6_duflo(o, out);
    else if (reproduce_target == "universal-cells") status = reproduce_universal_cells(o, out);
    else status = reproduce_dihedral_so3(o, out);
  } catch (const Error& e) {
    const std::string code(error_code_name(e.code()));
    if (o.format == "json") std::cout << json{{"error", {{"code", code}, {"message", e.what()}}}}.dump(2) << std::endl;
    std::cerr << "error: " << code << ": " << e.what() << std::endl;
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: InvariantViolation: " << e.what() << std::endl;
    return 5;
  }
  if (o.format == "json")
    std::cout << out.doc.dump(2) << std::endl;
  else
    for (const auto& l : out.lines) std::cout << l << '\n';
  std::cout.flush();
  return status;
}
