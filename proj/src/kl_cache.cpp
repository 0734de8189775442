#include "cellkit/kl_cache.hpp"

#include <fstream>
#include <memory>
#include <random>

#include <json.hpp>

#include "cellkit/error.hpp"
#include "cellkit/hecke.hpp"

namespace cellkit {

namespace {

using ojson = nlohmann::ordered_json;

ojson pairs_json(const LaurentPoly& p) {
  ojson arr = ojson::array();
  for (const auto& [d, c] : p.to_pairs()) arr.push_back(ojson::array({d, c}));
  return arr;
}

[[noreturn]] void violation(std::string_view where, const std::string& what) {
  fail(ErrorCode::FormatViolation, std::string(where) + ": " + what);
}

LaurentPoly parse_pairs(const ojson& j, std::string_view where) {
  if (!j.is_array()) violation(where, "\"h\" must be an array of [degree, coefficient] pairs");
  std::vector<std::pair<int, Coeff>> pairs;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() || !item[1].is_number_integer())
      violation(where, "malformed [degree, coefficient] pair");
    pairs.emplace_back(item[0].get<int>(), item[1].get<Coeff>());
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].second == 0) violation(where, "zero coefficient stored");
    if (i > 0 && pairs[i].first <= pairs[i - 1].first) violation(where, "degrees not strictly ascending");
  }
  return LaurentPoly::from_pairs(pairs);
}

GroupDescriptor parse_group(const ojson& j, std::string_view where) {
  if (!j["g"].is_string() || !j["n"].is_number_integer()) violation(where, "bad group fields");
  try {
    GroupDescriptor g{parse_family(j["g"].get<std::string>()), j["n"].get<int>()};
    validate(g);
    return g;
  } catch (const Error& e) {
    violation(where, e.what());
  }
}

// Element texts must parse and, when written as words, be reduced. They are
// kept verbatim so that lines re-encode byte for byte.
void check_element(const GroupDescriptor& g, const ojson& j, std::string_view where) {
  if (!j.is_string()) violation(where, "element must be a string");
  std::string text = j.get<std::string>();
  try {
    Element e = parse_element(g, text);
    if (text.starts_with("w:") || text.starts_with("u:")) {
      Word word = parse_word(g, std::string_view(text).substr(2));
      if (static_cast<int>(word.letters.size()) != length(g, e))
        violation(where, "element '" + text + "' is not a reduced word");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatViolation) throw;
    violation(where, e.what());
  }
}

std::string canonical(const GroupDescriptor& g, const std::string& text) {
  return format_element(g, parse_element(g, text));
}

ojson parse_object(std::string_view line, std::string_view where, const std::vector<std::string>& keys) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const std::exception&) {
    violation(where, "not a single JSON object");
  }
  if (!j.is_object() || j.size() != keys.size()) violation(where, "unexpected record shape");
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i)
    if (it.key() != keys[i]) violation(where, "unexpected key '" + it.key() + "'");
  return j;
}

}  // namespace

std::string format_record(const KLRecord& r) {
  ojson j;
  j["g"] = std::string(family_tag(r.group.family));
  j["n"] = r.group.n;
  j["y"] = r.y;
  j["w"] = r.w;
  j["h"] = pairs_json(r.h);
  return j.dump();
}

std::string format_record(const ProductRecord& r) {
  ojson j;
  j["g"] = std::string(family_tag(r.group.family));
  j["n"] = r.group.n;
  j["x"] = r.x;
  j["y"] = r.y;
  ojson terms = ojson::array();
  for (const auto& [z, h] : r.terms) {
    ojson t;
    t["z"] = z;
    t["h"] = pairs_json(h);
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j.dump();
}

KLRecord parse_kl_record(std::string_view line, std::string_view where) {
  ojson j = parse_object(line, where, {"g", "n", "y", "w", "h"});
  KLRecord r;
  r.group = parse_group(j, where);
  check_element(r.group, j["y"], where);
  check_element(r.group, j["w"], where);
  r.y = j["y"].get<std::string>();
  r.w = j["w"].get<std::string>();
  r.h = parse_pairs(j["h"], where);
  if (format_record(r) != line) violation(where, "record is not in canonical encoding");
  return r;
}

ProductRecord parse_product_record(std::string_view line, std::string_view where) {
  ojson j = parse_object(line, where, {"g", "n", "x", "y", "terms"});
  ProductRecord r;
  r.group = parse_group(j, where);
  check_element(r.group, j["x"], where);
  check_element(r.group, j["y"], where);
  r.x = j["x"].get<std::string>();
  r.y = j["y"].get<std::string>();
  if (!j["terms"].is_array()) violation(where, "\"terms\" must be an array");
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || t.size() != 2 || !t.contains("z") || !t.contains("h"))
      violation(where, "malformed product term");
    check_element(r.group, t["z"], where);
    LaurentPoly h = parse_pairs(t["h"], where);
    if (h.is_zero()) violation(where, "zero product term stored");
    r.terms.emplace_back(t["z"].get<std::string>(), h);
  }
  if (format_record(r) != line) violation(where, "record is not in canonical encoding");
  return r;
}

KLCache::Key KLCache::key(const GroupDescriptor& g, const std::string& a, const std::string& b) {
  return {static_cast<int>(g.family), g.n, canonical(g, a), canonical(g, b)};
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::vector<std::string> lines;
  if (!std::filesystem::exists(file)) return lines;
  std::ifstream in(file);
  if (!in) fail(ErrorCode::IoFailure, "cannot read " + file.string());
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) fail(ErrorCode::IoFailure, "cannot create cache directory " + dir.string());
}

}  // namespace

KLCache::KLCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  ensure_dir(dir_);
  auto kl_lines = read_lines(dir_ / kKLFile);
  for (std::size_t i = 0; i < kl_lines.size(); ++i) {
    std::string where = (dir_ / kKLFile).string() + " line " + std::to_string(i + 1);
    KLRecord r = parse_kl_record(kl_lines[i], where);
    if (kl_index_.emplace(key(r.group, r.y, r.w), kl_.size()).second) kl_.push_back(std::move(r));
  }
  auto product_lines = read_lines(dir_ / kProductFile);
  for (std::size_t i = 0; i < product_lines.size(); ++i) {
    std::string where = (dir_ / kProductFile).string() + " line " + std::to_string(i + 1);
    ProductRecord r = parse_product_record(product_lines[i], where);
    if (product_index_.emplace(key(r.group, r.x, r.y), products_.size()).second) products_.push_back(std::move(r));
  }
}

std::optional<LaurentPoly> KLCache::find_kl(const GroupDescriptor& g, const std::string& y, const std::string& w) const {
  auto it = kl_index_.find(key(g, y, w));
  if (it == kl_index_.end()) return std::nullopt;
  return kl_[it->second].h;
}

const ProductRecord* KLCache::find_product(const GroupDescriptor& g, const std::string& x, const std::string& y) const {
  auto it = product_index_.find(key(g, x, y));
  return it == product_index_.end() ? nullptr : &products_[it->second];
}

void KLCache::append(const char* file, const std::string& line) {
  std::ofstream out(dir_ / file, std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) fail(ErrorCode::IoFailure, "cannot append to " + (dir_ / file).string());
}

void KLCache::put(const KLRecord& r) {
  if (!kl_index_.emplace(key(r.group, r.y, r.w), kl_.size()).second) return;
  kl_.push_back(r);
  append(kKLFile, format_record(r));
}

void KLCache::put(const ProductRecord& r) {
  if (!product_index_.emplace(key(r.group, r.x, r.y), products_.size()).second) return;
  products_.push_back(r);
  append(kProductFile, format_record(r));
}

KLRecord compute_kl_record(Hecke& engine, const std::string& y, const std::string& w) {
  Group& g = engine.group();
  const GroupDescriptor& desc = g.descriptor();
  ElementId yi = g.intern(parse_element(desc, y));
  ElementId wi = g.intern(parse_element(desc, w));
  return {desc, y, w, engine.kl().kl_coefficient(yi, wi)};
}

ProductRecord compute_product_record(Hecke& engine, const std::string& x, const std::string& y) {
  Group& g = engine.group();
  const GroupDescriptor& desc = g.descriptor();
  ElementId xi = g.intern(parse_element(desc, x));
  ElementId yi = g.intern(parse_element(desc, y));
  ProductRecord r{desc, x, y, {}};
  for (const auto& [z, c] : engine.mult_kl(xi, yi).sorted(g)) r.terms.emplace_back(g.format(z), c);
  return r;
}

CacheReport cache_roundtrip(const std::filesystem::path& dir, std::uint64_t seed, std::size_t samples) {
  std::vector<std::string> kl_lines;
  std::vector<std::string> product_lines;
  {
    KLCache cache(dir);
    for (const auto& r : cache.kl_records()) kl_lines.push_back(format_record(r));
    for (const auto& r : cache.product_records()) product_lines.push_back(format_record(r));
  }
  auto rewrite = [&](const char* name, const std::vector<std::string>& lines) {
    auto tmp = dir / (std::string(name) + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      for (const auto& l : lines) out << l << '\n';
      if (!out) fail(ErrorCode::IoFailure, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dir / name, ec);
    if (ec) fail(ErrorCode::IoFailure, "cannot replace " + (dir / name).string());
  };
  rewrite(KLCache::kKLFile, kl_lines);
  rewrite(KLCache::kProductFile, product_lines);

  CacheReport report;
  KLCache reopened(dir);
  report.kl_records = reopened.kl_records().size();
  report.product_records = reopened.product_records().size();
  if (report.kl_records != kl_lines.size() || report.product_records != product_lines.size())
    report.mismatches.push_back("record count changed on reopen");

  std::vector<std::pair<bool, std::size_t>> pool;
  for (std::size_t i = 0; i < report.kl_records; ++i) pool.emplace_back(true, i);
  for (std::size_t i = 0; i < report.product_records; ++i) pool.emplace_back(false, i);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > samples) pool.resize(samples);

  std::map<std::pair<int, int>, std::pair<std::unique_ptr<Group>, std::unique_ptr<Hecke>>> sessions;
  auto engine_for = [&](const GroupDescriptor& g) -> Hecke& {
    auto& slot = sessions[{static_cast<int>(g.family), g.n}];
    if (!slot.first) {
      slot.first = std::make_unique<Group>(g);
      slot.second = std::make_unique<Hecke>(*slot.first);
    }
    return *slot.second;
  };
  for (const auto& [is_kl, i] : pool) {
    std::string stored, fresh;
    if (is_kl) {
      const auto& r = reopened.kl_records()[i];
      stored = format_record(r);
      fresh = format_record(compute_kl_record(engine_for(r.group), r.y, r.w));
      if (stored != kl_lines[i]) report.mismatches.push_back("reopened line differs: " + stored);
    } else {
      const auto& r = reopened.product_records()[i];
      stored = format_record(r);
      fresh = format_record(compute_product_record(engine_for(r.group), r.x, r.y));
      if (stored != product_lines[i]) report.mismatches.push_back("reopened line differs: " + stored);
    }
    ++report.replayed;
    if (stored != fresh) report.mismatches.push_back("replay differs: cached " + stored + " recomputed " + fresh);
  }
  return report;
}

}  // namespace cellkit
