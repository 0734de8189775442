#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cellkit/coxeter.hpp"
#include "cellkit/laurent.hpp"

namespace cellkit {

class Hecke;

struct KLRecord {
  GroupDescriptor group;
  std::string y;
  std::string w;
  LaurentPoly h;
};

struct ProductRecord {
  GroupDescriptor group;
  std::string x;
  std::string y;
  std::vector<std::pair<std::string, LaurentPoly>> terms;  // canonical order
};

std::string format_record(const KLRecord& r);
std::string format_record(const ProductRecord& r);
/// Parses one cache line; anything other than the exact canonical encoding is
/// a FormatViolation that names the file and line.
KLRecord parse_kl_record(std::string_view line, std::string_view where);
ProductRecord parse_product_record(std::string_view line, std::string_view where);

/// Append-only on-disk memo of KL coefficients ("kl.jsonl") and KL-basis
/// products ("products.jsonl"), keyed by group and canonical element text.
class KLCache {
 public:
  static constexpr const char* kKLFile = "kl.jsonl";
  static constexpr const char* kProductFile = "products.jsonl";
  /// Environment variable naming the default cache directory.
  static constexpr const char* kEnvVar = "CELLKIT_CACHE_DIR";

  /// Creates the directory if needed and loads (and validates) existing records.
  explicit KLCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<LaurentPoly> find_kl(const GroupDescriptor& g, const std::string& y, const std::string& w) const;
  const ProductRecord* find_product(const GroupDescriptor& g, const std::string& x, const std::string& y) const;

  /// Appends unless an equal key is already present.
  void put(const KLRecord& r);
  void put(const ProductRecord& r);

  const std::vector<KLRecord>& kl_records() const { return kl_; }
  const std::vector<ProductRecord>& product_records() const { return products_; }

 private:
  using Key = std::tuple<int, int, std::string, std::string>;
  static Key key(const GroupDescriptor& g, const std::string& a, const std::string& b);
  void append(const char* file, const std::string& line);

  std::filesystem::path dir_;
  std::vector<KLRecord> kl_;
  std::vector<ProductRecord> products_;
  std::map<Key, std::size_t> kl_index_;
  std::map<Key, std::size_t> product_index_;
};

/// Recomputes a record from scratch with a fresh session.
KLRecord compute_kl_record(Hecke& engine, const std::string& y, const std::string& w);
ProductRecord compute_product_record(Hecke& engine, const std::string& x, const std::string& y);

struct CacheReport {
  std::size_t kl_records = 0;
  std::size_t product_records = 0;
  std::size_t replayed = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Loads the cache in dir, rewrites both files, reopens them, and replays up
/// to `samples` randomly chosen records against fresh recomputation.
CacheReport cache_roundtrip(const std::filesystem::path& dir, std::uint64_t seed = 1, std::size_t samples = 100);

}  // namespace cellkit
