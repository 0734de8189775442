#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cellkit/group.hpp"
#include "cellkit/kl_table.hpp"
#include "cellkit/laurent.hpp"

namespace cellkit {

/// Finite Z[v,v^-1]-combination of KL basis elements b_w. Zero coefficients
/// are never stored.
class HeckeElt {
 public:
  using Map = std::map<ElementId, LaurentPoly>;

  HeckeElt() = default;
  static HeckeElt basis(ElementId w, LaurentPoly c = LaurentPoly(1));

  const Map& terms() const& { return terms_; }
  Map terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  LaurentPoly coeff(ElementId w) const;

  void add(ElementId w, const LaurentPoly& c);
  void add_scaled(const HeckeElt& other, const LaurentPoly& c);
  HeckeElt& operator+=(const HeckeElt& other);
  HeckeElt& operator-=(const HeckeElt& other);
  bool operator==(const HeckeElt&) const = default;

  /// Terms in canonical element order (length, then form).
  std::vector<std::pair<ElementId, LaurentPoly>> sorted(const Group& g) const;

 private:
  Map terms_;
};

/// KL-basis arithmetic for one group session. All products are memoized on
/// (x, y); memo reads are concurrent and writes synchronized, so independent
/// products may be computed from several threads.
class Hecke {
 public:
  explicit Hecke(Group& group);

  Group& group() { return group_; }
  KLTable& kl() { return kl_; }

  /// b_s * h
  HeckeElt mult_by_bs(int slot, const HeckeElt& h);
  /// b_x * b_y
  HeckeElt mult_kl(ElementId x, ElementId y);
  /// b_{rho^k x} * b_{rho^m y} through the twist of x by rho^-m; extended family only.
  HeckeElt mult_extended(ElementId a, ElementId b);
  /// The same product computed in the standard basis and converted back.
  HeckeElt mult_standard_oracle(ElementId x, ElementId y);
  HeckeElt multiply(const HeckeElt& a, const HeckeElt& b);

  /// b_x * b_y for many pairs; the parallel variant uses OpenMP, the serial
  /// one is the reference. Results are identical.
  std::vector<HeckeElt> mult_batch_serial(const std::vector<std::pair<ElementId, ElementId>>& pairs);
  std::vector<HeckeElt> mult_batch_parallel(const std::vector<std::pair<ElementId, ElementId>>& pairs);

  /// Largest l(x) + l(y) accepted by the standard-basis oracle.
  void set_oracle_bound(int bound) { oracle_bound_ = bound; }
  std::size_t memo_size() const;
  void clear_memo();

 private:
  HeckeElt product(ElementId x, ElementId y);
  std::shared_ptr<const HeckeElt> memo_find(std::uint64_t key) const;
  void memo_store(std::uint64_t key, const HeckeElt& value);

  Group& group_;
  KLTable kl_;
  int oracle_bound_ = 24;
  mutable std::shared_mutex memo_mutex_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const HeckeElt>> memo_;
};

}  // namespace cellkit
