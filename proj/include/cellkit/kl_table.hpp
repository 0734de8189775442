#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "cellkit/group.hpp"
#include "cellkit/laurent.hpp"

namespace cellkit {

/// One column of the KL change of basis: b_w = sum_y h_{y,w} delta_y, for w in
/// the Coxeter part of the group. The support is exactly the Bruhat interval
/// [e, w].
struct KLColumn {
  std::vector<ElementId> ids;          // sorted ascending
  std::vector<std::uint32_t> offsets;  // ids.size() + 1 entries into coeffs
  std::vector<std::int16_t> low;       // lowest degree of each entry
  std::vector<std::int32_t> coeffs;    // degrees low, low + 2, ...
  std::vector<std::pair<ElementId, Coeff>> mu;  // z < w with mu(z, w) != 0

  std::size_t size() const { return ids.size(); }
  LaurentPoly entry(std::size_t i) const;
  /// Index of y in ids, or npos.
  std::size_t find(ElementId y) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Memo of KL columns for one group session. Columns are built by the
/// classical recursion b_s b_v = b_{sv} + sum_{z < v, sz < z} mu(z, v) b_z
/// carried out in the standard basis, always stripping the smallest left
/// descent. Columns are immutable once published and may be read from any
/// thread; concurrent builders of the same column race benignly.
class KLTable {
 public:
  explicit KLTable(Group& group);
  ~KLTable();
  KLTable(const KLTable&) = delete;
  KLTable& operator=(const KLTable&) = delete;

  Group& group() { return group_; }

  /// h_{y,w}; zero when y is not below w.
  LaurentPoly kl_coefficient(ElementId y, ElementId w);
  /// Coefficient of v in h_{z,w}.
  Coeff mu(ElementId z, ElementId w);

  /// Column of a Coxeter-part element (rho exponent 0), built on demand.
  const KLColumn& column(ElementId coxeter_w);
  /// Full-group standard-basis expansion of b_w (handles rho-twisted w).
  std::vector<std::pair<ElementId, LaurentPoly>> expansion(ElementId w);
  /// mu-list of w as full-group elements z < w with mu(z, w) != 0.
  std::vector<std::pair<ElementId, Coeff>> mu_list(ElementId w);

  bool has_column(ElementId coxeter_w) const;
  std::size_t column_count() const { return count_.load(std::memory_order_relaxed); }

  /// Builds every column of ball(radius), layer by layer. Both variants
  /// produce identical tables; the serial one is the reference.
  void precompute_serial(int radius);
  void precompute_parallel(int radius);

 private:
  std::vector<ElementId> prepare_layers(int radius, std::vector<std::size_t>& layer_starts);
  const KLColumn* lookup(ElementId w) const;
  const KLColumn& build(ElementId w);
  const KLColumn& publish(ElementId w, std::unique_ptr<KLColumn> col);
  std::unique_ptr<KLColumn> compute(ElementId w);

  Group& group_;
  std::unique_ptr<std::atomic<KLColumn*>[]> columns_;
  std::size_t capacity_;
  std::atomic<std::size_t> count_{0};
};

}  // namespace cellkit
