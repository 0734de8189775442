#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "cellkit/coxeter.hpp"

namespace cellkit {

using ElementId = std::uint32_t;
inline constexpr ElementId kNoElement = 0xffffffffu;

/// Intern table for one group: canonical form <-> dense integer id, plus
/// cached lengths, descents and generator multiplication links.
///
/// Lookups are lock-free once an id is known; inserts are serialized by a
/// mutex. Records never move, so references returned by element() stay valid
/// for the lifetime of the session.
class Group {
 public:
  explicit Group(GroupDescriptor g, std::size_t max_elements = 200000);
  ~Group();
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const GroupDescriptor& descriptor() const { return desc_; }
  std::size_t max_elements() const { return max_elements_; }
  std::size_t size() const { return size_.load(std::memory_order_acquire); }

  ElementId intern(const Element& e);
  std::optional<ElementId> find(const Element& e) const;
  ElementId identity() const { return identity_; }

  const Element& element(ElementId id) const;
  int length(ElementId id) const;
  int rho(ElementId id) const;

  /// Generator labels and their dense slot numbers (0..num_generators-1).
  int num_generators() const { return static_cast<int>(labels_.size()); }
  int label(int slot) const { return labels_[static_cast<std::size_t>(slot)]; }
  int slot(int label) const { return generator_slot(desc_, label); }

  ElementId lmul(int slot, ElementId id);
  ElementId rmul(ElementId id, int slot);
  ElementId inverse(ElementId id);
  /// rho^k * w (extended family; k = 0 is the identity map elsewhere).
  ElementId rho_times(int k, ElementId id);
  /// w * rho^k
  ElementId times_rho(ElementId id, int k);
  /// x with w = rho^k x and x in the Coxeter part.
  ElementId coxeter_part(ElementId id);
  /// rho^k x rho^-k
  ElementId rho_conjugate(ElementId id, int k);
  ElementId multiply(ElementId a, ElementId b);

  /// Bit s set iff generator slot s is a left (right) descent.
  std::uint64_t left_descents(ElementId id) const;
  std::uint64_t right_descents(ElementId id) const;
  bool is_left_descent(int slot, ElementId id) const { return (left_descents(id) >> slot) & 1u; }
  bool is_right_descent(ElementId id, int slot) const { return (right_descents(id) >> slot) & 1u; }

  /// Interns ball(radius) and returns its ids in canonical order.
  std::vector<ElementId> ball(int radius, int rho_range = 0);

  /// Smallest left descent slot, or -1 at length 0.
  int first_left_descent(ElementId id) const;

  bool less(ElementId a, ElementId b) const;
  void sort_canonical(std::vector<ElementId>& ids) const;
  std::string format(ElementId id) const { return format_element(desc_, element(id)); }
  std::string pretty(ElementId id) const { return pretty_element(desc_, element(id)); }

 private:
  struct Record;
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;

  Record& rec(ElementId id) const;
  ElementId link(ElementId id, std::size_t which, const std::function<Element()>& make);

  GroupDescriptor desc_;
  std::size_t max_elements_;
  std::vector<int> labels_;
  std::size_t links_per_record_;
  std::vector<std::unique_ptr<Record[]>> chunks_;
  std::atomic<std::size_t> size_{0};
  mutable std::shared_mutex index_mutex_;
  std::unordered_map<Element, ElementId, ElementHash> index_;
  ElementId identity_ = kNoElement;
};

}  // namespace cellkit
