#include "cellkit/group.hpp"

#include <algorithm>
#include <bit>

#include "cellkit/error.hpp"

namespace cellkit {

struct Group::Record {
  Element elem;
  int length = 0;
  int rho = 0;
  std::uint64_t ldesc = 0;
  std::uint64_t rdesc = 0;
  std::unique_ptr<std::atomic<ElementId>[]> links;
};

Group::Group(GroupDescriptor g, std::size_t max_elements)
    : desc_(g), max_elements_(max_elements), labels_(generators(g)) {
  validate(g);
  links_per_record_ = 2 * labels_.size() + 2;
  chunks_.resize(max_elements_ / kChunkSize + 1);
  identity_ = intern(cellkit::identity(g));
}

Group::~Group() = default;

Group::Record& Group::rec(ElementId id) const {
  return chunks_[id >> kChunkBits][id & (kChunkSize - 1)];
}

std::optional<ElementId> Group::find(const Element& e) const {
  std::shared_lock lock(index_mutex_);
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ElementId Group::intern(const Element& e) {
  if (auto hit = find(e)) return *hit;
  std::unique_lock lock(index_mutex_);
  if (auto it = index_.find(e); it != index_.end()) return it->second;
  std::size_t id = size_.load(std::memory_order_relaxed);
  if (id >= max_elements_)
    fail(ErrorCode::ResourceLimit, "group session exceeds the element cap of " + std::to_string(max_elements_));
  auto& chunk = chunks_[id >> kChunkBits];
  if (!chunk) chunk = std::make_unique<Record[]>(kChunkSize);
  Record& r = chunk[id & (kChunkSize - 1)];
  r.elem = e;
  r.length = cellkit::length(desc_, e);
  r.rho = rho_exponent(desc_, e);
  Element inv = desc_.family == Family::Universal ? e : cellkit::inverse(desc_, e);
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    if (has_right_descent(desc_, e, labels_[s])) r.rdesc |= std::uint64_t{1} << s;
    bool left = desc_.family == Family::Universal ? has_left_descent(desc_, e, labels_[s])
                                                  : has_right_descent(desc_, inv, labels_[s]);
    if (left) r.ldesc |= std::uint64_t{1} << s;
  }
  r.links = std::make_unique<std::atomic<ElementId>[]>(links_per_record_);
  for (std::size_t k = 0; k < links_per_record_; ++k) r.links[k].store(kNoElement, std::memory_order_relaxed);
  auto new_id = static_cast<ElementId>(id);
  index_.emplace(e, new_id);
  size_.store(id + 1, std::memory_order_release);
  return new_id;
}

const Element& Group::element(ElementId id) const { return rec(id).elem; }
int Group::length(ElementId id) const { return rec(id).length; }
int Group::rho(ElementId id) const { return rec(id).rho; }
std::uint64_t Group::left_descents(ElementId id) const { return rec(id).ldesc; }
std::uint64_t Group::right_descents(ElementId id) const { return rec(id).rdesc; }

ElementId Group::link(ElementId id, std::size_t which, const std::function<Element()>& make) {
  auto& slot = rec(id).links[which];
  ElementId cached = slot.load(std::memory_order_acquire);
  if (cached != kNoElement) return cached;
  ElementId target = intern(make());
  slot.store(target, std::memory_order_release);
  return target;
}

ElementId Group::lmul(int slot, ElementId id) {
  return link(id, static_cast<std::size_t>(slot),
              [&] { return left_mul_gen(desc_, labels_[static_cast<std::size_t>(slot)], element(id)); });
}

ElementId Group::rmul(ElementId id, int slot) {
  return link(id, labels_.size() + static_cast<std::size_t>(slot),
              [&] { return right_mul_gen(desc_, element(id), labels_[static_cast<std::size_t>(slot)]); });
}

ElementId Group::inverse(ElementId id) {
  return link(id, 2 * labels_.size(), [&] { return cellkit::inverse(desc_, element(id)); });
}

ElementId Group::coxeter_part(ElementId id) {
  if (desc_.family != Family::ExtAffineA || rho(id) == 0) return id;
  return link(id, 2 * labels_.size() + 1,
              [&] { return cellkit::multiply(desc_, rho_power(desc_, -rho(id)), element(id)); });
}

ElementId Group::rho_times(int k, ElementId id) {
  if (k == 0) return id;
  return intern(cellkit::multiply(desc_, rho_power(desc_, k), element(id)));
}

ElementId Group::times_rho(ElementId id, int k) {
  if (k == 0) return id;
  return intern(cellkit::multiply(desc_, element(id), rho_power(desc_, k)));
}

ElementId Group::rho_conjugate(ElementId id, int k) {
  if (k == 0) return id;
  return intern(rho_shift(desc_, element(id), k));
}

ElementId Group::multiply(ElementId a, ElementId b) {
  return intern(cellkit::multiply(desc_, element(a), element(b)));
}

int Group::first_left_descent(ElementId id) const {
  std::uint64_t m = left_descents(id);
  return m == 0 ? -1 : std::countr_zero(m);
}

std::vector<ElementId> Group::ball(int radius, int rho_range) {
  auto elems = cellkit::ball(desc_, radius, max_elements_, rho_range);
  std::vector<ElementId> ids;
  ids.reserve(elems.size());
  for (const auto& e : elems) ids.push_back(intern(e));
  return ids;
}

bool Group::less(ElementId a, ElementId b) const {
  if (a == b) return false;
  int la = length(a);
  int lb = length(b);
  if (la != lb) return la < lb;
  return element(a).form < element(b).form;
}

void Group::sort_canonical(std::vector<ElementId>& ids) const {
  std::sort(ids.begin(), ids.end(), [this](ElementId a, ElementId b) { return less(a, b); });
}

}  // namespace cellkit
