#include "cellkit/hecke.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include "cellkit/error.hpp"

namespace cellkit {

HeckeElt HeckeElt::basis(ElementId w, LaurentPoly c) {
  HeckeElt h;
  h.add(w, c);
  return h;
}

LaurentPoly HeckeElt::coeff(ElementId w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? LaurentPoly{} : it->second;
}

void HeckeElt::add(ElementId w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void HeckeElt::add_scaled(const HeckeElt& other, const LaurentPoly& c) {
  if (c.is_zero()) return;
  for (const auto& [w, p] : other.terms_) add(w, p * c);
}

HeckeElt& HeckeElt::operator+=(const HeckeElt& other) {
  for (const auto& [w, p] : other.terms_) add(w, p);
  return *this;
}

HeckeElt& HeckeElt::operator-=(const HeckeElt& other) {
  for (const auto& [w, p] : other.terms_) add(w, -p);
  return *this;
}

std::vector<std::pair<ElementId, LaurentPoly>> HeckeElt::sorted(const Group& g) const {
  std::vector<std::pair<ElementId, LaurentPoly>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [&g](const auto& a, const auto& b) { return g.less(a.first, b.first); });
  return out;
}

Hecke::Hecke(Group& group) : group_(group), kl_(group) {}

HeckeElt Hecke::mult_by_bs(int slot, const HeckeElt& h) {
  if (slot < 0 || slot >= group_.num_generators())
    fail(ErrorCode::IndexOutOfRange, "generator slot " + std::to_string(slot) + " out of range");
  HeckeElt out;
  const LaurentPoly two = LaurentPoly::quantum_two();
  for (const auto& [w, c] : h.terms()) {
    if (group_.is_left_descent(slot, w)) {
      out.add(w, c * two);
      continue;
    }
    out.add(group_.lmul(slot, w), c);
    for (const auto& [z, m] : kl_.mu_list(w))
      if (group_.is_left_descent(slot, z)) out.add(z, c * m);
  }
  return out;
}

namespace {
std::uint64_t pair_key(ElementId x, ElementId y) { return (std::uint64_t{x} << 32) | y; }
}  // namespace

std::shared_ptr<const HeckeElt> Hecke::memo_find(std::uint64_t key) const {
  std::shared_lock lock(memo_mutex_);
  auto it = memo_.find(key);
  return it == memo_.end() ? nullptr : it->second;
}

void Hecke::memo_store(std::uint64_t key, const HeckeElt& value) {
  auto ptr = std::make_shared<const HeckeElt>(value);
  std::unique_lock lock(memo_mutex_);
  memo_.try_emplace(key, std::move(ptr));
}

std::size_t Hecke::memo_size() const {
  std::shared_lock lock(memo_mutex_);
  return memo_.size();
}

void Hecke::clear_memo() {
  std::unique_lock lock(memo_mutex_);
  memo_.clear();
}

HeckeElt Hecke::mult_kl(ElementId x, ElementId y) {
  if (group_.length(x) <= group_.length(y)) return product(x, y);
  // b_x b_y is the image of b_{y^-1} b_{x^-1} under the anti-involution
  // b_w -> b_{w^-1}; this keeps the recursion on the shorter factor.
  HeckeElt flipped = product(group_.inverse(y), group_.inverse(x));
  HeckeElt out;
  for (const auto& [z, c] : flipped.terms()) out.add(group_.inverse(z), c);
  return out;
}

HeckeElt Hecke::product(ElementId x, ElementId y) {
  const std::uint64_t key = pair_key(x, y);
  if (auto hit = memo_find(key)) return *hit;
  HeckeElt result;
  if (group_.length(x) == 0) {
    result = HeckeElt::basis(group_.multiply(x, y));
  } else {
    const int s = group_.first_left_descent(x);
    const ElementId sx = group_.lmul(s, x);
    result = mult_by_bs(s, product(sx, y));
    for (const auto& [z, m] : kl_.mu_list(sx))
      if (group_.is_left_descent(s, z)) result.add_scaled(product(z, y), LaurentPoly(-m));
  }
  memo_store(key, result);
  return result;
}

HeckeElt Hecke::mult_extended(ElementId a, ElementId b) {
  if (group_.descriptor().family != Family::ExtAffineA)
    fail(ErrorCode::UnsupportedFamily, "mult_extended needs the extended affine family");
  const int k = group_.rho(a);
  const int m = group_.rho(b);
  const ElementId x = group_.rho_conjugate(group_.coxeter_part(a), -m);
  const ElementId y = group_.coxeter_part(b);
  HeckeElt core = mult_kl(x, y);
  HeckeElt out;
  for (const auto& [z, c] : core.terms()) out.add(group_.rho_times(k + m, z), c);
  return out;
}

namespace {

// Standard-basis vector ordered by (length, id) so the longest term is last.
using StdVec = std::map<std::pair<int, ElementId>, LaurentPoly>;

void std_add(StdVec& v, const Group& g, ElementId w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = v.try_emplace({g.length(w), w}, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) v.erase(it);
}

// delta_s * v, using delta_s^2 = 1 + (v^-1 - v) delta_s.
StdVec delta_s_times(Group& g, int slot, const StdVec& vec) {
  StdVec out;
  const LaurentPoly diff = LaurentPoly::monomial(-1) - LaurentPoly::monomial(1);
  for (const auto& [key, c] : vec) {
    ElementId w = key.second;
    std_add(out, g, g.lmul(slot, w), c);
    if (g.is_left_descent(slot, w)) std_add(out, g, w, c * diff);
  }
  return out;
}

}  // namespace

HeckeElt Hecke::mult_standard_oracle(ElementId x, ElementId y) {
  if (group_.length(x) + group_.length(y) > oracle_bound_)
    fail(ErrorCode::ResourceLimit, "standard-basis oracle limited to total length " + std::to_string(oracle_bound_));
  const GroupDescriptor& desc = group_.descriptor();
  StdVec by;
  for (const auto& [u, c] : kl_.expansion(y)) std_add(by, group_, u, c);

  StdVec total;
  for (const auto& [u, c] : kl_.expansion(x)) {
    Word rex = reduced_word(desc, group_.element(u));
    StdVec cur = by;
    for (auto it = rex.letters.rbegin(); it != rex.letters.rend(); ++it)
      cur = delta_s_times(group_, group_.slot(*it), cur);
    for (const auto& [key, p] : cur) std_add(total, group_, group_.rho_times(rex.rho, key.second), p * c);
  }

  HeckeElt out;
  while (!total.empty()) {
    auto top = std::prev(total.end());
    const ElementId z = top->first.second;
    const LaurentPoly c = top->second;
    out.add(z, c);
    for (const auto& [u, h] : kl_.expansion(z)) std_add(total, group_, u, -(h * c));
    if (!total.empty() && std::prev(total.end())->first.second == z)
      fail(ErrorCode::InvariantViolation, "standard-basis peeling did not remove the leading term");
  }
  return out;
}

HeckeElt Hecke::multiply(const HeckeElt& a, const HeckeElt& b) {
  HeckeElt out;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) out.add_scaled(mult_kl(x, y), cx * cy);
  return out;
}

std::vector<HeckeElt> Hecke::mult_batch_serial(const std::vector<std::pair<ElementId, ElementId>>& pairs) {
  std::vector<HeckeElt> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = mult_kl(pairs[i].first, pairs[i].second);
  return out;
}

std::vector<HeckeElt> Hecke::mult_batch_parallel(const std::vector<std::pair<ElementId, ElementId>>& pairs) {
  std::vector<HeckeElt> out(pairs.size());
  std::exception_ptr error;
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = mult_kl(x, y);
    } catch (...) {
#pragma omp critical(cellkit_hecke_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace cellkit
