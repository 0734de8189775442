#include "cellkit/kl_table.hpp"

#include <algorithm>
#include <exception>
#include <limits>

#include "cellkit/error.hpp"

namespace cellkit {

LaurentPoly KLColumn::entry(std::size_t i) const {
  std::vector<std::pair<int, Coeff>> pairs;
  int deg = low[i];
  for (std::uint32_t k = offsets[i]; k < offsets[i + 1]; ++k, deg += 2)
    if (coeffs[k] != 0) pairs.emplace_back(deg, coeffs[k]);
  return LaurentPoly::from_pairs(pairs);
}

std::size_t KLColumn::find(ElementId y) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), y);
  if (it == ids.end() || *it != y) return npos;
  return static_cast<std::size_t>(it - ids.begin());
}

namespace {

// Dense accumulator for one column build: a slot per touched element and a
// row of degree buckets per slot.
struct Scratch {
  std::vector<std::int32_t> slot_of;
  std::vector<ElementId> touched;
  std::vector<Coeff> acc;
  int width = 0;

  void begin(std::size_t capacity, int w) {
    if (slot_of.size() < capacity) slot_of.assign(capacity, -1);
    touched.clear();
    acc.clear();
    width = w;
  }
  Coeff* row(ElementId id) {
    std::int32_t& s = slot_of[id];
    if (s < 0) {
      s = static_cast<std::int32_t>(touched.size());
      touched.push_back(id);
      acc.resize(acc.size() + static_cast<std::size_t>(width), 0);
    }
    return acc.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(width);
  }
  void end() {
    for (ElementId id : touched) slot_of[id] = -1;
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

// Adds sign * (column entry i) * v^shift into row (degree offset 1).
void accumulate(Coeff* row, const KLColumn& c, std::size_t i, int shift, Coeff factor) {
  int deg = c.low[i] + shift + 1;
  for (std::uint32_t k = c.offsets[i]; k < c.offsets[i + 1]; ++k, deg += 2) {
    Coeff term = checked::mul(factor, c.coeffs[k]);
    row[deg] = checked::add(row[deg], term);
  }
}

}  // namespace

KLTable::KLTable(Group& group) : group_(group), capacity_(group.max_elements()) {
  columns_ = std::make_unique<std::atomic<KLColumn*>[]>(capacity_);
  for (std::size_t i = 0; i < capacity_; ++i) columns_[i].store(nullptr, std::memory_order_relaxed);
}

KLTable::~KLTable() {
  for (std::size_t i = 0; i < capacity_; ++i) delete columns_[i].load(std::memory_order_relaxed);
}

const KLColumn* KLTable::lookup(ElementId w) const { return columns_[w].load(std::memory_order_acquire); }

bool KLTable::has_column(ElementId w) const { return lookup(w) != nullptr; }

const KLColumn& KLTable::publish(ElementId w, std::unique_ptr<KLColumn> col) {
  KLColumn* expected = nullptr;
  KLColumn* raw = col.get();
  if (columns_[w].compare_exchange_strong(expected, raw, std::memory_order_acq_rel)) {
    col.release();
    count_.fetch_add(1, std::memory_order_relaxed);
    return *raw;
  }
  return *expected;
}

std::unique_ptr<KLColumn> KLTable::compute(ElementId w) {
  Group& g = group_;
  auto col = std::make_unique<KLColumn>();
  const int lw = g.length(w);
  if (lw == 0) {
    col->ids = {w};
    col->offsets = {0, 1};
    col->low = {0};
    col->coeffs = {1};
    return col;
  }
  const int s = g.first_left_descent(w);
  const ElementId v = g.lmul(s, w);
  const KLColumn* cv = lookup(v);
  if (!cv) fail(ErrorCode::InvariantViolation, "KL column of " + g.format(v) + " missing");

  Scratch& sc = scratch();
  const int width = lw + 2;  // degrees -1 .. lw
  sc.begin(capacity_, width);
  for (std::size_t i = 0; i < cv->size(); ++i) {
    ElementId x = cv->ids[i];
    ElementId sx = g.lmul(s, x);
    int shift = g.is_left_descent(s, x) ? -1 : 1;
    accumulate(sc.row(x), *cv, i, shift, 1);
    accumulate(sc.row(sx), *cv, i, 0, 1);
  }
  for (const auto& [z, m] : cv->mu) {
    if (!g.is_left_descent(s, z)) continue;
    const KLColumn* cz = lookup(z);
    if (!cz) fail(ErrorCode::InvariantViolation, "KL column of " + g.format(z) + " missing");
    for (std::size_t j = 0; j < cz->size(); ++j) accumulate(sc.row(cz->ids[j]), *cz, j, 0, -m);
  }

  std::vector<ElementId> ids = sc.touched;
  std::sort(ids.begin(), ids.end());
  col->offsets.push_back(0);
  for (ElementId y : ids) {
    const Coeff* row = sc.row(y);
    int lo = -1;
    int hi = -1;
    for (int d = 0; d < width; ++d) {
      if (row[d] == 0) continue;
      if (lo < 0) lo = d;
      hi = d;
    }
    if (lo < 0) continue;
    const int dlo = lo - 1;
    const int dhi = hi - 1;
    const int gap = lw - g.length(y);
    bool ok = y == w ? (dlo == 0 && dhi == 0 && row[1] == 1) : (dlo >= 1 && dhi <= gap);
    for (int d = lo; d <= hi && ok; ++d)
      if (row[d] != 0 && ((d - 1 - gap) % 2 != 0)) ok = false;
    if (!ok)
      fail(ErrorCode::InvariantViolation,
           "KL coefficient h(" + g.format(y) + ", " + g.format(w) + ") violates degree bounds");
    col->ids.push_back(y);
    col->low.push_back(static_cast<std::int16_t>(dlo));
    for (int d = lo; d <= hi; d += 2) {
      if (row[d] > std::numeric_limits<std::int32_t>::max() || row[d] < std::numeric_limits<std::int32_t>::min())
        fail(ErrorCode::Overflow, "KL coefficient exceeds 32 bits");
      col->coeffs.push_back(static_cast<std::int32_t>(row[d]));
    }
    col->offsets.push_back(static_cast<std::uint32_t>(col->coeffs.size()));
    if (y != w && dlo == 1) col->mu.emplace_back(y, row[2]);
  }
  sc.end();
  return col;
}

const KLColumn& KLTable::build(ElementId w) {
  if (const KLColumn* c = lookup(w)) return *c;
  if (group_.length(w) > 0) {
    const int s = group_.first_left_descent(w);
    const KLColumn& cv = build(group_.lmul(s, w));
    for (const auto& [z, m] : cv.mu)
      if (group_.is_left_descent(s, z)) build(z);
  }
  return publish(w, compute(w));
}

const KLColumn& KLTable::column(ElementId w) {
  if (group_.rho(w) != 0)
    fail(ErrorCode::InvariantViolation, "KL columns are stored for the Coxeter part only");
  return build(w);
}

LaurentPoly KLTable::kl_coefficient(ElementId y, ElementId w) {
  if (group_.rho(y) != group_.rho(w)) return {};
  if (group_.length(y) > group_.length(w)) return {};
  const KLColumn& c = column(group_.coxeter_part(w));
  std::size_t i = c.find(group_.coxeter_part(y));
  if (i == KLColumn::npos) return {};
  return c.entry(i);
}

Coeff KLTable::mu(ElementId z, ElementId w) { return kl_coefficient(z, w).coeff(1); }

std::vector<std::pair<ElementId, LaurentPoly>> KLTable::expansion(ElementId w) {
  const int k = group_.rho(w);
  const KLColumn& c = column(group_.coxeter_part(w));
  std::vector<std::pair<ElementId, LaurentPoly>> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(group_.rho_times(k, c.ids[i]), c.entry(i));
  return out;
}

std::vector<std::pair<ElementId, Coeff>> KLTable::mu_list(ElementId w) {
  const int k = group_.rho(w);
  const KLColumn& c = column(group_.coxeter_part(w));
  if (k == 0) return c.mu;
  std::vector<std::pair<ElementId, Coeff>> out;
  out.reserve(c.mu.size());
  for (const auto& [z, m] : c.mu) out.emplace_back(group_.rho_times(k, z), m);
  return out;
}

std::vector<ElementId> KLTable::prepare_layers(int radius, std::vector<std::size_t>& layer_starts) {
  std::vector<ElementId> ids = group_.ball(radius, 0);
  layer_starts.clear();
  int current = -1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int l = group_.length(ids[i]);
    if (l != current) {
      layer_starts.push_back(i);
      current = l;
    }
    if (l < radius)
      for (int s = 0; s < group_.num_generators(); ++s) group_.lmul(s, ids[i]);
  }
  layer_starts.push_back(ids.size());
  return ids;
}

void KLTable::precompute_serial(int radius) {
  std::vector<std::size_t> starts;
  auto ids = prepare_layers(radius, starts);
  for (ElementId w : ids)
    if (!lookup(w)) publish(w, compute(w));
}

void KLTable::precompute_parallel(int radius) {
  std::vector<std::size_t> starts;
  auto ids = prepare_layers(radius, starts);
  for (std::size_t layer = 0; layer + 1 < starts.size(); ++layer) {
    const auto begin = static_cast<std::ptrdiff_t>(starts[layer]);
    const auto end = static_cast<std::ptrdiff_t>(starts[layer + 1]);
    std::exception_ptr error;
    // Columns of one length depend only on shorter ones.
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      try {
        ElementId w = ids[static_cast<std::size_t>(i)];
        if (!lookup(w)) publish(w, compute(w));
      } catch (...) {
#pragma omp critical(cellkit_kl_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace cellkit
