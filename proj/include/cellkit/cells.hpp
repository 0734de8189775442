#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cellkit/group.hpp"
#include "cellkit/hecke.hpp"
#include "cellkit/report.hpp"

namespace cellkit {

/// One equivalence class of a truncated cell preorder.
struct CellClass {
  std::vector<ElementId> members;  // canonical order, all inside the computation ball
  /// No preorder edge of any member leaves the computation ball.
  bool complete = false;
};

struct CellPartition {
  std::vector<CellClass> classes;  // ordered by their canonically smallest member
  std::map<ElementId, int> class_of;

  int find(ElementId id) const;  // -1 when outside the computation ball
};

/// Certified bounds for the a-function on one two-sided class.
struct AValue {
  int lower = 0;
  int upper = INT_MAX;
  ElementId lower_witness = kNoElement;  // involution d giving the bound via h_{d,d,d}
  ElementId upper_witness = kNoElement;  // element z with Delta(z) = upper
  bool exact() const { return lower == upper; }
};

/// Largest outer ball the default margin will grow to.
inline constexpr std::size_t kDefaultOuterBudget = 20000;

struct CellOptions {
  int radius = 6;
  /// Extra layers used to build the preorder graphs; negative picks the
  /// default (radius, shrunk to stay within kDefaultOuterBudget elements).
  int margin = -1;
  /// Merge classes that are comparable and share a certified a-value.
  bool merge_comparable = true;
  bool parallel = true;
  /// Extended family: the reported ball holds rho^k x with |k| <= rho_range.
  int rho_range = 0;
};

/// Ball-truncated left, right and two-sided cells with their a-values. For
/// the extended family the data is computed on the Coxeter part; the
/// accessors below map rho-twisted elements onto it.
struct CellData {
  GroupDescriptor group;
  int radius = 0;
  int margin = 0;
  int rho_range = 0;
  std::vector<ElementId> ball;   // ball(radius, rho_range), canonical order
  std::vector<ElementId> outer;  // Coxeter part of ball(radius + margin)
  CellPartition left;
  CellPartition right;
  CellPartition two_sided;
  std::vector<AValue> a_values;                    // per two-sided class
  std::vector<int> left_to_two_sided;              // per left class
  std::vector<ElementId> duflo_candidate;          // per left class, kNoElement if none
  std::map<ElementId, int> delta;                  // Delta(z) = lowest degree of h_{e,z}

  int left_class(Group& g, ElementId w) const;
  int right_class(Group& g, ElementId w) const;
  int two_sided_class(Group& g, ElementId w) const;
  /// Left classes with at least one member of length <= radius.
  std::vector<int> left_classes_in_ball(const Group& g) const;
  std::vector<int> two_sided_classes_in_ball(const Group& g) const;
};

CellData cell_partition(Hecke& hk, const CellOptions& options);

/// Exact a(z); TruncationInsufficient when the certified bounds differ or z
/// lies outside the computed ball.
int a_value(Group& g, ElementId z, const CellData& cd);
/// gamma_{x,y,z}: the coefficient of v^{-a(z^-1)} in h_{x,y,z^-1}.
Coeff gamma(Hecke& hk, ElementId x, ElementId y, ElementId z, const CellData& cd);

struct DufloEntry {
  int left_class = -1;
  std::optional<ElementId> duflo;  // empty: unknown
  std::size_t tested = 0;          // number of x checked with gamma_{x^-1,x,d} = 1
  std::string note;
};

/// Certifies the Duflo involution of every left class that meets ball(radius).
std::vector<DufloEntry> duflo_involutions(Hecke& hk, const CellData& cd);

/// Structure constants t_x t_y = sum_z gamma_{x,y,z^-1} t_z on an H-cell.
struct GammaEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::pair<ElementId, Coeff>> terms;  // canonical order of z
  bool certified = false;  // every z with nonzero gamma lies in the ball
};

struct GammaTable {
  int a = 0;
  std::vector<ElementId> elements;  // canonical order
  std::vector<GammaEntry> entries;  // row-major, elements.size()^2
  const GammaEntry& at(std::size_t i, std::size_t j) const { return entries[i * elements.size() + j]; }
  std::optional<std::size_t> index_of(ElementId id) const;
};

/// The diagonal H-cell (left class of d intersected with its inverse) inside the ball.
std::vector<ElementId> h_cell(Group& g, ElementId d, const CellData& cd);
GammaTable jring_structure(Hecke& hk, const std::vector<ElementId>& h, const CellData& cd);

/// Products b_x b_y for x, y in ball(radius) with l(x) + l(y) <= bound.
using ProductTable = std::map<std::pair<ElementId, ElementId>, HeckeElt>;
ProductTable collect_products(Hecke& hk, const CellData& cd, int bound, bool parallel = true);

/// Bar-invariance, nonnegativity, the lower degree bound -a(z), gamma
/// cyclicity, the inverse symmetry and P2 on every triple of the table.
Report verify_positivity_properties(Hecke& hk, const CellData& cd, const ProductTable& table);

/// h_{x,y,z} = pi(I) gamma_{x,y,z^-1} on every in-ball triple of the H-cell of w_I.
Report verify_gammacan(Hecke& hk, const std::vector<int>& subset, const CellData& cd);

}  // namespace cellkit
