#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cellkit/coxeter.hpp"
#include "cellkit/group.hpp"
#include "cellkit/laurent.hpp"

namespace cellkit {

struct CellData;
struct GammaTable;

/// Weakly decreasing positive parts.
using Partition = std::vector<int>;

void validate_partition(const Partition& p);
int partition_size(const Partition& p);
/// All partitions of n, in reverse lexicographic order ((n) first).
std::vector<Partition> partitions_of(int n);
Partition dual_partition(const Partition& p);
/// n! / (mu_1! ... mu_r!) for mu the dual of lambda.
std::uint64_t n_lambda(const Partition& lambda, int n);
/// Standard Young tableaux of the shape, by the hook length formula.
std::uint64_t syt_count(const Partition& p);
std::string format_partition(const Partition& p);
Partition parse_partition(const std::string& text);

struct ParabolicData {
  std::vector<int> subset;  // generator labels of S_lambda
  Element longest;          // w_lambda in the given group
  int a = 0;                // sum of binomial(lambda_i, 2)
};

/// Young subgroup data of lambda inside a type A group on |lambda| strands.
ParabolicData parabolic_data(const Partition& lambda, const GroupDescriptor& g);

/// v^{l(w_I)} sum_{w in W_I} v^{-2 l(w)}
LaurentPoly pi_I(const GroupDescriptor& g, const std::vector<int>& subset);

/// Two-sided class of w_lambda in the computed cells; -1 when not in the ball.
int two_sided_class_of(Group& g, const Partition& lambda, const CellData& cd);
/// Right descents contained in {s_0} and membership in J_lambda.
bool canonical_cell_member(Group& g, ElementId w, const Partition& lambda, const CellData& cd);

/// Row-insertion RSK of a sequence of distinct integers.
struct RSKResult {
  std::vector<std::vector<int>> insertion;
  std::vector<std::vector<int>> recording;
  Partition shape() const;
};
RSKResult rsk(const std::vector<int>& word);

/// Littlewood-Richardson coefficient c^lambda_{mu,nu}.
std::uint64_t lr_coeff(const Partition& mu, const Partition& nu, const Partition& lambda);

/// Multiplicities [m_1, ..., m_k] of the Levi factor GL(m_1) x ... x GL(m_k).
using LeviDescriptor = std::vector<int>;
/// One weakly decreasing integer vector per factor.
using Weight = std::vector<std::vector<int>>;

std::string format_weight(const Weight& w);
Weight trivial_weight(const LeviDescriptor& f);
void validate_weight(const LeviDescriptor& f, const Weight& w);
/// Tensor product decomposition, as weight -> multiplicity.
std::map<Weight, std::uint64_t> fusion_tensor(const LeviDescriptor& f, const Weight& x, const Weight& y);
/// Dimension of the irreducible representation with this highest weight.
std::uint64_t weight_dimension(const Weight& w);
/// Levi factor F_lambda: the multiplicities of the distinct parts of lambda.
LeviDescriptor levi_of(const Partition& lambda);

struct FusionMatch {
  std::vector<std::pair<ElementId, Weight>> assignment;  // in table order
  std::size_t certified_entries = 0;
};

/// Searches for an injection of the table's elements into dominant weights of
/// f taking the unit to the trivial weight and every certified entry to the
/// tensor product decomposition. Empty when there is none within the weight
/// bound (entries of absolute value at most `bound`).
std::optional<FusionMatch> fusion_match(const GammaTable& table, const LeviDescriptor& f, int bound = 4);

/// Schur multiplier H^2(A, G_m) of A = Z/d_1 x ... x Z/d_r: gcds over pairs, ones dropped.
std::vector<std::int64_t> schur_multiplier_torus(int torus_rank, const std::vector<std::int64_t>& ds);

}  // namespace cellkit
