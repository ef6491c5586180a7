#pragma once

#include "symconv/rootsys.hpp"

#include <memory>
#include <vector>

namespace symconv {

using DatumPtr = std::shared_ptr<const SymmetricPairDatum>;

struct SigmaClassification {
  std::vector<std::size_t> sigma_part;       // Sigma(P, sigma)
  std::vector<std::size_t> sigmatheta_part;  // Sigma(P, sigma theta)
  std::vector<std::size_t> plus_part;        // Sigma(P)_+
  std::vector<std::size_t> minus_part;       // Sigma(P)_-
};

/// A positive system of the datum, identified with a regular chamber vector.
/// Root subsets are sorted lists of indices into datum().roots().
class PositiveSystem {
 public:
  /// Throws NotRegular if some root vanishes on the chamber vector.
  PositiveSystem(DatumPtr datum, QVector chamber);

  const SymmetricPairDatum& datum() const { return *datum_; }
  const DatumPtr& datum_ptr() const { return datum_; }
  const QVector& chamber_vector() const { return chamber_; }
  const std::vector<std::size_t>& positive() const { return positive_; }
  bool contains(std::size_t root) const { return member_[root]; }

  const std::vector<std::size_t>& sigma_part() const { return sigma_part_; }
  const std::vector<std::size_t>& sigmatheta_part() const { return sigmatheta_part_; }

  PositiveSystem opposite() const;
  /// s_alpha P for a root index.
  PositiveSystem reflect(std::size_t root) const;
  /// w P for a Weyl group element acting on a.
  PositiveSystem transform(const QMatrix& w) const;

  friend bool operator==(const PositiveSystem& a, const PositiveSystem& b) {
    return a.positive_ == b.positive_;
  }

 private:
  DatumPtr datum_;
  QVector chamber_;
  std::vector<std::size_t> positive_;
  std::vector<bool> member_;
  std::vector<std::size_t> sigma_part_, sigmatheta_part_;
};

/// Sigma(P, tau) = {alpha in Sigma(P): tau alpha in Sigma(P)}, tau an exact matrix on a.
std::vector<std::size_t> classify(const PositiveSystem& P, const QMatrix& tau);

/// (Sigma(P)_+, Sigma(P)_-). Throws MissingMultiplicity.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> plus_minus(const PositiveSystem& P);
SigmaClassification classification(const PositiveSystem& P);

bool is_h_extreme(const PositiveSystem& P);
bool is_q_extreme(const PositiveSystem& P);

/// Indices of roots alpha with alpha/2 not a root.
std::vector<std::size_t> indivisible(const SymmetricPairDatum& d, const std::vector<std::size_t>& subset);
/// Indivisible positive roots that are not a sum of two positive roots.
std::vector<std::size_t> simple_roots(const PositiveSystem& P);

struct ExtremizeResult {
  PositiveSystem result;
  std::vector<std::size_t> trace;        // root index used at each step
  std::vector<PositiveSystem> chain;     // P_0 = P, P_1, ..., result
};

/// Reflection walk to an h-extreme positive system. Throws NoSimpleRootFound.
ExtremizeResult h_extremize(const PositiveSystem& P);

/// Postconditions (a)-(d) of the existence lemma for the walk result.
bool extremize_postconditions_hold(const PositiveSystem& P, const PositiveSystem& Q);

/// A regular chamber vector with small integer entries.
QVector default_chamber(const SymmetricPairDatum& d);

/// Full Weyl group W(a) of the datum.
WeylGroup full_weyl_group(const SymmetricPairDatum& d);

/// All positive systems, as W(a)-images of the base chamber. Order follows the group enumeration.
std::vector<PositiveSystem> enumerate_positive_systems(const DatumPtr& d, const QVector& base_chamber);

/// Set helpers on sorted index lists.
std::vector<std::size_t> set_minus(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);
std::vector<std::size_t> set_intersection(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);
bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace symconv
