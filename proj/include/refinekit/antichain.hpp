#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "refinekit/normalization.hpp"

namespace refinekit {

/// A node of the product of the normalised specification with the
/// implementation: the normal state paired with one implementation
/// state.
struct ProductPair {
  NormState spec;
  StateIndex impl = 0;

  friend bool operator==(const ProductPair& a, const ProductPair& b) {
    return a.impl == b.impl && a.spec.states == b.spec.states;
  }
};

std::size_t hash_value(const ProductPair& pair);

/// Product-state ordering: (U,s) <= (V,t) iff s = t and U is a subset
/// of V. Smaller pairs subsume larger ones during exploration.
bool leq(const ProductPair& x, const ProductPair& y);

/// Collection of pairwise incomparable product pairs, bucketed by
/// implementation state so the s = t guard of the ordering reduces
/// membership to subset scans inside one bucket. Single-owner mutable;
/// one antichain per exploration session.
class Antichain {
public:
  /// Membership test: true iff some stored y satisfies y <= x.
  bool member(const ProductPair& x) const;

  /// Insertion for callers that guarantee member(x) is false, as the
  /// improved algorithms do; violating the precondition signals an
  /// algorithm bug and throws std::logic_error. Evicts every stored y
  /// with x <= y, so the result is again a proper antichain.
  void insert(const ProductPair& x);

  /// The raw insertion x as defined on arbitrary inputs: keeps x plus
  /// every stored y with x <= y removed. Unlike insert(), this does not
  /// require x to be undominated and may leave a set that is not a
  /// proper antichain. The legacy algorithms need these semantics.
  void insert_unchecked(const ProductPair& x);

  std::size_t size() const { return size_; }

  /// Pairwise incomparability over all stored pairs; test helper.
  bool is_proper() const;

  /// Stored pairs as (state set, implementation state), bucket order.
  std::vector<std::pair<StateSet, StateIndex>> pairs() const;

private:
  std::unordered_map<StateIndex, std::vector<StateSet>> buckets_;
  std::size_t size_ = 0;
};

}  // namespace refinekit

template <>
struct std::hash<refinekit::ProductPair> {
  std::size_t operator()(const refinekit::ProductPair& p) const {
    return refinekit::hash_value(p);
  }
};
