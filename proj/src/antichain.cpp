#include "refinekit/antichain.hpp"

#include <stdexcept>

namespace refinekit {

std::size_t hash_value(const ProductPair& pair) {
  return hash_value(pair.spec.states) * 1000003 + pair.impl;
}

bool leq(const ProductPair& x, const ProductPair& y) {
  return x.impl == y.impl && x.spec.states.subset_of(y.spec.states);
}

bool Antichain::member(const ProductPair& x) const {
  auto it = buckets_.find(x.impl);
  if (it == buckets_.end()) {
    return false;
  }
  for (const StateSet& stored : it->second) {
    if (stored.subset_of(x.spec.states)) {
      return true;
    }
  }
  return false;
}

void Antichain::insert(const ProductPair& x) {
  if (member(x)) {
    throw std::logic_error(
        "Antichain::insert precondition violated: element already dominated");
  }
  insert_unchecked(x);
}

void Antichain::insert_unchecked(const ProductPair& x) {
  // One pass collecting survivors, then the bucket is rebuilt.
  std::vector<StateSet>& bucket = buckets_[x.impl];
  std::vector<StateSet> kept;
  kept.reserve(bucket.size() + 1);
  for (StateSet& stored : bucket) {
    if (!x.spec.states.subset_of(stored)) {
      kept.push_back(std::move(stored));
    }
  }
  size_ -= bucket.size() - kept.size();
  kept.push_back(x.spec.states);
  ++size_;
  bucket = std::move(kept);
}

bool Antichain::is_proper() const {
  for (const auto& [impl, bucket] : buckets_) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      for (std::size_t j = 0; j < bucket.size(); ++j) {
        if (i != j && bucket[i].subset_of(bucket[j])) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<std::pair<StateSet, StateIndex>> Antichain::pairs() const {
  std::vector<std::pair<StateSet, StateIndex>> out;
  out.reserve(size_);
  for (const auto& [impl, bucket] : buckets_) {
    for (const StateSet& set : bucket) {
      out.emplace_back(set, impl);
    }
  }
  return out;
}

}  // namespace refinekit
