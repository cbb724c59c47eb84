#include "refinekit/normalization.hpp"

namespace refinekit {

NormContext::NormContext(const Lts& lts, const DivergenceMarking& marking)
    : lts_(lts), marking_(marking) {}

NormState NormContext::flag(StateSet states) const {
  bool diverges = marking_.any_of(states);
  return NormState{std::move(states), diverges};
}

NormState NormContext::initial() const {
  return flag(tau_closure(lts_, StateSet::of({lts_.initial})));
}

const NormState& NormContext::successor(const NormState& from, ActionIndex a) {
  auto key = std::make_pair(from.states, a);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    NormState next = flag(weak_step(lts_, from.states, a));
    it = memo_.emplace(std::move(key), std::move(next)).first;
  }
  return it->second;
}

std::optional<NormState> NormContext::fdr_successor(const NormState& from,
                                                    ActionIndex a) {
  if (from.diverges) {
    return std::nullopt;
  }
  return successor(from, a);
}

}  // namespace refinekit
