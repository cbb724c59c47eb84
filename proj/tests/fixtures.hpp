#pragma once

#include <initializer_list>
#include <memory>
#include <random>
#include <string>

#include "refinekit/aut_io.hpp"
#include "refinekit/generators.hpp"
#include "refinekit/lts.hpp"

namespace fixtures {

using namespace refinekit;

// The teller-machine trio: a specification that hands out twenty
// directly or as two tens, a strict implementation that deadlocks after
// paying, and a polling implementation that may never stabilise.
//
// atm_spec states: 0 -req-> 1, 1 -tau-> {2,4}, 2 -10-> 3 -10-> 0,
// 4 -20-> 0.
inline const char* atm_spec_aut =
    "des (0,6,5)\n"
    "(0,\"req\",1)\n"
    "(1,\"tau\",2)\n"
    "(1,\"tau\",4)\n"
    "(2,\"10\",3)\n"
    "(3,\"10\",0)\n"
    "(4,\"20\",0)\n";

// 0 -req-> 1 -20-> 2 (deadlock).
inline const char* atm_strict_aut =
    "des (0,2,3)\n"
    "(0,\"req\",1)\n"
    "(1,\"20\",2)\n";

// 0 -req-> 1, 1 -tau-> 1 (poll loop), 1 -20-> 2 -tau-> 0.
inline const char* atm_polling_aut =
    "des (0,4,3)\n"
    "(0,\"req\",1)\n"
    "(1,\"tau\",1)\n"
    "(1,\"20\",2)\n"
    "(2,\"tau\",0)\n";

// Fixture on which the legacy algorithms lose the antichain property:
// spec 0 -a-> 1, 0 -b-> 1, 0 -b-> 2; impl 0 -b-> 1 declared before
// 0 -a-> 1 so that the depth-first stack processes the a-successor
// first.
inline const char* violation_spec_aut =
    "des (0,3,3)\n"
    "(0,\"a\",1)\n"
    "(0,\"b\",1)\n"
    "(0,\"b\",2)\n";

inline const char* violation_impl_aut =
    "des (0,2,2)\n"
    "(0,\"b\",1)\n"
    "(0,\"a\",1)\n";

// Four one-or-two-state systems around divergence corner cases. The
// diverging chaotic system refines nothing but is refined by anything;
// the legacy failures-divergences algorithm gets two of these checks
// wrong.
inline const char* chaotic_a_loop_aut =  // tau and a self-loops
    "des (0,2,1)\n"
    "(0,\"tau\",0)\n"
    "(0,\"a\",0)\n";

inline const char* b_loop_aut =  // stable b self-loop
    "des (0,1,1)\n"
    "(0,\"b\",0)\n";

inline const char* diverging_a_cycle_aut =  // tau self-loop, a to and fro
    "des (0,3,2)\n"
    "(0,\"tau\",0)\n"
    "(0,\"a\",1)\n"
    "(1,\"a\",0)\n";

inline const char* diverging_a_step_aut =  // tau self-loop, single a step
    "des (0,2,2)\n"
    "(0,\"tau\",0)\n"
    "(0,\"a\",1)\n";

struct LtsPair {
  Lts spec;
  Lts impl;
  std::shared_ptr<LabelTable> labels;
};

inline LtsPair parse_pair(const std::string& spec_text,
                          const std::string& impl_text,
                          const std::string& tau_name = "tau") {
  auto labels = std::make_shared<LabelTable>(tau_name);
  Lts spec = parse_aut(spec_text, labels);
  Lts impl = parse_aut(impl_text, labels);
  return {std::move(spec), std::move(impl), std::move(labels)};
}

inline Lts parse_one(const std::string& text,
                     const std::string& tau_name = "tau") {
  auto labels = std::make_shared<LabelTable>(tau_name);
  return parse_aut(text, labels);
}

inline std::vector<ActionIndex> trace_of(const LabelTable& labels,
                                         std::initializer_list<const char*> names) {
  std::vector<ActionIndex> trace;
  for (const char* name : names) {
    trace.push_back(labels.find(name));
  }
  return trace;
}

// One cell of the seeded random suite: up to 5 states, up to 3 visible
// actions, tau density at most 0.3. Every third pair makes the
// implementation a transition-pruned copy of the specification so that
// refining instances occur alongside failing ones.
inline LtsPair suite_pair(std::uint64_t index) {
  std::mt19937_64 rng(0x5EEDBA5Eull ^ (index * 0x9E3779B97F4A7C15ull));
  auto labels = std::make_shared<LabelTable>();

  RandomLtsParams spec_params;
  spec_params.num_states = static_cast<StateIndex>(1 + rng() % 5);
  spec_params.num_actions = 1 + rng() % 3;
  spec_params.transition_density = 0.25 + 0.35 * static_cast<double>(rng() % 1000) / 1000.0;
  spec_params.tau_density = 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
  spec_params.seed = rng();
  Lts spec = gen_random(spec_params, labels);

  Lts impl;
  if (index % 3 == 0) {
    impl = drop_random_transitions(spec, 0.35, rng());
  } else {
    RandomLtsParams impl_params = spec_params;
    impl_params.num_states = static_cast<StateIndex>(1 + rng() % 5);
    impl_params.tau_density = 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
    impl_params.seed = rng();
    impl = gen_random(impl_params, labels);
  }
  return {std::move(spec), std::move(impl), std::move(labels)};
}

// A single random LTS for observation-level tests.
inline Lts suite_single(std::uint64_t index) {
  std::mt19937_64 rng(0xD15EA5Eull ^ (index * 0x9E3779B97F4A7C15ull));
  RandomLtsParams params;
  params.num_states = static_cast<StateIndex>(1 + rng() % 5);
  params.num_actions = 1 + rng() % 3;
  params.transition_density = 0.25 + 0.35 * static_cast<double>(rng() % 1000) / 1000.0;
  params.tau_density = 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
  params.seed = rng();
  return gen_random(params);
}

}  // namespace fixtures
