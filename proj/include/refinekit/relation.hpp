#pragma once

namespace refinekit {

/// The three refinement preorders decided by this library.
enum class Relation { Trace, StableFailures, FailuresDivergences };

const char* to_string(Relation relation);

}  // namespace refinekit
