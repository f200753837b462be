#pragma once

#include "dqc/distribution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dqc {

// Gate-vertices only, any target module, embedded CZs frozen. May leave gates
// detached (on neither of their qubits' modules).
Distribution refine_detached(Distribution d, std::uint64_t seed = 0);

// Qubit by qubit, merge a hyperedge with up to `window` following ones when
// the H gates between them form embedding units free of detached gates and
// the merge does not raise the cost.
Distribution refine_eager_h_merge(Distribution d, int window = 6);

// Merge consecutive hyperedges on a qubit when no H separates them.
// Neighbouring: forward scan over adjacent pairs. Intertwined: odd pairs,
// then even pairs, then a backward scan.
Distribution refine_dtype_neighbouring(Distribution d);
Distribution refine_dtype_intertwined(Distribution d);

enum class Pass { Detached, EagerH, DtypeN, DtypeI };

Pass pass_from_name(const std::string& s);   // throws InvalidParams
std::string pass_name(Pass p);
std::vector<Pass> parse_passes(const std::string& csv);

Distribution apply_pass(Distribution d, Pass p, std::uint64_t seed = 0);
Distribution refine(Distribution d, const std::vector<Pass>& passes, int repeat = 1, std::uint64_t seed = 0);

} // namespace dqc
