#pragma once

#include "cbpa/engine.hpp"
#include "cbpa/scenario.hpp"

namespace cbpa {

/// Auction baseline: each round every robot offers its single best bid under
/// the same cost, and the cheapest (ties: task id, then robot id) is the one
/// assignment made that round. Iterations are the assignment rounds.
AllocationResult run_auction(const Scenario& scenario, Round max_rounds = 0);

/// Classic one-winner-per-task bundle algorithm on the same cost model; the
/// winner commits min(demand, own remaining payload).
AllocationResult run_cbba_single(const Scenario& scenario, const EngineOptions& options = {});

} // namespace cbpa
