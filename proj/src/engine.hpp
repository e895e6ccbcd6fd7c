#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "model.hpp"

namespace fogplan {

// Counts elementary search work in machine-independent units: one bump per
// candidate (service, node) trial, per interaction check against a link, and
// per ledger update attempt. Two runs over equal inputs count equally.
struct StepCounter {
  std::uint64_t steps = 0;

  void bump() noexcept { ++steps; }
};

enum class SearchMode {
  FirstSolution,  // stop at the first eligible placement
  EnumerateAll    // visit the whole search tree
};

struct SearchConfig {
  Thresholds thresholds;
  SearchMode mode = SearchMode::FirstSolution;
};

// An eligible placement together with the allocations it booked.
struct Solution {
  Placement placement;
  HwLedger hw_alloc;
  BwLedger bw_alloc;

  bool operator==(const Solution&) const = default;
};

// Checks one service against one node: device reach, software, then the
// cumulative hardware ledger with headroom. Returns the updated ledger on
// success. Bumps the counter once for the trial and once more when the
// ledger update is attempted.
std::optional<HwLedger> try_service_on_node(const ServiceSpec& service,
                                            const NodeSpec& node,
                                            const HwLedger& hw_alloc,
                                            const Thresholds& thresholds,
                                            StepCounter& counter);

// Checks every interaction between the service (as if placed on node) and
// already-placed peers, outgoing interactions first, in declaration order.
// Colocated peers need no link. Fails fast on the first unsupported
// interaction and returns the updated bandwidth ledger on success.
std::optional<BwLedger> flow_ok(const ServiceSpec& service,
                                const Identifier& node,
                                const Placement& placed,
                                const BwLedger& bw_alloc, const AppSpec& app,
                                const Infrastructure& infra,
                                const Thresholds& thresholds,
                                StepCounter& counter);

// Places the listed services on top of an existing partial state. Services
// are tried in the given order, nodes in declaration order; the search
// backtracks chronologically, so results are deterministic. The returned
// placement extends `placed` with the new assignments prepended. Throws
// Error(Structural) when a pending service is unknown or already placed.
std::optional<Solution> place_services(
    const std::vector<Identifier>& pending, const HwLedger& hw_alloc,
    const BwLedger& bw_alloc, const Placement& placed, const AppSpec& app,
    const Infrastructure& infra, const SearchConfig& config,
    StepCounter& counter);

// First eligible placement of the whole application, services in declaration
// order over empty ledgers.
std::optional<Solution> place_app(const AppSpec& app,
                                  const Infrastructure& infra,
                                  const SearchConfig& config,
                                  StepCounter& counter);

// Every eligible placement, in the deterministic search order.
std::vector<Solution> enumerate_placements(const AppSpec& app,
                                           const Infrastructure& infra,
                                           const SearchConfig& config,
                                           StepCounter& counter);

// Brute force over all |nodes|^|services| mappings, filtered through
// validate_eligible. Exists as an independent check on the search; shares no
// code with it. Throws Error(BoundExceeded) when the mapping space is larger
// than `bound`.
std::vector<Placement> oracle_enumerate(const AppSpec& app,
                                        const Infrastructure& infra,
                                        const Thresholds& thresholds,
                                        std::uint64_t bound = 1000000);

}  // namespace fogplan
