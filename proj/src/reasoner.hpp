#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "engine.hpp"
#include "model.hpp"

namespace fogplan {

class World;

// Pluggable trouble detectors. Each receives nullptr when the node or link
// has disappeared from the infrastructure, which is always a problem under
// the default policies.
struct ProblemPolicy {
  // Is this node unable to keep hosting a service with these requirements?
  std::function<bool(const NodeSpec* node, const LabelSet& sw_reqs,
                     const LabelSet& thing_reqs, const Thresholds&)>
      node_problem;

  // Is this link unable to keep supporting an interaction with this latency
  // bound?
  std::function<bool(const LinkQos* link, const Num& max_lat,
                     const Thresholds&)>
      communication_problem;

  static ProblemPolicy defaults();
};

// A node suffers when it is gone or no longer offers strictly more hardware
// than the headroom, every required device, and every required package.
// Current allocations are deliberately ignored: the policy asks whether the
// node is in trouble at all, not whether this deployment still fits.
bool default_node_problem(const NodeSpec* node, const LabelSet& sw_reqs,
                          const LabelSet& thing_reqs,
                          const Thresholds& thresholds);

// A link suffers when it is gone, its latency exceeds the interaction bound,
// or its bandwidth has sunk below the headroom.
bool default_communication_problem(const LinkQos* link, const Num& max_lat,
                                   const Thresholds& thresholds);

// Services that must move: those on suffering nodes plus both endpoints of
// every suffering interaction. Deduplicated, ordered by app declaration so
// re-placement walks services in the same order a full placement would.
// Bumps the counter once per policy evaluation.
std::vector<ServiceDescriptor> to_migrate(const Deployment& deployment,
                                          const AppSpec& app,
                                          const Infrastructure& infra,
                                          const ProblemPolicy& policy,
                                          const Thresholds& thresholds,
                                          StepCounter& counter);

// Hardware ledger with the migrating services' shares released. Entries that
// reach exactly zero are dropped. Throws Error(Internal) on underflow.
HwLedger free_hw_allocation(const HwLedger& hw_alloc,
                            const std::vector<ServiceDescriptor>& migrating);

// Bandwidth ledger with every interaction touching a migrating service
// released from the link that carried it. Same zero-drop and underflow
// conventions.
BwLedger free_bw_allocation(const BwLedger& bw_alloc,
                            const std::vector<ServiceDescriptor>& migrating,
                            const Placement& placement, const AppSpec& app);

// The partially ground query a repair runs: services still pinned in place
// and the ledgers with the migrating shares already released.
struct PartialQuery {
  std::vector<Identifier> migrating;  // app declaration order
  Placement placement;
  HwLedger hw_alloc;
  BwLedger bw_alloc;

  bool operator==(const PartialQuery&) const = default;
};

struct ReplacementResult {
  std::optional<Deployment> deployment;  // nullopt: no eligible re-placement
  PartialQuery query;
};

// Re-places only the migrating services on top of the retained partial
// state. With nothing to migrate the old deployment is returned untouched.
ReplacementResult replacement(const AppSpec& app,
                              const std::vector<ServiceDescriptor>& migrating,
                              const Deployment& current,
                              const Infrastructure& infra,
                              const SearchConfig& config,
                              StepCounter& counter);

enum class OutcomeKind {
  Unchanged,         // nothing suffers; deployment kept as is
  PartialMigration,  // suffering services re-placed, the rest untouched
  FullReplacement,   // fresh placement: first deployment or repair fallback
  Failed             // no eligible placement at all; deployment discarded
};

const char* to_string(OutcomeKind kind) noexcept;

struct ManagementOutcome {
  OutcomeKind kind = OutcomeKind::Failed;
  std::optional<Deployment> deployment;   // absent only when Failed
  std::vector<Identifier> migrated;       // PartialMigration only
  // Present when a repair changed or discarded the deployment; absent for
  // Unchanged outcomes (including repairs that land exactly where they
  // started) and for first deployments.
  std::optional<PartialQuery> partial_query;
  std::uint64_t cr_steps = 0;

  bool operator==(const ManagementOutcome&) const = default;
};

// One management query against the world's current infrastructure: deploys
// the app when it has no deployment; otherwise detects suffering services,
// retracts the deployment, and tries a partial re-placement before falling
// back to a full one. The retract is not undone on failure: a Failed outcome
// leaves the app undeployed.
//
// Detection is the policies plus a re-validation of the retained slice, so
// any outcome that keeps a deployment keeps an eligible one, even when a
// change slips past the policies (say, capacity sinking below what is
// already allocated). Only policy evaluations count toward the step total.
ManagementOutcome fog_brain(World& world, const Identifier& app_id);

}  // namespace fogplan
