#include "reasoner.hpp"

#include <algorithm>
#include <set>

#include "world.hpp"

namespace fogplan {

ProblemPolicy ProblemPolicy::defaults() {
  return {default_node_problem, default_communication_problem};
}

bool default_node_problem(const NodeSpec* node, const LabelSet& sw_reqs,
                          const LabelSet& thing_reqs,
                          const Thresholds& thresholds) {
  if (!node) return true;
  return !(node->hw_caps.greater_than(thresholds.hw_th) &&
           is_subset(thing_reqs, node->thing_caps) &&
           is_subset(sw_reqs, node->sw_caps));
}

bool default_communication_problem(const LinkQos* link, const Num& max_lat,
                                   const Thresholds& thresholds) {
  if (!link) return true;
  return link->lat > max_lat || link->bw < thresholds.bw_th;
}

std::vector<ServiceDescriptor> to_migrate(const Deployment& deployment,
                                          const AppSpec& app,
                                          const Infrastructure& infra,
                                          const ProblemPolicy& policy,
                                          const Thresholds& thresholds,
                                          StepCounter& counter) {
  std::vector<ServiceDescriptor> out;
  std::set<Identifier> seen;
  auto add = [&](const Identifier& service, const Identifier& node) {
    if (!seen.insert(service).second) return;
    const ServiceSpec* spec = app.find_service(service);
    if (!spec)
      throw Error(ErrorKind::Structural,
                  "deployment places unknown service " + service);
    out.push_back({service, node, spec->hw_reqs});
  };

  // Both endpoints of a suffering interaction move: re-placing either end
  // alone could leave the pair on the same broken link.
  const auto& entries = deployment.placement.entries();
  for (const Assignment& a : entries) {
    for (const Assignment& b : entries) {
      if (a.node == b.node) continue;
      const S2SReq* req = app.find_req(a.service, b.service);
      if (!req) continue;
      counter.bump();  // policy evaluation
      if (policy.communication_problem(infra.find_link(a.node, b.node),
                                       req->max_lat, thresholds)) {
        add(a.service, a.node);
        add(b.service, b.node);
      }
    }
  }

  for (const Assignment& a : entries) {
    const ServiceSpec* spec = app.find_service(a.service);
    if (!spec)
      throw Error(ErrorKind::Structural,
                  "deployment places unknown service " + a.service);
    counter.bump();  // policy evaluation
    if (policy.node_problem(infra.find_node(a.node), spec->sw_reqs,
                            spec->thing_reqs, thresholds))
      add(a.service, a.node);
  }

  std::sort(out.begin(), out.end(),
            [&](const ServiceDescriptor& x, const ServiceDescriptor& y) {
              return app.service_index(x.service) <
                     app.service_index(y.service);
            });
  return out;
}

HwLedger free_hw_allocation(const HwLedger& hw_alloc,
                            const std::vector<ServiceDescriptor>& migrating) {
  for (const ServiceDescriptor& d : migrating)
    if (d.hw_reqs > 0 && !hw_alloc.contains(d.node))
      throw Error(ErrorKind::Internal,
                  "hardware ledger has no entry for node " + d.node);
  HwLedger out;
  for (const auto& [node, allocated] : hw_alloc) {
    Num to_free(0);
    for (const ServiceDescriptor& d : migrating)
      if (d.node == node) to_free += d.hw_reqs;
    if (to_free > allocated)
      throw Error(ErrorKind::Internal,
                  "hardware ledger underflow on node " + node);
    if (allocated > to_free) out.emplace(node, allocated - to_free);
  }
  return out;
}

BwLedger free_bw_allocation(const BwLedger& bw_alloc,
                            const std::vector<ServiceDescriptor>& migrating,
                            const Placement& placement, const AppSpec& app) {
  std::set<Identifier> moving;
  for (const ServiceDescriptor& d : migrating) moving.insert(d.service);

  BwLedger out = bw_alloc;
  for (const S2SReq& req : app.s2s) {
    if (!moving.contains(req.from) && !moving.contains(req.to)) continue;
    const Identifier* n1 = placement.node_of(req.from);
    const Identifier* n2 = placement.node_of(req.to);
    if (!n1 || !n2 || *n1 == *n2) continue;  // colocated pairs booked nothing
    if (req.min_bw == 0) continue;           // zero shares never made entries
    auto it = out.find({*n1, *n2});
    if (it == out.end() || it->second < req.min_bw)
      throw Error(ErrorKind::Internal, "bandwidth ledger underflow on link " +
                                           *n1 + " -> " + *n2);
    it->second -= req.min_bw;
    if (it->second == 0) out.erase(it);
  }
  return out;
}

ReplacementResult replacement(const AppSpec& app,
                              const std::vector<ServiceDescriptor>& migrating,
                              const Deployment& current,
                              const Infrastructure& infra,
                              const SearchConfig& config,
                              StepCounter& counter) {
  ReplacementResult result;
  if (migrating.empty()) {
    result.deployment = current;
    result.query.placement = current.placement;
    result.query.hw_alloc = current.hw_alloc;
    result.query.bw_alloc = current.bw_alloc;
    return result;
  }

  for (const ServiceDescriptor& d : migrating) result.query.migrating.push_back(d.service);
  result.query.placement = current.placement.without(result.query.migrating);
  result.query.hw_alloc = free_hw_allocation(current.hw_alloc, migrating);
  result.query.bw_alloc =
      free_bw_allocation(current.bw_alloc, migrating, current.placement, app);

  std::optional<Solution> solution = place_services(
      result.query.migrating, result.query.hw_alloc, result.query.bw_alloc,
      result.query.placement, app, infra, config, counter);
  if (solution)
    result.deployment = Deployment{current.app_id, solution->placement,
                                   solution->hw_alloc, solution->bw_alloc};
  return result;
}

namespace {

// The policies judge a node or link in isolation and deliberately ignore
// what the deployment booked on it, so a capability that sank below its
// existing allocations slips through detection. Re-validating the retained
// slice against the live infrastructure catches exactly those cases: every
// violation names the services that must also move for the remainder to
// stay eligible. Costs no policy evaluations and no counter steps.
void widen_with_revalidation(std::vector<ServiceDescriptor>& suffering,
                             const Deployment& deployed, const AppSpec& app,
                             const Infrastructure& infra,
                             const Thresholds& thresholds) {
  std::set<Identifier> moving;
  std::vector<Identifier> names;
  for (const ServiceDescriptor& d : suffering) {
    moving.insert(d.service);
    names.push_back(d.service);
  }
  // Absent hosts were flagged by the node policy and are gone from the
  // retained slice, so validation cannot trip over an unknown node.
  Placement retained = deployed.placement.without(names);
  Verdict verdict = validate_eligible(app, infra, thresholds, retained,
                                      ValidationMode::Partial);
  if (verdict.ok()) return;
  for (const Violation& violation : verdict.violations)
    for (const Identifier& service : violation.services) {
      if (!moving.insert(service).second) continue;
      const Identifier* node = deployed.placement.node_of(service);
      const ServiceSpec* spec = app.find_service(service);
      if (!node || !spec)
        throw Error(ErrorKind::Internal,
                    "validation names a service outside the deployment: " +
                        service);
      suffering.push_back({service, *node, spec->hw_reqs});
    }
  std::sort(suffering.begin(), suffering.end(),
            [&](const ServiceDescriptor& x, const ServiceDescriptor& y) {
              return app.service_index(x.service) <
                     app.service_index(y.service);
            });
}

}  // namespace

const char* to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::Unchanged: return "unchanged";
    case OutcomeKind::PartialMigration: return "partial-migration";
    case OutcomeKind::FullReplacement: return "full-replacement";
    case OutcomeKind::Failed: return "failed";
  }
  return "unknown";
}

ManagementOutcome fog_brain(World& world, const Identifier& app_id) {
  const AppSpec* app = world.find_app(app_id);
  if (!app)
    throw Error(ErrorKind::UnknownId, "no application " + app_id);

  SearchConfig config{world.thresholds(), SearchMode::FirstSolution};
  ManagementOutcome outcome;

  if (const Deployment* deployed = world.deployment_of(app_id)) {
    std::vector<ServiceDescriptor> suffering =
        to_migrate(*deployed, *app, world.infrastructure(), world.policy(),
                   world.thresholds(), world.counter());
    widen_with_revalidation(suffering, *deployed, *app,
                            world.infrastructure(), world.thresholds());
    if (suffering.empty()) {
      outcome.kind = OutcomeKind::Unchanged;
      outcome.deployment = *deployed;
      outcome.cr_steps = world.counter().steps;
      return outcome;
    }

    // Retract before repairing; a failed repair must not resurrect the old
    // deployment, which the suffering infrastructure can no longer honor.
    Deployment previous = *deployed;
    world.retract_deployment(app_id);

    ReplacementResult repaired =
        replacement(*app, suffering, previous, world.infrastructure(), config,
                    world.counter());
    if (repaired.deployment) {
      // A repair that lands every flagged service back on its old node is a
      // fixed point: the query keeps the previous deployment verbatim and
      // reports Unchanged, so repeated queries stay idempotent even when a
      // policy keeps complaining about an assignment the search accepts.
      // Placement entries are compared as a mapping because the repair
      // rebuilds their bookkeeping order.
      bool fixed_point =
          repaired.deployment->placement.as_map() ==
              previous.placement.as_map() &&
          repaired.deployment->hw_alloc == previous.hw_alloc &&
          repaired.deployment->bw_alloc == previous.bw_alloc;
      if (fixed_point) {
        world.store_deployment(previous);
        outcome.kind = OutcomeKind::Unchanged;
        outcome.deployment = std::move(previous);
      } else {
        world.store_deployment(*repaired.deployment);
        outcome.kind = OutcomeKind::PartialMigration;
        outcome.partial_query = repaired.query;
        outcome.migrated = std::move(repaired.query.migrating);
        outcome.deployment = std::move(repaired.deployment);
      }
      outcome.cr_steps = world.counter().steps;
      return outcome;
    }
    outcome.partial_query = repaired.query;
    // Fall through to a fresh full placement.
  }

  std::optional<Solution> solution =
      place_app(*app, world.infrastructure(), config, world.counter());
  if (solution) {
    Deployment deployment{app_id, solution->placement, solution->hw_alloc,
                          solution->bw_alloc};
    world.store_deployment(deployment);
    outcome.kind = OutcomeKind::FullReplacement;
    outcome.deployment = std::move(deployment);
  } else {
    outcome.kind = OutcomeKind::Failed;
  }
  outcome.cr_steps = world.counter().steps;
  return outcome;
}

}  // namespace fogplan
