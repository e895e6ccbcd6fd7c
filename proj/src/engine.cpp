#include "engine.hpp"

#include <functional>
#include <span>

namespace fogplan {

std::optional<HwLedger> try_service_on_node(const ServiceSpec& service,
                                            const NodeSpec& node,
                                            const HwLedger& hw_alloc,
                                            const Thresholds& thresholds,
                                            StepCounter& counter) {
  counter.bump();  // candidate trial
  if (!is_subset(service.thing_reqs, node.thing_caps)) return std::nullopt;
  if (!is_subset(service.sw_reqs, node.sw_caps)) return std::nullopt;
  counter.bump();  // hardware ledger update attempt
  Num allocated = ledger_get(hw_alloc, node.id) + service.hw_reqs;
  if (!node.hw_caps.at_least(allocated + thresholds.hw_th))
    return std::nullopt;
  HwLedger updated = hw_alloc;
  if (allocated > 0) updated[node.id] = allocated;
  return updated;
}

std::optional<BwLedger> flow_ok(const ServiceSpec& service,
                                const Identifier& node,
                                const Placement& placed,
                                const BwLedger& bw_alloc, const AppSpec& app,
                                const Infrastructure& infra,
                                const Thresholds& thresholds,
                                StepCounter& counter) {
  BwLedger updated = bw_alloc;
  auto supports = [&](const Identifier& n1, const Identifier& n2,
                      const Num& max_lat, const Num& min_bw) {
    counter.bump();  // interaction check
    const LinkQos* link = infra.find_link(n1, n2);
    if (!link || link->lat > max_lat) return false;
    counter.bump();  // bandwidth ledger update attempt
    Num allocated = ledger_get(updated, n1, n2) + min_bw;
    if (link->bw < allocated + thresholds.bw_th) return false;
    if (allocated > 0) updated[{n1, n2}] = allocated;
    return true;
  };
  for (const S2SReq& req : app.s2s) {
    if (req.from != service.id) continue;
    const Identifier* peer = placed.node_of(req.to);
    if (!peer || *peer == node) continue;
    if (!supports(node, *peer, req.max_lat, req.min_bw)) return std::nullopt;
  }
  for (const S2SReq& req : app.s2s) {
    if (req.to != service.id) continue;
    const Identifier* peer = placed.node_of(req.from);
    if (!peer || *peer == node) continue;
    if (!supports(*peer, node, req.max_lat, req.min_bw)) return std::nullopt;
  }
  return updated;
}

namespace {

// Chronological backtracking over pending services; emit returns true to cut
// the search after a solution (first-solution mode).
bool search(std::span<const ServiceSpec* const> pending,
            const HwLedger& hw_alloc, const BwLedger& bw_alloc,
            const Placement& placed, const AppSpec& app,
            const Infrastructure& infra, const Thresholds& thresholds,
            StepCounter& counter,
            const std::function<bool(Solution)>& emit) {
  if (pending.empty())
    return emit(Solution{placed, hw_alloc, bw_alloc});
  const ServiceSpec& service = *pending.front();
  for (const NodeSpec& node : infra.nodes()) {
    std::optional<HwLedger> hw =
        try_service_on_node(service, node, hw_alloc, thresholds, counter);
    if (!hw) continue;
    std::optional<BwLedger> bw = flow_ok(service, node.id, placed, bw_alloc,
                                         app, infra, thresholds, counter);
    if (!bw) continue;
    Placement extended = placed;
    extended.prepend({service.id, node.id});
    if (search(pending.subspan(1), *hw, *bw, extended, app, infra, thresholds,
               counter, emit))
      return true;
  }
  return false;
}

std::vector<const ServiceSpec*> resolve_pending(
    const std::vector<Identifier>& pending, const Placement& placed,
    const AppSpec& app) {
  std::vector<const ServiceSpec*> out;
  for (const Identifier& id : pending) {
    const ServiceSpec* service = app.find_service(id);
    if (!service)
      throw Error(ErrorKind::Structural,
                  "pending service " + id + " is not part of the application");
    if (placed.contains(id))
      throw Error(ErrorKind::Structural,
                  "pending service " + id + " is already placed");
    out.push_back(service);
  }
  return out;
}

}  // namespace

std::optional<Solution> place_services(
    const std::vector<Identifier>& pending, const HwLedger& hw_alloc,
    const BwLedger& bw_alloc, const Placement& placed, const AppSpec& app,
    const Infrastructure& infra, const SearchConfig& config,
    StepCounter& counter) {
  std::vector<const ServiceSpec*> resolved =
      resolve_pending(pending, placed, app);
  std::optional<Solution> first;
  search(resolved, hw_alloc, bw_alloc, placed, app, infra, config.thresholds,
         counter, [&](Solution solution) {
           first = std::move(solution);
           return true;
         });
  return first;
}

std::optional<Solution> place_app(const AppSpec& app,
                                  const Infrastructure& infra,
                                  const SearchConfig& config,
                                  StepCounter& counter) {
  std::vector<Identifier> pending;
  for (const ServiceSpec& s : app.services) pending.push_back(s.id);
  return place_services(pending, {}, {}, {}, app, infra, config, counter);
}

std::vector<Solution> enumerate_placements(const AppSpec& app,
                                           const Infrastructure& infra,
                                           const SearchConfig& config,
                                           StepCounter& counter) {
  std::vector<Identifier> pending;
  for (const ServiceSpec& s : app.services) pending.push_back(s.id);
  std::vector<const ServiceSpec*> resolved =
      resolve_pending(pending, {}, app);
  std::vector<Solution> out;
  search(resolved, {}, {}, {}, app, infra, config.thresholds, counter,
         [&](Solution solution) {
           out.push_back(std::move(solution));
           return config.mode == SearchMode::FirstSolution;
         });
  return out;
}

std::vector<Placement> oracle_enumerate(const AppSpec& app,
                                        const Infrastructure& infra,
                                        const Thresholds& thresholds,
                                        std::uint64_t bound) {
  const std::size_t n_services = app.services.size();
  const std::size_t n_nodes = infra.nodes().size();

  std::uint64_t space = 1;
  for (std::size_t i = 0; i < n_services; ++i) {
    if (n_nodes != 0 && space > bound / n_nodes)
      throw Error(ErrorKind::BoundExceeded,
                  "mapping space exceeds the enumeration bound");
    space *= n_nodes;
  }
  if (space > bound)
    throw Error(ErrorKind::BoundExceeded,
                "mapping space exceeds the enumeration bound");

  std::vector<Placement> out;
  if (n_services == 0) {
    out.emplace_back();
    return out;
  }
  if (n_nodes == 0) return out;

  // Odometer over node indices, last service fastest, mirroring the search
  // order without reusing any of its code.
  std::vector<std::size_t> pick(n_services, 0);
  while (true) {
    Placement candidate;
    for (std::size_t s = 0; s < n_services; ++s)
      candidate.prepend({app.services[s].id, infra.nodes()[pick[s]].id});
    if (validate_eligible(app, infra, thresholds, candidate).ok())
      out.push_back(std::move(candidate));
    bool wrapped = true;
    for (std::size_t column = n_services; column-- > 0;) {
      if (++pick[column] < n_nodes) {
        wrapped = false;
        break;
      }
      pick[column] = 0;
    }
    if (wrapped) break;
  }
  return out;
}

}  // namespace fogplan
