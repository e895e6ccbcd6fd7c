#include "model.hpp"

#include <algorithm>

namespace fogplan {

bool is_subset(const LabelSet& needles, const LabelSet& haystack) {
  return std::includes(haystack.begin(), haystack.end(), needles.begin(),
                       needles.end());
}

const ServiceSpec* AppSpec::find_service(const Identifier& service) const {
  for (const ServiceSpec& s : services)
    if (s.id == service) return &s;
  return nullptr;
}

const S2SReq* AppSpec::find_req(const Identifier& from,
                                const Identifier& to) const {
  for (const S2SReq& r : s2s)
    if (r.from == from && r.to == to) return &r;
  return nullptr;
}

std::size_t AppSpec::service_index(const Identifier& service) const {
  for (std::size_t i = 0; i < services.size(); ++i)
    if (services[i].id == service) return i;
  return static_cast<std::size_t>(-1);
}

void Infrastructure::upsert_node(const NodeSpec& node) {
  auto it = index_.find(node.id);
  if (it != index_.end()) {
    nodes_[it->second] = node;
    return;
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(node);
}

bool Infrastructure::remove_node(const Identifier& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  std::size_t pos = it->second;
  nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(pos));
  index_.erase(it);
  for (auto& [node, position] : index_)
    if (position > pos) --position;
  std::erase_if(links_, [&](const auto& entry) {
    return entry.first.first == id || entry.first.second == id;
  });
  return true;
}

void Infrastructure::upsert_link(const Identifier& src, const Identifier& dst,
                                 LinkQos qos) {
  if (src == dst)
    throw Error(ErrorKind::InvalidValue, "self-link on node " + src);
  if (!index_.contains(src))
    throw Error(ErrorKind::Reference, "link endpoint " + src +
                                          " is not a declared node");
  if (!index_.contains(dst))
    throw Error(ErrorKind::Reference, "link endpoint " + dst +
                                          " is not a declared node");
  links_[{src, dst}] = qos;
}

void Infrastructure::append_link_sorted(const Identifier& src,
                                        const Identifier& dst, LinkQos qos) {
  if (src == dst)
    throw Error(ErrorKind::InvalidValue, "self-link on node " + src);
  if (!links_.empty() && !(links_.rbegin()->first < LinkKey{src, dst}))
    throw Error(ErrorKind::Internal, "links appended out of order");
  links_.emplace_hint(links_.end(), LinkKey{src, dst}, qos);
}

bool Infrastructure::remove_link(const Identifier& src, const Identifier& dst) {
  return links_.erase({src, dst}) > 0;
}

const NodeSpec* Infrastructure::find_node(const Identifier& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const LinkQos* Infrastructure::find_link(const Identifier& src,
                                         const Identifier& dst) const {
  auto it = links_.find({src, dst});
  return it == links_.end() ? nullptr : &it->second;
}

void Placement::prepend(Assignment assignment) {
  if (contains(assignment.service))
    throw Error(ErrorKind::Structural,
                "service " + assignment.service + " is already placed");
  entries_.insert(entries_.begin(), std::move(assignment));
}

bool Placement::contains(const Identifier& service) const {
  return node_of(service) != nullptr;
}

const Identifier* Placement::node_of(const Identifier& service) const {
  for (const Assignment& a : entries_)
    if (a.service == service) return &a.node;
  return nullptr;
}

Placement Placement::without(const std::vector<Identifier>& services) const {
  Placement out;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (std::find(services.begin(), services.end(), it->service) ==
        services.end())
      out.prepend(*it);
  return out;
}

std::map<Identifier, Identifier> Placement::as_map() const {
  std::map<Identifier, Identifier> out;
  for (const Assignment& a : entries_) out.emplace(a.service, a.node);
  return out;
}

Num ledger_get(const HwLedger& ledger, const Identifier& node) {
  auto it = ledger.find(node);
  return it == ledger.end() ? Num(0) : it->second;
}

Num ledger_get(const BwLedger& ledger, const Identifier& src,
               const Identifier& dst) {
  auto it = ledger.find({src, dst});
  return it == ledger.end() ? Num(0) : it->second;
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::MissingService: return "missing-service";
    case ViolationKind::ThingReqsUnmet: return "thing-reqs-unmet";
    case ViolationKind::SwReqsUnmet: return "sw-reqs-unmet";
    case ViolationKind::HwExceeded: return "hw-exceeded";
    case ViolationKind::LinkMissing: return "link-missing";
    case ViolationKind::LatencyExceeded: return "latency-exceeded";
    case ViolationKind::BwExceeded: return "bw-exceeded";
  }
  return "unknown";
}

namespace {

struct ResolvedAssignment {
  const ServiceSpec* service;
  const NodeSpec* node;
};

// Resolves every placement entry or throws Error(Structural).
std::vector<ResolvedAssignment> resolve(const AppSpec& app,
                                        const Infrastructure& infra,
                                        const Placement& placement) {
  std::vector<ResolvedAssignment> out;
  for (const Assignment& a : placement.entries()) {
    const ServiceSpec* service = app.find_service(a.service);
    if (!service)
      throw Error(ErrorKind::Structural,
                  "placement names unknown service " + a.service);
    const NodeSpec* node = infra.find_node(a.node);
    if (!node)
      throw Error(ErrorKind::Structural,
                  "placement names unknown node " + a.node);
    out.push_back({service, node});
  }
  return out;
}

}  // namespace

Verdict validate_eligible(const AppSpec& app, const Infrastructure& infra,
                          const Thresholds& thresholds,
                          const Placement& placement, ValidationMode mode) {
  std::vector<ResolvedAssignment> resolved = resolve(app, infra, placement);

  Verdict verdict;
  auto report = [&](ViolationKind kind, std::string subject,
                    std::vector<Identifier> services, std::string detail) {
    verdict.violations.push_back({kind, std::move(subject),
                                  std::move(services), std::move(detail)});
  };

  if (mode == ValidationMode::Complete)
    for (const ServiceSpec& s : app.services)
      if (!placement.contains(s.id))
        report(ViolationKind::MissingService, s.id, {s.id},
               "service " + s.id + " has no assignment");

  for (const ResolvedAssignment& ra : resolved) {
    if (!is_subset(ra.service->thing_reqs, ra.node->thing_caps))
      report(ViolationKind::ThingReqsUnmet, ra.node->id, {ra.service->id},
             "node " + ra.node->id + " does not reach every device " +
                 ra.service->id + " requires");
    if (!is_subset(ra.service->sw_reqs, ra.node->sw_caps))
      report(ViolationKind::SwReqsUnmet, ra.node->id, {ra.service->id},
             "node " + ra.node->id + " lacks software " + ra.service->id +
                 " requires");
  }

  // Cumulative hardware per node, headroom included.
  std::map<Identifier, std::pair<Num, std::vector<Identifier>>> hw_by_node;
  for (const ResolvedAssignment& ra : resolved) {
    auto& [total, services] = hw_by_node[ra.node->id];
    total += ra.service->hw_reqs;
    services.push_back(ra.service->id);
  }
  for (const auto& [node_id, entry] : hw_by_node) {
    const NodeSpec* node = infra.find_node(node_id);
    if (!node->hw_caps.at_least(entry.first + thresholds.hw_th))
      report(ViolationKind::HwExceeded, node_id, entry.second,
             "node " + node_id + " cannot host " +
                 format_number(entry.first) + " hardware units plus " +
                 format_number(thresholds.hw_th) + " headroom");
  }

  // Per-interaction latency, then cumulative bandwidth per directed link.
  std::map<std::pair<Identifier, Identifier>,
           std::pair<Num, std::vector<Identifier>>>
      bw_by_link;
  for (const S2SReq& req : app.s2s) {
    const Identifier* n1 = placement.node_of(req.from);
    const Identifier* n2 = placement.node_of(req.to);
    if (!n1 || !n2 || *n1 == *n2) continue;
    std::string link_text = *n1 + "->" + *n2;
    const LinkQos* link = infra.find_link(*n1, *n2);
    if (!link) {
      report(ViolationKind::LinkMissing, link_text, {req.from, req.to},
             "no link supports " + req.from + " -> " + req.to);
      continue;
    }
    if (link->lat > req.max_lat)
      report(ViolationKind::LatencyExceeded, link_text, {req.from, req.to},
             "latency " + format_number(link->lat) + " exceeds " +
                 format_number(req.max_lat) + " for " + req.from + " -> " +
                 req.to);
    auto& [total, services] = bw_by_link[{*n1, *n2}];
    total += req.min_bw;
    services.push_back(req.from);
    services.push_back(req.to);
  }
  for (const auto& [key, entry] : bw_by_link) {
    const LinkQos* link = infra.find_link(key.first, key.second);
    if (link->bw < entry.first + thresholds.bw_th)
      report(ViolationKind::BwExceeded, key.first + "->" + key.second,
             entry.second,
             "link " + key.first + " -> " + key.second + " cannot carry " +
                 format_number(entry.first) + " Mbps plus " +
                 format_number(thresholds.bw_th) + " headroom");
  }

  return verdict;
}

std::pair<HwLedger, BwLedger> derive_ledgers(const AppSpec& app,
                                             const Placement& placement) {
  // Node existence is irrelevant here: sums depend on the mapping alone.
  HwLedger hw;
  for (const Assignment& a : placement.entries()) {
    const ServiceSpec* service = app.find_service(a.service);
    if (!service)
      throw Error(ErrorKind::Structural,
                  "placement names unknown service " + a.service);
    if (service->hw_reqs > 0) hw[a.node] += service->hw_reqs;
  }
  BwLedger bw;
  for (const S2SReq& req : app.s2s) {
    const Identifier* n1 = placement.node_of(req.from);
    const Identifier* n2 = placement.node_of(req.to);
    if (!n1 || !n2 || *n1 == *n2) continue;
    if (req.min_bw > 0) bw[{*n1, *n2}] += req.min_bw;
  }
  return {std::move(hw), std::move(bw)};
}

}  // namespace fogplan
