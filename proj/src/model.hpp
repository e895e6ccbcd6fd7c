#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "number.hpp"

namespace fogplan {

// Lowercase-leading identifier, as written in fact files.
using Identifier = std::string;

// Set of software or IoT capability labels. Ordered so serialization and
// subset checks are deterministic.
using LabelSet = std::set<std::string>;

bool is_subset(const LabelSet& needles, const LabelSet& haystack);

struct ServiceSpec {
  Identifier id;
  LabelSet sw_reqs;     // software the hosting node must offer
  Num hw_reqs;          // hardware units consumed on the hosting node
  LabelSet thing_reqs;  // IoT devices the hosting node must reach directly

  bool operator==(const ServiceSpec&) const = default;
};

// Directed service-to-service QoS requirement. At most one per ordered pair.
struct S2SReq {
  Identifier from;
  Identifier to;
  Num max_lat;  // milliseconds, end-to-end upper bound, > 0
  Num min_bw;   // Mbps reserved on the supporting link, >= 0

  bool operator==(const S2SReq&) const = default;
};

struct AppSpec {
  Identifier id;
  std::vector<ServiceSpec> services;  // declaration order drives the search
  std::vector<S2SReq> s2s;            // declaration order drives flow checks

  const ServiceSpec* find_service(const Identifier& service) const;
  const S2SReq* find_req(const Identifier& from, const Identifier& to) const;
  // Position of a service in the declaration order; npos when absent.
  std::size_t service_index(const Identifier& service) const;

  bool operator==(const AppSpec&) const = default;
};

struct NodeSpec {
  Identifier id;
  LabelSet sw_caps;
  Capacity hw_caps;
  LabelSet thing_caps;

  bool operator==(const NodeSpec&) const = default;
};

// QoS profile of one directed link.
struct LinkQos {
  Num lat;  // milliseconds
  Num bw;   // Mbps

  bool operator==(const LinkQos&) const = default;
};

struct LinkSpec {
  Identifier src;
  Identifier dst;
  LinkQos qos;

  bool operator==(const LinkSpec&) const = default;
};

// Nodes in declaration order plus directed point-to-point links. Links are
// asymmetric: (a,b) and (b,a) are unrelated entries.
class Infrastructure {
public:
  using LinkKey = std::pair<Identifier, Identifier>;
  using LinkMap = std::map<LinkKey, LinkQos>;

  // Replaces the node in place when the id exists, preserving its position
  // in the declaration order; appends otherwise.
  void upsert_node(const NodeSpec& node);

  // Removes the node and every link touching it. Returns false when absent.
  bool remove_node(const Identifier& id);

  // Inserts or replaces a directed link. Throws Error(Reference) when an
  // endpoint is not a declared node, Error(InvalidValue) on a self-link.
  void upsert_link(const Identifier& src, const Identifier& dst, LinkQos qos);

  // Bulk variant for generators: keys must arrive in strictly increasing
  // order so insertion stays O(1) per link.
  void append_link_sorted(const Identifier& src, const Identifier& dst,
                          LinkQos qos);

  bool remove_link(const Identifier& src, const Identifier& dst);

  const NodeSpec* find_node(const Identifier& id) const;
  const LinkQos* find_link(const Identifier& src, const Identifier& dst) const;

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const LinkMap& links() const { return links_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  bool operator==(const Infrastructure& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

private:
  std::vector<NodeSpec> nodes_;
  std::map<Identifier, std::size_t> index_;  // id -> position in nodes_
  LinkMap links_;
};

// Headroom that must stay free beyond the allocations.
struct Thresholds {
  Num hw_th;  // hardware units per node
  Num bw_th;  // Mbps per directed link

  bool operator==(const Thresholds&) const = default;
};

struct Assignment {
  Identifier service;
  Identifier node;

  bool operator==(const Assignment&) const = default;
};

// Mapping from services to nodes, most recently placed first. Each service
// appears at most once.
class Placement {
public:
  Placement() = default;

  // Throws Error(Structural) when the service is already placed.
  void prepend(Assignment assignment);

  bool contains(const Identifier& service) const;
  const Identifier* node_of(const Identifier& service) const;
  const std::vector<Assignment>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Copy with the given services dropped; relative order is preserved.
  Placement without(const std::vector<Identifier>& services) const;

  std::map<Identifier, Identifier> as_map() const;

  bool operator==(const Placement&) const = default;

private:
  std::vector<Assignment> entries_;
};

// Cumulative hardware allocation per node. Entries are strictly positive;
// a node without allocations has no entry.
using HwLedger = std::map<Identifier, Num>;

// Cumulative bandwidth allocation per directed link, same conventions.
using BwLedger = std::map<std::pair<Identifier, Identifier>, Num>;

Num ledger_get(const HwLedger& ledger, const Identifier& node);
Num ledger_get(const BwLedger& ledger, const Identifier& src,
               const Identifier& dst);

struct Deployment {
  Identifier app_id;
  Placement placement;
  HwLedger hw_alloc;
  BwLedger bw_alloc;

  bool operator==(const Deployment&) const = default;
};

// Everything the repair step needs to know about one running service.
struct ServiceDescriptor {
  Identifier service;
  Identifier node;  // node it currently runs on
  Num hw_reqs;

  bool operator==(const ServiceDescriptor&) const = default;
};

struct UpsertNode {
  NodeSpec node;
  bool operator==(const UpsertNode&) const = default;
};
struct RemoveNode {
  Identifier node;
  bool operator==(const RemoveNode&) const = default;
};
struct UpsertLink {
  LinkSpec link;
  bool operator==(const UpsertLink&) const = default;
};
struct RemoveLink {
  Identifier src;
  Identifier dst;
  bool operator==(const RemoveLink&) const = default;
};

// One infrastructure change. Events mutate the infrastructure only; stored
// deployments are touched exclusively by management queries.
using ChangeEvent = std::variant<UpsertNode, RemoveNode, UpsertLink, RemoveLink>;

enum class ViolationKind {
  MissingService,    // complete-mode only: service has no assignment
  ThingReqsUnmet,    // node does not reach a required IoT device
  SwReqsUnmet,       // node lacks required software
  HwExceeded,        // node hardware headroom violated
  LinkMissing,       // required directed link absent
  LatencyExceeded,   // link latency above the requirement
  BwExceeded         // link bandwidth headroom violated
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string subject;                // node id, "src->dst" link, or service
  std::vector<Identifier> services;   // services implicated in the breach
  std::string detail;

  bool operator==(const Violation&) const = default;
};

struct Verdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

enum class ValidationMode {
  Complete,  // every service of the app must be placed
  Partial    // unplaced services are fine; placed ones are checked fully
};

// Checks a placement against every eligibility rule: IoT reach, software,
// cumulative hardware with headroom, and per-interaction latency plus
// cumulative bandwidth with headroom on directed links. Returns every
// violation, not just the first. Throws Error(Structural) when the placement
// names unknown services or nodes.
Verdict validate_eligible(const AppSpec& app, const Infrastructure& infra,
                          const Thresholds& thresholds,
                          const Placement& placement,
                          ValidationMode mode = ValidationMode::Complete);

// Recomputes the ledgers a placement implies: hardware sums per node and
// bandwidth sums per directed link between distinct nodes. Purely structural;
// eligibility is not checked. Throws Error(Structural) on unknown ids.
std::pair<HwLedger, BwLedger> derive_ledgers(const AppSpec& app,
                                             const Placement& placement);

}  // namespace fogplan
