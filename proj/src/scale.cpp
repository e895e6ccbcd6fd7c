#include "scale.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "factfile.hpp"
#include "world.hpp"

namespace fogplan {
namespace scale {

const char* const kVrAppSource = R"(
application(vrApp, [videoStorage, sceneSelector, vrDriver]).
service(videoStorage, [mySQL, ubuntu], 16, []).
service(sceneSelector, [ubuntu], 2, []).
service(vrDriver, [gcc, make], 2, [vrViewer]).
s2s(videoStorage, sceneSelector, 150, 16).
s2s(sceneSelector, videoStorage, 150, 0.5).
s2s(sceneSelector, vrDriver, 20, 8).
s2s(vrDriver, sceneSelector, 20, 1).
)";

const char* const kVrInfraSource = R"(
node(cloud, [ubuntu, mySQL, gcc, make], inf, []).
node(ispdatacentre, [ubuntu, mySQL], 50, []).
node(cabinetserver, [ubuntu, mySQL], 20, []).
node(accesspoint, [ubuntu, gcc, make], 4, [vrViewer]).
node(smartphone, [android, gcc, make], 8, [vrViewer]).
link(cloud, ispdatacentre, 110, 1000).
link(cloud, cabinetserver, 135, 100).
link(cloud, accesspoint, 148, 20).
link(cloud, smartphone, 150, 18).
link(ispdatacentre, cloud, 110, 1000).
link(ispdatacentre, cabinetserver, 25, 500).
link(ispdatacentre, accesspoint, 38, 50).
link(ispdatacentre, smartphone, 40, 35).
link(cabinetserver, cloud, 135, 100).
link(cabinetserver, ispdatacentre, 25, 500).
link(cabinetserver, accesspoint, 13, 50).
link(cabinetserver, smartphone, 15, 35).
link(accesspoint, cloud, 148, 3).
link(accesspoint, ispdatacentre, 38, 4).
link(accesspoint, cabinetserver, 13, 4).
link(accesspoint, smartphone, 2, 70).
link(smartphone, cloud, 150, 2).
link(smartphone, ispdatacentre, 40, 2.5).
link(smartphone, cabinetserver, 15, 3).
link(smartphone, accesspoint, 2, 70).
)";

namespace {

const ProblemFile& base_app() {
  static const ProblemFile parsed = parse_problem(kVrAppSource);
  return parsed;
}

const ProblemFile& base_infra() {
  static const ProblemFile parsed = parse_problem(kVrInfraSource);
  return parsed;
}

// QoS between two replicated nodes of distinct base types, looked up once.
const LinkQos kSameTypeQos{Num(150), Num(2)};

std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
  auto delta = std::chrono::steady_clock::now() - since;
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(delta).count());
}

World make_world(unsigned replicas) {
  World world;
  world.load_problem(base_app());
  world.reset_infrastructure(gen_infrastructure(replicas));
  return world;
}

// Host of a service under the current deployment; Error(Internal) when the
// deployment does not place it, which the embedded app never allows.
const Identifier& host_of(const Deployment& deployment,
                          const Identifier& service) {
  const Identifier* node = deployment.placement.node_of(service);
  if (!node)
    throw Error(ErrorKind::Internal,
                "deployment does not place service " + service);
  return *node;
}

ChangeEvent make_mutation(Scenario scenario, const World& world,
                          const Deployment& deployment) {
  switch (scenario) {
    case Scenario::NoChange:
    case Scenario::NodeFail: {
      const Identifier& host = host_of(deployment, "videoStorage");
      const NodeSpec* current = world.infrastructure().find_node(host);
      if (!current)
        throw Error(ErrorKind::Internal, "deployment host " + host +
                                             " vanished without an event");
      NodeSpec mutated = *current;
      mutated.hw_caps = scenario == Scenario::NoChange ? Capacity(Num(17))
                                                       : Capacity(Num(0));
      return UpsertNode{mutated};
    }
    case Scenario::LinkFail: {
      const Identifier& src = host_of(deployment, "videoStorage");
      const Identifier& dst = host_of(deployment, "sceneSelector");
      const LinkQos* current = world.infrastructure().find_link(src, dst);
      if (!current)
        throw Error(ErrorKind::Internal,
                    "no link between the hosts of videoStorage and "
                    "sceneSelector");
      return UpsertLink{LinkSpec{src, dst, {Num(1350), current->bw}}};
    }
    case Scenario::First: break;
  }
  throw Error(ErrorKind::Internal, "scenario has no mutation");
}

}  // namespace

Infrastructure gen_infrastructure(unsigned replicas) {
  if (replicas < 1)
    throw Error(ErrorKind::InvalidValue, "replica count must be at least 1");

  const Infrastructure& base = base_infra().infra;
  Infrastructure out;
  // id -> base position, for QoS lookups while wiring the full graph.
  std::map<Identifier, std::size_t> base_of;
  for (unsigned k = 0; k < replicas; ++k) {
    for (std::size_t i = 0; i < base.nodes().size(); ++i) {
      NodeSpec node = base.nodes()[i];
      node.id += "_" + std::to_string(k);
      // Only replica 0 reaches the physical VR viewer.
      if (k > 0) node.thing_caps.clear();
      out.upsert_node(node);
      base_of.emplace(node.id, i);
    }
  }

  std::vector<const Identifier*> sorted;
  sorted.reserve(base_of.size());
  for (const auto& [id, index] : base_of) sorted.push_back(&id);

  for (const Identifier* src : sorted) {
    std::size_t src_base = base_of.at(*src);
    for (const Identifier* dst : sorted) {
      if (*src == *dst) continue;
      std::size_t dst_base = base_of.at(*dst);
      if (src_base == dst_base) {
        out.append_link_sorted(*src, *dst, kSameTypeQos);
      } else {
        const LinkQos* qos = base.find_link(base.nodes()[src_base].id,
                                            base.nodes()[dst_base].id);
        if (!qos)
          throw Error(ErrorKind::Internal,
                      "base infrastructure is not fully connected");
        out.append_link_sorted(*src, *dst, *qos);
      }
    }
  }
  return out;
}

const char* scenario_name(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::First: return "first";
    case Scenario::NoChange: return "nochange";
    case Scenario::NodeFail: return "nodefail";
    case Scenario::LinkFail: return "linkfail";
  }
  return "unknown";
}

std::optional<Scenario> scenario_from_name(const std::string& name) {
  if (name == "first") return Scenario::First;
  if (name == "nochange") return Scenario::NoChange;
  if (name == "nodefail") return Scenario::NodeFail;
  if (name == "linkfail") return Scenario::LinkFail;
  return std::nullopt;
}

BenchRow run_scenario(Scenario scenario, unsigned replicas) {
  BenchRow row;
  row.replicas = replicas;
  row.scenario = scenario;

  World world = make_world(replicas);
  row.nodes = world.infrastructure().node_count();
  const Identifier app_id = world.sole_app_id();

  if (scenario == Scenario::First) {
    auto started = std::chrono::steady_clock::now();
    ManagementOutcome outcome = world.manage(app_id);
    row.wall_ms = elapsed_ms(started);
    row.cr_steps = outcome.cr_steps;
    return row;
  }

  ManagementOutcome first = world.manage(app_id);
  if (!first.deployment) {
    // No first deployment: nothing to mutate, report the attempt.
    row.cr_steps = first.cr_steps;
    return row;
  }

  ChangeEvent mutation = make_mutation(scenario, world, *first.deployment);
  world.apply_event(mutation);

  auto started = std::chrono::steady_clock::now();
  ManagementOutcome outcome = world.manage(app_id);
  row.wall_ms = elapsed_ms(started);
  row.cr_steps = outcome.cr_steps;
  row.migrated = outcome.migrated.size();

  if (scenario == Scenario::NoChange && outcome.kind != OutcomeKind::Unchanged)
    throw Error(ErrorKind::Internal,
                "benign update unexpectedly triggered a migration");

  if (scenario == Scenario::NodeFail || scenario == Scenario::LinkFail) {
    // Price the repair against replanning from scratch on the same mutated
    // infrastructure, in a world with no deployment to lean on.
    World fresh = make_world(replicas);
    fresh.apply_event(mutation);
    ManagementOutcome replanned = fresh.manage(app_id);
    row.full_steps = replanned.cr_steps;
    if (row.cr_steps > 0)
      row.speedup = static_cast<double>(*row.full_steps) /
                    static_cast<double>(row.cr_steps);
  }
  return row;
}

std::vector<BenchRow> bench(const std::vector<unsigned>& replicas,
                            const std::vector<Scenario>& scenarios) {
  std::vector<BenchRow> out;
  for (unsigned r : replicas)
    for (Scenario scenario : scenarios) out.push_back(run_scenario(scenario, r));
  return out;
}

std::string to_csv(const std::vector<BenchRow>& rows, bool include_wall) {
  std::ostringstream out;
  out << "R,nodes,scenario,cr_steps,full_steps,speedup,migrated,wall_ms\n";
  for (const BenchRow& row : rows) {
    out << row.replicas << ',' << row.nodes << ','
        << scenario_name(row.scenario) << ',' << row.cr_steps << ',';
    if (row.full_steps)
      out << *row.full_steps;
    else
      out << '-';
    out << ',';
    if (row.speedup) {
      char text[32];
      std::snprintf(text, sizeof text, "%.2f", *row.speedup);
      out << text;
    } else {
      out << '-';
    }
    out << ',';
    if (row.migrated)
      out << *row.migrated;
    else
      out << '-';
    out << ',';
    if (include_wall && row.wall_ms)
      out << *row.wall_ms;
    else
      out << '-';
    out << '\n';
  }
  return out.str();
}

}  // namespace scale
}  // namespace fogplan
