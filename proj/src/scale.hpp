#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace fogplan {
namespace scale {

// The reference VR application and five-node infrastructure, embedded so
// benchmarks need no data files. data/vrapp.pl and data/vrinfra.pl carry the
// same facts for the command line; a test keeps them in sync.
extern const char* const kVrAppSource;
extern const char* const kVrInfraSource;

// Replicates the base infrastructure: replica k carries the five base nodes
// with ids suffixed `_k`, and only replica 0 keeps the VR viewer device.
// Links form the full directed graph on all 5R nodes: pairs of different
// base types reuse the base QoS of that type pair; same-type pairs across
// replicas get a deliberately unattractive (150 ms, 2 Mbps) so deployments
// stay inside one replica. Throws Error(InvalidValue) when replicas < 1.
Infrastructure gen_infrastructure(unsigned replicas);

enum class Scenario {
  First,     // time and count the initial deployment
  NoChange,  // benign node update; management must keep everything in place
  NodeFail,  // videoStorage's host drops to zero hardware
  LinkFail   // the videoStorage -> sceneSelector link degrades to 1350 ms
};

const char* scenario_name(Scenario scenario) noexcept;
std::optional<Scenario> scenario_from_name(const std::string& name);

struct BenchRow {
  unsigned replicas = 0;
  std::size_t nodes = 0;
  Scenario scenario = Scenario::First;
  std::uint64_t cr_steps = 0;                 // management query cost
  std::optional<std::uint64_t> full_steps;    // placement-from-scratch cost
  std::optional<double> speedup;              // full_steps / cr_steps
  std::optional<std::size_t> migrated;
  std::optional<std::uint64_t> wall_ms;       // management query wall time

  bool operator==(const BenchRow&) const = default;
};

// Runs one scenario in a fresh world: first deployment, the scenario's
// mutation resolved against the current deployment, one management query.
// nodefail and linkfail also measure a from-scratch placement on the mutated
// infrastructure in a second fresh world, which prices the repair against
// full replanning. Deterministic except for wall_ms.
BenchRow run_scenario(Scenario scenario, unsigned replicas);

// Cross product, replicas outer, scenarios inner, each run in a fresh world.
std::vector<BenchRow> bench(const std::vector<unsigned>& replicas,
                            const std::vector<Scenario>& scenarios);

// CSV with header R,nodes,scenario,cr_steps,full_steps,speedup,migrated,
// wall_ms and `-` for inapplicable cells. Wall time is only written when
// asked for, keeping default reports byte-stable across runs.
std::string to_csv(const std::vector<BenchRow>& rows, bool include_wall);

}  // namespace scale
}  // namespace fogplan
