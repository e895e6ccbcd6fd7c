// Command-line front end. Talks to the engine exclusively through the C API
// in fogplan.h, the same surface other language bindings would use.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fogplan.h"

namespace {

// Exit codes: 0 success, 1 no eligible placement or failed management,
// 2 malformed or inconsistent input, 3 broken library invariant.
constexpr int kExitOk = 0;
constexpr int kExitNoPlacement = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternal = 3;

int exit_code_of(fp_status status) {
  switch (status) {
    case FP_OK: return kExitOk;
    case FP_ERR_NO_PLACEMENT: return kExitNoPlacement;
    case FP_ERR_PARSE:
    case FP_ERR_REFERENCE:
    case FP_ERR_UNKNOWN_ID:
    case FP_ERR_INVALID_ARG:
    case FP_ERR_IO:
      return kExitInputError;
    case FP_ERR_BOUND_EXCEEDED:
    case FP_ERR_INTERNAL:
      return kExitInternal;
  }
  return kExitInternal;
}

int report(fp_status status) {
  std::cerr << "error (" << fp_status_name(status) << "): " << fp_last_error()
            << "\n";
  return exit_code_of(status);
}

// Owning wrapper for strings returned by the library.
struct LibString {
  char* text = nullptr;
  ~LibString() { fp_string_free(text); }
  std::string str() const { return text ? text : ""; }
};

struct WorldHandle {
  fp_world* world = nullptr;
  ~WorldHandle() { fp_world_destroy(world); }
};

struct EventsHandle {
  fp_events* events = nullptr;
  ~EventsHandle() { fp_events_destroy(events); }
};

struct SolutionsHandle {
  fp_solutions* solutions = nullptr;
  ~SolutionsHandle() { fp_solutions_destroy(solutions); }
};

struct OutcomeHandle {
  fp_outcome* outcome = nullptr;
  ~OutcomeHandle() { fp_outcome_destroy(outcome); }
};

struct CommonArgs {
  std::string app_file;
  std::string infra_file;
  std::string hw_th;
  std::string bw_th;
  bool steps = false;
};

// Loads both fact files and applies threshold flags, which win over any
// hwTh/bwTh facts in the files.
fp_status load_world(const CommonArgs& args, WorldHandle& world) {
  fp_status status = fp_world_create(&world.world);
  if (status != FP_OK) return status;
  status = fp_world_load_problem_file(world.world, args.app_file.c_str());
  if (status != FP_OK) return status;
  status = fp_world_load_problem_file(world.world, args.infra_file.c_str());
  if (status != FP_OK) return status;
  if (!args.hw_th.empty() || !args.bw_th.empty()) {
    std::string hw = args.hw_th.empty() ? "0" : args.hw_th;
    std::string bw = args.bw_th.empty() ? "0" : args.bw_th;
    status = fp_world_set_thresholds(world.world, hw.c_str(), bw.c_str());
    if (status != FP_OK) return status;
  }
  return FP_OK;
}

int cmd_place(const CommonArgs& args, bool enumerate) {
  WorldHandle world;
  fp_status status = load_world(args, world);
  if (status != FP_OK) return report(status);

  SolutionsHandle solutions;
  if (enumerate) {
    status = fp_enumerate(world.world, nullptr, &solutions.solutions);
    if (status != FP_OK) return report(status);
    size_t count = 0;
    fp_solutions_count(solutions.solutions, &count);
    for (size_t i = 0; i < count; ++i) {
      LibString text;
      status = fp_solutions_text(solutions.solutions, i, &text.text);
      if (status != FP_OK) return report(status);
      if (i > 0) std::cout << "\n";
      std::cout << text.str();
    }
    std::cout << "eligible: " << count << "\n";
    if (args.steps) {
      uint64_t steps = 0;
      fp_solutions_steps(solutions.solutions, &steps);
      std::cout << "steps: " << steps << "\n";
    }
    return count > 0 ? kExitOk : kExitNoPlacement;
  }

  status = fp_place(world.world, nullptr, &solutions.solutions);
  if (status == FP_ERR_NO_PLACEMENT) {
    std::cout << "no eligible placement\n";
    return kExitNoPlacement;
  }
  if (status != FP_OK) return report(status);
  LibString text;
  status = fp_solutions_text(solutions.solutions, 0, &text.text);
  if (status != FP_OK) return report(status);
  std::cout << text.str();
  if (args.steps) {
    uint64_t steps = 0;
    fp_solutions_steps(solutions.solutions, &steps);
    std::cout << "steps: " << steps << "\n";
  }
  return kExitOk;
}

// Prints one block per management query: the outcome line, the deployment
// when one exists, and optionally the step count.
int print_outcome(const OutcomeHandle& outcome, bool steps, bool first_block) {
  if (!first_block) std::cout << "\n";
  fp_outcome_kind kind;
  fp_outcome_get_kind(outcome.outcome, &kind);
  switch (kind) {
    case FP_OUTCOME_UNCHANGED:
      std::cout << "unchanged\n";
      break;
    case FP_OUTCOME_PARTIAL_MIGRATION: {
      std::cout << "migrated:";
      size_t count = 0;
      fp_outcome_migrated_count(outcome.outcome, &count);
      for (size_t i = 0; i < count; ++i) {
        LibString service;
        if (fp_outcome_migrated_at(outcome.outcome, i, &service.text) != FP_OK)
          break;
        std::cout << (i ? ", " : " ") << service.str();
      }
      std::cout << "\n";
      break;
    }
    case FP_OUTCOME_FULL_REPLACEMENT:
      std::cout << "deployed\n";
      break;
    case FP_OUTCOME_FAILED:
      std::cout << "failed\n";
      break;
  }
  if (kind != FP_OUTCOME_FAILED) {
    LibString text;
    fp_status status = fp_outcome_placement_text(outcome.outcome, &text.text);
    if (status != FP_OK) return report(status);
    std::cout << text.str();
  }
  if (steps) {
    uint64_t count = 0;
    fp_outcome_steps(outcome.outcome, &count);
    std::cout << "steps: " << count << "\n";
  }
  return -1;  // no exit yet
}

int cmd_manage(const CommonArgs& args, const std::string& events_file) {
  WorldHandle world;
  fp_status status = load_world(args, world);
  if (status != FP_OK) return report(status);

  EventsHandle events;
  status = fp_events_parse_file(events_file.c_str(), &events.events);
  if (status != FP_OK) return report(status);

  // Initial deployment, then replay: changes mutate the infrastructure,
  // each query marker runs one management step.
  OutcomeHandle first;
  status = fp_manage(world.world, nullptr, &first.outcome);
  if (status != FP_OK) return report(status);
  int early = print_outcome(first, args.steps, /*first_block=*/true);
  if (early >= 0) return early;

  fp_outcome_kind last_kind;
  fp_outcome_get_kind(first.outcome, &last_kind);

  size_t count = 0;
  fp_events_count(events.events, &count);
  for (size_t i = 0; i < count; ++i) {
    int is_query = 0;
    status = fp_events_is_query(events.events, i, &is_query);
    if (status != FP_OK) return report(status);
    if (!is_query) {
      status = fp_world_apply_event(world.world, events.events, i);
      if (status != FP_OK) return report(status);
      continue;
    }
    OutcomeHandle outcome;
    status = fp_manage(world.world, nullptr, &outcome.outcome);
    if (status != FP_OK) return report(status);
    early = print_outcome(outcome, args.steps, /*first_block=*/false);
    if (early >= 0) return early;
    fp_outcome_get_kind(outcome.outcome, &last_kind);
  }
  return last_kind == FP_OUTCOME_FAILED ? kExitNoPlacement : kExitOk;
}

int write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    std::cerr << "error (io-error): cannot write " << path << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_gen_infra(unsigned replicas, const std::string& out_path) {
  LibString text;
  fp_status status = fp_generate_infrastructure(replicas, &text.text);
  if (status != FP_OK) return report(status);
  return write_or_print(text.str(), out_path);
}

int cmd_bench(const std::vector<unsigned>& replicas,
              const std::vector<std::string>& scenarios,
              const std::string& out_path, bool wall) {
  std::vector<const char*> names;
  names.reserve(scenarios.size());
  for (const std::string& s : scenarios) names.push_back(s.c_str());
  LibString csv;
  fp_status status =
      fp_run_bench(replicas.data(), replicas.size(), names.data(),
                   names.size(), wall ? 1 : 0, &csv.text);
  if (status != FP_OK) return report(status);
  return write_or_print(csv.str(), out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"QoS-aware service placement over Cloud-IoT infrastructures"};
  cli.require_subcommand(1);

  CommonArgs args;
  bool enumerate = false;
  std::string events_file;

  auto add_common = [&](CLI::App* cmd, bool with_events) {
    cmd->add_option("app_file", args.app_file, "application fact file")
        ->required();
    cmd->add_option("infra_file", args.infra_file, "infrastructure fact file")
        ->required();
    if (with_events)
      cmd->add_option("events_file", events_file,
                      "event script (changes and query markers)")
          ->required();
    cmd->add_option("--hw-th", args.hw_th,
                    "hardware headroom, overrides hwTh facts");
    cmd->add_option("--bw-th", args.bw_th,
                    "bandwidth headroom, overrides bwTh facts");
    cmd->add_flag("--steps", args.steps, "print search step counts");
  };

  CLI::App* place =
      cli.add_subcommand("place", "compute an eligible placement");
  add_common(place, false);
  place->add_flag("--enumerate", enumerate, "print every eligible placement");

  CLI::App* manage = cli.add_subcommand(
      "manage", "deploy, then replay events and manage on each query");
  add_common(manage, true);

  unsigned replicas = 1;
  std::string out_path;
  CLI::App* gen = cli.add_subcommand(
      "gen-infra", "generate a replicated infrastructure fact file");
  gen->add_option("--replicas", replicas, "replication factor (5 nodes each)")
      ->required();
  gen->add_option("-o,--output", out_path, "output file (default stdout)");

  std::vector<unsigned> bench_replicas{2, 10, 20, 100, 200};
  std::vector<std::string> bench_scenarios{"first", "nochange", "nodefail",
                                           "linkfail"};
  bool wall = false;
  CLI::App* bench =
      cli.add_subcommand("bench", "run placement and repair benchmarks");
  bench->add_option("--replicas", bench_replicas,
                    "replication factors to benchmark")
      ->delimiter(',');
  bench->add_option("--scenarios", bench_scenarios,
                    "scenarios: first nochange nodefail linkfail")
      ->delimiter(',');
  bench->add_option("-o,--output", out_path, "output CSV (default stdout)");
  bench->add_flag("--wall", wall, "include wall-clock milliseconds");

  CLI11_PARSE(cli, argc, argv);

  if (cli.got_subcommand(place)) return cmd_place(args, enumerate);
  if (cli.got_subcommand(manage)) return cmd_manage(args, events_file);
  if (cli.got_subcommand(gen)) return cmd_gen_infra(replicas, out_path);
  if (cli.got_subcommand(bench))
    return cmd_bench(bench_replicas, bench_scenarios, out_path, wall);
  return kExitInputError;
}
