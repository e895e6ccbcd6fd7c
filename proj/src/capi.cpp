#include "fogplan.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "factfile.hpp"
#include "model.hpp"
#include "reasoner.hpp"
#include "scale.hpp"
#include "world.hpp"

namespace {

thread_local std::string g_last_error;

fp_status status_of(const fogplan::Error& error) {
  using fogplan::ErrorKind;
  switch (error.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::UnknownFunctor:
    case ErrorKind::ArityMismatch:
    case ErrorKind::DuplicateKey:
    case ErrorKind::EmptyScript:
      return FP_ERR_PARSE;
    case ErrorKind::InvalidValue:
      // A bad value inside a file is a parse failure; a bad value passed as
      // an argument is the caller's fault.
      return dynamic_cast<const fogplan::ParseError*>(&error)
                 ? FP_ERR_PARSE
                 : FP_ERR_INVALID_ARG;
    case ErrorKind::DanglingReference:
    case ErrorKind::Reference:
      return FP_ERR_REFERENCE;
    case ErrorKind::UnknownId:
      return FP_ERR_UNKNOWN_ID;
    case ErrorKind::BoundExceeded:
      return FP_ERR_BOUND_EXCEEDED;
    case ErrorKind::Io:
      return FP_ERR_IO;
    case ErrorKind::Structural:
    case ErrorKind::Internal:
      return FP_ERR_INTERNAL;
  }
  return FP_ERR_INTERNAL;
}

// Runs the body under the library's exception barrier: exceptions become
// status codes and a thread-local message.
template <typename Fn>
fp_status guarded(Fn&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const fogplan::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return FP_ERR_INTERNAL;
  }
}

fp_status invalid_arg(const char* message) {
  g_last_error = message;
  return FP_ERR_INVALID_ARG;
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

struct Solutions {
  std::vector<fogplan::Solution> items;
  std::uint64_t steps = 0;
};

fogplan::World* unwrap(fp_world* world) {
  return reinterpret_cast<fogplan::World*>(world);
}
const fogplan::World* unwrap(const fp_world* world) {
  return reinterpret_cast<const fogplan::World*>(world);
}
fogplan::EventScript* unwrap(fp_events* events) {
  return reinterpret_cast<fogplan::EventScript*>(events);
}
const fogplan::EventScript* unwrap(const fp_events* events) {
  return reinterpret_cast<const fogplan::EventScript*>(events);
}
Solutions* unwrap(fp_solutions* solutions) {
  return reinterpret_cast<Solutions*>(solutions);
}
const Solutions* unwrap(const fp_solutions* solutions) {
  return reinterpret_cast<const Solutions*>(solutions);
}
fogplan::ManagementOutcome* unwrap(fp_outcome* outcome) {
  return reinterpret_cast<fogplan::ManagementOutcome*>(outcome);
}
const fogplan::ManagementOutcome* unwrap(const fp_outcome* outcome) {
  return reinterpret_cast<const fogplan::ManagementOutcome*>(outcome);
}

// NULL app id means "the only declared application".
fogplan::Identifier resolve_app(const fogplan::World& world,
                                const char* app_id) {
  if (app_id) return fogplan::Identifier(app_id);
  return world.sole_app_id();
}

}  // namespace

extern "C" {

const char* fp_status_name(fp_status status) {
  switch (status) {
    case FP_OK: return "ok";
    case FP_ERR_NO_PLACEMENT: return "no-placement";
    case FP_ERR_PARSE: return "parse-error";
    case FP_ERR_REFERENCE: return "reference-error";
    case FP_ERR_UNKNOWN_ID: return "unknown-id";
    case FP_ERR_INVALID_ARG: return "invalid-argument";
    case FP_ERR_BOUND_EXCEEDED: return "bound-exceeded";
    case FP_ERR_IO: return "io-error";
    case FP_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* fp_last_error(void) { return g_last_error.c_str(); }

void fp_string_free(char* text) { delete[] text; }

fp_status fp_world_create(fp_world** out) {
  if (!out) return invalid_arg("out must not be NULL");
  return guarded([&] {
    *out = reinterpret_cast<fp_world*>(new fogplan::World());
    return FP_OK;
  });
}

void fp_world_destroy(fp_world* world) { delete unwrap(world); }

fp_status fp_world_load_problem(fp_world* world, const char* text) {
  if (!world || !text) return invalid_arg("world and text must not be NULL");
  return guarded([&] {
    unwrap(world)->load_problem(fogplan::parse_problem(text));
    return FP_OK;
  });
}

fp_status fp_world_load_problem_file(fp_world* world, const char* path) {
  if (!world || !path) return invalid_arg("world and path must not be NULL");
  return guarded([&] {
    unwrap(world)->load_problem(fogplan::parse_problem_file(path));
    return FP_OK;
  });
}

fp_status fp_world_set_thresholds(fp_world* world, const char* hw_th,
                                  const char* bw_th) {
  if (!world || !hw_th || !bw_th)
    return invalid_arg("world and both thresholds must not be NULL");
  return guarded([&] {
    unwrap(world)->set_thresholds({fogplan::parse_decimal(hw_th),
                                   fogplan::parse_decimal(bw_th)});
    return FP_OK;
  });
}

fp_status fp_world_node_count(const fp_world* world, size_t* out) {
  if (!world || !out) return invalid_arg("world and out must not be NULL");
  *out = unwrap(world)->infrastructure().node_count();
  return FP_OK;
}

fp_status fp_world_link_count(const fp_world* world, size_t* out) {
  if (!world || !out) return invalid_arg("world and out must not be NULL");
  *out = unwrap(world)->infrastructure().link_count();
  return FP_OK;
}

fp_status fp_place(fp_world* world, const char* app_id, fp_solutions** out) {
  if (!world || !out) return invalid_arg("world and out must not be NULL");
  return guarded([&]() -> fp_status {
    fogplan::World& w = *unwrap(world);
    const fogplan::AppSpec* app = w.find_app(resolve_app(w, app_id));
    if (!app)
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "no such application");
    fogplan::StepCounter counter;
    fogplan::SearchConfig config{w.thresholds(),
                                 fogplan::SearchMode::FirstSolution};
    std::optional<fogplan::Solution> solution =
        fogplan::place_app(*app, w.infrastructure(), config, counter);
    if (!solution) {
      g_last_error = "no eligible placement";
      return FP_ERR_NO_PLACEMENT;
    }
    auto solutions = std::make_unique<Solutions>();
    solutions->items.push_back(std::move(*solution));
    solutions->steps = counter.steps;
    *out = reinterpret_cast<fp_solutions*>(solutions.release());
    return FP_OK;
  });
}

fp_status fp_enumerate(fp_world* world, const char* app_id,
                       fp_solutions** out) {
  if (!world || !out) return invalid_arg("world and out must not be NULL");
  return guarded([&]() -> fp_status {
    fogplan::World& w = *unwrap(world);
    const fogplan::AppSpec* app = w.find_app(resolve_app(w, app_id));
    if (!app)
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "no such application");
    fogplan::StepCounter counter;
    fogplan::SearchConfig config{w.thresholds(),
                                 fogplan::SearchMode::EnumerateAll};
    auto solutions = std::make_unique<Solutions>();
    solutions->items =
        fogplan::enumerate_placements(*app, w.infrastructure(), config,
                                      counter);
    solutions->steps = counter.steps;
    *out = reinterpret_cast<fp_solutions*>(solutions.release());
    return FP_OK;
  });
}

fp_status fp_solutions_count(const fp_solutions* solutions, size_t* out) {
  if (!solutions || !out)
    return invalid_arg("solutions and out must not be NULL");
  *out = unwrap(solutions)->items.size();
  return FP_OK;
}

fp_status fp_solutions_steps(const fp_solutions* solutions, uint64_t* out) {
  if (!solutions || !out)
    return invalid_arg("solutions and out must not be NULL");
  *out = unwrap(solutions)->steps;
  return FP_OK;
}

fp_status fp_solutions_text(const fp_solutions* solutions, size_t index,
                            char** out) {
  if (!solutions || !out)
    return invalid_arg("solutions and out must not be NULL");
  return guarded([&]() -> fp_status {
    const Solutions& s = *unwrap(solutions);
    if (index >= s.items.size())
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "solution index out of range");
    const fogplan::Solution& item = s.items[index];
    *out = copy_string(fogplan::serialize_placement(
        item.placement, item.hw_alloc, item.bw_alloc));
    return FP_OK;
  });
}

void fp_solutions_destroy(fp_solutions* solutions) {
  delete unwrap(solutions);
}

fp_status fp_events_parse(const char* text, fp_events** out) {
  if (!text || !out) return invalid_arg("text and out must not be NULL");
  return guarded([&] {
    auto events =
        std::make_unique<fogplan::EventScript>(fogplan::parse_events(text));
    *out = reinterpret_cast<fp_events*>(events.release());
    return FP_OK;
  });
}

fp_status fp_events_parse_file(const char* path, fp_events** out) {
  if (!path || !out) return invalid_arg("path and out must not be NULL");
  return guarded([&] {
    auto events = std::make_unique<fogplan::EventScript>(
        fogplan::parse_events_file(path));
    *out = reinterpret_cast<fp_events*>(events.release());
    return FP_OK;
  });
}

fp_status fp_events_count(const fp_events* events, size_t* out) {
  if (!events || !out) return invalid_arg("events and out must not be NULL");
  *out = unwrap(events)->size();
  return FP_OK;
}

fp_status fp_events_is_query(const fp_events* events, size_t index, int* out) {
  if (!events || !out) return invalid_arg("events and out must not be NULL");
  return guarded([&]() -> fp_status {
    const fogplan::EventScript& script = *unwrap(events);
    if (index >= script.size())
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "event index out of range");
    *out = std::holds_alternative<fogplan::QueryMarker>(script[index]) ? 1 : 0;
    return FP_OK;
  });
}

void fp_events_destroy(fp_events* events) { delete unwrap(events); }

fp_status fp_world_apply_event(fp_world* world, const fp_events* events,
                               size_t index) {
  if (!world || !events)
    return invalid_arg("world and events must not be NULL");
  return guarded([&]() -> fp_status {
    const fogplan::EventScript& script = *unwrap(events);
    if (index >= script.size())
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "event index out of range");
    const auto* change = std::get_if<fogplan::ChangeEvent>(&script[index]);
    if (!change)
      throw fogplan::Error(fogplan::ErrorKind::InvalidValue,
                           "item is a query marker, not a change event");
    unwrap(world)->apply_event(*change);
    return FP_OK;
  });
}

fp_status fp_manage(fp_world* world, const char* app_id, fp_outcome** out) {
  if (!world || !out) return invalid_arg("world and out must not be NULL");
  return guarded([&] {
    fogplan::World& w = *unwrap(world);
    auto outcome = std::make_unique<fogplan::ManagementOutcome>(
        w.manage(resolve_app(w, app_id)));
    *out = reinterpret_cast<fp_outcome*>(outcome.release());
    return FP_OK;
  });
}

fp_status fp_outcome_get_kind(const fp_outcome* outcome,
                              fp_outcome_kind* out) {
  if (!outcome || !out) return invalid_arg("outcome and out must not be NULL");
  switch (unwrap(outcome)->kind) {
    case fogplan::OutcomeKind::Unchanged: *out = FP_OUTCOME_UNCHANGED; break;
    case fogplan::OutcomeKind::PartialMigration:
      *out = FP_OUTCOME_PARTIAL_MIGRATION;
      break;
    case fogplan::OutcomeKind::FullReplacement:
      *out = FP_OUTCOME_FULL_REPLACEMENT;
      break;
    case fogplan::OutcomeKind::Failed: *out = FP_OUTCOME_FAILED; break;
  }
  return FP_OK;
}

fp_status fp_outcome_migrated_count(const fp_outcome* outcome, size_t* out) {
  if (!outcome || !out) return invalid_arg("outcome and out must not be NULL");
  *out = unwrap(outcome)->migrated.size();
  return FP_OK;
}

fp_status fp_outcome_migrated_at(const fp_outcome* outcome, size_t index,
                                 char** out) {
  if (!outcome || !out) return invalid_arg("outcome and out must not be NULL");
  return guarded([&]() -> fp_status {
    const fogplan::ManagementOutcome& o = *unwrap(outcome);
    if (index >= o.migrated.size())
      throw fogplan::Error(fogplan::ErrorKind::UnknownId,
                           "migrated index out of range");
    *out = copy_string(o.migrated[index]);
    return FP_OK;
  });
}

fp_status fp_outcome_placement_text(const fp_outcome* outcome, char** out) {
  if (!outcome || !out) return invalid_arg("outcome and out must not be NULL");
  return guarded([&]() -> fp_status {
    const fogplan::ManagementOutcome& o = *unwrap(outcome);
    if (!o.deployment) {
      g_last_error = "failed outcome has no deployment";
      return FP_ERR_NO_PLACEMENT;
    }
    *out = copy_string(fogplan::serialize_placement(o.deployment->placement,
                                                    o.deployment->hw_alloc,
                                                    o.deployment->bw_alloc));
    return FP_OK;
  });
}

fp_status fp_outcome_steps(const fp_outcome* outcome, uint64_t* out) {
  if (!outcome || !out) return invalid_arg("outcome and out must not be NULL");
  *out = unwrap(outcome)->cr_steps;
  return FP_OK;
}

void fp_outcome_destroy(fp_outcome* outcome) { delete unwrap(outcome); }

fp_status fp_generate_infrastructure(unsigned replicas, char** out) {
  if (!out) return invalid_arg("out must not be NULL");
  return guarded([&] {
    fogplan::ProblemFile problem;
    problem.infra = fogplan::scale::gen_infrastructure(replicas);
    *out = copy_string(fogplan::serialize_problem(problem));
    return FP_OK;
  });
}

fp_status fp_run_bench(const unsigned* replicas, size_t n_replicas,
                       const char* const* scenarios, size_t n_scenarios,
                       int include_wall, char** out) {
  if (!out || (n_replicas > 0 && !replicas) ||
      (n_scenarios > 0 && !scenarios))
    return invalid_arg("array parameters must not be NULL");
  return guarded([&]() -> fp_status {
    std::vector<unsigned> rs(replicas, replicas + n_replicas);
    std::vector<fogplan::scale::Scenario> grid;
    for (size_t i = 0; i < n_scenarios; ++i) {
      auto scenario = fogplan::scale::scenario_from_name(scenarios[i]);
      if (!scenario)
        throw fogplan::Error(fogplan::ErrorKind::InvalidValue,
                             std::string("unknown scenario ") + scenarios[i]);
      grid.push_back(*scenario);
    }
    std::vector<fogplan::scale::BenchRow> rows =
        fogplan::scale::bench(rs, grid);
    *out = copy_string(fogplan::scale::to_csv(rows, include_wall != 0));
    return FP_OK;
  });
}

}  // extern "C"
