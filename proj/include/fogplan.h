/*
 * fogplan C API: QoS-aware placement of multi-service applications over
 * Cloud-IoT infrastructures, with continuous reasoning on change events.
 *
 * All objects are opaque handles created and destroyed by this library.
 * Functions return FP_OK on success; on any error the output parameters are
 * left untouched and fp_last_error() describes the failure for the calling
 * thread. Handles are not thread-safe; confine each world to one thread.
 */

#ifndef FOGPLAN_H
#define FOGPLAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FP_OK = 0,
  FP_ERR_NO_PLACEMENT = 1,   /* no eligible placement exists */
  FP_ERR_PARSE = 2,          /* malformed fact file or event script */
  FP_ERR_REFERENCE = 3,      /* fact references an undeclared id */
  FP_ERR_UNKNOWN_ID = 4,     /* no such application, event, or solution */
  FP_ERR_INVALID_ARG = 5,    /* argument outside its admissible range */
  FP_ERR_BOUND_EXCEEDED = 6, /* enumeration larger than the safety bound */
  FP_ERR_IO = 7,             /* file could not be read or written */
  FP_ERR_INTERNAL = 8        /* broken invariant inside the library */
} fp_status;

/* Outcome of one management query. */
typedef enum {
  FP_OUTCOME_UNCHANGED = 0,
  FP_OUTCOME_PARTIAL_MIGRATION = 1,
  FP_OUTCOME_FULL_REPLACEMENT = 2,
  FP_OUTCOME_FAILED = 3
} fp_outcome_kind;

typedef struct fp_world fp_world;
typedef struct fp_events fp_events;
typedef struct fp_solutions fp_solutions;
typedef struct fp_outcome fp_outcome;

const char* fp_status_name(fp_status status);

/* Message for the last error raised on this thread; empty string if none. */
const char* fp_last_error(void);

/* Frees any string returned through a char** output parameter. */
void fp_string_free(char* text);

/* ---- worlds ---------------------------------------------------------- */

fp_status fp_world_create(fp_world** out);
void fp_world_destroy(fp_world* world);

/* Merges problem facts into the world. Declaring the same application,
 * node, link, or threshold twice across calls is an error. */
fp_status fp_world_load_problem(fp_world* world, const char* text);
fp_status fp_world_load_problem_file(fp_world* world, const char* path);

/* Overrides both headroom thresholds; values are decimal literals so exact
 * fractions like "0.5" survive. Wins over hwTh/bwTh facts. */
fp_status fp_world_set_thresholds(fp_world* world, const char* hw_th,
                                  const char* bw_th);

fp_status fp_world_node_count(const fp_world* world, size_t* out);
fp_status fp_world_link_count(const fp_world* world, size_t* out);

/* ---- placement ------------------------------------------------------- */

/* First eligible placement (or every one, for enumerate) of the named
 * application; pass NULL to mean the only declared application.
 * fp_place fails with FP_ERR_NO_PLACEMENT when nothing is eligible;
 * fp_enumerate succeeds with an empty solution set instead. */
fp_status fp_place(fp_world* world, const char* app_id, fp_solutions** out);
fp_status fp_enumerate(fp_world* world, const char* app_id,
                       fp_solutions** out);

fp_status fp_solutions_count(const fp_solutions* solutions, size_t* out);

/* Search cost of producing this solution set, in engine steps. */
fp_status fp_solutions_steps(const fp_solutions* solutions, uint64_t* out);

/* Rendered placement plus ledgers of solution `index`. */
fp_status fp_solutions_text(const fp_solutions* solutions, size_t index,
                            char** out);
void fp_solutions_destroy(fp_solutions* solutions);

/* ---- events and continuous management -------------------------------- */

fp_status fp_events_parse(const char* text, fp_events** out);
fp_status fp_events_parse_file(const char* path, fp_events** out);
fp_status fp_events_count(const fp_events* events, size_t* out);

/* True when item `index` is a `query.` marker rather than a change. */
fp_status fp_events_is_query(const fp_events* events, size_t index, int* out);
void fp_events_destroy(fp_events* events);

/* Applies change item `index` to the infrastructure. Applying a query
 * marker is an error; run fp_manage instead. */
fp_status fp_world_apply_event(fp_world* world, const fp_events* events,
                               size_t index);

/* One management query: deploys the application when it has none, otherwise
 * keeps, repairs, or replaces the current deployment. Returns FP_OK even
 * when the outcome kind is FP_OUTCOME_FAILED; inspect the outcome. */
fp_status fp_manage(fp_world* world, const char* app_id, fp_outcome** out);

fp_status fp_outcome_get_kind(const fp_outcome* outcome,
                              fp_outcome_kind* out);
fp_status fp_outcome_migrated_count(const fp_outcome* outcome, size_t* out);
fp_status fp_outcome_migrated_at(const fp_outcome* outcome, size_t index,
                                 char** out);

/* Rendered deployment; FP_ERR_NO_PLACEMENT for a Failed outcome. */
fp_status fp_outcome_placement_text(const fp_outcome* outcome, char** out);
fp_status fp_outcome_steps(const fp_outcome* outcome, uint64_t* out);
void fp_outcome_destroy(fp_outcome* outcome);

/* ---- benchmark harness ------------------------------------------------ */

/* Fact file text for a replicated infrastructure of 5*replicas nodes. */
fp_status fp_generate_infrastructure(unsigned replicas, char** out);

/* Runs the scenario grid (names: first, nochange, nodefail, linkfail) and
 * returns the CSV report. Wall-clock columns are written only when
 * include_wall is nonzero; without them the CSV is byte-stable. */
fp_status fp_run_bench(const unsigned* replicas, size_t n_replicas,
                       const char* const* scenarios, size_t n_scenarios,
                       int include_wall, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FOGPLAN_H */
