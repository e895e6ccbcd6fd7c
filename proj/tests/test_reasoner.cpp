#include "reasoner.hpp"

#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "engine.hpp"
#include "errors.hpp"
#include "factfile.hpp"
#include "scale.hpp"
#include "support/instances.hpp"
#include "world.hpp"

using namespace fogplan;

namespace {

const AppSpec& vr_app() {
  static const AppSpec app = parse_problem(scale::kVrAppSource).app.value();
  return app;
}

const Infrastructure& vr_infra() {
  static const Infrastructure infra = parse_problem(scale::kVrInfraSource).infra;
  return infra;
}

Thresholds no_headroom() { return {Num(0), Num(0)}; }

Deployment vr_deployment() {
  Deployment d;
  d.app_id = "vrApp";
  d.placement.prepend({"videoStorage", "cloud"});
  d.placement.prepend({"sceneSelector", "cabinetserver"});
  d.placement.prepend({"vrDriver", "accesspoint"});
  d.hw_alloc = {
      {"accesspoint", Num(2)}, {"cabinetserver", Num(2)}, {"cloud", Num(16)}};
  d.bw_alloc = {{{"accesspoint", "cabinetserver"}, Num(1)},
                {{"cabinetserver", "accesspoint"}, Num(8)},
                {{"cabinetserver", "cloud"}, Num(1, 2)},
                {{"cloud", "cabinetserver"}, Num(16)}};
  return d;
}

// The reference infrastructure after its cloud node loses the database
// package the storage service needs.
Infrastructure degraded_cloud() {
  Infrastructure infra = vr_infra();
  infra.upsert_node({"cloud", {"ubuntu", "gcc", "make"}, Capacity::infinite(),
                     {}});
  return infra;
}

World vr_world() {
  World world = World::load(parse_problem(scale::kVrAppSource));
  world.load_problem(parse_problem(scale::kVrInfraSource));
  return world;
}

std::vector<Identifier> names(const std::vector<ServiceDescriptor>& ds) {
  std::vector<Identifier> out;
  for (const ServiceDescriptor& d : ds) out.push_back(d.service);
  return out;
}

}  // namespace

TEST_CASE("default policies fire exactly on their documented boundaries") {
  SUBCASE("nodes") {
    NodeSpec node{"n", {"db"}, Capacity(Num(2)), {"camera"}};
    LabelSet sw{"db"};
    LabelSet things{"camera"};

    CHECK(default_node_problem(nullptr, sw, things, no_headroom()));
    CHECK_FALSE(default_node_problem(&node, sw, things, no_headroom()));
    // The capability must stay strictly above the headroom.
    CHECK(default_node_problem(&node, sw, things, {Num(2), Num(0)}));
    CHECK_FALSE(default_node_problem(&node, sw, things, {Num(1), Num(0)}));
    CHECK(default_node_problem(&node, {"db", "gcc"}, things, no_headroom()));
    CHECK(default_node_problem(&node, sw, {"camera", "meter"}, no_headroom()));

    NodeSpec vast{"n", {"db"}, Capacity::infinite(), {"camera"}};
    CHECK_FALSE(default_node_problem(&vast, sw, things, {Num(1000), Num(0)}));

    // A drained node still counts as healthy: allocations are not its
    // problem, they are the deployment's.
    NodeSpec tight{"n", {"db"}, Capacity(Num(1)), {"camera"}};
    CHECK_FALSE(default_node_problem(&tight, sw, things, no_headroom()));
  }
  SUBCASE("links") {
    LinkQos link{Num(5), Num(10)};

    CHECK(default_communication_problem(nullptr, Num(100), no_headroom()));
    CHECK_FALSE(default_communication_problem(&link, Num(5), no_headroom()));
    CHECK(default_communication_problem(&link, Num(9, 2), no_headroom()));
    // Bandwidth at the headroom is still acceptable; below it is not.
    CHECK_FALSE(default_communication_problem(&link, Num(5),
                                              {Num(0), Num(10)}));
    CHECK(default_communication_problem(&link, Num(5), {Num(0), Num(21, 2)}));
  }
}

TEST_CASE("suffering detection names both endpoints in declaration order") {
  Deployment deployed = vr_deployment();

  SUBCASE("a healthy infrastructure migrates nothing") {
    StepCounter c;
    CHECK(to_migrate(deployed, vr_app(), vr_infra(), ProblemPolicy::defaults(),
                     no_headroom(), c)
              .empty());
    // Four cross-node interactions plus three hosted services.
    CHECK(c.steps == 7);
  }
  SUBCASE("a node problem moves only its tenants") {
    StepCounter c;
    std::vector<ServiceDescriptor> out =
        to_migrate(deployed, vr_app(), degraded_cloud(),
                   ProblemPolicy::defaults(), no_headroom(), c);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == ServiceDescriptor{"videoStorage", "cloud", Num(16)});
    CHECK(c.steps == 7);
  }
  SUBCASE("a link problem moves both endpoints") {
    Infrastructure infra = vr_infra();
    infra.upsert_link("cabinetserver", "cloud", {Num(1350), Num(100)});
    StepCounter c;
    std::vector<ServiceDescriptor> out =
        to_migrate(deployed, vr_app(), infra, ProblemPolicy::defaults(),
                   no_headroom(), c);
    CHECK(names(out) ==
          std::vector<Identifier>{"videoStorage", "sceneSelector"});
    CHECK(out[0].node == "cloud");
    CHECK(out[1].node == "cabinetserver");
  }
  SUBCASE("overlapping problems report each service once") {
    Infrastructure infra = degraded_cloud();
    infra.upsert_link("cabinetserver", "cloud", {Num(1350), Num(100)});
    infra.upsert_link("cloud", "cabinetserver", {Num(1350), Num(100)});
    StepCounter c;
    std::vector<ServiceDescriptor> out =
        to_migrate(deployed, vr_app(), infra, ProblemPolicy::defaults(),
                   no_headroom(), c);
    CHECK(names(out) ==
          std::vector<Identifier>{"videoStorage", "sceneSelector"});
  }
  SUBCASE("a vanished node drags its communication partners along") {
    Infrastructure infra = vr_infra();
    infra.remove_node("cloud");
    StepCounter c;
    std::vector<ServiceDescriptor> out =
        to_migrate(deployed, vr_app(), infra, ProblemPolicy::defaults(),
                   no_headroom(), c);
    // The storage node is gone, so its links are gone too: the scene
    // selector's interactions with it suffer as well.
    CHECK(names(out) ==
          std::vector<Identifier>{"videoStorage", "sceneSelector"});
    CHECK(out[0].node == "cloud");
  }
  SUBCASE("a custom policy can force everything to move") {
    ProblemPolicy alarmist;
    alarmist.node_problem = [](const NodeSpec*, const LabelSet&,
                               const LabelSet&, const Thresholds&) {
      return true;
    };
    alarmist.communication_problem = [](const LinkQos*, const Num&,
                                        const Thresholds&) { return false; };
    StepCounter c;
    std::vector<ServiceDescriptor> out = to_migrate(
        deployed, vr_app(), vr_infra(), alarmist, no_headroom(), c);
    CHECK(names(out) == std::vector<Identifier>{"videoStorage",
                                                "sceneSelector", "vrDriver"});
  }
}

TEST_CASE("freed hardware drops zeroed entries and rejects underflow") {
  Deployment deployed = vr_deployment();
  std::vector<ServiceDescriptor> storage{{"videoStorage", "cloud", Num(16)}};

  CHECK(free_hw_allocation(deployed.hw_alloc, storage) ==
        HwLedger{{"accesspoint", Num(2)}, {"cabinetserver", Num(2)}});

  HwLedger shared{{"n", Num(5)}};
  CHECK(free_hw_allocation(shared, {{"a", "n", Num(2)}}) ==
        HwLedger{{"n", Num(3)}});
  CHECK(free_hw_allocation(shared, {{"a", "n", Num(2)}, {"b", "n", Num(3)}})
            .empty());

  // A weightless service may leave a node that never booked anything.
  CHECK(free_hw_allocation(shared, {{"a", "ghost", Num(0)}}) == shared);

  try {
    (void)free_hw_allocation(HwLedger{{"n", Num(1)}}, {{"a", "n", Num(2)}});
    FAIL("expected underflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Internal);
  }
  try {
    (void)free_hw_allocation({}, {{"a", "n", Num(2)}});
    FAIL("expected a missing entry to be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Internal);
  }
}

TEST_CASE("freed bandwidth releases only flows that touch a migrating service") {
  Deployment deployed = vr_deployment();

  SUBCASE("one endpoint migrating frees both directions of its flows") {
    BwLedger freed = free_bw_allocation(
        deployed.bw_alloc, {{"videoStorage", "cloud", Num(16)}},
        deployed.placement, vr_app());
    CHECK(freed == BwLedger{{{"accesspoint", "cabinetserver"}, Num(1)},
                            {{"cabinetserver", "accesspoint"}, Num(8)}});
  }
  SUBCASE("flows between two migrating services are freed exactly once") {
    BwLedger freed = free_bw_allocation(
        deployed.bw_alloc,
        {{"videoStorage", "cloud", Num(16)},
         {"sceneSelector", "cabinetserver", Num(2)}},
        deployed.placement, vr_app());
    CHECK(freed.empty());
  }
  SUBCASE("colocated, unplaced, and zero-share flows book and free nothing") {
    AppSpec app;
    app.id = "pair";
    app.services = {{"s0", {}, Num(1), {}},
                    {"s1", {}, Num(1), {}},
                    {"s2", {}, Num(1), {}}};
    app.s2s = {{"s0", "s1", Num(10), Num(5)},
               {"s0", "s2", Num(10), Num(0)},
               {"s2", "s0", Num(10), Num(4)}};
    Placement placement;
    placement.prepend({"s1", "a"});
    placement.prepend({"s0", "a"});  // s2 is not placed at all
    BwLedger none;
    CHECK(free_bw_allocation(none, {{"s0", "a", Num(1)}}, placement, app)
              .empty());
  }
  SUBCASE("underflow and missing entries are internal errors") {
    AppSpec app;
    app.id = "pair";
    app.services = {{"s0", {}, Num(1), {}}, {"s1", {}, Num(1), {}}};
    app.s2s = {{"s0", "s1", Num(10), Num(5)}};
    Placement placement;
    placement.prepend({"s1", "b"});
    placement.prepend({"s0", "a"});
    try {
      (void)free_bw_allocation(BwLedger{{{"a", "b"}, Num(3)}},
                               {{"s0", "a", Num(1)}}, placement, app);
      FAIL("expected underflow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Internal);
    }
    try {
      (void)free_bw_allocation({}, {{"s0", "a", Num(1)}}, placement, app);
      FAIL("expected a missing entry to be rejected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Internal);
    }
  }
}

TEST_CASE("replacement re-places only the migrating slice of the deployment") {
  Deployment current = vr_deployment();
  SearchConfig config{no_headroom(), SearchMode::FirstSolution};

  SUBCASE("the storage service moves to the isp datacentre") {
    StepCounter c;
    ReplacementResult result =
        replacement(vr_app(), {{"videoStorage", "cloud", Num(16)}}, current,
                    degraded_cloud(), config, c);

    PartialQuery expect;
    expect.migrating = {"videoStorage"};
    expect.placement.prepend({"sceneSelector", "cabinetserver"});
    expect.placement.prepend({"vrDriver", "accesspoint"});
    expect.hw_alloc = {{"accesspoint", Num(2)}, {"cabinetserver", Num(2)}};
    expect.bw_alloc = {{{"accesspoint", "cabinetserver"}, Num(1)},
                       {{"cabinetserver", "accesspoint"}, Num(8)}};
    CHECK(result.query == expect);

    REQUIRE(result.deployment.has_value());
    const Deployment& moved = *result.deployment;
    CHECK(moved.app_id == "vrApp");
    CHECK(moved.placement.entries().front() ==
          Assignment{"videoStorage", "ispdatacentre"});
    CHECK(moved.placement.as_map() ==
          std::map<Identifier, Identifier>{{"videoStorage", "ispdatacentre"},
                                           {"sceneSelector", "cabinetserver"},
                                           {"vrDriver", "accesspoint"}});
    CHECK(moved.hw_alloc == HwLedger{{"accesspoint", Num(2)},
                                     {"cabinetserver", Num(2)},
                                     {"ispdatacentre", Num(16)}});
    CHECK(moved.bw_alloc ==
          BwLedger{{{"accesspoint", "cabinetserver"}, Num(1)},
                   {{"cabinetserver", "accesspoint"}, Num(8)},
                   {{"cabinetserver", "ispdatacentre"}, Num(1, 2)},
                   {{"ispdatacentre", "cabinetserver"}, Num(16)}});
    // One rejected host, one accepted host, two supported interactions.
    CHECK(c.steps == 7);
  }
  SUBCASE("nothing to migrate returns the deployment untouched") {
    StepCounter c;
    ReplacementResult result =
        replacement(vr_app(), {}, current, vr_infra(), config, c);
    REQUIRE(result.deployment.has_value());
    CHECK(*result.deployment == current);
    CHECK(result.query.migrating.empty());
    CHECK(result.query.placement == current.placement);
    CHECK(result.query.hw_alloc == current.hw_alloc);
    CHECK(result.query.bw_alloc == current.bw_alloc);
    CHECK(c.steps == 0);
  }
}

TEST_CASE("management deploys, watches, repairs, and counts its reasoning") {
  World world = vr_world();

  ManagementOutcome first = world.manage("vrApp");
  CHECK(first.kind == OutcomeKind::FullReplacement);
  REQUIRE(first.deployment.has_value());
  CHECK(*first.deployment == vr_deployment());
  CHECK(first.migrated.empty());
  CHECK_FALSE(first.partial_query.has_value());
  CHECK(first.cr_steps == 43);
  CHECK(world.cumulative_steps() == 43);
  REQUIRE(world.deployment_of("vrApp"));
  CHECK(*world.deployment_of("vrApp") == *first.deployment);

  ManagementOutcome steady = world.manage("vrApp");
  CHECK(steady.kind == OutcomeKind::Unchanged);
  CHECK(*steady.deployment == vr_deployment());
  CHECK_FALSE(steady.partial_query.has_value());
  CHECK(steady.cr_steps == 7);
  CHECK(world.cumulative_steps() == 50);

  world.apply_event(UpsertNode{
      {"cloud", {"ubuntu", "gcc", "make"}, Capacity::infinite(), {}}});
  ManagementOutcome repaired = world.manage("vrApp");
  CHECK(repaired.kind == OutcomeKind::PartialMigration);
  CHECK(repaired.migrated == std::vector<Identifier>{"videoStorage"});
  CHECK(repaired.cr_steps == 14);
  CHECK(world.cumulative_steps() == 64);
  REQUIRE(repaired.partial_query.has_value());
  CHECK(repaired.partial_query->migrating ==
        std::vector<Identifier>{"videoStorage"});
  CHECK(repaired.partial_query->hw_alloc ==
        HwLedger{{"accesspoint", Num(2)}, {"cabinetserver", Num(2)}});
  REQUIRE(repaired.deployment.has_value());
  CHECK(repaired.deployment->placement.node_of("videoStorage") != nullptr);
  CHECK(*repaired.deployment->placement.node_of("videoStorage") ==
        "ispdatacentre");
  CHECK(*world.deployment_of("vrApp") == *repaired.deployment);

  ManagementOutcome settled = world.manage("vrApp");
  CHECK(settled.kind == OutcomeKind::Unchanged);
  CHECK(settled.cr_steps == 7);

  try {
    (void)world.manage("ghostApp");
    FAIL("expected an unknown-id error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownId);
  }
}

TEST_CASE("a failed repair leaves the application undeployed") {
  World world = vr_world();
  REQUIRE(world.manage("vrApp").kind == OutcomeKind::FullReplacement);

  std::vector<Identifier> all_nodes;
  for (const NodeSpec& n : world.infrastructure().nodes())
    all_nodes.push_back(n.id);
  for (const Identifier& id : all_nodes) world.apply_event(RemoveNode{id});
  CHECK(world.infrastructure().node_count() == 0);

  ManagementOutcome failed = world.manage("vrApp");
  CHECK(failed.kind == OutcomeKind::Failed);
  CHECK_FALSE(failed.deployment.has_value());
  CHECK(failed.migrated.empty());
  // The repair ran and recorded what it tried before giving up.
  CHECK(failed.partial_query.has_value());
  CHECK(failed.cr_steps > 0);
  CHECK(world.deployment_of("vrApp") == nullptr);

  // With nothing deployed and nothing to deploy on, it keeps failing.
  ManagementOutcome still = world.manage("vrApp");
  CHECK(still.kind == OutcomeKind::Failed);
  CHECK_FALSE(still.partial_query.has_value());
}

TEST_CASE("repair falls back to a full replacement when pinning blocks it") {
  AppSpec app;
  app.id = "duo";
  app.services = {{"s0", {}, Num(1), {}}, {"s1", {}, Num(1), {"probe"}}};
  app.s2s = {{"s1", "s0", Num(10), Num(8)}};

  Infrastructure infra;
  infra.upsert_node({"a", {}, Capacity(Num(2)), {}});
  infra.upsert_node({"b", {}, Capacity(Num(1)), {"probe"}});
  infra.upsert_node({"c", {}, Capacity(Num(1)), {"probe"}});
  infra.upsert_link("b", "a", {Num(5), Num(8)});
  infra.upsert_link("c", "a", {Num(5), Num(7)});
  infra.upsert_link("c", "b", {Num(5), Num(8)});

  World world = World::load(ProblemFile{app, infra, {}, {}});

  ManagementOutcome first = world.manage("duo");
  REQUIRE(first.kind == OutcomeKind::FullReplacement);
  CHECK(first.deployment->placement.as_map() ==
        std::map<Identifier, Identifier>{{"s0", "a"}, {"s1", "b"}});

  // b loses the probe: s1 must move, but pinned s0 on a leaves only c with
  // a link too thin for the flow. The full restart moves both.
  world.apply_event(UpsertNode{{"b", {}, Capacity(Num(1)), {}}});
  ManagementOutcome outcome = world.manage("duo");
  CHECK(outcome.kind == OutcomeKind::FullReplacement);
  CHECK(outcome.migrated.empty());
  REQUIRE(outcome.partial_query.has_value());
  CHECK(outcome.partial_query->migrating == std::vector<Identifier>{"s1"});
  REQUIRE(outcome.deployment.has_value());
  CHECK(outcome.deployment->placement.as_map() ==
        std::map<Identifier, Identifier>{{"s0", "b"}, {"s1", "c"}});

  // The fallback equals a fresh placement over the same infrastructure.
  StepCounter c;
  std::optional<Solution> fresh =
      place_app(app, world.infrastructure(),
                SearchConfig{world.thresholds(), SearchMode::FirstSolution}, c);
  REQUIRE(fresh.has_value());
  CHECK(outcome.deployment->placement == fresh->placement);
  CHECK(outcome.deployment->hw_alloc == fresh->hw_alloc);
  CHECK(outcome.deployment->bw_alloc == fresh->bw_alloc);
}

TEST_CASE("forcing every service to migrate reproduces a fresh placement") {
  Deployment current = vr_deployment();
  std::vector<ServiceDescriptor> everything{
      {"videoStorage", "cloud", Num(16)},
      {"sceneSelector", "cabinetserver", Num(2)},
      {"vrDriver", "accesspoint", Num(2)}};

  StepCounter c;
  ReplacementResult result =
      replacement(vr_app(), everything, current, vr_infra(),
                  SearchConfig{no_headroom(), SearchMode::FirstSolution}, c);
  CHECK(result.query.placement.empty());
  CHECK(result.query.hw_alloc.empty());
  CHECK(result.query.bw_alloc.empty());

  StepCounter c2;
  std::optional<Solution> fresh =
      place_app(vr_app(), vr_infra(),
                SearchConfig{no_headroom(), SearchMode::FirstSolution}, c2);
  REQUIRE(result.deployment.has_value());
  REQUIRE(fresh.has_value());
  CHECK(result.deployment->placement == fresh->placement);
  CHECK(result.deployment->hw_alloc == fresh->hw_alloc);
  CHECK(result.deployment->bw_alloc == fresh->bw_alloc);
  CHECK(c.steps == c2.steps);
}

TEST_CASE("a policy stuck on an accepted assignment reaches a fixed point") {
  World world = vr_world();
  REQUIRE(world.manage("vrApp").kind == OutcomeKind::FullReplacement);
  Deployment before = *world.deployment_of("vrApp");

  // This policy complains about every node forever, but the search keeps
  // accepting the same assignments, so the query must settle on Unchanged
  // instead of migrating in place on every call.
  ProblemPolicy alarmist;
  alarmist.node_problem = [](const NodeSpec*, const LabelSet&, const LabelSet&,
                             const Thresholds&) { return true; };
  alarmist.communication_problem = [](const LinkQos*, const Num&,
                                      const Thresholds&) { return false; };
  world.set_policy(alarmist);

  ManagementOutcome outcome = world.manage("vrApp");
  CHECK(outcome.kind == OutcomeKind::Unchanged);
  CHECK(outcome.migrated.empty());
  CHECK_FALSE(outcome.partial_query.has_value());
  // The fixed point costs real work: policy evaluations plus the re-search.
  CHECK(outcome.cr_steps > 7);
  REQUIRE(world.deployment_of("vrApp"));
  CHECK(*world.deployment_of("vrApp") == before);

  ManagementOutcome again = world.manage("vrApp");
  CHECK(again.kind == OutcomeKind::Unchanged);
  CHECK(*world.deployment_of("vrApp") == before);
}

TEST_CASE("randomized repairs stay sound, stable, and idempotent") {
  std::mt19937 rng(7);
  int deployed_count = 0;
  int repaired_count = 0;

  for (int trial = 0; trial < 800; ++trial) {
    gen::Instance inst = gen::random_instance(rng);
    World world = World::load(ProblemFile{inst.app, inst.infra,
                                          inst.thresholds.hw_th,
                                          inst.thresholds.bw_th});

    ManagementOutcome first = world.manage(inst.app.id);
    if (first.kind == OutcomeKind::Failed) {
      StepCounter c;
      REQUIRE_FALSE(place_app(inst.app, world.infrastructure(),
                              SearchConfig{inst.thresholds,
                                           SearchMode::FirstSolution},
                              c)
                        .has_value());
      REQUIRE(world.deployment_of(inst.app.id) == nullptr);
      continue;
    }
    REQUIRE(first.kind == OutcomeKind::FullReplacement);
    ++deployed_count;
    Deployment before = *world.deployment_of(inst.app.id);
    REQUIRE(validate_eligible(inst.app, world.infrastructure(),
                              inst.thresholds, before.placement)
                .ok());

    ChangeEvent event = gen::random_event(rng, world.infrastructure());
    world.apply_event(event);
    ManagementOutcome second = world.manage(inst.app.id);
    REQUIRE(second.cr_steps > 0);

    switch (second.kind) {
      case OutcomeKind::Unchanged:
        REQUIRE(*world.deployment_of(inst.app.id) == before);
        REQUIRE_FALSE(second.partial_query.has_value());
        break;
      case OutcomeKind::PartialMigration: {
        ++repaired_count;
        REQUIRE_FALSE(second.migrated.empty());
        REQUIRE(second.partial_query.has_value());
        const PartialQuery& query = *second.partial_query;
        REQUIRE(query.placement == before.placement.without(second.migrated));
        // The freed ledgers are exactly what the retained slice implies.
        auto [hw, bw] = derive_ledgers(inst.app, query.placement);
        REQUIRE(query.hw_alloc == hw);
        REQUIRE(query.bw_alloc == bw);
        // Untouched services stay put.
        const Deployment& after = *world.deployment_of(inst.app.id);
        for (const Assignment& a : query.placement.entries()) {
          REQUIRE(after.placement.node_of(a.service) != nullptr);
          REQUIRE(*after.placement.node_of(a.service) == a.node);
        }
        break;
      }
      case OutcomeKind::FullReplacement: {
        ++repaired_count;
        StepCounter c;
        std::optional<Solution> fresh =
            place_app(inst.app, world.infrastructure(),
                      SearchConfig{inst.thresholds,
                                   SearchMode::FirstSolution},
                      c);
        REQUIRE(fresh.has_value());
        REQUIRE(second.deployment->placement == fresh->placement);
        REQUIRE(second.deployment->hw_alloc == fresh->hw_alloc);
        REQUIRE(second.deployment->bw_alloc == fresh->bw_alloc);
        break;
      }
      case OutcomeKind::Failed: {
        StepCounter c;
        REQUIRE_FALSE(place_app(inst.app, world.infrastructure(),
                                SearchConfig{inst.thresholds,
                                             SearchMode::FirstSolution},
                                c)
                          .has_value());
        REQUIRE(world.deployment_of(inst.app.id) == nullptr);
        break;
      }
    }

    if (second.kind != OutcomeKind::Failed) {
      // Whatever was stored is eligible on the current infrastructure.
      const Deployment& current = *world.deployment_of(inst.app.id);
      REQUIRE(validate_eligible(inst.app, world.infrastructure(),
                                inst.thresholds, current.placement)
                  .ok());
      auto [hw, bw] = derive_ledgers(inst.app, current.placement);
      REQUIRE(current.hw_alloc == hw);
      REQUIRE(current.bw_alloc == bw);

      // A repaired deployment is a fixed point: managing again changes
      // nothing and books the same detection work.
      ManagementOutcome third = world.manage(inst.app.id);
      REQUIRE(third.kind == OutcomeKind::Unchanged);
      REQUIRE(*world.deployment_of(inst.app.id) == current);
    }
  }

  // The generator must exercise real deployments and real repairs.
  CHECK(deployed_count >= 100);
  CHECK(repaired_count >= 10);
}
