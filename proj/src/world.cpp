#include "world.hpp"

namespace fogplan {

World World::load(const ProblemFile& problem) {
  World world;
  world.load_problem(problem);
  return world;
}

void World::load_problem(const ProblemFile& problem) {
  if (problem.app) {
    if (apps_.contains(problem.app->id))
      throw Error(ErrorKind::DuplicateKey,
                  "application " + problem.app->id + " already declared");
    apps_.emplace(problem.app->id, *problem.app);
  }
  for (const NodeSpec& node : problem.infra.nodes()) {
    if (infra_.find_node(node.id))
      throw Error(ErrorKind::DuplicateKey,
                  "node " + node.id + " already declared");
    infra_.upsert_node(node);
  }
  for (const auto& [key, qos] : problem.infra.links()) {
    if (infra_.find_link(key.first, key.second))
      throw Error(ErrorKind::DuplicateKey, "link " + key.first + " -> " +
                                               key.second +
                                               " already declared");
    infra_.upsert_link(key.first, key.second, qos);
  }
  if (problem.hw_th) {
    if (hw_th_declared_)
      throw Error(ErrorKind::DuplicateKey, "hwTh already declared");
    thresholds_.hw_th = *problem.hw_th;
    hw_th_declared_ = true;
  }
  if (problem.bw_th) {
    if (bw_th_declared_)
      throw Error(ErrorKind::DuplicateKey, "bwTh already declared");
    thresholds_.bw_th = *problem.bw_th;
    bw_th_declared_ = true;
  }
}

void World::apply_event(const ChangeEvent& event) {
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, UpsertNode>) {
          infra_.upsert_node(e.node);
        } else if constexpr (std::is_same_v<E, RemoveNode>) {
          infra_.remove_node(e.node);
        } else if constexpr (std::is_same_v<E, UpsertLink>) {
          infra_.upsert_link(e.link.src, e.link.dst, e.link.qos);
        } else {
          static_assert(std::is_same_v<E, RemoveLink>);
          infra_.remove_link(e.src, e.dst);
        }
      },
      event);
}

ManagementOutcome World::manage(const Identifier& app_id) {
  counter_ = StepCounter{};
  ManagementOutcome outcome = fog_brain(*this, app_id);
  cumulative_steps_ += counter_.steps;
  outcome.cr_steps = counter_.steps;
  return outcome;
}

const AppSpec* World::find_app(const Identifier& app_id) const {
  auto it = apps_.find(app_id);
  return it == apps_.end() ? nullptr : &it->second;
}

const Identifier& World::sole_app_id() const {
  if (apps_.size() != 1)
    throw Error(ErrorKind::UnknownId,
                apps_.empty() ? "no application declared"
                              : "several applications declared; name one");
  return apps_.begin()->first;
}

const Deployment* World::deployment_of(const Identifier& app_id) const {
  auto it = deployments_.find(app_id);
  return it == deployments_.end() ? nullptr : &it->second;
}

void World::store_deployment(Deployment deployment) {
  deployments_[deployment.app_id] = std::move(deployment);
}

bool World::retract_deployment(const Identifier& app_id) {
  return deployments_.erase(app_id) > 0;
}

}  // namespace fogplan
