#pragma once

#include <map>
#include <string>

#include "factfile.hpp"
#include "model.hpp"
#include "reasoner.hpp"

namespace fogplan {

// Mutable state a sequence of management queries runs against: declared
// applications, the live infrastructure, thresholds, the trouble policy,
// and one stored deployment per application. Infrastructure events never
// touch deployments; only management queries do.
class World {
public:
  World() : policy_(ProblemPolicy::defaults()) {}

  static World load(const ProblemFile& problem);

  // Merges another parsed file into this world. A second declaration of the
  // same application, node, or threshold raises Error(DuplicateKey); links
  // may reference nodes from any previously merged file.
  void load_problem(const ProblemFile& problem);

  void set_thresholds(const Thresholds& thresholds) {
    thresholds_ = thresholds;
    hw_th_declared_ = bw_th_declared_ = true;
  }
  Thresholds thresholds() const { return thresholds_; }

  void set_policy(ProblemPolicy policy) { policy_ = std::move(policy); }
  const ProblemPolicy& policy() const { return policy_; }

  // Replaces the whole infrastructure, bypassing per-fact duplicate checks.
  // Meant for generated infrastructures; deployments are left untouched.
  void reset_infrastructure(Infrastructure infra) { infra_ = std::move(infra); }

  void apply_event(const ChangeEvent& event);

  // Runs one management query. The per-query step counter is reset first;
  // its final value lands in the outcome and in the cumulative total.
  // Throws Error(UnknownId) for an undeclared application.
  ManagementOutcome manage(const Identifier& app_id);

  const Infrastructure& infrastructure() const { return infra_; }
  const AppSpec* find_app(const Identifier& app_id) const;
  const std::map<Identifier, AppSpec>& apps() const { return apps_; }

  // The only declared application; Error(UnknownId) unless there is exactly
  // one.
  const Identifier& sole_app_id() const;

  const Deployment* deployment_of(const Identifier& app_id) const;
  void store_deployment(Deployment deployment);
  bool retract_deployment(const Identifier& app_id);

  // Step counter of the query in flight; manage resets it per query.
  StepCounter& counter() { return counter_; }
  std::uint64_t cumulative_steps() const { return cumulative_steps_; }

private:
  std::map<Identifier, AppSpec> apps_;
  Infrastructure infra_;
  Thresholds thresholds_{Num(0), Num(0)};
  bool hw_th_declared_ = false;
  bool bw_th_declared_ = false;
  ProblemPolicy policy_;
  std::map<Identifier, Deployment> deployments_;
  StepCounter counter_;
  std::uint64_t cumulative_steps_ = 0;
};

}  // namespace fogplan
