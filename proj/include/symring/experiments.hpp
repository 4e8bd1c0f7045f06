#pragma once

#include "symring/ideals.hpp"
#include "symring/magnus.hpp"
#include "symring/simplicial.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace symring {

using Json = nlohmann::ordered_json;

/* Knobs shared by the experiment commands. Empty sweeps and schedules mean
   the experiment's own defaults; threads and out_dir never influence report
   bytes. */
struct ExperimentConfig {
  std::string experiment;
  std::vector<int> L_sweep;
  std::vector<int> M_schedule;
  std::vector<int> probe_schedule;
  std::string group;
  int level = 2;
  int n = 1;
  std::string word;
  int cap = 4;
  int rank = 2;
  std::uint64_t seed = 2026;
  int threads = 1;
  std::size_t max_cells = 0;
  std::string out_dir = "symring-out";
  Json extra;  // experiment-specific sections from the config file
};

/* Applies a config-file object onto cfg. Unknown keys are rejected. */
void apply_config_json(ExperimentConfig& cfg, const Json& j);

struct RunReport {
  Json report;
  std::vector<Json> artifacts;
  int exit_code = 0;  // 0 certified, 2 evidence-only, 1 error
  long long wall_ms = 0;  // 0 unless SYMRING_TIMING=1 (kept out of report bytes)
  std::vector<std::string> certificate_paths;  // filled by write_run
};

/* Replayable JSON forms. Integer scalars travel as decimal strings. */
Json context_to_json(const ContextPtr& ctx);
ContextPtr context_from_json(const Json& j);
Json generator_map_to_json(const GeneratorMap& m);
/* src is the already-reconstructed source context. */
GeneratorMap generator_map_from_json(const ContextPtr& src, const Json& j);
Json spec_to_json(const SubgroupSpec& s);
SubgroupSpec spec_from_json(const ContextPtr& ctx, const Json& j);

/* Self-contained certificate artifacts, schema symring/certificate/1.
   Each kind replays from scratch in check_certificate_json:
   - product-membership: row sum equals the target and every bracket member
     passes its subgroup's membership oracle;
   - finite-nonmembership: the transported element escapes the recomputed
     finite product lattice;
   - boundary-membership: the chain is a Moore chain one level up and face 0
     carries it onto the target;
   - lattice-equality: inner product lattice at the stated budget equals the
     exact intersection lattice on the stated window. */
Json product_membership_artifact(const Certificate& cert,
                                 const std::vector<SubgroupSpec>& specs);
Json finite_nonmembership_artifact(const std::vector<SubgroupSpec>& specs,
                                   const ProductExpr& expr, const Word& g,
                                   const QuotientProbe& probe);
Json boundary_membership_artifact(const OraclePtr& oracle, int level,
                                  const RingElement& target,
                                  const RingElement& chain, int probe_radius);
Json lattice_equality_artifact(const std::vector<SubgroupSpec>& specs,
                               const ProductExpr& expr, int window_radius,
                               int budget);

/* Empty result = artifact accepted. */
std::vector<std::string> check_certificate_json(const Json& artifact);

RunReport run_lemma21(const ExperimentConfig& cfg);
RunReport run_lemma23(const ExperimentConfig& cfg);
RunReport run_prop22(const ExperimentConfig& cfg);
RunReport run_wu(const ExperimentConfig& cfg);
RunReport run_theorem31(const ExperimentConfig& cfg);
RunReport run_carlsson(const ExperimentConfig& cfg);
RunReport run_magnus_cmd(const ExperimentConfig& cfg);
/* Dispatch on cfg.experiment. */
RunReport run_experiment(const ExperimentConfig& cfg);

/* Writes report and artifacts under cfg.out_dir with deterministic names,
   embeds the artifact file names into the report, returns the report path. */
std::string write_run(const ExperimentConfig& cfg, RunReport& run);

}  // namespace symring
