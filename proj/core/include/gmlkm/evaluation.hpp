#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmlkm/datagen.hpp"
#include "gmlkm/pipeline.hpp"

namespace gmlkm {

/// Percentage of hits whose predicted group maps to their true target.
/// Each group maps to the target it shares most hits with (ties go to the
/// lower target id). Throws InputError unless the groups cover exactly the
/// labelled hits.
double score(std::span<const std::vector<HitRef>> groups, const GroundTruth& truth);

struct TrialResult {
  int trial = 0;  // 1-based
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  ViolationCount violations;
  bool structure_ok = true;  // permutation / merge / partition invariants held
};

struct AccuracyReport {
  Variant variant{};
  std::vector<TrialResult> trials;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::string fingerprint;  // hash of the scenario config
};

/// Checks the structural invariants of one run: pairings are permutations,
/// merge matrices are symmetric closed indicators, groups partition hits.
bool check_structure(const AssociationResult& result, std::span<const SegmentDataset> data);

/// Trial n (1-based) generates with seed base_seed + n - 1 and associates
/// with the same seed. Trials run on up to `threads` workers; results are
/// independent of the worker count.
AccuracyReport run_trials(const ScenarioConfig& cfg, Variant variant, int n_trials,
                          std::uint64_t base_seed, const PipelineOptions& options = {},
                          unsigned threads = 0);

/// `variant,trial,seed,accuracy,min,mean,max` with one summary row per report.
std::string format_report(std::span<const AccuracyReport> reports);

}  // namespace gmlkm
