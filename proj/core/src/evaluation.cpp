#include "gmlkm/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "gmlkm/error.hpp"

namespace gmlkm {

double score(std::span<const std::vector<HitRef>> groups, const GroundTruth& truth) {
  std::vector<HitRef> predicted;
  for (const auto& g : groups) predicted.insert(predicted.end(), g.begin(), g.end());
  std::sort(predicted.begin(), predicted.end());
  if (predicted.size() != truth.labels.size()) {
    throw InputError(fmt::format("predicted groups cover {} hits, ground truth has {}", predicted.size(),
                                 truth.labels.size()));
  }
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] != truth.labels[i].hit) {
      throw InputError(fmt::format("hit R{}.S{}#{} does not match the ground truth hit universe",
                                   predicted[i].segment, predicted[i].rank, predicted[i].hit + 1));
    }
  }
  if (predicted.empty()) return 100.0;

  std::size_t correct = 0;
  for (const auto& g : groups) {
    std::map<int, std::size_t> overlap;
    for (const auto& h : g) ++overlap[truth.target_of(h)];
    std::size_t best = 0;
    for (const auto& [target, count] : overlap) best = std::max(best, count);  // map order: lowest id wins ties
    correct += best;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
}

bool check_structure(const AssociationResult& result, std::span<const SegmentDataset> data) {
  for (const auto& pm : result.pairings) {
    std::vector<bool> used(pm.size(), false);
    if (pm.column_of.size() != pm.size()) return false;
    for (const auto c : pm.column_of) {
      if (c >= pm.size() || used[c]) return false;
      used[c] = true;
    }
  }
  if (result.trace) {
    for (const auto& mm : result.trace->merges) {
      if (!is_symmetric_unit_diagonal(mm) || !is_transitively_closed(mm)) return false;
    }
  }
  std::vector<HitRef> seen;
  for (const auto& g : result.groups) seen.insert(seen.end(), g.begin(), g.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  std::size_t total = 0;
  for (const auto& ds : data) total += static_cast<std::size_t>(ds.total_hits());
  return seen.size() == total;
}

namespace {

std::string fingerprint(const ScenarioConfig& cfg, Variant variant, const PipelineOptions& options) {
  const auto text = fmt::format("{}|{}|{}", serialize_scenario_config(cfg), to_string(variant),
                                options.sensors_per_block);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace

AccuracyReport run_trials(const ScenarioConfig& cfg, Variant variant, int n_trials,
                          std::uint64_t base_seed, const PipelineOptions& options, unsigned threads) {
  if (n_trials < 1) throw InputError("n_trials must be >= 1");
  AccuracyReport report;
  report.variant = variant;
  report.fingerprint = fingerprint(cfg, variant, options);
  report.trials.resize(static_cast<std::size_t>(n_trials));

  auto run_one = [&](int index) {
    ScenarioConfig trial_cfg = cfg;
    trial_cfg.seed = base_seed + static_cast<std::uint64_t>(index);
    const auto scenario = generate(trial_cfg);
    const auto result = associate(scenario.network, scenario.data, variant, trial_cfg.seed, options);
    auto& tr = report.trials[static_cast<std::size_t>(index)];
    tr.trial = index + 1;
    tr.seed = trial_cfg.seed;
    tr.accuracy = score(result.groups, scenario.truth);
    tr.violations = count_violations(result, scenario.data);
    tr.structure_ok = check_structure(result, scenario.data);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_trials));
  if (threads <= 1) {
    for (int i = 0; i < n_trials; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (int i = next++; i < n_trials; i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  report.min = report.trials.front().accuracy;
  report.max = report.trials.front().accuracy;
  double sum = 0.0;
  for (const auto& t : report.trials) {
    report.min = std::min(report.min, t.accuracy);
    report.max = std::max(report.max, t.accuracy);
    sum += t.accuracy;
  }
  report.mean = sum / static_cast<double>(n_trials);
  return report;
}

std::string format_report(std::span<const AccuracyReport> reports) {
  std::string out = "variant,trial,seed,accuracy,min,mean,max\n";
  for (const auto& r : reports) {
    for (const auto& t : r.trials) {
      out += fmt::format("{},{},{},{:.4f},,,\n", to_string(r.variant), t.trial, t.seed, t.accuracy);
    }
  }
  for (const auto& r : reports) {
    out += fmt::format("{},all,,{:.4f},{:.4f},{:.4f},{:.4f}\n", to_string(r.variant), r.mean, r.min,
                       r.mean, r.max);
  }
  return out;
}

}  // namespace gmlkm
