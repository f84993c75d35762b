#include "cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "gmlkm/datagen.hpp"
#include "gmlkm/error.hpp"
#include "gmlkm/evaluation.hpp"
#include "gmlkm/io.hpp"
#include "gmlkm/pipeline.hpp"

namespace gmlkm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError(fmt::format("cannot create output directory '{}'", dir));
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    log << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const IntegrityError& e) {
    log << "integrity error: " << e.what() << "\n";
    return kIntegrityError;
  }
}

json hits_json(const Track& t, std::span<const SegmentDataset> data) {
  json hits = json::array();
  for (const auto& h : t.members) {
    const auto& m = measurement_at(data, h);
    hits.push_back({{"sensor", h.rank}, {"hit_index", h.hit + 1}, {"time", m.time}, {"velocity", m.velocity}});
  }
  return hits;
}

std::vector<std::string> track_labels(int segment, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= count; ++k) out.push_back(fmt::format("R{}.T{}", segment, k));
  return out;
}

// "k^i": track k of segment i, the notation used when printing the example.
std::map<HitRef, std::string> group_names(const AssociationResult& result) {
  std::map<HitRef, std::string> names;
  for (const auto& segment_tracks : result.tracks) {
    for (const auto& t : segment_tracks) {
      for (const auto& h : t.members) names[h] = fmt::format("{}^{}", t.label, t.segment);
    }
  }
  return names;
}

void print_matrix(std::ostream& out, const std::string& title, const std::vector<std::vector<std::uint8_t>>& m,
                  const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
  out << title << "\n";
  out << fmt::format("{:>6}", "");
  for (const auto& c : cols) out << fmt::format(" {:>5}", c);
  out << "\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out << fmt::format("{:>6}", rows[r]);
    for (const auto v : m[r]) out << fmt::format(" {:>5}", static_cast<int>(v));
    out << "\n";
  }
  out << "\n";
}

}  // namespace

int cmd_generate(const GenerateArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    const auto cfg = parse_scenario_config(read_text_file(args.config));
    const auto scenario = generate(cfg);
    const auto docs = export_scenario(scenario);
    ensure_dir(args.out_dir);
    write_text_file(join(args.out_dir, "topology.json"), docs.topology);
    write_text_file(join(args.out_dir, "measurements.csv"), docs.measurements);
    write_text_file(join(args.out_dir, "labels.csv"), docs.labels);
    log << fmt::format("generated {} targets on {} segment(s), {} sensors each\n", cfg.n_targets,
                       cfg.segment_count, cfg.sensors_per_segment);
    for (const auto& ds : scenario.data) {
      log << fmt::format("  R{}: m = {}, hits = {}\n", ds.segment, ds.max_hits(), ds.total_hits());
    }
    return kOk;
  });
}

int cmd_associate(const AssociateArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    const auto variant = parse_variant(args.variant);
    const auto net = load_network(read_text_file(args.topology));
    const auto data = load_measurements(read_text_file(args.measurements), net);
    PipelineOptions options;
    options.sensors_per_block = args.sensors_per_block;
    const auto result = associate(net, data, variant, args.seed, options);
    ensure_dir(args.out_dir);

    json report;
    report["variant"] = std::string(to_string(variant));
    report["seed"] = args.seed;
    report["tracks"] = json::array();
    for (const auto& segment_tracks : result.tracks) {
      for (const auto& t : segment_tracks) {
        report["tracks"].push_back({{"segment", t.segment}, {"track", t.label}, {"hits", hits_json(t, data)}});
      }
    }
    if (result.trace) {
      report["trajectories"] = json::array();
      for (const auto& traj : result.trace->trajectories) {
        json hops = json::array();
        for (const auto& hop : traj.hops) {
          const auto& t = result.tracks[hop.segment - 1][hop.label - 1];
          hops.push_back({{"segment", hop.segment}, {"track", hop.label}, {"hits", hits_json(t, data)}});
        }
        report["trajectories"].push_back({{"target", traj.id}, {"complete", traj.complete}, {"hops", hops}});
      }
      for (const auto& pm : result.pairings) {
        write_text_file(join(args.out_dir, fmt::format("G_{}.csv", pm.name)),
                        format_matrix(pm.matrix(), pm.row_labels(), pm.col_labels()));
      }
      for (const auto& mm : result.trace->merges) {
        const auto labels = track_labels(mm.segment, mm.matrix.size());
        write_text_file(join(args.out_dir, fmt::format("G_R{}.csv", mm.segment)),
                        format_matrix(mm.matrix, labels, labels));
      }
    }
    report["diagnostics"] = result.diagnostics;
    write_text_file(join(args.out_dir, "trajectories.json"), report.dump(2) + "\n");

    std::size_t n_tracks = 0;
    for (const auto& st : result.tracks) n_tracks += st.size();
    log << fmt::format("{}: {} track(s)", to_string(variant), n_tracks);
    if (result.trace) {
      log << fmt::format(", {} trajectory(ies), {} intersection(s)", result.trace->trajectories.size(),
                         result.pairings.size());
    }
    log << "\n";
    for (const auto& d : result.diagnostics) log << "warning: " << d << "\n";
    if (args.strict && result.trace && !result.trace->conflicts.empty()) {
      log << "integrity error: conflicting pairings (strict mode)\n";
      return kIntegrityError;
    }
    return kOk;
  });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    if (args.variants.empty()) throw InputError("no variants given");
    std::vector<Variant> variants;
    for (const auto& name : args.variants) variants.push_back(parse_variant(name));
    const auto cfg = parse_scenario_config(read_text_file(args.config));
    PipelineOptions options;
    options.sensors_per_block = args.sensors_per_block;
    std::vector<AccuracyReport> reports;
    for (const auto v : variants) {
      reports.push_back(run_trials(cfg, v, args.trials, args.seed, options, args.threads));
      const auto& r = reports.back();
      log << fmt::format("{:<20} min {:7.3f}  mean {:7.3f}  max {:7.3f}  ({} trials)\n", to_string(v), r.min,
                         r.mean, r.max, r.trials.size());
    }
    const auto table = format_report(reports);
    if (args.out.empty() || args.out == "-") {
      log << table;
    } else {
      write_text_file(args.out, table);
    }
    return kOk;
  });
}

int cmd_demo(std::ostream& out) {
  return guarded(out, [&] {
    const auto scenario = generate(worked_example_config());
    const auto result = associate(scenario.network, scenario.data, Variant::gmlkm_ec, 1);
    const auto names = group_names(result);

    out << "Intersections:\n";
    for (const auto& spec : result.intersections) {
      out << fmt::format("  {}: upstream {{{}}} -> downstream {{{}}}\n", spec.name, fmt::join(spec.upstream, ","),
                         fmt::join(spec.downstream, ","));
    }
    out << "\n";
    for (const auto& pm : result.pairings) {
      std::vector<std::string> rows, cols;
      for (const auto& h : pm.rows) rows.push_back(names.at(h));
      for (const auto& h : pm.cols) cols.push_back(names.at(h));
      for (std::size_t s = pm.cols.size(); s < pm.size(); ++s) cols.push_back("stop");
      print_matrix(out, fmt::format("G_{}", pm.name), pm.matrix(), rows, cols);
    }
    for (const auto& mm : result.trace->merges) {
      std::vector<std::string> labels;
      for (std::size_t k = 1; k <= mm.matrix.size(); ++k) labels.push_back(fmt::format("{}^{}", k, mm.segment));
      print_matrix(out, fmt::format("G_R{}", mm.segment), mm.matrix, labels, labels);
    }
    out << "Trajectories:\n";
    for (const auto& traj : result.trace->trajectories) {
      std::vector<std::string> hops;
      std::vector<std::string> route;
      for (const auto& hop : traj.hops) {
        hops.push_back(fmt::format("{}^{}", hop.label, hop.segment));
        route.push_back(fmt::format("R{}", hop.segment));
      }
      out << fmt::format("  {}: {:<36} {{{}}}\n", traj.id, fmt::format("{}", fmt::join(route, " -> ")),
                         fmt::join(hops, ", "));
    }
    for (const auto& d : result.diagnostics) out << "warning: " << d << "\n";
    return kOk;
  });
}

}  // namespace gmlkm::cli
