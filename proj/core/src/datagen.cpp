#include "gmlkm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "gmlkm/error.hpp"
#include "gmlkm/io.hpp"
#include "gmlkm/rng.hpp"
#include "gmlkm/topology.hpp"

namespace gmlkm {

using nlohmann::json;

double ScenarioConfig::sigma() const {
  return noise_sigma ? *noise_sigma : 0.05 * 0.5 * (v_range.first + v_range.second);
}

double ScenarioConfig::radius() const {
  return intersection_radius ? *intersection_radius : 0.5 * sensor_spacing;
}

void ScenarioConfig::validate() const {
  if (segment_count < 1) throw InputError("segment_count must be >= 1");
  if (n_targets < 0) throw InputError("n_targets must be >= 0");
  if (sensors_per_segment < 1) throw InputError("sensors_per_segment must be >= 1");
  if (!(sensor_spacing > 0.0)) throw InputError("sensor_spacing must be positive");
  if (!(radius() > 0.0)) throw InputError("intersection_radius must be positive");
  if (!(v_range.first > 0.0) || v_range.second < v_range.first) {
    throw InputError("v_range must satisfy 0 < v_min <= v_max");
  }
  if (t_range.second < t_range.first) throw InputError("t_range must satisfy t_min <= t_max");
  if (!(sigma() >= 0.0) || !std::isfinite(noise_mu)) throw InputError("noise sigma must be >= 0");
  if (max_hops < 1) throw InputError("max_hops must be >= 1");
  const auto net = build_network(*this);
  const auto sources = source_segments(net);
  auto is_source = [&](int s) { return std::find(sources.begin(), sources.end(), s) != sources.end(); };
  if (n_targets > 0 && entry_segments.empty()) throw InputError("entry_segments is empty");
  for (const int s : entry_segments) {
    if (!is_source(s)) throw InputError(fmt::format("entry segment {} is not a source", s));
  }
  if (static_cast<int>(plans.size()) > n_targets) throw InputError("more target plans than targets");
  for (const auto& p : plans) {
    if (!is_source(p.entry_segment)) {
      throw InputError(fmt::format("planned entry segment {} is not a source", p.entry_segment));
    }
    if (!(p.v0 > 0.0)) throw InputError("planned v0 must be positive");
    if (!p.route.empty()) {
      if (p.route.front() != p.entry_segment) throw InputError("planned route must start at its entry");
      for (std::size_t h = 1; h < p.route.size(); ++h) {
        const int a = p.route[h - 1];
        const int b = p.route[h];
        if (a < 1 || b < 1 || a > segment_count || b > segment_count || !net.has_edge(a, b)) {
          throw InputError(fmt::format("planned route uses missing edge {} -> {}", a, b));
        }
      }
    }
  }
}

RoadNetwork build_network(const ScenarioConfig& cfg) {
  std::vector<RoadSegment> segments;
  for (int i = 1; i <= cfg.segment_count; ++i) {
    RoadSegment s;
    s.id = i;
    s.length = cfg.sensors_per_segment * cfg.sensor_spacing;
    for (int j = 1; j <= cfg.sensors_per_segment; ++j) s.sensor_positions.push_back(j * cfg.sensor_spacing);
    segments.push_back(std::move(s));
  }
  return RoadNetwork::create(std::move(segments), cfg.edges, cfg.radius());
}

namespace {

std::pair<double, double> read_range(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("ranges must be [min, max]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ScenarioConfig parse_scenario_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("malformed scenario config: {}", e.what()));
  }
  ScenarioConfig cfg;
  try {
    cfg.segment_count = doc.value("segment_count", cfg.segment_count);
    if (doc.contains("edges")) {
      for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InputError("edges must be [from, to] pairs");
        cfg.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    cfg.n_targets = doc.value("n_targets", cfg.n_targets);
    cfg.sensors_per_segment = doc.value("sensors_per_segment", cfg.sensors_per_segment);
    cfg.sensor_spacing = doc.value("sensor_spacing", cfg.sensor_spacing);
    if (doc.contains("intersection_radius")) cfg.intersection_radius = doc.at("intersection_radius").get<double>();
    if (doc.contains("v_range")) cfg.v_range = read_range(doc.at("v_range"));
    if (doc.contains("t_range")) cfg.t_range = read_range(doc.at("t_range"));
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      cfg.noise_mu = n.value("mu", 0.0);
      if (n.contains("sigma") && !n.at("sigma").is_null()) cfg.noise_sigma = n.at("sigma").get<double>();
    }
    if (doc.contains("entry_segments")) cfg.entry_segments = doc.at("entry_segments").get<std::vector<int>>();
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.max_hops = doc.value("max_hops", cfg.max_hops);
    if (doc.contains("plans")) {
      for (const auto& p : doc.at("plans")) {
        TargetPlan plan;
        plan.entry_segment = p.at("entry").get<int>();
        plan.v0 = p.at("v0").get<double>();
        plan.t0 = p.at("t0").get<double>();
        if (p.contains("route")) plan.route = p.at("route").get<std::vector<int>>();
        cfg.plans.push_back(std::move(plan));
      }
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed scenario config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

std::string serialize_scenario_config(const ScenarioConfig& cfg) {
  json doc;
  doc["segment_count"] = cfg.segment_count;
  doc["edges"] = json::array();
  for (const auto& [a, b] : cfg.edges) doc["edges"].push_back({a, b});
  doc["n_targets"] = cfg.n_targets;
  doc["sensors_per_segment"] = cfg.sensors_per_segment;
  doc["sensor_spacing"] = cfg.sensor_spacing;
  doc["intersection_radius"] = cfg.radius();
  doc["v_range"] = {cfg.v_range.first, cfg.v_range.second};
  doc["t_range"] = {cfg.t_range.first, cfg.t_range.second};
  doc["noise"] = {{"mu", cfg.noise_mu}, {"sigma", cfg.sigma()}};
  doc["entry_segments"] = cfg.entry_segments;
  doc["seed"] = cfg.seed;
  doc["max_hops"] = cfg.max_hops;
  if (!cfg.plans.empty()) {
    doc["plans"] = json::array();
    for (const auto& p : cfg.plans) {
      doc["plans"].push_back({{"entry", p.entry_segment}, {"v0", p.v0}, {"t0", p.t0}, {"route", p.route}});
    }
  }
  return doc.dump(2) + "\n";
}

int GroundTruth::target_of(const HitRef& hit) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), hit,
                                   [](const HitLabel& l, const HitRef& h) { return l.hit < h; });
  if (it == labels.end() || it->hit != hit) return 0;
  return it->target;
}

namespace {

struct RawHit {
  double time;
  double velocity;
  int target;
};

}  // namespace

Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario sc{build_network(cfg), {}, {}};
  const auto& net = sc.network;
  const double sigma = cfg.sigma();
  const double v_floor = cfg.v_range.first / 4.0;
  const double r = net.intersection_radius();

  // raw[segment-1][rank-1]
  std::vector<std::vector<std::vector<RawHit>>> raw(static_cast<std::size_t>(net.size()));
  for (const auto& s : net.segments()) raw[s.id - 1].resize(static_cast<std::size_t>(s.sensor_count()));

  std::mt19937_64 init_rng(split_seed(cfg.seed, 0));
  std::uniform_real_distribution<double> v_dist(cfg.v_range.first, cfg.v_range.second);
  std::uniform_real_distribution<double> t_dist(cfg.t_range.first, cfg.t_range.second);
  std::uniform_int_distribution<std::size_t> entry_dist(0, cfg.entry_segments.empty() ? 0 : cfg.entry_segments.size() - 1);

  sc.truth.routes.resize(static_cast<std::size_t>(cfg.n_targets));
  sc.truth.stopped.assign(static_cast<std::size_t>(cfg.n_targets), false);
  for (int target = 1; target <= cfg.n_targets; ++target) {
    // Draw a full random state for every target so plans do not shift the
    // stream of the targets after them.
    TargetPlan plan;
    plan.entry_segment = cfg.entry_segments.empty() ? 1 : cfg.entry_segments[entry_dist(init_rng)];
    plan.v0 = v_dist(init_rng);
    plan.t0 = t_dist(init_rng);
    if (target <= static_cast<int>(cfg.plans.size())) plan = cfg.plans[target - 1];

    std::mt19937_64 rng(split_seed(cfg.seed, 100 + static_cast<std::uint64_t>(target)));
    std::normal_distribution<double> noise(cfg.noise_mu, sigma > 0.0 ? sigma : 1.0);
    auto& route = sc.truth.routes[target - 1];

    double v = plan.v0;
    double t = plan.t0;
    double carried = 0.0;  // distance covered since the last sensor
    bool first_hit = true;
    int segment = plan.entry_segment;
    for (int hop = 0;; ++hop) {
      route.push_back(segment);
      const auto& seg = net.segment(segment);
      double last_pos = 0.0;
      for (int rank = 1; rank <= seg.sensor_count(); ++rank) {
        const double dist = carried + seg.position(rank) - last_pos;
        if (!first_hit) {
          const double step = sigma > 0.0 ? noise(rng) : cfg.noise_mu;
          v = std::max(v + step, v_floor);
        }
        first_hit = false;
        t += dist / v;
        raw[segment - 1][rank - 1].push_back({t, v, target});
        carried = 0.0;
        last_pos = seg.position(rank);
      }
      const auto next = net.successors(segment);
      if (next.empty()) break;
      if (hop + 1 >= cfg.max_hops) {
        sc.truth.stopped[target - 1] = true;
        break;
      }
      if (!plan.route.empty()) {
        if (static_cast<std::size_t>(hop + 1) >= plan.route.size()) {
          sc.truth.stopped[target - 1] = true;
          break;
        }
        segment = plan.route[hop + 1];
      } else {
        std::uniform_int_distribution<std::size_t> turn(0, next.size() - 1);
        segment = next[turn(rng)];
      }
      carried = seg.length - last_pos + 2.0 * r;
    }
  }

  sc.data = empty_datasets(net);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = 0; j < raw[i].size(); ++j) {
      auto& hits = raw[i][j];
      std::sort(hits.begin(), hits.end(), [](const RawHit& a, const RawHit& b) {
        return std::tie(a.time, a.target) < std::tie(b.time, b.target);
      });
      for (std::size_t n = 0; n < hits.size(); ++n) {
        if (n > 0 && hits[n].time == hits[n - 1].time) {
          throw InputError(fmt::format("targets {} and {} reach S{}.{} at the same time",
                                       hits[n - 1].target, hits[n].target, i + 1, j + 1));
        }
        sc.data[i].records[j].hits.push_back({hits[n].velocity, hits[n].time});
        sc.truth.labels.push_back({{static_cast<int>(i) + 1, static_cast<int>(j) + 1, static_cast<int>(n)},
                                   hits[n].target});
      }
    }
  }
  std::sort(sc.truth.labels.begin(), sc.truth.labels.end(),
            [](const HitLabel& a, const HitLabel& b) { return a.hit < b.hit; });
  return sc;
}

ScenarioDocuments export_scenario(const Scenario& scenario) {
  ScenarioDocuments docs;
  docs.topology = serialize_network(scenario.network);
  docs.measurements = serialize_measurements(scenario.data);
  docs.labels = "segment,sensor,hit_index,target_id\n";
  for (const auto& l : scenario.truth.labels) {
    docs.labels += fmt::format("{},{},{},{}\n", l.hit.segment, l.hit.rank, l.hit.hit + 1, l.target);
  }
  return docs;
}

GroundTruth parse_labels(std::string_view csv, const std::vector<SegmentDataset>& data) {
  GroundTruth truth;
  std::size_t pos = 0;
  bool header = true;
  int max_target = 0;
  while (pos < csv.size()) {
    auto eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string line(csv.substr(pos, eol - pos));
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "segment,sensor,hit_index,target_id") {
        throw InputError("label table header must be segment,sensor,hit_index,target_id");
      }
      header = false;
      continue;
    }
    int seg = 0, sensor = 0, hit = 0, target = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &seg, &sensor, &hit, &target) != 4) {
      throw InputError(fmt::format("malformed label row '{}'", line));
    }
    if (seg < 1 || seg > static_cast<int>(data.size()) || sensor < 1 ||
        sensor > static_cast<int>(data[seg - 1].records.size()) || hit < 1 ||
        hit > static_cast<int>(data[seg - 1].records[sensor - 1].hits.size()) || target < 1) {
      throw InputError(fmt::format("label row '{}' does not match the measurements", line));
    }
    truth.labels.push_back({{seg, sensor, hit - 1}, target});
    max_target = std::max(max_target, target);
  }
  std::sort(truth.labels.begin(), truth.labels.end(),
            [](const HitLabel& a, const HitLabel& b) { return a.hit < b.hit; });
  truth.routes.resize(static_cast<std::size_t>(max_target));
  truth.stopped.assign(static_cast<std::size_t>(max_target), false);
  return truth;
}

std::vector<RoadNetwork::Edge> example_network_edges() {
  return {{1, 2}, {2, 3}, {2, 5}, {5, 4}, {4, 2}, {6, 4}};
}

ScenarioConfig worked_example_config() {
  ScenarioConfig cfg;
  cfg.segment_count = 6;
  cfg.edges = example_network_edges();
  cfg.n_targets = 5;
  cfg.sensors_per_segment = 5;
  cfg.sensor_spacing = 10.0;
  cfg.noise_sigma = 0.0;
  cfg.entry_segments = {1, 6};
  cfg.seed = 1;
  cfg.plans = {
      {1, 10.0, 0.0, {1, 2, 5, 4, 2, 3}},
      {1, 11.0, 2.0, {1, 2, 3}},
      {1, 12.0, 4.0, {1, 2, 3}},
      {6, 9.5, 1.0, {6, 4, 2, 3}},
      {6, 10.5, 4.0, {6, 4, 2, 3}},
  };
  return cfg;
}

}  // namespace gmlkm
