#include "gmlkm/pairing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gmlkm/assignment.hpp"
#include "gmlkm/clustering.hpp"
#include "gmlkm/error.hpp"
#include "gmlkm/preprocessing.hpp"

namespace gmlkm {

namespace {

std::string hit_label(const HitRef& h) {
  return fmt::format("R{}.S{}#{}", h.segment, h.rank, h.hit + 1);
}

Point2 projected(const IntersectionEntry& e, IntersectionRole role, const RoadNetwork& net) {
  const auto p = project_intersection(e.measurement, role, net.segment(e.origin.segment), e.origin,
                                      net.intersection_radius());
  return {p.velocity, p.projected_time};
}

bool exits_after_entry(const IntersectionEntry& in, const IntersectionEntry& out) {
  return out.measurement.time > in.measurement.time;
}

}  // namespace

IntersectionDataset gather(const IntersectionSpec& spec, const RoadNetwork& net,
                           std::span<const SegmentDataset> data) {
  IntersectionDataset ds;
  ds.spec = spec;
  for (const int i : spec.upstream) {
    const int last = net.segment(i).sensor_count();
    const auto& rec = data[i - 1].record(last);
    for (std::size_t n = 0; n < rec.hits.size(); ++n) {
      ds.incoming.push_back({rec.hits[n], {i, last, static_cast<int>(n)}});
    }
  }
  for (const int l : spec.downstream) {
    const auto& rec = data[l - 1].record(1);
    for (std::size_t n = 0; n < rec.hits.size(); ++n) {
      ds.outgoing.push_back({rec.hits[n], {l, 1, static_cast<int>(n)}});
    }
  }
  if (ds.n_in() < ds.n_out()) {
    throw InputError(fmt::format("intersection {}: {} hits enter but {} leave", spec.name,
                                 ds.n_in(), ds.n_out()));
  }
  return ds;
}

std::vector<std::vector<std::uint8_t>> PairingMatrix::matrix() const {
  std::vector<std::vector<std::uint8_t>> m(size(), std::vector<std::uint8_t>(size(), 0));
  for (std::size_t r = 0; r < size(); ++r) m[r][column_of[r]] = 1;
  return m;
}

std::vector<std::string> PairingMatrix::row_labels() const {
  std::vector<std::string> out;
  for (const auto& h : rows) out.push_back(hit_label(h));
  return out;
}

std::vector<std::string> PairingMatrix::col_labels() const {
  std::vector<std::string> out;
  for (const auto& h : cols) out.push_back(hit_label(h));
  for (std::size_t s = cols.size(); s < rows.size(); ++s) {
    out.push_back(fmt::format("stop{}", s - cols.size() + 1));
  }
  return out;
}

unsigned cluster_violations(std::span<const IntersectionEntry> incoming,
                            std::span<const IntersectionEntry> outgoing) {
  unsigned rules = 0;
  if (incoming.size() + outgoing.size() > 2) rules |= kTooManyHits;
  if (incoming.size() != 1) rules |= kIncomingCount;
  for (const auto& in : incoming) {
    for (const auto& out : outgoing) {
      if (!exits_after_entry(in, out)) rules |= kExitBeforeEntry;
    }
  }
  return rules;
}

double pair_cost(const IntersectionEntry& in, const IntersectionEntry& out, const RoadNetwork& net,
                 double velocity_weight) {
  const auto a = projected(in, IntersectionRole::incoming, net);
  const auto b = projected(out, IntersectionRole::outgoing, net);
  const double dv = velocity_weight * (a.x1 - b.x1);
  const double dt = a.x2 - b.x2;
  return std::sqrt(dv * dv + dt * dt);
}

namespace {

// Minimum-cost one-to-one pairing of pooled incoming rows onto pooled
// outgoing columns plus stop slots. Returns per pooled row the pooled
// outgoing index, or npos for a stop; `forced` counts pairs that had to
// break the exit-after-entry rule.
struct PoolSolution {
  std::vector<std::size_t> target;
  int forced = 0;
};

constexpr std::size_t kStop = static_cast<std::size_t>(-1);

std::vector<std::vector<double>> pool_costs(const std::vector<std::size_t>& in_idx,
                                            const std::vector<std::size_t>& out_idx,
                                            const IntersectionDataset& data, const RoadNetwork& net,
                                            const PairingOptions& options) {
  const std::size_t rows = in_idx.size();
  const std::size_t real = out_idx.size();
  std::vector<std::vector<double>> cost(rows, std::vector<double>(rows, 0.0));
  std::vector<double> pairwise;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& in = data.incoming[in_idx[i]];
    for (std::size_t j = 0; j < real; ++j) {
      const auto& out = data.outgoing[out_idx[j]];
      const double c = pair_cost(in, out, net, options.velocity_weight);
      pairwise.push_back(c);
      cost[i][j] = exits_after_entry(in, out) ? c : kForbiddenPair;
    }
  }
  double penalty = 0.0;
  if (options.stop_penalty) {
    penalty = *options.stop_penalty;
  } else if (!pairwise.empty()) {
    std::sort(pairwise.begin(), pairwise.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(pairwise.size())));
    penalty = pairwise[std::max<std::size_t>(rank, 1) - 1];
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = real; j < rows; ++j) cost[i][j] = penalty;
  }
  return cost;
}

PoolSolution solve_pool(const std::vector<std::size_t>& in_idx, const std::vector<std::size_t>& out_idx,
                        const IntersectionDataset& data, const RoadNetwork& net,
                        const PairingOptions& options) {
  PoolSolution sol;
  sol.target.assign(in_idx.size(), kStop);
  if (in_idx.empty()) return sol;
  const std::size_t rows = in_idx.size();
  const std::size_t real = out_idx.size();
  const auto cost = pool_costs(in_idx, out_idx, data, net, options);
  const auto cols = solve_assignment(cost);
  for (std::size_t i = 0; i < rows; ++i) {
    if (cols[i] < real) {
      sol.target[i] = cols[i];
      if (cost[i][cols[i]] >= kForbiddenPair) ++sol.forced;
    }
  }
  return sol;
}

}  // namespace

PairingResult pair(const IntersectionDataset& data, const RoadNetwork& net, std::uint64_t seed,
                   const PairingOptions& options) {
  PairingResult result;
  auto& pm = result.pairing;
  pm.name = data.spec.name;
  for (const auto& e : data.incoming) pm.rows.push_back(e.origin);
  for (const auto& e : data.outgoing) pm.cols.push_back(e.origin);
  const std::size_t n_in = data.n_in();
  const std::size_t n_out = data.n_out();
  if (n_in < n_out) {
    throw InputError(fmt::format("intersection {}: {} hits enter but {} leave", pm.name, n_in, n_out));
  }
  // partner[i]: outgoing index paired with incoming i, or kStop.
  std::vector<std::size_t> partner(n_in, kStop);

  if (n_in > 0 && n_out > 0) {
    std::vector<Point2> points;
    for (const auto& e : data.incoming) points.push_back(projected(e, IntersectionRole::incoming, net));
    for (const auto& e : data.outgoing) points.push_back(projected(e, IntersectionRole::outgoing, net));
    const auto clustering = kmeanspp(points, n_in, seed);

    std::vector<std::vector<std::size_t>> cl_in(n_in), cl_out(n_in);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto c = clustering.assignment[p];
      if (p < n_in) {
        cl_in[c].push_back(p);
      } else {
        cl_out[c].push_back(p - n_in);
      }
    }
    auto by_time_in = [&](std::size_t a, std::size_t b) {
      return data.incoming[a].measurement.time < data.incoming[b].measurement.time;
    };
    auto by_time_out = [&](std::size_t a, std::size_t b) {
      return data.outgoing[a].measurement.time < data.outgoing[b].measurement.time;
    };

    if (!options.error_correction) {
      // Pair inside each cluster in time order; whatever is left over is
      // paired globally in time order so the result stays a permutation.
      std::vector<std::size_t> rest_in, rest_out;
      for (std::size_t c = 0; c < n_in; ++c) {
        std::sort(cl_in[c].begin(), cl_in[c].end(), by_time_in);
        std::sort(cl_out[c].begin(), cl_out[c].end(), by_time_out);
        const std::size_t both = std::min(cl_in[c].size(), cl_out[c].size());
        for (std::size_t q = 0; q < both; ++q) partner[cl_in[c][q]] = cl_out[c][q];
        rest_in.insert(rest_in.end(), cl_in[c].begin() + static_cast<std::ptrdiff_t>(both), cl_in[c].end());
        rest_out.insert(rest_out.end(), cl_out[c].begin() + static_cast<std::ptrdiff_t>(both), cl_out[c].end());
      }
      std::sort(rest_in.begin(), rest_in.end(), by_time_in);
      std::sort(rest_out.begin(), rest_out.end(), by_time_out);
      for (std::size_t q = 0; q < rest_out.size(); ++q) partner[rest_in[q]] = rest_out[q];
    } else {
      std::vector<std::size_t> pool_in, pool_out, lone_in;
      for (std::size_t c = 0; c < n_in; ++c) {
        std::vector<IntersectionEntry> ins, outs;
        for (const auto i : cl_in[c]) ins.push_back(data.incoming[i]);
        for (const auto o : cl_out[c]) outs.push_back(data.outgoing[o]);
        if (ins.empty() && outs.empty()) continue;
        if (cluster_violations(ins, outs) != 0) {
          pool_in.insert(pool_in.end(), cl_in[c].begin(), cl_in[c].end());
          pool_out.insert(pool_out.end(), cl_out[c].begin(), cl_out[c].end());
        } else if (!cl_out[c].empty()) {
          partner[cl_in[c][0]] = cl_out[c][0];
        } else {
          lone_in.push_back(cl_in[c][0]);
        }
      }
      // A lone incoming hit is only a stop if a stop slot is left for it.
      if (pool_out.size() > pool_in.size()) {
        pool_in.insert(pool_in.end(), lone_in.begin(), lone_in.end());
      }
      std::sort(pool_in.begin(), pool_in.end());
      std::sort(pool_out.begin(), pool_out.end());

      if (!pool_in.empty()) {
        auto sol = solve_pool(pool_in, pool_out, data, net, options);
        if (sol.forced > 0) {
          // The flagged hits alone admit no valid pairing; re-pair everything.
          pool_in.resize(n_in);
          pool_out.resize(n_out);
          for (std::size_t i = 0; i < n_in; ++i) pool_in[i] = i;
          for (std::size_t o = 0; o < n_out; ++o) pool_out[o] = o;
          std::fill(partner.begin(), partner.end(), kStop);
          sol = solve_pool(pool_in, pool_out, data, net, options);
          if (sol.forced > 0) {
            result.diagnostics.push_back(fmt::format(
                "intersection {}: {} pair(s) leave before they enter under every assignment",
                pm.name, sol.forced));
          }
        }
        for (std::size_t i = 0; i < pool_in.size(); ++i) {
          partner[pool_in[i]] = sol.target[i] == kStop ? kStop : pool_out[sol.target[i]];
        }
      }
    }
  }

  pm.column_of.assign(n_in, 0);
  std::size_t next_stop = n_out;
  for (std::size_t i = 0; i < n_in; ++i) {
    pm.column_of[i] = partner[i] == kStop ? next_stop++ : partner[i];
  }
  return result;
}

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

std::vector<std::vector<double>> pairing_costs(const IntersectionDataset& data, const RoadNetwork& net,
                                               const PairingOptions& options) {
  return pool_costs(iota_indices(data.n_in()), iota_indices(data.n_out()), data, net, options);
}

PairingMatrix pair_exact(const IntersectionDataset& data, const RoadNetwork& net,
                         const PairingOptions& options) {
  PairingMatrix pm;
  pm.name = data.spec.name;
  for (const auto& e : data.incoming) pm.rows.push_back(e.origin);
  for (const auto& e : data.outgoing) pm.cols.push_back(e.origin);
  if (data.n_in() < data.n_out()) {
    throw InputError(fmt::format("intersection {}: {} hits enter but {} leave", pm.name, data.n_in(),
                                 data.n_out()));
  }
  pm.column_of = data.n_in() == 0 ? std::vector<std::size_t>{} : solve_assignment(pairing_costs(data, net, options));
  return pm;
}

}  // namespace gmlkm
