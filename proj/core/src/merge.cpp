#include "gmlkm/merge.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "gmlkm/error.hpp"
#include "gmlkm/topology.hpp"

namespace gmlkm {

namespace {

enum class Exit { sink, stopped, next, no_end_hit };

struct Link {
  Exit exit = Exit::no_end_hit;
  Hop next;
};

}  // namespace

TraceResult trace(const RoadNetwork& net, std::span<const std::vector<Track>> tracks,
                  std::span<const PairingMatrix> pairings) {
  TraceResult result;
  const int L = net.size();

  std::map<HitRef, Hop> owner;
  for (const auto& segment_tracks : tracks) {
    for (const auto& t : segment_tracks) {
      for (const auto& h : t.members) owner[h] = Hop{t.segment, t.label};
    }
  }
  // Incoming hit -> (pairing, row).
  std::map<HitRef, std::pair<std::size_t, std::size_t>> row_of;
  for (std::size_t p = 0; p < pairings.size(); ++p) {
    for (std::size_t r = 0; r < pairings[p].rows.size(); ++r) row_of[pairings[p].rows[r]] = {p, r};
  }

  std::map<std::pair<int, int>, Link> links;
  std::map<std::pair<int, int>, int> indegree;
  for (int i = 1; i <= L; ++i) {
    const int last = net.segment(i).sensor_count();
    const bool sink = net.successors(i).empty();
    for (const auto& t : tracks[i - 1]) {
      Link link;
      std::optional<HitRef> end_hit;
      for (const auto& h : t.members) {
        if (h.rank == last && (!end_hit || h.hit < end_hit->hit)) end_hit = h;
      }
      if (!end_hit) {
        link.exit = Exit::no_end_hit;
      } else if (sink) {
        link.exit = Exit::sink;
      } else {
        const auto it = row_of.find(*end_hit);
        if (it == row_of.end()) {
          throw IntegrityError(fmt::format("hit R{}.S{}#{} is missing from every pairing matrix",
                                           end_hit->segment, end_hit->rank, end_hit->hit + 1));
        }
        const auto& pm = pairings[it->second.first];
        const auto row = it->second.second;
        if (pm.is_stop(row)) {
          link.exit = Exit::stopped;
        } else {
          const auto& col_hit = pm.cols[pm.column_of[row]];
          const auto own = owner.find(col_hit);
          if (own == owner.end()) {
            throw IntegrityError(fmt::format("intersection {} pairs into hit R{}.S{}#{}, which no track owns",
                                             pm.name, col_hit.segment, col_hit.rank, col_hit.hit + 1));
          }
          link.exit = Exit::next;
          link.next = own->second;
          ++indegree[{link.next.segment, link.next.label}];
        }
      }
      links[{t.segment, t.label}] = link;
    }
  }
  for (const auto& pm : pairings) {
    for (const auto& h : pm.rows) {
      if (!owner.contains(h)) {
        throw IntegrityError(fmt::format("intersection {} references hit R{}.S{}#{}, which no track owns",
                                         pm.name, h.segment, h.rank, h.hit + 1));
      }
    }
  }

  std::map<std::pair<int, int>, int> trajectory_of;
  auto walk = [&](Hop start) {
    Trajectory traj;
    traj.id = static_cast<int>(result.trajectories.size()) + 1;
    Hop hop = start;
    while (true) {
      traj.hops.push_back(hop);
      trajectory_of[{hop.segment, hop.label}] = traj.id;
      const auto& link = links.at({hop.segment, hop.label});
      if (link.exit == Exit::sink) {
        traj.complete = true;
        break;
      }
      if (link.exit != Exit::next) break;
      if (trajectory_of.contains({link.next.segment, link.next.label})) {
        result.conflicts.push_back(fmt::format(
            "track {} of segment {} is claimed again from track {} of segment {}", link.next.label,
            link.next.segment, hop.label, hop.segment));
        break;
      }
      hop = link.next;
    }
    result.trajectories.push_back(std::move(traj));
  };

  for (const int s : source_segments(net)) {
    for (const auto& t : tracks[s - 1]) {
      if (!trajectory_of.contains({t.segment, t.label})) walk({t.segment, t.label});
    }
  }
  // Tracks nobody leads into (targets already inside at collection start),
  // then whatever remains (closed loops of mis-pairings).
  for (const bool require_unclaimed : {true, false}) {
    for (int i = 1; i <= L; ++i) {
      for (const auto& t : tracks[i - 1]) {
        const std::pair<int, int> key{t.segment, t.label};
        if (trajectory_of.contains(key)) continue;
        if (require_unclaimed && indegree.contains(key)) continue;
        walk({t.segment, t.label});
      }
    }
  }
  for (const auto& [key, count] : indegree) {
    if (count > 1) {
      result.conflicts.push_back(fmt::format("track {} of segment {} is claimed by {} pairings",
                                             key.second, key.first, count));
    }
  }

  const bool cyclic = has_cycle(net);
  for (int i = 1; i <= L; ++i) {
    MergeMatrix mm;
    mm.segment = i;
    const auto m = tracks[i - 1].size();
    mm.matrix.assign(m, std::vector<std::uint8_t>(m, 0));
    for (std::size_t p = 0; p < m; ++p) mm.matrix[p][p] = 1;
    if (cyclic) {
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
          if (trajectory_of.at({i, static_cast<int>(p) + 1}) == trajectory_of.at({i, static_cast<int>(q) + 1})) {
            mm.matrix[p][q] = 1;
          }
        }
      }
    }
    result.merges.push_back(std::move(mm));
  }
  return result;
}

bool is_symmetric_unit_diagonal(const MergeMatrix& m) {
  const auto n = m.matrix.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (m.matrix[p].size() != n || m.matrix[p][p] != 1) return false;
    for (std::size_t q = 0; q < n; ++q) {
      if (m.matrix[p][q] != m.matrix[q][p]) return false;
      if (m.matrix[p][q] > 1) return false;
    }
  }
  return true;
}

bool is_transitively_closed(const MergeMatrix& m) {
  const auto n = m.matrix.size();
  // Boolean square must have the same zero pattern as the matrix itself.
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      bool reach = false;
      for (std::size_t k = 0; k < n && !reach; ++k) reach = m.matrix[p][k] && m.matrix[k][q];
      if (reach != (m.matrix[p][q] != 0)) return false;
    }
  }
  return true;
}

}  // namespace gmlkm
