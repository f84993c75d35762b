#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmlkm/network.hpp"

namespace gmlkm {

/// Parses a topology document:
///   {"segments": [{"id": 1, "length": 100, "sensor_positions": [..]}, ..],
///    "edges": [[1, 2], ..], "intersection_radius": 5}
/// Segment ids must be 1..L (any order). Throws InputError.
RoadNetwork load_network(std::string_view document);
std::string serialize_network(const RoadNetwork& net);

/// Parses a `segment,sensor,time,velocity` table against `net`. Rows may
/// appear in any order; records come back sorted by time.
std::vector<SegmentDataset> load_measurements(std::string_view csv,
                                              const RoadNetwork& net);
std::string serialize_measurements(std::span<const SegmentDataset> data);

/// Comma-separated 0/1 matrix with a header row of column labels and a
/// leading column of row labels.
std::string format_matrix(const std::vector<std::vector<std::uint8_t>>& m,
                          std::span<const std::string> row_labels,
                          std::span<const std::string> col_labels);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace gmlkm
