#include "gmlkm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "gmlkm/error.hpp"

namespace gmlkm {

using nlohmann::json;

RoadNetwork load_network(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("malformed topology document: {}", e.what()));
  }
  try {
    std::vector<RoadSegment> segments;
    for (const auto& s : doc.at("segments")) {
      RoadSegment seg;
      seg.id = s.at("id").get<int>();
      seg.length = s.at("length").get<double>();
      seg.sensor_positions = s.at("sensor_positions").get<std::vector<double>>();
      segments.push_back(std::move(seg));
    }
    std::vector<RoadNetwork::Edge> edges;
    if (doc.contains("edges")) {
      for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InputError("edges must be [from, to] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    return RoadNetwork::create(std::move(segments), edges, doc.at("intersection_radius").get<double>());
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed topology document: {}", e.what()));
  }
}

std::string serialize_network(const RoadNetwork& net) {
  json doc;
  doc["segments"] = json::array();
  for (const auto& s : net.segments()) {
    doc["segments"].push_back(
        {{"id", s.id}, {"length", s.length}, {"sensor_positions", s.sensor_positions}});
  }
  doc["edges"] = json::array();
  for (const auto& [from, to] : net.edges()) doc["edges"].push_back({from, to});
  doc["intersection_radius"] = net.intersection_radius();
  return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InputError(fmt::format("line {}: cannot parse '{}'", line_no, field));
  }
  return value;
}

}  // namespace

std::vector<SegmentDataset> load_measurements(std::string_view csv, const RoadNetwork& net) {
  auto data = empty_datasets(net);
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    const auto line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (eol == csv.size()) break;
      continue;
    }
    const auto f = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      if (f.size() != 4 || f[0] != "segment" || f[1] != "sensor" || f[2] != "time" || f[3] != "velocity") {
        throw InputError("measurement table header must be segment,sensor,time,velocity");
      }
      continue;
    }
    if (f.size() != 4) throw InputError(fmt::format("line {}: expected 4 fields", line_no));
    const int segment = parse_number<int>(f[0], line_no);
    const int sensor = parse_number<int>(f[1], line_no);
    const double time = parse_number<double>(f[2], line_no);
    const double velocity = parse_number<double>(f[3], line_no);
    if (segment < 1 || segment > net.size()) {
      throw InputError(fmt::format("line {}: unknown segment {}", line_no, segment));
    }
    if (sensor < 1 || sensor > net.segment(segment).sensor_count()) {
      throw InputError(fmt::format("line {}: unknown sensor S{}.{}", line_no, segment, sensor));
    }
    if (!(velocity > 0.0)) {
      throw InputError(fmt::format("line {}: velocity must be positive", line_no));
    }
    data[segment - 1].records[sensor - 1].hits.push_back({velocity, time});
  }
  if (!header_seen) throw InputError("measurement table is empty (missing header)");

  for (auto& ds : data) {
    for (auto& r : ds.records) {
      std::stable_sort(r.hits.begin(), r.hits.end(),
                       [](const Measurement& a, const Measurement& b) { return a.time < b.time; });
      for (std::size_t n = 1; n < r.hits.size(); ++n) {
        if (r.hits[n].time == r.hits[n - 1].time) {
          throw InputError(fmt::format("duplicate (sensor, time) row: S{}.{} at t={}",
                                       r.sensor.segment, r.sensor.rank, r.hits[n].time));
        }
      }
    }
    ds.validate();
  }
  return data;
}

std::string serialize_measurements(std::span<const SegmentDataset> data) {
  std::string out = "segment,sensor,time,velocity\n";
  for (const auto& ds : data) {
    for (const auto& r : ds.records) {
      for (const auto& h : r.hits) {
        out += fmt::format("{},{},{},{}\n", r.sensor.segment, r.sensor.rank, h.time, h.velocity);
      }
    }
  }
  return out;
}

std::string format_matrix(const std::vector<std::vector<std::uint8_t>>& m,
                          std::span<const std::string> row_labels,
                          std::span<const std::string> col_labels) {
  std::string out;
  for (const auto& c : col_labels) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += i < row_labels.size() ? row_labels[i] : std::to_string(i + 1);
    for (const auto v : m[i]) out += v ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError(fmt::format("failed writing '{}'", path));
}

}  // namespace gmlkm
