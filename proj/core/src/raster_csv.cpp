#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "tofmux/error.hpp"
#include "tofmux/simulator.hpp"

namespace tofmux {

namespace {

constexpr std::string_view kDepthHeader =
    "camera_id,frame_index,timestamp_s,overlap_s,row,col,depth_m,saturated";
constexpr std::string_view kMetricsHeader =
    "frame_index,timestamp_us,overlap_us,saturated_count";

void put_double(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError(path.string(), "write failed");
}

template <class T>
T parse_field(std::string_view s, const std::filesystem::path& path,
              std::size_t line) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw IoError(path.string(), "line " + std::to_string(line) +
                                     ": bad field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void render_depth_csv(const std::vector<SimFrame>& frames,
                      const std::filesystem::path& path) {
  auto os = open_out(path);
  std::string buf;
  buf.append(kDepthHeader).push_back('\n');
  for (const auto& f : frames) {
    std::string prefix = std::to_string(f.camera_id) + ',' +
                         std::to_string(f.frame_index) + ',';
    put_double(prefix, f.timestamp);
    prefix.push_back(',');
    put_double(prefix, f.overlap_seconds);
    prefix.push_back(',');
    for (int r = 0; r < f.rows; ++r) {
      for (int c = 0; c < f.cols; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * f.cols + c;
        buf += prefix;
        buf += std::to_string(r);
        buf.push_back(',');
        buf += std::to_string(c);
        buf.push_back(',');
        if (!f.is_hole(i)) put_double(buf, f.depth[i]);
        buf.push_back(',');
        buf.push_back(f.is_hole(i) ? '1' : '0');
        buf.push_back('\n');
      }
    }
    os << buf;
    buf.clear();
  }
  os << buf;
  finish(os, path);
}

std::vector<SimFrame> read_depth_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(is, line) || line != kDepthHeader) {
    throw IoError(path.string(), "missing or unexpected header");
  }

  struct Cell {
    int row, col;
    double depth;
    bool hole;
  };
  std::vector<SimFrame> frames;
  std::vector<std::vector<Cell>> cells;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view f[8];
    for (int k = 0; k < 8; ++k) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (k == 7)) {
        throw IoError(path.string(),
                      "line " + std::to_string(n) + ": expected 8 fields");
      }
      f[k] = rest.substr(0, comma);
      if (k < 7) rest.remove_prefix(comma + 1);
    }
    const auto cam = parse_field<std::size_t>(f[0], path, n);
    const auto idx = parse_field<std::int64_t>(f[1], path, n);
    if (frames.empty() || frames.back().camera_id != cam ||
        frames.back().frame_index != idx) {
      SimFrame fr;
      fr.camera_id = cam;
      fr.frame_index = idx;
      fr.timestamp = parse_field<double>(f[2], path, n);
      fr.overlap_seconds = parse_field<double>(f[3], path, n);
      frames.push_back(std::move(fr));
      cells.emplace_back();
    }
    Cell c{parse_field<int>(f[4], path, n), parse_field<int>(f[5], path, n),
           std::numeric_limits<double>::quiet_NaN(), f[7] == "1"};
    if (f[7] != "0" && f[7] != "1") {
      throw IoError(path.string(),
                    "line " + std::to_string(n) + ": saturated must be 0 or 1");
    }
    if (c.hole != f[6].empty()) {
      throw IoError(path.string(), "line " + std::to_string(n) +
                                       ": depth must be empty exactly for holes");
    }
    if (!c.hole) c.depth = parse_field<double>(f[6], path, n);
    cells.back().push_back(c);
  }

  for (std::size_t k = 0; k < frames.size(); ++k) {
    auto& fr = frames[k];
    for (const auto& c : cells[k]) {
      fr.rows = std::max(fr.rows, c.row + 1);
      fr.cols = std::max(fr.cols, c.col + 1);
    }
    const std::size_t n_px = static_cast<std::size_t>(fr.rows) * fr.cols;
    if (cells[k].size() != n_px) {
      throw IoError(path.string(), "frame " + std::to_string(fr.frame_index) +
                                       " is not a full raster");
    }
    fr.depth.assign(n_px, std::numeric_limits<double>::quiet_NaN());
    fr.saturation_mask.assign(n_px, 0);
    for (std::size_t i = 0; i < n_px; ++i) {
      const auto& c = cells[k][i];
      const std::size_t at = static_cast<std::size_t>(c.row) * fr.cols + c.col;
      if (at != i) {
        throw IoError(path.string(), "frame " + std::to_string(fr.frame_index) +
                                         " rows out of raster order");
      }
      fr.depth[i] = c.depth;
      fr.saturation_mask[i] = c.hole ? 1 : 0;
      fr.saturated_count += c.hole ? 1 : 0;
    }
  }
  return frames;
}

void write_metrics_csv(const std::vector<SimFrame>& frames,
                       const std::filesystem::path& path) {
  auto os = open_out(path);
  os << kMetricsHeader << '\n';
  for (const auto& f : frames) {
    os << f.frame_index << ',' << std::llround(f.timestamp * 1e6) << ','
       << std::llround(f.overlap_seconds * 1e6) << ',' << f.saturated_count
       << '\n';
  }
  finish(os, path);
}

}  // namespace tofmux
