#include "wiresense/log_ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace wiresense {

namespace {

bool parse_field(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Shared CSV scaffolding: header check, field count, numeric parsing, strictly
// increasing time in column 0. on_row consumes the parsed values.
template <typename OnRow>
void load_csv(const std::filesystem::path& path, std::string_view header,
              std::size_t columns, OnRow&& on_row) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line))
    throw ParseError(path.string(), 1, "empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw ParseError(path.string(), lineno,
                     "expected header \"" + std::string(header) + "\"");
  double prev_t = 0.0;
  bool have_prev = false;
  std::vector<double> values(columns);
  long rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns)
      throw ParseError(path.string(), lineno,
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()));
    for (std::size_t i = 0; i < columns; ++i) {
      if (!parse_field(fields[i], values[i]))
        throw ParseError(path.string(), lineno,
                         "field " + std::to_string(i + 1) + " is not a number");
    }
    if (have_prev && !(values[0] > prev_t))
      throw ParseError(path.string(), lineno,
                       "timestamps must be strictly increasing");
    prev_t = values[0];
    have_prev = true;
    on_row(values, lineno);
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string(), lineno, "no data rows");
}

std::string format_span(double a, double b) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << "[" << a << " s, " << b << " s]";
  return os.str();
}

void require_sorted_times(const char* what, double t, double prev, bool have_prev) {
  if (have_prev && !(t > prev))
    throw std::invalid_argument(std::string(what) +
                                " timestamps must be strictly increasing");
}

PoseRecord interpolate_pose(const std::vector<PoseRecord>& poses, std::size_t hint,
                            double t) {
  if (poses.size() == 1) {
    PoseRecord out = poses.front();
    out.t_sec = t;
    return out;
  }
  std::size_t i = hint;
  while (i + 2 < poses.size() && poses[i + 1].t_sec < t) ++i;
  const PoseRecord& a = poses[i];
  const PoseRecord& b = poses[i + 1];
  const double u = (t - a.t_sec) / (b.t_sec - a.t_sec);
  PoseRecord out;
  out.t_sec = t;
  out.x_m = a.x_m + u * (b.x_m - a.x_m);
  out.y_m = a.y_m + u * (b.y_m - a.y_m);
  // Shortest-arc yaw blend, so a 3.0 -> -3.0 crossing passes through pi
  // rather than zero.
  const double dyaw = wrap_angle(b.yaw_rad - a.yaw_rad);
  out.yaw_rad = wrap_angle(a.yaw_rad + u * dyaw);
  return out;
}

AlignResult align_core(const std::vector<ElongationSample>& sensor,
                       const std::vector<PoseRecord>& poses) {
  if (sensor.empty()) throw std::invalid_argument("sensor log is empty");
  if (poses.empty()) throw std::invalid_argument("pose log is empty");
  {
    double prev = 0.0;
    bool have = false;
    for (const auto& s : sensor) {
      require_sorted_times("sensor", s.t_sec, prev, have);
      prev = s.t_sec;
      have = true;
    }
    prev = 0.0;
    have = false;
    for (const auto& p : poses) {
      require_sorted_times("pose", p.t_sec, prev, have);
      prev = p.t_sec;
      have = true;
    }
  }
  const double pose_begin = poses.front().t_sec;
  const double pose_end = poses.back().t_sec;
  if (sensor.back().t_sec < pose_begin || sensor.front().t_sec > pose_end)
    throw EmptyOverlapError("no overlap between sensor time span " +
                            format_span(sensor.front().t_sec, sensor.back().t_sec) +
                            " and pose time span " +
                            format_span(pose_begin, pose_end));

  AlignResult out;
  out.samples.reserve(sensor.size());
  std::size_t hint = 0;
  for (const auto& s : sensor) {
    if (s.t_sec < pose_begin || s.t_sec > pose_end) {
      ++out.dropped_outside_span;
      continue;
    }
    double l = s.elongation_m;
    if (l < 0.0) {
      l = 0.0;
      ++out.slack_clamped;
    }
    StampedSample sample;
    sample.t_sec = s.t_sec;
    sample.pose = interpolate_pose(poses, hint, s.t_sec);
    sample.elongation_m = l;
    while (hint + 2 < poses.size() && poses[hint + 1].t_sec < s.t_sec) ++hint;
    out.samples.push_back(sample);
  }
  return out;
}

}  // namespace

double wrap_angle(double rad) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(rad, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

double calibrate(const RawSensorRecord& rec, const Calibration& cal) {
  cal.validate();
  return std::max(0.0, rec.raw_ratio - cal.zero_offset) * cal.full_scale_m;
}

AlignResult align(const std::vector<RawSensorRecord>& sensor,
                  const std::vector<PoseRecord>& poses, const Calibration& cal) {
  cal.validate();
  std::vector<ElongationSample> calibrated;
  calibrated.reserve(sensor.size());
  for (const auto& rec : sensor)
    calibrated.push_back({rec.t_sec, calibrate(rec, cal)});
  return align_core(calibrated, poses);
}

AlignResult align_calibrated(const std::vector<ElongationSample>& sensor,
                             const std::vector<PoseRecord>& poses) {
  return align_core(sensor, poses);
}

std::vector<StampedSample> smooth(const std::vector<StampedSample>& samples,
                                  int window) {
  if (window < 1 || window % 2 == 0)
    throw std::domain_error("smoothing window must be odd and at least 1");
  if (window == 1) return samples;
  const long n = static_cast<long>(samples.size());
  const long half = window / 2;
  std::vector<StampedSample> out = samples;
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (long j = lo; j <= hi; ++j) sum += samples[j].elongation_m;
    out[i].elongation_m = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<RawSensorRecord> load_sensor_csv(const std::filesystem::path& path) {
  std::vector<RawSensorRecord> records;
  load_csv(path, "t_sec,raw_ratio", 2, [&](const std::vector<double>& v, long lineno) {
    if (!(v[1] >= 0.0 && v[1] <= 1.0))
      throw ParseError(path.string(), lineno, "raw_ratio outside [0, 1]");
    records.push_back({v[0], v[1]});
  });
  return records;
}

std::vector<ElongationSample> load_elongation_csv(const std::filesystem::path& path) {
  std::vector<ElongationSample> records;
  load_csv(path, "t_sec,elongation_m", 2,
           [&](const std::vector<double>& v, long) {
             records.push_back({v[0], v[1]});
           });
  return records;
}

std::vector<PoseRecord> load_pose_csv(const std::filesystem::path& path) {
  std::vector<PoseRecord> records;
  load_csv(path, "t_sec,x_m,y_m,yaw_rad", 4,
           [&](const std::vector<double>& v, long) {
             records.push_back({v[0], v[1], v[2], wrap_angle(v[3])});
           });
  return records;
}

Calibration load_calibration_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  Calibration cal;
  try {
    if (doc.contains("full_scale_m")) cal.full_scale_m = doc.at("full_scale_m");
    if (doc.contains("zero_offset")) cal.zero_offset = doc.at("zero_offset");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  try {
    cal.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return cal;
}

}  // namespace wiresense
