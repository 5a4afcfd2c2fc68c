#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catchannel/dataset.hpp"
#include "catchannel/params.hpp"

namespace catchannel {

struct OptimumR {
  double r_opt = 0.0;
  double visibility = 0.0;
  double log_visibility = 0.0;
  /// The coarse scan saw separated local maxima.
  bool non_unimodal = false;
};

/// Maximizes V over r in [0, r_max]: 32-point coarse scan of log V, then
/// golden section on the bracket around the best coarse point. Ties go to
/// the smallest r. `ch.r` is ignored.
OptimumR optimize_r(const CatParams& cat, const ChannelParams& ch, double r_max = 4.0,
                    double tol = 1e-4);

enum class AxisName { r, g, t, alpha0 };
enum class Spacing { linear, log };

struct Axis {
  AxisName name = AxisName::r;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
  void validate() const;
};

std::string_view axis_label(AxisName name);
std::optional<AxisName> parse_axis_name(std::string_view s);

/// "name:min:max:points[:log]"
Axis parse_axis(std::string_view spec);

enum class Output {
  visibility,
  idler_mean,
  env_mean,
  optimal_r,
  oracle_visibility,
  oracle_idler_mean,
  oracle_env_mean,
};

std::optional<Output> parse_output(std::string_view s);

/// One curve: a label plus the parameters not set by an axis.
struct Series {
  std::string label;
  CatParams cat;
  ChannelParams ch;
};

struct SweepSpec {
  std::vector<Axis> axes;
  std::vector<Series> series;
  std::vector<Output> outputs{Output::visibility};
  /// Unset: xi = default_xi at every point.
  std::optional<double> xi;
  double r_max = 4.0;
  double tol = 1e-4;
  /// 0: hardware concurrency.
  unsigned threads = 0;
  std::vector<std::pair<std::string, std::string>> notes;

  void validate() const;
};

/// One row per (series, grid point), series outermost, then axes in order
/// with the last axis varying fastest. A point that fails gets NaN outputs
/// and its message in the `error` column.
Table run_sweep(const SweepSpec& spec);

/// Column names run_sweep will produce for `spec`.
std::vector<std::string> sweep_columns(const SweepSpec& spec);

/// Named presets: 5, 6, 7, 8, 9a, 9b, 10a,
/// 10b, 11a, 11b.
SweepSpec figure_preset(std::string_view figure);
std::vector<std::string_view> figure_names();

}  // namespace catchannel
