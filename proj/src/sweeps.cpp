#include "catchannel/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "catchannel/analytic.hpp"
#include "catchannel/diagnostics.hpp"
#include "catchannel/errors.hpp"
#include "catchannel/fock_oracle.hpp"
#include "catchannel/photons.hpp"

namespace catchannel {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLog10E = std::numbers::log10e;

/// a beats b by more than rounding noise
bool better(double a, double b) {
  if (std::isnan(a)) return false;
  if (std::isnan(b)) return true;
  if (std::isinf(b) && b < 0) return a > b;
  return a > b + 1e-12 * std::max(1.0, std::abs(b));
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("bad number '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Point {
  std::size_t series = 0;
  CatParams cat;
  ChannelParams ch;
};

void set_axis(Point& p, AxisName name, double v) {
  switch (name) {
    case AxisName::r: p.ch.r = v; break;
    case AxisName::g: p.ch.g = v; break;
    case AxisName::t: p.ch.t = v; break;
    case AxisName::alpha0: p.cat.alpha0 = std::polar(v, std::arg(p.cat.alpha0)); break;
  }
}

bool has_output(const SweepSpec& spec, Output o) {
  return std::find(spec.outputs.begin(), spec.outputs.end(), o) != spec.outputs.end();
}

std::vector<Cell> evaluate_point(const SweepSpec& spec, const Point& p) {
  std::vector<Cell> row;
  const CatParams& cat = p.cat;
  const ChannelParams& ch = p.ch;
  row.insert(row.end(), {spec.series[p.series].label, std::abs(cat.alpha0), std::arg(cat.alpha0),
                         cat.phi, cat.theta, ch.r, ch.xi, ch.t, ch.g});
  const std::size_t fixed = row.size();
  const std::complex<double> component = cat.alpha0 * std::polar(1.0, cat.phi);
  try {
    for (Output o : spec.outputs) {
      switch (o) {
        case Output::visibility: {
          const VisibilityReport rep = visibility(cat, ch);
          row.insert(row.end(), {rep.visibility, rep.log_visibility * kLog10E});
          break;
        }
        case Output::idler_mean:
          row.push_back(idler_mean_closed(component, ch.r, ch.xi, ch.g));
          break;
        case Output::env_mean:
          row.push_back(env_mean(component, ch.r, ch.xi, ch.t));
          break;
        case Output::optimal_r: {
          const OptimumR opt = optimize_r(cat, ch, spec.r_max, spec.tol);
          row.insert(row.end(), {opt.r_opt, opt.visibility, opt.log_visibility * kLog10E});
          break;
        }
        case Output::oracle_visibility:
        case Output::oracle_idler_mean:
        case Output::oracle_env_mean: {
          if (!within_oracle_domain(cat, ch)) {
            throw TruncationInadequate("point outside the oracle domain (|alpha0| <= 3, r <= 1.5, g <= 1.5)");
          }
          if (o == Output::oracle_visibility) {
            row.push_back(oracle_visibility(cat, ch).visibility);
          } else {
            const ModeMeans m = oracle_channel_means(component, ch, default_cutoffs(cat, ch));
            row.push_back(o == Output::oracle_idler_mean ? m.idler : m.environment);
          }
          break;
        }
      }
    }
    row.push_back(std::string());
  } catch (const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    const std::string msg = err ? std::string(err->module()) + ": " + e.what() : e.what();
    row.resize(fixed);
    row.resize(sweep_columns(spec).size() - 1, Cell(kNaN));
    row.push_back(msg);
  }
  return row;
}

}  // namespace

OptimumR optimize_r(const CatParams& cat, const ChannelParams& ch, double r_max, double tol) {
  if (!(r_max > 0.0)) throw InvalidArgument("r_max must be > 0");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
  const auto log_v = [&](double r) {
    ChannelParams at = ch;
    at.r = r;
    return visibility(cat, at).log_visibility;
  };

  constexpr int kCoarse = 32;
  std::vector<double> rs(kCoarse), vs(kCoarse);
  int best = 0;
  for (int k = 0; k < kCoarse; ++k) {
    rs[k] = r_max * k / (kCoarse - 1);
    vs[k] = log_v(rs[k]);
    if (better(vs[k], vs[best])) best = k;
  }

  OptimumR out;
  std::vector<int> peaks;
  for (int k = 0; k < kCoarse; ++k) {
    const bool left = k == 0 || better(vs[k], vs[k - 1]);
    const bool right = k == kCoarse - 1 || better(vs[k], vs[k + 1]);
    if (left && right) peaks.push_back(k);
  }
  if (peaks.size() > 1 && (rs[peaks.back()] - rs[peaks.front()]) > 2.0 * tol) {
    out.non_unimodal = true;
    std::ostringstream msg;
    msg << "NonUnimodal: " << peaks.size() << " local maxima of V(r) on [0, " << r_max
        << "]; returning the global one";
    diag::warn("sweeps", msg.str());
  }

  // golden section on the bracket around the coarse maximum
  double a = rs[std::max(0, best - 1)];
  double b = rs[std::min(kCoarse - 1, best + 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = log_v(x1), f2 = log_v(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = log_v(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = log_v(x2);
    }
  }

  std::vector<std::pair<double, double>> candidates{{rs[best], vs[best]},
                                                    {x1, f1},
                                                    {x2, f2},
                                                    {a, log_v(a)},
                                                    {b, log_v(b)}};
  std::sort(candidates.begin(), candidates.end());
  std::pair<double, double> pick = candidates.front();
  for (const auto& c : candidates) {
    if (better(c.second, pick.second)) pick = c;
  }
  out.r_opt = pick.first;
  out.log_visibility = pick.second;
  out.visibility = std::exp(pick.second);
  return out;
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(points);
  for (int k = 0; k < points; ++k) {
    const double f = static_cast<double>(k) / (points - 1);
    v[k] = spacing == Spacing::linear ? min + f * (max - min)
                                      : std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void Axis::validate() const {
  const std::string label(axis_label(name));
  if (points < 2) throw InvalidArgument("axis " + label + " needs at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw InvalidArgument("axis " + label + " needs finite min < max");
  }
  if (spacing == Spacing::log && !(min > 0.0)) {
    throw InvalidArgument("log-spaced axis " + label + " needs min > 0");
  }
  switch (name) {
    case AxisName::r:
    case AxisName::alpha0:
      if (min < 0.0) throw InvalidArgument("axis " + label + " must be >= 0");
      break;
    case AxisName::g:
      if (min < 1.0) throw InvalidArgument("axis g must be >= 1");
      break;
    case AxisName::t:
      if (!(min > 0.0) || max > 1.0) throw InvalidArgument("axis t must lie in (0, 1]");
      break;
  }
}

std::string_view axis_label(AxisName name) {
  switch (name) {
    case AxisName::r: return "r";
    case AxisName::g: return "g";
    case AxisName::t: return "t";
    case AxisName::alpha0: return "alpha0";
  }
  return "";
}

std::optional<AxisName> parse_axis_name(std::string_view s) {
  for (AxisName n : {AxisName::r, AxisName::g, AxisName::t, AxisName::alpha0}) {
    if (axis_label(n) == s) return n;
  }
  return std::nullopt;
}

Axis parse_axis(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4 && parts.size() != 5) {
    throw InvalidArgument("axis '" + std::string(spec) + "' is not name:min:max:points[:log]");
  }
  Axis axis;
  const auto name = parse_axis_name(parts[0]);
  if (!name) throw InvalidArgument("unknown axis name '" + std::string(parts[0]) + "'");
  axis.name = *name;
  axis.min = parse_double(parts[1], "axis min");
  axis.max = parse_double(parts[2], "axis max");
  int points = 0;
  const auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), points);
  if (res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size()) {
    throw InvalidArgument("bad point count '" + std::string(parts[3]) + "'");
  }
  axis.points = points;
  if (parts.size() == 5) {
    if (parts[4] == "log") {
      axis.spacing = Spacing::log;
    } else if (parts[4] != "lin" && parts[4] != "linear") {
      throw InvalidArgument("axis spacing must be lin or log");
    }
  }
  axis.validate();
  return axis;
}

std::optional<Output> parse_output(std::string_view s) {
  static constexpr std::pair<std::string_view, Output> kNames[] = {
      {"visibility", Output::visibility},
      {"idler_mean", Output::idler_mean},
      {"env_mean", Output::env_mean},
      {"optimal_r", Output::optimal_r},
      {"oracle_visibility", Output::oracle_visibility},
      {"oracle_idler_mean", Output::oracle_idler_mean},
      {"oracle_env_mean", Output::oracle_env_mean},
  };
  for (const auto& [name, o] : kNames) {
    if (name == s) return o;
  }
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (series.empty()) throw InvalidArgument("sweep needs at least one series");
  if (outputs.empty()) throw InvalidArgument("sweep needs at least one output");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    axes[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[i].name == axes[j].name) {
        throw InvalidArgument("axis " + std::string(axis_label(axes[i].name)) + " given twice");
      }
    }
    if (axes[i].name == AxisName::r && has_output(*this, Output::optimal_r)) {
      throw InvalidArgument("optimal_r cannot be combined with an r axis");
    }
  }
  if (xi && !std::isfinite(*xi)) throw InvalidArgument("xi must be finite");
  if (!(r_max > 0.0) || !(tol > 0.0)) throw InvalidArgument("r_max and tol must be > 0");
  for (const Series& s : series) {
    s.cat.validate();
    s.ch.validate();
  }
}

std::vector<std::string> sweep_columns(const SweepSpec& spec) {
  std::vector<std::string> cols{"series", "alpha0", "alpha0_arg", "phi", "theta", "r", "xi", "t", "g"};
  for (Output o : spec.outputs) {
    switch (o) {
      case Output::visibility: cols.insert(cols.end(), {"visibility", "log10_visibility"}); break;
      case Output::idler_mean: cols.push_back("idler_mean"); break;
      case Output::env_mean: cols.push_back("env_mean"); break;
      case Output::optimal_r:
        cols.insert(cols.end(), {"r_opt", "visibility_opt", "log10_visibility_opt"});
        break;
      case Output::oracle_visibility: cols.push_back("oracle_visibility"); break;
      case Output::oracle_idler_mean: cols.push_back("oracle_idler_mean"); break;
      case Output::oracle_env_mean: cols.push_back("oracle_env_mean"); break;
    }
  }
  cols.push_back("error");
  return cols;
}

Table run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::vector<double>> grids;
  for (const Axis& a : spec.axes) grids.push_back(a.values());

  std::size_t per_series = 1;
  for (const auto& g : grids) per_series *= g.size();
  std::vector<Point> points;
  points.reserve(per_series * spec.series.size());
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    for (std::size_t n = 0; n < per_series; ++n) {
      Point p{s, spec.series[s].cat, spec.series[s].ch};
      std::size_t rest = n;  // last axis fastest
      for (std::size_t k = grids.size(); k-- > 0;) {
        set_axis(p, spec.axes[k].name, grids[k][rest % grids[k].size()]);
        rest /= grids[k].size();
      }
      p.ch.xi = spec.xi.value_or(default_xi(p.cat));
      points.push_back(p);
    }
  }

  Table table;
  table.columns = sweep_columns(spec);
  table.rows.resize(points.size());
  table.notes = spec.notes;

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      table.rows[i] = evaluate_point(spec, points[i]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return table;
}

namespace {

Series make_series(std::string label, double alpha0, double r, double t, double g) {
  Series s;
  s.label = std::move(label);
  s.cat.alpha0 = alpha0;
  s.ch.r = r;
  s.ch.t = t;
  s.ch.g = g;
  return s;
}

std::string number_label(std::string_view prefix, double v) {
  return std::string(prefix) + "=" + format_number(v);
}

}  // namespace

std::vector<std::string_view> figure_names() {
  return {"5", "6", "7", "8", "9a", "9b", "10a", "10b", "11a", "11b"};
}

SweepSpec figure_preset(std::string_view figure) {
  SweepSpec spec;
  const Axis r_axis{AxisName::r, 0.0, 4.0, 81, Spacing::linear};
  if (figure == "5") {
    spec.axes = {r_axis};
    spec.series = {make_series("gain", 100, 0, 1.0, 1.001), make_series("loss", 100, 0, 0.999, 1.0),
                   make_series("loss+gain", 100, 0, 0.999, 1.001)};
  } else if (figure == "6") {
    spec.axes = {r_axis};
    spec.series = {make_series("loss+gain", 100, 0, 0.999, 1.001)};
    spec.outputs = {Output::idler_mean, Output::env_mean};
  } else if (figure == "7") {
    spec.axes = {{AxisName::alpha0, 1.0, 1000.0, 31, Spacing::log}};
    for (double g : {1.001, 1.01, 1.1}) spec.series.push_back(make_series(number_label("g", g), 1, 0, 1.0, g));
    spec.outputs = {Output::optimal_r};
    spec.r_max = 5.0;
  } else if (figure == "8") {
    spec.axes = {{AxisName::g, 1.0, 1.1, 41, Spacing::linear}};
    for (double a : {1.0, 10.0, 100.0}) spec.series.push_back(make_series(number_label("alpha0", a), a, 0, 1.0, 1.0));
    spec.outputs = {Output::optimal_r};
    spec.r_max = 5.0;
  } else if (figure == "9a" || figure == "9b") {
    const bool a = figure == "9a";
    spec.axes = {a ? Axis{AxisName::g, 1.0, 1.1, 41, Spacing::linear}
                   : Axis{AxisName::alpha0, 1.0, 100.0, 41, Spacing::log}};
    for (double r : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      spec.series.push_back(make_series(number_label("r", r), a ? 10.0 : 1.0, r, 1.0, a ? 1.0 : 1.1));
    }
  } else if (figure == "10a" || figure == "10b") {
    const bool a = figure == "10a";
    spec.axes = {{AxisName::g, 1.0, a ? 1.05 : 1.005, 41, Spacing::linear},
                 {AxisName::r, 0.0, 4.0, 41, Spacing::linear}};
    spec.series = {make_series(number_label("alpha0", a ? 10 : 100), a ? 10 : 100, 0, 1.0, 1.0)};
  } else if (figure == "11a" || figure == "11b") {
    const double g = figure == "11a" ? 1.01 : 1.1;
    spec.axes = {{AxisName::alpha0, 1.0, 100.0, 41, Spacing::log},
                 {AxisName::r, 0.0, 4.0, 41, Spacing::linear}};
    spec.series = {make_series(number_label("g", g), 1, 0, 1.0, g)};
  } else {
    throw InvalidArgument("unknown figure '" + std::string(figure) + "'");
  }
  spec.notes = {{"figure", std::string(figure)},
                {"alpha0", "real"},
                {"phi", "pi/2"},
                {"theta", "0"},
                {"xi", "auto (2 arg(alpha0 e^{i phi}))"}};
  return spec;
}

}  // namespace catchannel
