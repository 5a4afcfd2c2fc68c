#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "catchannel/analytic.hpp"
#include "catchannel/dataset.hpp"
#include "catchannel/errors.hpp"
#include "catchannel/fock_oracle.hpp"
#include "catchannel/photons.hpp"
#include "catchannel/sweeps.hpp"

namespace cc = catchannel;

namespace {

constexpr int kFlagError = 2;
constexpr int kNumericalError = 3;

struct ParamFlags {
  double alpha0 = 1.0;
  double alpha0_arg = 0.0;
  double phi = std::numbers::pi / 2;
  double theta = 0.0;
  double r = 0.0;
  std::string xi = "auto";
  double t = 1.0;
  double g = 1.0;
  std::vector<CLI::Option*> options;
};

/// Flag errors past parsing: exit code 2, message names the flag.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kTransmission(
    [](std::string& s) -> std::string {
      const double v = std::stod(s);
      return v > 0.0 && v <= 1.0 ? "" : "must lie in (0, 1]";
    },
    "(0,1]");

const CLI::Validator kGain(
    [](std::string& s) -> std::string { return std::stod(s) >= 1.0 ? "" : "must be >= 1"; }, ">=1");

const CLI::Validator kXi(
    [](std::string& s) -> std::string {
      if (s == "auto") return "";
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return "";
      } catch (const std::exception&) {
      }
      return "must be 'auto' or a finite angle in radians";
    },
    "auto|RAD");

void add_param_flags(CLI::App* app, ParamFlags& p) {
  p.options = {
      app->add_option("--alpha0", p.alpha0, "coherent amplitude modulus |alpha0|")
          ->check(CLI::NonNegativeNumber)->capture_default_str(),
      app->add_option("--alpha0-arg", p.alpha0_arg, "phase of alpha0 (rad)")->capture_default_str(),
      app->add_option("--phi", p.phi, "cat half-angle (rad)")->capture_default_str(),
      app->add_option("--theta", p.theta, "interferometer phase (rad)")->capture_default_str(),
      app->add_option("--r", p.r, "squeezing parameter")->check(CLI::NonNegativeNumber)->capture_default_str(),
      app->add_option("--xi", p.xi, "pump phase (rad) or auto")->check(kXi)->capture_default_str(),
      app->add_option("--t", p.t, "amplitude transmission")->check(kTransmission)->capture_default_str(),
      app->add_option("--g", p.g, "amplitude gain")->check(kGain)->capture_default_str(),
  };
}

cc::CatParams cat_params(const ParamFlags& p) {
  cc::CatParams cat;
  cat.alpha0 = std::polar(p.alpha0, p.alpha0_arg);
  cat.phi = p.phi;
  cat.theta = p.theta;
  return cat;
}

std::optional<double> fixed_xi(const ParamFlags& p) {
  if (p.xi == "auto") return std::nullopt;
  return std::stod(p.xi);
}

cc::ChannelParams channel_params(const ParamFlags& p, const cc::CatParams& cat) {
  cc::ChannelParams ch;
  ch.r = p.r;
  ch.t = p.t;
  ch.g = p.g;
  ch.xi = fixed_xi(p).value_or(cc::default_xi(cat));
  return ch;
}

std::string xi_note(const ParamFlags& p) {
  return p.xi == "auto" ? "auto (2 arg(alpha0 e^{i phi}))" : p.xi;
}

void print_value(std::ostream& out, const std::string& key, double v) {
  out << key << " = " << cc::format_number(v) << '\n';
}

struct OutputFlags {
  std::string out = "-";
  std::string format = "csv";
};

void add_output_flags(CLI::App* app, OutputFlags& o) {
  app->add_option("--out", o.out, "output file, - for standard output")->capture_default_str();
  app->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void emit(const cc::Table& table, const OutputFlags& o) {
  std::ofstream file;
  if (o.out != "-") {
    file.open(o.out, std::ios::binary);
    if (!file) throw FlagError("--out: cannot open '" + o.out + "' for writing");
  }
  std::ostream& out = o.out == "-" ? std::cout : file;
  if (o.format == "json") {
    cc::write_json(out, table);
  } else {
    cc::write_csv(out, table);
  }
  out.flush();
  if (!out) throw FlagError("--out: write to '" + o.out + "' failed");
}

std::size_t count_error_rows(const cc::Table& table) {
  const std::size_t idx = table.column_index("error");
  std::size_t n = 0;
  for (const auto& row : table.rows) {
    const auto* s = std::get_if<std::string>(&row[idx]);
    if (s && !s->empty()) ++n;
  }
  return n;
}

void report_error_rows(const cc::Table& table) {
  if (const std::size_t n = count_error_rows(table)) {
    std::cerr << "warning: " << n << " of " << table.rows.size()
              << " points failed; see the error column\n";
  }
}

cc::Axis axis_flag(const std::string& spec, const std::string& flag) {
  try {
    return cc::parse_axis(spec);
  } catch (const cc::InvalidArgument& e) {
    throw FlagError(flag + ": " + e.what());
  }
}

struct Range {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  double step() const { return (max - min) / (points - 1); }
  double at(int k) const { return k == points - 1 ? max : min + k * step(); }
};

/// "min:max:points"
Range range_flag(const std::string& spec, const std::string& flag) {
  Range r;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &r.min, &r.max, &r.points, &tail) != 3 ||
      !std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max) || r.points < 2) {
    throw FlagError(flag + ": expected min:max:points with min < max and points >= 2, got '" + spec + "'");
  }
  return r;
}

int run_visibility(const ParamFlags& p, bool oracle, int theta_scan) {
  const cc::CatParams cat = cat_params(p);
  const cc::ChannelParams ch = channel_params(p, cat);
  if (oracle && !cc::within_oracle_domain(cat, ch)) {
    throw FlagError("--oracle: needs |alpha0| <= 3, r <= 1.5 and g <= 1.5");
  }
  const cc::VisibilityReport rep = cc::visibility(cat, ch);
  const std::complex<double> component = cat.alpha0 * std::polar(1.0, cat.phi);
  std::ostream& out = std::cout;
  print_value(out, "alpha0", std::abs(cat.alpha0));
  print_value(out, "alpha0_arg", std::arg(cat.alpha0));
  print_value(out, "phi", cat.phi);
  print_value(out, "theta", cat.theta);
  print_value(out, "r", ch.r);
  print_value(out, "xi", ch.xi);
  print_value(out, "t", ch.t);
  print_value(out, "g", ch.g);
  print_value(out, "visibility", rep.visibility);
  print_value(out, "log10_visibility", rep.log_visibility * std::numbers::log10e);
  print_value(out, "p_max", rep.p_max.magnitude());
  print_value(out, "p_min", rep.p_min.magnitude());
  print_value(out, "p_theta", rep.p_at_theta.magnitude());
  print_value(out, "theta_max", rep.theta_max);
  print_value(out, "theta_min", rep.theta_min);
  print_value(out, "idler_mean", cc::idler_mean_closed(component, ch.r, ch.xi, ch.g));
  print_value(out, "env_mean", cc::env_mean(component, ch.r, ch.xi, ch.t));
  if (theta_scan > 0) {
    print_value(out, "theta_scan_visibility", cc::visibility_theta_scan(cat, ch, theta_scan));
  }
  if (oracle) {
    const cc::VisibilityReport orc = cc::oracle_visibility(cat, ch);
    print_value(out, "oracle_visibility", orc.visibility);
    print_value(out, "oracle_p_max", orc.p_max.magnitude());
    print_value(out, "oracle_p_min", orc.p_min.magnitude());
    print_value(out, "delta_visibility", std::abs(orc.visibility - rep.visibility));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cat-state visibility through squeeze, loss, gain and anti-squeeze"};
  app.set_version_flag("--version", std::string(cc::kVersion));
  app.require_subcommand(1);

  // visibility
  ParamFlags vis_params;
  bool vis_oracle = false;
  int vis_scan = 0;
  auto* vis = app.add_subcommand("visibility", "single-point visibility report");
  add_param_flags(vis, vis_params);
  vis->add_flag("--oracle", vis_oracle, "also run the truncated Fock-space simulation");
  vis->add_option("--theta-scan", vis_scan, "also scan P(theta) on N points")
      ->check(CLI::Range(2, 1 << 16));

  // sweep
  ParamFlags sw_params;
  OutputFlags sw_out;
  std::string sw_figure;
  std::vector<std::string> sw_axes;
  std::vector<std::string> sw_outputs{"visibility"};
  unsigned sw_threads = 0;
  double sw_rmax = 4.0, sw_tol = 1e-4;
  auto* sweep = app.add_subcommand("sweep", "parameter-grid dataset");
  add_param_flags(sweep, sw_params);
  add_output_flags(sweep, sw_out);
  auto* fig_opt = sweep->add_option("--figure", sw_figure, "figure preset")
                      ->check(CLI::IsMember({"5", "6", "7", "8", "9a", "9b", "10a", "10b", "11a", "11b"}));
  auto* axis_opt = sweep->add_option("--axis", sw_axes, "name:min:max:points[:log], name in r,g,t,alpha0");
  auto* outputs_opt = sweep->add_option("--outputs", sw_outputs,
                                        "visibility,idler_mean,env_mean,optimal_r,oracle_visibility,"
                                        "oracle_idler_mean,oracle_env_mean")
                          ->delimiter(',')
                          ->capture_default_str();
  sweep->add_option("--threads", sw_threads, "worker threads (0: all cores)")->capture_default_str();
  auto* rmax_opt = sweep->add_option("--r-max", sw_rmax, "upper r for optimal_r")
                       ->check(CLI::PositiveNumber)->capture_default_str();
  auto* tol_opt = sweep->add_option("--tol", sw_tol, "r tolerance for optimal_r")
                      ->check(CLI::PositiveNumber)->capture_default_str();
  for (CLI::Option* o : sw_params.options) fig_opt->excludes(o);
  for (CLI::Option* o : {axis_opt, outputs_opt, rmax_opt, tol_opt}) fig_opt->excludes(o);

  // photons
  ParamFlags ph_params;
  OutputFlags ph_out;
  std::string ph_axis = "r:0:4:81";
  std::string ph_figure;
  bool ph_oracle = false;
  auto* photons = app.add_subcommand("photons", "idler and environment photon numbers");
  add_param_flags(photons, ph_params);
  add_output_flags(photons, ph_out);
  auto* ph_axis_opt = photons->add_option("--axis", ph_axis, "name:min:max:points[:log]")->capture_default_str();
  auto* ph_fig_opt = photons->add_option("--figure", ph_figure, "figure preset")->check(CLI::IsMember({"6"}));
  photons->add_flag("--oracle", ph_oracle, "add truncated Fock-space columns");
  for (CLI::Option* o : ph_params.options) ph_fig_opt->excludes(o);
  ph_fig_opt->excludes(ph_axis_opt);

  // qfunc
  ParamFlags q_params;
  OutputFlags q_out;
  std::string q_re = "-4:4:81", q_im = "-4:4:81";
  auto* qfunc = app.add_subcommand("qfunc", "post-selected signal Q-function on a grid");
  add_param_flags(qfunc, q_params);
  add_output_flags(qfunc, q_out);
  qfunc->add_option("--re", q_re, "min:max:points for Re alpha")->capture_default_str();
  qfunc->add_option("--im", q_im, "min:max:points for Im alpha")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return kFlagError;
  }

  try {
    if (*vis) return run_visibility(vis_params, vis_oracle, vis_scan);

    if (*sweep) {
      cc::SweepSpec spec;
      if (!sw_figure.empty()) {
        spec = cc::figure_preset(sw_figure);
      } else {
        if (sw_axes.empty()) throw FlagError("--axis: at least one axis (or --figure) is required");
        for (const auto& a : sw_axes) spec.axes.push_back(axis_flag(a, "--axis"));
        const cc::CatParams cat = cat_params(sw_params);
        spec.series = {{"sweep", cat, channel_params(sw_params, cat)}};
        spec.xi = fixed_xi(sw_params);
        spec.outputs.clear();
        for (const auto& name : sw_outputs) {
          const auto o = cc::parse_output(name);
          if (!o) throw FlagError("--outputs: unknown output '" + name + "'");
          spec.outputs.push_back(*o);
        }
        spec.r_max = sw_rmax;
        spec.tol = sw_tol;
        spec.notes = {{"xi", xi_note(sw_params)}};
      }
      spec.threads = sw_threads;
      try {
        spec.validate();
      } catch (const cc::InvalidArgument& e) {
        throw FlagError(std::string("--axis: ") + e.what());
      }
      const cc::Table table = cc::run_sweep(spec);
      emit(table, sw_out);
      report_error_rows(table);
      return 0;
    }

    if (*photons) {
      cc::SweepSpec spec;
      if (!ph_figure.empty()) {
        spec = cc::figure_preset(ph_figure);
      } else {
        spec.axes = {axis_flag(ph_axis, "--axis")};
        const cc::CatParams cat = cat_params(ph_params);
        spec.series = {{"photons", cat, channel_params(ph_params, cat)}};
        spec.xi = fixed_xi(ph_params);
        spec.notes = {{"xi", xi_note(ph_params)}};
      }
      spec.outputs = {cc::Output::idler_mean, cc::Output::env_mean};
      if (ph_oracle) {
        spec.outputs.push_back(cc::Output::oracle_idler_mean);
        spec.outputs.push_back(cc::Output::oracle_env_mean);
      }
      const cc::Table table = cc::run_sweep(spec);
      emit(table, ph_out);
      report_error_rows(table);
      return 0;
    }

    if (*qfunc) {
      const Range re = range_flag(q_re, "--re");
      const Range im = range_flag(q_im, "--im");
      const cc::CatParams cat = cat_params(q_params);
      const cc::ChannelParams ch = channel_params(q_params, cat);
      const cc::SignalQFunction q(cat, ch);
      cc::Table table;
      table.columns = {"alpha_re", "alpha_im", "q"};
      for (int i = 0; i < re.points; ++i) {
        for (int j = 0; j < im.points; ++j) {
          const double x = re.at(i), y = im.at(j);
          table.rows.push_back({x, y, q(x, y)});
        }
      }
      table.notes = {{"xi", xi_note(q_params)},
                     {"cell_area", cc::format_number(re.step() * im.step())},
                     {"probability", cc::format_number(cc::probability(cat, ch, cat.theta))}};
      emit(table, q_out);
      return 0;
    }
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFlagError;
  } catch (const cc::Error& e) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << '\n';
    return kNumericalError;
  } catch (const cc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFlagError;
  }
  return 0;
}
