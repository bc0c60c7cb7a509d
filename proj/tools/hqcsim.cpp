// hqcsim: command-line driver for the holonomic-gate simulator.
//
// Subcommands: gate, fidelity, scan-lx, order-fit, verify-oracle.
// Every run can be captured with --emit-config and replayed with --config;
// with --no-timestamp the emitted artifacts are byte-identical across
// replays.  Exit codes: 0 success, 1 verification/expectation failure,
// 2 usage or domain error.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqc/error_models.hpp"
#include "hqc/fock_oracle.hpp"
#include "hqc/loops.hpp"
#include "hqc/su2.hpp"
#include "hqc/version.hpp"

using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Small utilities

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string iso_timestamp() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

bool truthy(const std::string& v) {
  std::string s;
  for (char c : v) s.push_back(static_cast<char>(std::tolower(c)));
  return s == "1" || s == "true" || s == "yes" || s == "on";
}

// ---------------------------------------------------------------------------
// Option structs

struct GlobalOptions {
  std::uint64_t seed = 12345;
  std::string format = "csv";
  std::string out;
  bool no_timestamp = false;
  std::string config_path;
  std::string emit_config_path;
};

struct NoiseOptions {
  std::string family = "uniform";
  double eps = 0.01;
  int grid = 4096;
  int zero_mean = 1;
  int periods = 3;
  double phase = 0.0;
};

struct GateParams {
  double lx = 1.0;
  double ly = 1.0;
};

struct FidelityParams {
  double lx = 1.0;
  double ly = 1.0;
  NoiseOptions noise;
  int samples = 100;
};

struct ScanLxParams {
  double lx_min = 1.0;
  double lx_max = 10.0;
  int points = 100;
  std::string spacing = "linear";
  NoiseOptions noise;
  int samples = 50;
  int revivals = 0;
};

struct OrderFitParams {
  double lx = 1.0;
  std::string eps_list = "0.001,0.002,0.005,0.01,0.02,0.03";
  NoiseOptions noise;
  int samples = 100;
  double expect_slope = 0.0;
  bool has_expect = false;
  double tol = 0.1;
};

struct VerifyParams {
  int nf = 64;
  double step = 1e-3;
  int steps_per_edge = 400;
  std::string ladder = "32,48,64,96";
};

hqc::NoiseSpec to_noise_spec(const NoiseOptions& n) {
  hqc::NoiseSpec spec;
  if (n.family == "constant") {
    spec.family = hqc::NoiseSpec::Family::Constant;
  } else if (n.family == "uniform") {
    spec.family = hqc::NoiseSpec::Family::Uniform;
  } else if (n.family == "gaussian") {
    spec.family = hqc::NoiseSpec::Family::Gaussian;
  } else if (n.family == "sinusoid") {
    spec.family = hqc::NoiseSpec::Family::Sinusoid;
  } else {
    throw std::domain_error("unknown noise family: " + n.family);
  }
  spec.scale = n.eps;
  spec.grid_size = n.grid;
  spec.zero_mean = n.zero_mean != 0;
  spec.periods = n.periods;
  spec.phase = n.phase;
  return spec;
}

// ---------------------------------------------------------------------------
// Config file: flat "key = value" lines, '#' comments.  Keys mirror the
// long flag names; "command" selects the subcommand.

using KvList = std::vector<std::pair<std::string, std::string>>;

KvList load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot read config file: " + path);
  KvList kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("malformed config line " + std::to_string(lineno) +
                              " in " + path + ": expected key = value");
    }
    kv.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return kv;
}

const std::vector<std::string> kCommands = {"gate", "fidelity", "scan-lx",
                                            "order-fit", "verify-oracle"};

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string bare = "--" + key;
  const std::string assigned = bare + "=";
  for (const std::string& a : args) {
    if (a == bare || a.rfind(assigned, 0) == 0) return true;
  }
  return false;
}

// Expands --config into explicit tokens ahead of the user's own flags, so
// explicit flags always win and a config-file run parses exactly like the
// equivalent flag run.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return args;

  const KvList kv = load_config(path);
  std::string config_command;
  for (const auto& [k, v] : kv) {
    if (k == "command") config_command = v;
  }

  std::string args_command;
  std::size_t command_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (std::find(kCommands.begin(), kCommands.end(), args[i]) !=
        kCommands.end()) {
      args_command = args[i];
      command_pos = i;
      break;
    }
  }
  if (!config_command.empty() && !args_command.empty() &&
      config_command != args_command) {
    throw std::domain_error("config file selects command '" + config_command +
                            "' but the command line says '" + args_command +
                            "'");
  }

  std::vector<std::string> injected;
  for (const auto& [k, v] : kv) {
    if (k == "command" || k == "config" || k == "emit-config") continue;
    if (has_flag(args, k)) continue;  // explicit flag wins
    if (k == "no-timestamp") {
      if (truthy(v)) injected.push_back("--no-timestamp");
      continue;
    }
    injected.push_back("--" + k + "=" + v);
  }

  // Injected tokens go right after the subcommand name so subcommand
  // options parse in subcommand scope (globals fall through).
  std::vector<std::string> out;
  if (args_command.empty()) {
    if (config_command.empty()) {
      throw std::domain_error("config file " + path + " has no command key");
    }
    out.push_back(config_command);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin(), args.end());
  } else {
    out.assign(args.begin(), args.begin() + command_pos + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + command_pos + 1, args.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolved-config serialization (emitted file and embedded artifact copy)

void push_noise(KvList& kv, const NoiseOptions& n) {
  kv.emplace_back("noise", n.family);
  kv.emplace_back("eps", fmt17(n.eps));
  kv.emplace_back("grid", std::to_string(n.grid));
  kv.emplace_back("zero-mean", std::to_string(n.zero_mean));
  kv.emplace_back("periods", std::to_string(n.periods));
  kv.emplace_back("phase", fmt17(n.phase));
}

void push_globals(KvList& kv, const GlobalOptions& g) {
  kv.emplace_back("seed", std::to_string(g.seed));
  kv.emplace_back("format", g.format);
  kv.emplace_back("no-timestamp", g.no_timestamp ? "1" : "0");
}

struct ResolvedRun {
  std::string command;
  KvList config;  // without output path: shared by artifacts
};

std::string config_file_text(const ResolvedRun& run, const GlobalOptions& g) {
  std::ostringstream out;
  out << "# hqcsim " << hqc::kVersion << " resolved configuration\n";
  out << "command = " << run.command << "\n";
  for (const auto& [k, v] : run.config) out << k << " = " << v << "\n";
  if (!g.out.empty()) out << "out = " << g.out << "\n";
  return out.str();
}

ordered_json config_json(const ResolvedRun& run) {
  ordered_json j;
  j["command"] = run.command;
  for (const auto& [k, v] : run.config) j[k] = v;
  return j;
}

ordered_json json_envelope(const ResolvedRun& run, const GlobalOptions& g) {
  ordered_json j;
  j["artifact"] = "hqcsim";
  j["version"] = hqc::kVersion;
  j["command"] = run.command;
  j["config"] = config_json(run);
  if (!g.no_timestamp) j["timestamp"] = iso_timestamp();
  return j;
}

std::string csv_preamble(const ResolvedRun& run, const GlobalOptions& g) {
  std::ostringstream out;
  out << "# artifact = hqcsim\n";
  out << "# version = " << hqc::kVersion << "\n";
  out << "# command = " << run.command << "\n";
  for (const auto& [k, v] : run.config) out << "# " << k << " = " << v << "\n";
  if (!g.no_timestamp) out << "# timestamp = " << iso_timestamp() << "\n";
  return out.str();
}

void write_artifact(const GlobalOptions& g, const std::string& content) {
  if (g.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::domain_error("cannot open output file: " + g.out);
  f << content;
}

void maybe_emit_config(const ResolvedRun& run, const GlobalOptions& g) {
  if (g.emit_config_path.empty()) return;
  std::ofstream f(g.emit_config_path, std::ios::binary);
  if (!f) {
    throw std::domain_error("cannot open config output file: " +
                            g.emit_config_path);
  }
  f << config_file_text(run, g);
}

ordered_json gate_json(const hqc::QubitGate& gate) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 2; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < 2; ++c) {
      row.push_back({gate(r, c).real(), gate(r, c).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_gate(const GlobalOptions& g, const GateParams& p) {
  ResolvedRun run;
  run.command = "gate";
  run.config.emplace_back("lx", fmt17(p.lx));
  run.config.emplace_back("ly", fmt17(p.ly));
  push_globals(run.config, g);
  maybe_emit_config(run, g);

  const double dx = hqc::hadamard_dx(p.lx);
  const double dy = hqc::hadamard_dy(p.ly);
  const hqc::HadamardLoops loops = hqc::hadamard_loops(p.lx, p.ly);
  const hqc::QubitGate rot_x_loop = hqc::holonomy(loops.x_loop);
  const hqc::QubitGate rot_y_loop = hqc::holonomy(loops.y_loop);
  const hqc::QubitGate gate = hqc::compose(rot_y_loop, rot_x_loop);
  const hqc::QubitGate target =
      hqc::hadamard_target().scaled(hqc::Complex(0.0, -1.0));

  ordered_json j = json_envelope(run, g);
  ordered_json results;
  results["d_x"] = dx;
  results["d_y"] = dy;
  results["sigma_I"] = hqc::surface_sigma(loops.x_loop);
  results["sigma_II"] = hqc::surface_sigma(loops.y_loop);
  results["gamma_I"] = gate_json(rot_x_loop);
  results["gamma_II"] = gate_json(rot_y_loop);
  results["gate"] = gate_json(gate);
  results["max_norm_deviation"] = hqc::max_norm_diff(gate, target);
  j["results"] = results;
  write_artifact(g, j.dump(2) + "\n");
  return 0;
}

int cmd_fidelity(const GlobalOptions& g, const FidelityParams& p) {
  ResolvedRun run;
  run.command = "fidelity";
  run.config.emplace_back("lx", fmt17(p.lx));
  run.config.emplace_back("ly", fmt17(p.ly));
  push_noise(run.config, p.noise);
  run.config.emplace_back("samples", std::to_string(p.samples));
  push_globals(run.config, g);
  maybe_emit_config(run, g);

  if (p.samples < 1) throw std::domain_error("samples must be at least 1");
  const hqc::NoiseSpec spec = to_noise_spec(p.noise);

  std::vector<hqc::FidelityReport> rows;
  rows.reserve(p.samples);
  for (int i = 0; i < p.samples; ++i) {
    const std::uint64_t seed_i = g.seed + static_cast<std::uint64_t>(i);
    const hqc::ErrorProfile px = hqc::make_profile(spec, 0.0, p.lx, seed_i);
    const hqc::ErrorProfile py =
        hqc::make_profile(spec, 0.0, p.ly, seed_i ^ hqc::kYStreamSeedSalt);
    rows.push_back(hqc::fidelity_report(p.lx, p.ly, px, py, seed_i));
  }

  hqc::FidelityReport mean{};
  mean.lx = p.lx;
  mean.ly = p.ly;
  mean.seed = g.seed;
  for (const hqc::FidelityReport& r : rows) {
    mean.msq += r.msq;
    mean.delta_sigma_I += r.delta_sigma_I;
    mean.delta_sigma_II += r.delta_sigma_II;
    mean.f_exact_j0 += r.f_exact_j0;
    mean.f_exact_j1 += r.f_exact_j1;
    mean.f_analytic += r.f_analytic;
    mean.f_approx_cos += r.f_approx_cos;
    mean.f_approx_quartic += r.f_approx_quartic;
  }
  const double n = static_cast<double>(p.samples);
  mean.msq /= n;
  mean.delta_sigma_I /= n;
  mean.delta_sigma_II /= n;
  mean.f_exact_j0 /= n;
  mean.f_exact_j1 /= n;
  mean.f_analytic /= n;
  mean.f_approx_cos /= n;
  mean.f_approx_quartic /= n;

  const auto row_values = [&](int index, const hqc::FidelityReport& r) {
    std::ostringstream line;
    line << index << ',' << r.seed << ',' << fmt17(r.lx) << ',' << fmt17(r.ly)
         << ',' << fmt17(p.noise.eps) << ',' << fmt17(r.msq) << ','
         << fmt17(r.delta_sigma_I) << ',' << fmt17(r.delta_sigma_II) << ','
         << fmt17(r.f_exact_j0) << ',' << fmt17(r.f_exact_j1) << ','
         << fmt17(r.f_analytic) << ',' << fmt17(r.f_approx_cos) << ','
         << fmt17(r.f_approx_quartic);
    return line.str();
  };
  const auto row_json = [&](int index, const hqc::FidelityReport& r) {
    ordered_json o;
    o["sample_index"] = index;
    o["seed"] = r.seed;
    o["l_x"] = r.lx;
    o["l_y"] = r.ly;
    o["eps"] = p.noise.eps;
    o["msq"] = r.msq;
    o["delta_sigma_I"] = r.delta_sigma_I;
    o["delta_sigma_II"] = r.delta_sigma_II;
    o["f_exact_j0"] = r.f_exact_j0;
    o["f_exact_j1"] = r.f_exact_j1;
    o["f_analytic"] = r.f_analytic;
    o["f_approx_cos"] = r.f_approx_cos;
    o["f_approx_quartic"] = r.f_approx_quartic;
    return o;
  };

  if (g.format == "json") {
    ordered_json j = json_envelope(run, g);
    ordered_json data = ordered_json::array();
    for (int i = 0; i < p.samples; ++i) data.push_back(row_json(i, rows[i]));
    j["results"]["rows"] = data;
    j["results"]["summary"] = row_json(-1, mean);
    write_artifact(g, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << csv_preamble(run, g);
    out << "sample_index,seed,l_x,l_y,eps,msq,delta_sigma_I,delta_sigma_II,"
           "f_exact_j0,f_exact_j1,f_analytic,f_approx_cos,f_approx_quartic\n";
    for (int i = 0; i < p.samples; ++i) out << row_values(i, rows[i]) << "\n";
    out << row_values(-1, mean) << "\n";
    write_artifact(g, out.str());
  }
  return 0;
}

int cmd_scan_lx(const GlobalOptions& g, const ScanLxParams& p) {
  ResolvedRun run;
  run.command = "scan-lx";
  run.config.emplace_back("lx-min", fmt17(p.lx_min));
  run.config.emplace_back("lx-max", fmt17(p.lx_max));
  run.config.emplace_back("points", std::to_string(p.points));
  run.config.emplace_back("spacing", p.spacing);
  push_noise(run.config, p.noise);
  run.config.emplace_back("samples", std::to_string(p.samples));
  run.config.emplace_back("revivals", std::to_string(p.revivals));
  push_globals(run.config, g);
  maybe_emit_config(run, g);

  constexpr double quarter_pi = std::numbers::pi / 4.0;
  if (!(p.lx_min > quarter_pi)) {
    throw std::domain_error(
        "scan range must start above pi/4 ~ 0.7853981633974483");
  }
  if (!(p.lx_max > p.lx_min)) throw std::domain_error("empty scan range");
  if (p.points < 2) throw std::domain_error("scan needs at least 2 points");
  if (p.samples < 1) throw std::domain_error("samples must be at least 1");
  if (p.spacing != "linear" && p.spacing != "log") {
    throw std::domain_error("spacing must be linear or log");
  }
  const hqc::NoiseSpec spec = to_noise_spec(p.noise);

  std::vector<double> grid;
  grid.reserve(p.points + std::max(0, p.revivals));
  for (int k = 0; k < p.points; ++k) {
    const double t = static_cast<double>(k) / (p.points - 1);
    grid.push_back(p.spacing == "linear"
                       ? p.lx_min + t * (p.lx_max - p.lx_min)
                       : p.lx_min * std::pow(p.lx_max / p.lx_min, t));
  }
  // Predicted revival widths for the family's nominal mean squared error,
  // inserted exactly where the sweep should look.
  const double msq_nominal = hqc::nominal_mean_square(spec);
  for (int nrev = 1; nrev <= p.revivals; ++nrev) {
    const double l = hqc::revival_length(nrev, msq_nominal);
    if (l > p.lx_min && l < p.lx_max) grid.push_back(l);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  struct Row {
    double lx, dx, msq, mean_one_minus_f, f_cos, f_quartic;
    bool local_max = false;
  };
  std::vector<Row> rows;
  rows.reserve(grid.size());
  const hqc::QubitGate target =
      hqc::hadamard_target().scaled(hqc::Complex(0.0, -1.0));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lx = grid[k];
    const double dx = hqc::hadamard_dx(lx);
    const hqc::RectLoop loop(hqc::ControlPlane::XR1, 0.0, lx, dx);
    double sum_one_minus_f = 0.0;
    double sum_msq = 0.0;
    for (int i = 0; i < p.samples; ++i) {
      const std::uint64_t seed =
          g.seed + static_cast<std::uint64_t>(k) * p.samples +
          static_cast<std::uint64_t>(i);
      const hqc::ErrorProfile px = hqc::make_profile(spec, 0.0, lx, seed);
      const hqc::PerturbedSigma sx = hqc::perturbed_sigma(loop, px);
      const hqc::QubitGate actual =
          hqc::perturbed_hadamard_composed(sx.delta_sigma, 0.0);
      sum_one_minus_f += 1.0 - hqc::basis_fidelity(target, actual, 0);
      sum_msq += hqc::mean_square(px);
    }
    Row row;
    row.lx = lx;
    row.dx = dx;
    row.msq = sum_msq / p.samples;
    row.mean_one_minus_f = sum_one_minus_f / p.samples;
    const hqc::ApproxFidelity ap = hqc::approx_fidelity(lx, row.msq);
    row.f_cos = ap.f_cos;
    row.f_quartic = ap.f_quartic;
    rows.push_back(row);
  }
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    rows[k].local_max = rows[k].mean_one_minus_f < rows[k - 1].mean_one_minus_f &&
                        rows[k].mean_one_minus_f < rows[k + 1].mean_one_minus_f;
  }

  if (g.format == "json") {
    ordered_json j = json_envelope(run, g);
    ordered_json data = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json o;
      o["l_x"] = r.lx;
      o["d_x"] = r.dx;
      o["msq"] = r.msq;
      o["mean_one_minus_f_exact"] = r.mean_one_minus_f;
      o["f_approx_cos"] = r.f_cos;
      o["f_approx_quartic"] = r.f_quartic;
      o["is_local_max"] = r.local_max ? 1 : 0;
      data.push_back(o);
    }
    j["results"]["rows"] = data;
    write_artifact(g, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << csv_preamble(run, g);
    out << "l_x,d_x,msq,mean_one_minus_f_exact,f_approx_cos,f_approx_quartic,"
           "is_local_max\n";
    for (const Row& r : rows) {
      out << fmt17(r.lx) << ',' << fmt17(r.dx) << ',' << fmt17(r.msq) << ','
          << fmt17(r.mean_one_minus_f) << ',' << fmt17(r.f_cos) << ','
          << fmt17(r.f_quartic) << ',' << (r.local_max ? 1 : 0) << "\n";
    }
    write_artifact(g, out.str());
  }
  return 0;
}

int cmd_order_fit(const GlobalOptions& g, const OrderFitParams& p) {
  ResolvedRun run;
  run.command = "order-fit";
  run.config.emplace_back("lx", fmt17(p.lx));
  run.config.emplace_back("eps-list", p.eps_list);
  push_noise(run.config, p.noise);
  run.config.emplace_back("samples", std::to_string(p.samples));
  if (p.has_expect) {
    run.config.emplace_back("expect-slope", fmt17(p.expect_slope));
    run.config.emplace_back("tol", fmt17(p.tol));
  }
  push_globals(run.config, g);
  maybe_emit_config(run, g);

  std::vector<double> eps;
  for (const std::string& item : split(p.eps_list, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::domain_error("bad eps value: " + item);
    }
    if (pos != item.size()) throw std::domain_error("bad eps value: " + item);
    eps.push_back(v);
  }
  hqc::NoiseSpec spec = to_noise_spec(p.noise);
  const hqc::OrderScanResult scan =
      hqc::order_scan(p.lx, spec, eps, p.samples, g.seed);

  ordered_json j = json_envelope(run, g);
  ordered_json results;
  if (scan.underflow) {
    results["slope"] = nullptr;
    results["intercept"] = nullptr;
  } else {
    results["slope"] = scan.slope;
    results["intercept"] = scan.intercept;
  }
  results["underflow"] = scan.underflow;
  ordered_json pts = ordered_json::array();
  for (const auto& [e, v] : scan.points) {
    ordered_json o;
    o["eps"] = e;
    o["one_minus_f"] = v;
    pts.push_back(o);
  }
  results["points"] = pts;

  int exit_code = 0;
  if (p.has_expect) {
    const bool pass =
        !scan.underflow && std::abs(scan.slope - p.expect_slope) <= p.tol;
    results["expect_slope"] = p.expect_slope;
    results["tol"] = p.tol;
    results["pass"] = pass;
    exit_code = pass ? 0 : 1;
  }
  j["results"] = results;
  write_artifact(g, j.dump(2) + "\n");
  return exit_code;
}

int cmd_verify_oracle(const GlobalOptions& g, const VerifyParams& p) {
  ResolvedRun run;
  run.command = "verify-oracle";
  run.config.emplace_back("nf", std::to_string(p.nf));
  run.config.emplace_back("step", fmt17(p.step));
  run.config.emplace_back("steps-per-edge", std::to_string(p.steps_per_edge));
  run.config.emplace_back("ladder", p.ladder);
  push_globals(run.config, g);
  maybe_emit_config(run, g);

  std::vector<int> ladder_dims;
  for (const std::string& item : split(p.ladder, ',')) {
    if (item.empty()) continue;
    try {
      ladder_dims.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::domain_error("bad ladder entry: " + item);
    }
  }
  if (ladder_dims.size() < 3) {
    throw std::domain_error("convergence ladder needs at least 3 rungs");
  }

  const hqc::FockSpace space(p.nf);  // throws below 4 levels
  const std::complex<double> imag_unit(0.0, 1.0);
  Eigen::Matrix2cd sigma_x, sigma_y;
  sigma_x << 0.0, 1.0, 1.0, 0.0;
  sigma_y << 0.0, -imag_unit, imag_unit, 0.0;

  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  const auto add_check = [&](const std::string& name, double measured,
                             double tolerance) {
    const bool pass = measured <= tolerance;
    all_pass = all_pass && pass;
    ordered_json c;
    c["name"] = name;
    c["measured"] = measured;
    c["tolerance"] = tolerance;
    c["pass"] = pass;
    checks.push_back(c);
  };

  // Field strength against the closed-form exponentials, on the part of
  // the squeezing range the default truncation resolves (see README).
  for (double r1 : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const hqc::ControlPoint pt{0.3, -0.2, r1};
    const Eigen::Matrix2cd fx = hqc::field_strength(
        pt, hqc::ControlDirection::X, hqc::ControlDirection::R1, p.step, space);
    const Eigen::Matrix2cd fy = hqc::field_strength(
        pt, hqc::ControlDirection::Y, hqc::ControlDirection::R1, p.step, space);
    const Eigen::Matrix2cd fx_ref =
        -2.0 * imag_unit * std::exp(-2.0 * r1) * sigma_y;
    const Eigen::Matrix2cd fy_ref =
        -2.0 * imag_unit * std::exp(2.0 * r1) * sigma_x;
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", r1);
    add_check(std::string("field_strength_xr1@r1=") + label,
              (fx - fx_ref).cwiseAbs().maxCoeff() /
                  fx_ref.cwiseAbs().maxCoeff(),
              1e-3);
    add_check(std::string("field_strength_yr1@r1=") + label,
              (fy - fy_ref).cwiseAbs().maxCoeff() /
                  fy_ref.cwiseAbs().maxCoeff(),
              1e-3);
  }

  // Holonomy of the gate's loop pair, inside the same envelope.
  {
    const double lx = 2.0;
    const double ly = 2.0;
    const hqc::HadamardLoops loops = hqc::hadamard_loops(lx, ly);
    const hqc::OracleHolonomy hx =
        hqc::path_ordered_holonomy(loops.x_loop, p.steps_per_edge, space, p.step);
    const hqc::OracleHolonomy hy =
        hqc::path_ordered_holonomy(loops.y_loop, p.steps_per_edge, space, p.step);
    add_check("holonomy_x_loop(lx=2)",
              hqc::max_norm_diff(hx.gate, hqc::holonomy(loops.x_loop)), 1e-3);
    add_check("holonomy_y_loop(ly=2)",
              hqc::max_norm_diff(hy.gate, hqc::holonomy(loops.y_loop)), 1e-3);
    const hqc::QubitGate target =
        hqc::hadamard_target().scaled(hqc::Complex(0.0, -1.0));
    add_check("holonomy_pair(lx=ly=2)",
              hqc::max_norm_diff(hqc::compose(hy.gate, hx.gate), target), 2e-3);
  }

  // Truncation convergence ladder for the field strength.
  {
    std::vector<hqc::LadderRung> rungs;
    for (int dim : ladder_dims) {
      rungs.push_back(hqc::LadderRung{dim, p.step, p.steps_per_edge});
    }
    const std::vector<hqc::ConvergenceRow> rows = hqc::convergence_check(
        hqc::OracleTarget::FieldStrengthXR1, rungs, {0.3, -0.2, 0.5});
    ordered_json ladder_rows = ordered_json::array();
    for (const hqc::ConvergenceRow& r : rows) {
      ordered_json o;
      o["dim"] = r.rung.dim;
      o["error"] = r.error;
      ladder_rows.push_back(o);
    }
    const bool ladder_ok = hqc::errors_non_increasing(rows, 0.10);
    all_pass = all_pass && ladder_ok;
    ordered_json c;
    c["name"] = "field_strength_ladder@r1=0.5";
    c["rows"] = ladder_rows;
    c["pass"] = ladder_ok;
    checks.push_back(c);
  }

  ordered_json j = json_envelope(run, g);
  j["results"]["checks"] = checks;
  j["results"]["all_pass"] = all_pass;
  write_artifact(g, j.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));

  CLI::App app{"holonomic one-qubit gate simulator and verification harness"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "base seed for sample streams");
  app.add_option("--format", g.format, "output format for sweep commands")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_flag("--no-timestamp", g.no_timestamp,
               "omit timestamps for byte-reproducible artifacts");
  app.add_option("--config", g.config_path,
                 "flat key=value config file; explicit flags override");
  app.add_option("--emit-config", g.emit_config_path,
                 "write the resolved configuration to this file");

  const auto add_noise_options = [](CLI::App* cmd, NoiseOptions& n) {
    cmd->add_option("--noise", n.family, "error profile family")
        ->check(CLI::IsMember({"constant", "uniform", "gaussian", "sinusoid"}));
    cmd->add_option("--eps", n.eps, "error scale");
    cmd->add_option("--grid", n.grid, "profile grid size");
    cmd->add_option("--zero-mean", n.zero_mean,
                    "subtract the profile line average (random families)")
        ->check(CLI::Range(0, 1));
    cmd->add_option("--periods", n.periods, "sinusoid periods");
    cmd->add_option("--phase", n.phase, "sinusoid phase");
  };

  GateParams gate_params;
  CLI::App* gate = app.add_subcommand("gate", "build the gate from loop widths");
  gate->fallthrough();
  gate->add_option("--lx", gate_params.lx, "XR1 loop width");
  gate->add_option("--ly", gate_params.ly, "YR1 loop width");

  FidelityParams fid_params;
  CLI::App* fid = app.add_subcommand("fidelity", "Monte Carlo fidelity sweep");
  fid->fallthrough();
  fid->add_option("--lx", fid_params.lx, "XR1 loop width");
  fid->add_option("--ly", fid_params.ly, "YR1 loop width");
  add_noise_options(fid, fid_params.noise);
  fid->add_option("--samples", fid_params.samples, "Monte Carlo samples");

  ScanLxParams scan_params;
  CLI::App* scan =
      app.add_subcommand("scan-lx", "fidelity versus XR1 loop width");
  scan->fallthrough();
  scan->add_option("--lx-min", scan_params.lx_min, "scan start")->required();
  scan->add_option("--lx-max", scan_params.lx_max, "scan end")->required();
  scan->add_option("--points", scan_params.points, "grid points");
  scan->add_option("--spacing", scan_params.spacing, "grid spacing")
      ->check(CLI::IsMember({"linear", "log"}));
  add_noise_options(scan, scan_params.noise);
  scan->add_option("--samples", scan_params.samples, "samples per point");
  scan->add_option("--revivals", scan_params.revivals,
                   "insert the first N predicted revival widths");

  OrderFitParams order_params;
  CLI::App* order =
      app.add_subcommand("order-fit", "fit the infidelity scaling exponent");
  order->fallthrough();
  order->add_option("--lx", order_params.lx, "XR1 loop width");
  order->add_option("--eps-list", order_params.eps_list,
                    "comma-separated error scales");
  add_noise_options(order, order_params.noise);
  order->add_option("--samples", order_params.samples, "samples per scale");
  CLI::Option* expect_opt = order->add_option(
      "--expect-slope", order_params.expect_slope, "expected exponent");
  order->add_option("--tol", order_params.tol, "allowed exponent deviation");

  VerifyParams verify_params;
  CLI::App* verify =
      app.add_subcommand("verify-oracle", "truncated-space oracle checks");
  verify->fallthrough();
  verify->add_option("--nf", verify_params.nf, "Fock truncation dimension");
  verify->add_option("--step", verify_params.step, "finite-difference stride");
  verify->add_option("--steps-per-edge", verify_params.steps_per_edge,
                     "path resolution");
  verify->add_option("--ladder", verify_params.ladder,
                     "comma-separated truncation ladder");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  order_params.has_expect = expect_opt->count() > 0;

  if (gate->parsed()) return cmd_gate(g, gate_params);
  if (fid->parsed()) return cmd_fidelity(g, fid_params);
  if (scan->parsed()) return cmd_scan_lx(g, scan_params);
  if (order->parsed()) return cmd_order_fit(g, order_params);
  if (verify->parsed()) return cmd_verify_oracle(g, verify_params);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
