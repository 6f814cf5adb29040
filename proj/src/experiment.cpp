// Copyright 2026 The Quench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quench/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "quench/density_matrix.hpp"
#include "quench/entropy.hpp"
#include "quench/parallel.hpp"
#include "quench/rng.hpp"

namespace quench {

namespace fs = std::filesystem;

std::string version_string() { return "0.1.0"; }

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

bool parse_bool(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "expected on/off, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw ConfigError(line, "expected integer list, got '" + v + "'");
    }
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
  ExperimentConfig cfg;
  bool saw_workload = false, saw_n = false;
  std::string section;
  std::string raw_line;
  int line_no = 0;
  while (std::getline(is, raw_line)) {
    ++line_no;
    std::string line = trim(raw_line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "experiment" && section != "model" && section != "noise" &&
          section != "mitigation" && section != "entropy")
        throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (section == "experiment" || section.empty()) {
      if (key == "workload") {
        if (val == "magnetization")
          cfg.workload = Workload::Magnetization;
        else if (val == "entropy")
          cfg.workload = Workload::Entropy;
        else if (val == "sweep")
          cfg.workload = Workload::SweepQem;
        else
          throw ConfigError(line_no, "unknown workload '" + val + "'");
        saw_workload = true;
      } else if (key == "shots") {
        cfg.shots = static_cast<std::uint64_t>(parse_double(val, line_no));
      } else if (key == "repetitions") {
        cfg.repetitions = static_cast<int>(parse_double(val, line_no));
        if (cfg.repetitions < 1) throw ConfigError(line_no, "repetitions must be >= 1");
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
      } else if (key == "trajectories") {
        cfg.n_trajectories = static_cast<int>(parse_double(val, line_no));
      } else if (key == "out") {
        cfg.out_dir = val;
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "model") {
      if (key == "n") {
        cfg.params.n_sites = static_cast<int>(parse_double(val, line_no));
        saw_n = true;
      } else if (key == "j1")
        cfg.params.coupling = parse_double(val, line_no);
      else if (key == "delta")
        cfg.params.anisotropy = parse_double(val, line_no);
      else if (key == "dt")
        cfg.params.step_size = parse_double(val, line_no);
      else if (key == "steps")
        cfg.params.n_steps = static_cast<int>(parse_double(val, line_no));
      else if (key == "boundary") {
        if (val == "obc")
          cfg.params.boundary = Boundary::OBC;
        else if (val == "pbc")
          cfg.params.boundary = Boundary::PBC;
        else
          throw ConfigError(line_no, "boundary must be obc or pbc");
      } else
        throw ConfigError(line_no, "unknown key '" + key + "' in [model]");
    } else if (section == "noise") {
      if (key == "preset") {
        if (val == "none")
          cfg.noise = NoiseModel::noiseless();
        else if (val == "default")
          cfg.noise = NoiseModel::plausible_defaults(cfg.params.n_sites);
        else
          throw ConfigError(line_no, "noise preset must be none or default");
      } else if (key == "p2")
        cfg.noise.two_qubit_depol = parse_double(val, line_no);
      else if (key == "eps2")
        cfg.noise.two_qubit_coherent = parse_double(val, line_no);
      else if (key == "idle_z")
        cfg.noise.idle_z_rate = parse_double(val, line_no);
      else if (key == "readout") {
        const auto eqpos = val.find(',');
        if (eqpos == std::string::npos)
          throw ConfigError(line_no, "readout needs p01,p10");
        const double p01 = parse_double(val.substr(0, eqpos), line_no);
        const double p10 = parse_double(val.substr(eqpos + 1), line_no);
        cfg.noise.readout.assign(std::max(cfg.params.n_sites, 1),
                                 ReadoutConfusion{p01, p10});
      } else if (key.rfind("readout.q", 0) == 0) {
        const int q = std::stoi(key.substr(9));
        std::istringstream vs(val);
        std::string tok;
        double c[4];
        for (int i = 0; i < 4; ++i) {
          if (!std::getline(vs, tok, ','))
            throw ConfigError(line_no, "readout.q needs 4 comma-separated values");
          c[i] = parse_double(tok, line_no);
        }
        if (q >= static_cast<int>(cfg.noise.readout.size()))
          cfg.noise.readout.resize(q + 1);
        cfg.noise.readout[q] = ReadoutConfusion{c[1], c[2]};
      } else
        throw ConfigError(line_no, "unknown key '" + key + "' in [noise]");
    } else if (section == "mitigation") {
      if (key == "trex")
        cfg.mitigation.trex.enabled = parse_bool(val, line_no);
      else if (key == "trex.samples")
        cfg.mitigation.trex.n_samples = static_cast<int>(parse_double(val, line_no));
      else if (key == "dd")
        cfg.mitigation.dd.enabled = parse_bool(val, line_no);
      else if (key == "dd.min_window")
        cfg.mitigation.dd.min_window = parse_double(val, line_no);
      else if (key == "pt")
        cfg.mitigation.pt.enabled = parse_bool(val, line_no);
      else if (key == "pt.copies")
        cfg.mitigation.pt.n_copies = static_cast<int>(parse_double(val, line_no));
      else if (key == "zne")
        cfg.mitigation.zne.enabled = parse_bool(val, line_no);
      else if (key == "zne.factors")
        cfg.mitigation.zne.fold_factors = parse_int_list(val, line_no);
      else if (key == "zne.fit") {
        if (val == "linear")
          cfg.mitigation.zne.fit = ZneFit::Linear;
        else if (val == "exponential")
          cfg.mitigation.zne.fit = ZneFit::Exponential;
        else
          throw ConfigError(line_no, "zne.fit must be linear or exponential");
      } else if (key == "sm")
        cfg.mitigation.sm.enabled = parse_bool(val, line_no);
      else
        throw ConfigError(line_no, "unknown key '" + key + "' in [mitigation]");
    } else if (section == "entropy") {
      if (key == "subsystem")
        cfg.entropy_subsystem = static_cast<int>(parse_double(val, line_no));
      else if (key == "instances")
        cfg.entropy_instances = static_cast<int>(parse_double(val, line_no));
      else if (key == "qmp")
        cfg.entropy_qmp = parse_bool(val, line_no);
      else if (key == "steps")
        cfg.entropy_steps = parse_int_list(val, line_no);
      else
        throw ConfigError(line_no, "unknown key '" + key + "' in [entropy]");
    }
  }
  if (!saw_workload) throw ConfigError("missing config key: workload");
  if (!saw_n) throw ConfigError("missing config key: n (section [model])");
  cfg.params.validate();
  cfg.noise.validate();
  cfg.mitigation.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse(in);
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "workload=" << static_cast<int>(workload) << '\n'
     << "n=" << params.n_sites << " j1=" << params.coupling
     << " delta=" << params.anisotropy << " dt=" << params.step_size
     << " steps=" << params.n_steps << " bc=" << boundary_name(params.boundary) << '\n'
     << "shots=" << shots << " reps=" << repetitions << " seed=" << seed
     << " traj=" << n_trajectories << '\n'
     << "noise:" << noise.serialize() << '\n'
     << "mitigation=" << mitigation.summary() << " trex.n=" << mitigation.trex.n_samples
     << " pt.n=" << mitigation.pt.n_copies << " dd.w=" << mitigation.dd.min_window
     << " zne.fit=" << static_cast<int>(mitigation.zne.fit) << " zne.f=";
  for (int f : mitigation.zne.fold_factors) os << f << ',';
  os << '\n'
     << "entropy: sub=" << entropy_subsystem << " inst=" << entropy_instances
     << " qmp=" << entropy_qmp << " steps=";
  for (int s : entropy_steps) os << s << ',';
  os << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a(canonical_text()); }

// ---------------------------------------------------------------------------
// Fixtures and comparison
// ---------------------------------------------------------------------------

const std::vector<SeriesPoint>& FixtureTable::get(const std::string& name) const {
  const auto it = series.find(name);
  if (it == series.end())
    throw std::invalid_argument("fixture has no series named '" + name + "'");
  return it->second;
}

FixtureTable FixtureTable::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture: " + path.string());
  FixtureTable t;
  std::string line;
  std::string current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("series ", 0) == 0) {
      current = trim(line.substr(7));
      if (current.empty())
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": series needs a name");
      t.series[current];
      continue;
    }
    if (current.empty())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": data before any series header");
    std::istringstream ls(line);
    SeriesPoint p;
    if (!(ls >> p.step >> p.value)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 'step value [std]'");
    }
    ls >> p.std_dev;
    if (p.std_dev < 0)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": negative std dev");
    t.series[current].push_back(p);
  }
  return t;
}

MaeReport compare_fixture(const std::vector<SeriesPoint>& results,
                          const std::vector<SeriesPoint>& reference) {
  if (results.size() != reference.size() || results.empty())
    throw std::invalid_argument("series of different lengths cannot be compared");
  auto sorted = [](std::vector<SeriesPoint> v) {
    std::sort(v.begin(), v.end(),
              [](const SeriesPoint& a, const SeriesPoint& b) { return a.step < b.step; });
    return v;
  };
  const auto r = sorted(results);
  const auto f = sorted(reference);
  MaeReport rep;
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].step != f[i].step)
      throw std::invalid_argument("misaligned steps: " + std::to_string(r[i].step) +
                                  " vs " + std::to_string(f[i].step));
    const double d = std::abs(r[i].value - f[i].value);
    rep.rows.push_back({r[i].step, r[i].value, f[i].value, d});
    acc += d;
  }
  rep.mae = acc / r.size();
  return rep;
}

std::string MaeReport::format(const std::string& label) const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(5);
  os << "# MAE report: " << label << '\n';
  os << "step value reference abs_error\n";
  for (const auto& row : rows)
    os << row.step << ' ' << row.value << ' ' << row.reference << ' '
       << row.abs_error << '\n';
  os << "mae " << mae << '\n';
  return os.str();
}

std::vector<SeriesPoint> load_results_series(const fs::path& csv,
                                             const std::string& column) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open results file: " + csv.string());
  std::string line;
  std::vector<std::string> header;
  std::vector<SeriesPoint> out;
  int col_idx = -1, step_idx = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == column) col_idx = static_cast<int>(i);
        if (header[i] == "step") step_idx = static_cast<int>(i);
      }
      if (col_idx < 0)
        throw std::runtime_error("results file has no column '" + column + "'");
      if (step_idx < 0) throw std::runtime_error("results file has no step column");
      continue;
    }
    SeriesPoint p;
    p.step = std::stoi(cells.at(step_idx));
    p.value = std::stod(cells.at(col_idx));
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Workloads
// ---------------------------------------------------------------------------

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string result_header(const ExperimentConfig& cfg, const std::string& what) {
  std::ostringstream os;
  os << "# quench " << what << " v" << version_string() << '\n';
  os << "# config " << std::hex << std::setw(16) << std::setfill('0')
     << cfg.config_hash() << std::dec << " seed " << cfg.seed << '\n';
  return os.str();
}

std::vector<double> trotter_reference(const XXZParams& params) {
  std::vector<double> ref;
  if (params.n_sites > 22) return ref;  // dense reference impractical past this
  StateVector initial = neel_state(params.n_sites);
  // incremental stepping: keep the state before the trailing half layer
  for (int m = 1; m <= params.n_steps; ++m) {
    XXZParams pm = params;
    pm.n_steps = m;
    const Circuit c = build_trotter_circuit(pm, TrotterOrder::SecondOptimized);
    const StateVector s = apply_circuit(initial, c);
    ref.push_back(staggered_magnetization_exact(s));
  }
  return ref;
}

struct AggregatedStep {
  double raw_mean = 0.0;
  double mit_mean = 0.0;
  double spread = 0.0;  // std dev across repetitions (or the estimate's error)
};

std::string write_magnetization_csv(const ExperimentConfig& cfg,
                                    const std::vector<std::vector<StepResult>>& reps,
                                    const std::vector<double>& reference) {
  std::ostringstream os;
  os << result_header(cfg, "results");
  os << "step,time,raw,mitigated,std_error,reference,abs_error\n";
  os << std::setprecision(10);
  const int n_steps = static_cast<int>(reps.front().size());
  for (int s = 0; s < n_steps; ++s) {
    double raw = 0, mit = 0;
    for (const auto& r : reps) {
      raw += r[s].estimate.raw;
      mit += r[s].estimate.mitigated;
    }
    raw /= reps.size();
    mit /= reps.size();
    double spread;
    if (reps.size() > 1) {
      double var = 0;
      for (const auto& r : reps) {
        const double d = r[s].estimate.mitigated - mit;
        var += d * d;
      }
      spread = std::sqrt(var / (reps.size() - 1));
    } else {
      spread = reps.front()[s].estimate.std_error;
    }
    const double ref = s < static_cast<int>(reference.size())
                           ? reference[s]
                           : std::numeric_limits<double>::quiet_NaN();
    os << reps.front()[s].step << ',' << reps.front()[s].time << ',' << raw << ','
       << mit << ',' << spread << ',' << ref << ',' << std::abs(mit - ref) << '\n';
  }
  return os.str();
}

std::string write_mitigation_report(const ExperimentConfig& cfg,
                                    const std::vector<std::vector<StepResult>>& reps) {
  std::ostringstream os;
  os << result_header(cfg, "mitigation report");
  os << std::setprecision(10);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (const auto& s : reps[r]) {
      os << "record step=" << s.step << " time=" << s.time << " rep=" << r
         << " raw=" << s.estimate.raw << " mitigated=" << s.estimate.mitigated
         << " std_error=" << s.estimate.std_error;
      if (s.estimate.noise_factor) os << " p=" << *s.estimate.noise_factor;
      if (!s.estimate.zne_points.empty()) {
        os << " zne_points=";
        for (std::size_t i = 0; i < s.estimate.zne_points.size(); ++i) {
          const auto& p = s.estimate.zne_points[i];
          os << (i ? ";" : "") << p.factor << ':' << p.value << ':' << p.std_error;
        }
      }
      os << " circuits_executed=" << s.circuits_executed;
      if (s.estimate.flagged) os << " flagged=\"" << s.estimate.flag_reason << "\"";
      for (const auto& note : s.notes) os << " note=\"" << note << "\"";
      os << '\n';
    }
  }
  return os.str();
}

std::vector<std::vector<StepResult>> run_reps(const ExperimentConfig& cfg,
                                              const MitigationConfig& mit,
                                              int n_workers) {
  ObservableSpec obs{ObservableKind::StaggeredMagnetization, cfg.params.n_sites};
  std::vector<std::vector<StepResult>> reps;
  for (int r = 0; r < cfg.repetitions; ++r) {
    reps.push_back(run_mitigated_experiment(
        cfg.params, cfg.noise, mit, obs, cfg.shots,
        Philox::derive(cfg.seed, {0x7265u /* 're' */, static_cast<std::uint64_t>(r)}),
        cfg.n_trajectories, n_workers));
  }
  return reps;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out += (c == '+' ? '_' : c);
  return out;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, int n_workers) {
  RunOutcome outcome;
  outcome.config_hash = config.config_hash();
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);

  if (config.workload == Workload::Magnetization) {
    const auto reps = run_reps(config, config.mitigation, n_workers);
    const auto reference = trotter_reference(config.params);
    const fs::path csv = dir / "results.csv";
    atomic_write(csv, write_magnetization_csv(config, reps, reference));
    outcome.files.push_back(csv);
    const fs::path rep = dir / "mitigation_report.txt";
    atomic_write(rep, write_mitigation_report(config, reps));
    outcome.files.push_back(rep);
  } else if (config.workload == Workload::SweepQem) {
    struct Combo {
      const char* name;
      bool trex, dd, pt;
    };
    const Combo combos[] = {{"NOQEM", false, false, false},
                            {"TREX", true, false, false},
                            {"TREX+DD", true, true, false},
                            {"TREX+PT", true, false, true},
                            {"TREX+DD+PT", true, true, true}};
    const auto reference = trotter_reference(config.params);
    for (const auto& combo : combos) {
      MitigationConfig mit = config.mitigation;
      mit.trex.enabled = combo.trex;
      mit.dd.enabled = combo.dd;
      mit.pt.enabled = combo.pt;
      mit.zne.enabled = false;
      mit.sm.enabled = false;
      const auto reps = run_reps(config, mit, n_workers);
      const fs::path csv = dir / ("results_" + sanitize(combo.name) + ".csv");
      atomic_write(csv, write_magnetization_csv(config, reps, reference));
      outcome.files.push_back(csv);
    }
  } else {  // Entropy
    const int n = config.params.n_sites;
    const int l = config.entropy_subsystem > 0 ? config.entropy_subsystem : n / 2;
    if (l < 1 || l >= n)
      throw std::invalid_argument("entropy subsystem must be a proper subsystem");
    std::vector<int> subsystem(l);
    for (int i = 0; i < l; ++i) subsystem[i] = i;
    std::vector<int> steps = config.entropy_steps;
    if (steps.empty())
      for (int m = 1; m <= config.params.n_steps; ++m) steps.push_back(m);

    std::ostringstream os;
    os << result_header(config, "entropy records");
    os << std::setprecision(10);
    const StateVector initial = neel_state(n);
    for (int m : steps) {
      XXZParams pm = config.params;
      pm.n_steps = m;
      const Circuit circuit = build_trotter_circuit(pm, TrotterOrder::SecondOptimized);
      RenyiOptions opt;
      opt.n_instances = config.entropy_instances;
      opt.shots = config.shots;
      opt.seed = Philox::derive(config.seed, {0x53u, static_cast<std::uint64_t>(m)});
      opt.use_qmp = config.entropy_qmp;
      if (!config.noise.is_noiseless()) opt.noise = config.noise;
      if (config.mitigation.summary() != "NOQEM") opt.mitigation = config.mitigation;
      opt.n_trajectories = config.n_trajectories;
      opt.n_workers = n_workers;
      const PurityEstimate est = estimate_renyi2(circuit, initial, subsystem, opt);

      double exact = std::numeric_limits<double>::quiet_NaN();
      if (n <= 14) {
        const StateVector s = apply_circuit(initial, circuit);
        exact = exact_renyi2(s, subsystem);
      }
      os << "record time=" << m * config.params.step_size
         << " S2_estimate=" << est.renyi2 << " S2_std_error=" << est.std_error
         << " S2_exact=" << exact << " N_U=" << opt.n_instances
         << " shots=" << opt.shots;
      if (est.failed) os << " failed=1";
      if (est.flagged) os << " flagged=1";
      for (const auto& note : est.notes) os << " note=\"" << note << "\"";
      os << '\n';
    }
    const fs::path rec = dir / "entropy.txt";
    atomic_write(rec, os.str());
    outcome.files.push_back(rec);
  }

  // manifest (timestamp lives here, never in result files)
  std::ostringstream man;
  man << "# quench manifest\n";
  man << "version " << version_string() << '\n';
  man << "config_hash " << std::hex << std::setw(16) << std::setfill('0')
      << outcome.config_hash << std::dec << '\n';
  man << "seed " << config.seed << '\n';
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  man << "timestamp " << now << '\n';
  for (const auto& f : outcome.files) man << "file " << f.filename().string() << '\n';
  atomic_write(dir / "manifest.txt", man.str());
  return outcome;
}

}  // namespace quench
