#include "weakfock/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "weakfock/errors.hpp"
#include "weakfock/oracle.hpp"

namespace weakfock::cli {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) throw ConfigError("bad number for " + what + ": '" + s + "'");
  return v;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError(what + " expects 're,im'");
  return {parse_double(s.substr(0, comma), what), parse_double(s.substr(comma + 1), what)};
}

CVector coherent_amps(cplx alpha, int n_max) {
  CVector v(n_max + 1);
  v[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

double number_field(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("field '") + key + "' must be finite");
  return d;
}

std::uint64_t count_field(const json& doc, const char* key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(std::string("field '") + key + "' must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
}

std::string model_name(PostSelectionModel m) { return m == PostSelectionModel::pure ? "pure" : "effect"; }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

double RunConfig::resolved_phi() const { return phi ? *phi : default_phi(n_max, model); }

CavityState parse_preset(const std::string& preset, int n_max) {
  if (preset == "vacuum") return CavityState::vacuum(n_max);
  const auto colon = preset.find(':');
  const std::string kind = preset.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : preset.substr(colon + 1);
  if (kind == "fock") {
    const double k = parse_double(arg, "fock");
    if (k != std::floor(k) || k < 0 || k > n_max) throw ConfigError("fock index must be an integer in [0, n_max]");
    return CavityState::fock(static_cast<int>(k), n_max);
  }
  if (kind == "coherent" || kind == "cat") {
    const auto [re, im] = parse_pair(arg, kind);
    const cplx a(re, im);
    CVector v = coherent_amps(a, n_max);
    if (kind == "cat") v += coherent_amps(-a, n_max);
    if (!(v.norm() > kNormTolerance)) throw ConfigError("preset '" + preset + "' has zero norm after truncation");
    return CavityState(v);
  }
  throw ConfigError("unknown state preset '" + preset + "'");
}

RunConfig parse_config(const json& input) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  const json& doc = input.contains("config") ? input.at("config") : input;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"n_max", "state", "chi",         "gamma",
                                              "tau",   "delta1", "phi",        "shots",
                                              "seed",  "mode",  "basis_split", "postselection_model",
                                              "workers"};
  for (const auto& [k, v] : doc.items()) {
    if (!known.count(k)) throw ConfigError("unknown config field '" + k + "'");
  }
  RunConfig c;
  c.raw = doc;
  if (!doc.contains("n_max") || !doc.at("n_max").is_number_integer()) throw ConfigError("n_max (integer) is required");
  c.n_max = doc.at("n_max").get<int>();
  if (c.n_max < 1 || c.n_max > kMaxTruncation) {
    throw ConfigError("n_max must be in [1, " + std::to_string(kMaxTruncation) + "]");
  }

  if (!doc.contains("state") || !doc.at("state").is_object()) throw ConfigError("state (object) is required");
  const json& st = doc.at("state");
  const bool has_preset = st.contains("preset");
  const bool has_amps = st.contains("amps");
  if (has_preset == has_amps || st.size() != 1) throw ConfigError("state needs exactly one of 'preset' or 'amps'");
  if (has_preset) {
    if (!st.at("preset").is_string()) throw ConfigError("state.preset must be a string");
    c.true_state = parse_preset(st.at("preset").get<std::string>(), c.n_max);
  } else {
    const json& a = st.at("amps");
    if (!a.is_array() || a.empty() || a.size() > static_cast<std::size_t>(c.n_max + 1)) {
      throw ConfigError("state.amps must be a list of at most n_max+1 [re, im] pairs");
    }
    CVector v = CVector::Zero(c.n_max + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const json& p = a[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("state.amps entries must be [re, im]");
      }
      v[static_cast<Eigen::Index>(i)] = cplx(p[0].get<double>(), p[1].get<double>());
    }
    if (!v.allFinite() || !(v.norm() > kNormTolerance)) throw ConfigError("state.amps has zero or non-finite norm");
    c.true_state = CavityState(v);
  }

  c.chi = number_field(doc, "chi", c.chi);
  c.gamma = number_field(doc, "gamma", c.gamma);
  c.tau = number_field(doc, "tau", c.tau);
  c.delta1 = number_field(doc, "delta1", c.delta1);
  c.basis_split = number_field(doc, "basis_split", c.basis_split);
  if (doc.contains("phi")) {
    const json& p = doc.at("phi");
    if (p.is_string() && p.get<std::string>() == "auto") {
      c.phi.reset();
    } else if (p.is_number()) {
      c.phi = p.get<double>();
    } else {
      throw ConfigError("phi must be \"auto\" or a number");
    }
  }
  c.shots = count_field(doc, "shots", c.shots);
  c.seed = count_field(doc, "seed", c.seed);
  const std::uint64_t workers = count_field(doc, "workers", 1);
  if (workers < 1 || workers > 256) throw ConfigError("workers must be in [1, 256]");
  c.workers = static_cast<int>(workers);
  if (doc.contains("mode")) {
    const json& m = doc.at("mode");
    const std::string s = m.is_string() ? m.get<std::string>() : "";
    if (s == "sampled") c.mode = RunMode::sampled;
    else if (s == "exact" || s == "exact-ensemble") c.mode = RunMode::exact;
    else throw ConfigError("mode must be \"sampled\" or \"exact\"");
  }
  if (doc.contains("postselection_model")) {
    const json& m = doc.at("postselection_model");
    const std::string s = m.is_string() ? m.get<std::string>() : "";
    if (s == "pure") c.model = PostSelectionModel::pure;
    else if (s == "effect") c.model = PostSelectionModel::effect;
    else throw ConfigError("postselection_model must be \"pure\" or \"effect\"");
  }

  if (c.shots < 1) throw ConfigError("shots must be >= 1");
  if (!(c.chi > 0.0)) throw ConfigError("chi must be positive");
  if (!(c.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(c.tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(c.basis_split > 0.0 && c.basis_split < 1.0)) throw ConfigError("basis_split must be in (0, 1)");
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + file.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + file.string() + "': " + e.what());
  }
  return parse_config(doc);
}

ReconstructionOptions reconstruction_options(const RunConfig& cfg, const std::vector<TargetRow>& rows) {
  ReconstructionOptions o;
  o.model = cfg.model;
  double p = 0.0, var = 0.0;
  std::vector<double> x, sx;
  for (const auto& r : rows) {
    p += r.ps_success;
    var += r.ps_stderr * r.ps_stderr;
    x.push_back(r.population.value);
    sx.push_back(r.population.stderr);
  }
  const double k = static_cast<double>(rows.size());
  o.success_probability = p / k;
  o.stderr_success = std::sqrt(var) / k;
  o.populations = x;
  o.stderr_populations = sx;
  return o;
}

RunResult execute(const RunConfig& cfg, RunMode mode) {
  RunResult r;
  r.phi = cfg.resolved_phi();
  r.phi_violations = phi_violations(r.phi, cfg.n_max);

  ProtocolConfig pc;
  pc.n_max = cfg.n_max;
  pc.true_state = cfg.true_state;
  pc.chi = cfg.chi;
  pc.gamma = cfg.gamma;
  pc.tau = cfg.tau;
  pc.delta1 = cfg.delta1;
  pc.phi = r.phi;
  pc.shots = cfg.shots;
  pc.seed = cfg.seed;
  pc.mode = mode;
  pc.basis_split = cfg.basis_split;
  pc.workers = cfg.workers;

  std::vector<WeakValueEstimate> est;
  cplx oracle_sum = 0.0;
  double z2 = 0.0;
  for (int n = 0; n <= cfg.n_max; ++n) {
    pc.target_n = n;
    const ConditionalAverages a =
        mode == RunMode::exact ? conditional_averages_exact(pc) : conditional_averages_sampled(pc).averages;
    TargetRow row;
    row.n = n;
    row.w = weak_value_from_averages(a, pc.gamma_tau(), n);
    row.oracle = oracle_weak_value(cfg.true_state, r.phi, n).value;
    row.effect_oracle = oracle_measured_weak_value(cfg.true_state, r.phi, n);
    oracle_sum += row.oracle;
    row.population = population_from_averages(a, pc.gamma_tau());
    row.ps_success = a.ps_success_rate;
    row.ps_stderr = a.stderr_ps;
    const cplx diff = row.w.value - row.effect_oracle;
    z2 += std::norm(diff);
    if (row.w.stderr_re > 0.0) r.wv_max_z = std::max(r.wv_max_z, std::abs(diff.real()) / row.w.stderr_re);
    if (row.w.stderr_im > 0.0) r.wv_max_z = std::max(r.wv_max_z, std::abs(diff.imag()) / row.w.stderr_im);
    r.ps_success += a.ps_success_rate / (cfg.n_max + 1);
    est.push_back(row.w);
    r.rows.push_back(row);
  }
  r.wv_rms_error = std::sqrt(z2 / (cfg.n_max + 1));
  r.sum_rule_dev = exact_weak_value_sum_check(est);
  r.oracle_sum_rule_dev = std::abs(oracle_sum - 1.0);
  r.recon = reconstruct(est, jc_coefficients(r.phi, cfg.n_max), reconstruction_options(cfg, r.rows));
  r.fidelity = fidelity(r.recon.amps, cfg.true_state);
  return r;
}

std::string weak_values_csv(const RunResult& r) {
  std::ostringstream os;
  os << "n,w_re,w_im,stderr_re,stderr_im,oracle_re,oracle_im,effect_oracle_re,effect_oracle_im,"
        "population,population_stderr,ps_success,ps_stderr,sum_rule_dev,oracle_sum_rule_dev\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << num(row.w.value.real()) << ',' << num(row.w.value.imag()) << ',' << num(row.w.stderr_re)
       << ',' << num(row.w.stderr_im) << ',' << num(row.oracle.real()) << ',' << num(row.oracle.imag()) << ','
       << num(row.effect_oracle.real()) << ',' << num(row.effect_oracle.imag()) << ','
       << num(row.population.value) << ',' << num(row.population.stderr) << ',' << num(row.ps_success) << ','
       << num(row.ps_stderr) << ',' << num(r.sum_rule_dev) << ',' << num(r.oracle_sum_rule_dev) << '\n';
  }
  return os.str();
}

json reconstruction_json(const ReconstructionResult& rec, const CavityState* truth) {
  json amps = json::array();
  for (int n = 0; n <= rec.amps.n_max(); ++n) amps.push_back(cplx_json(rec.amps[n]));
  json j;
  j["n_max"] = rec.amps.n_max();
  j["gauge"] = "first nonzero amplitude real positive";
  j["amps"] = amps;
  j["d_factor"] = cplx_json(rec.d_factor);
  j["residual_truncation"] = rec.residual_truncation;
  j["chi2"] = rec.chi2;
  j["iterations"] = rec.iterations;
  j["converged"] = rec.converged;
  j["ambiguous"] = rec.ambiguous;
  j["candidates"] = rec.candidates;
  if (truth) j["fidelity"] = fidelity(rec.amps, *truth);
  return j;
}

json manifest_json(const RunConfig& cfg, const RunResult& r, std::optional<std::string> timestamp) {
  json m;
  m["config"] = cfg.raw;
  m["code_version"] = kCodeVersion;
  m["master_seed"] = cfg.seed;
  m["resolved"] = {{"phi", r.phi},
                   {"gamma_tau", cfg.gamma * cfg.tau},
                   {"postselection_model", model_name(cfg.model)},
                   {"phi_violations", r.phi_violations}};
  if (timestamp) m["timestamps"] = {{"finished_utc", *timestamp}};
  json wv = json::array();
  for (const auto& row : r.rows) {
    wv.push_back({{"n", row.n},
                  {"value", cplx_json(row.w.value)},
                  {"stderr", json::array({row.w.stderr_re, row.w.stderr_im})},
                  {"population", row.population.value}});
  }
  m["weak_values"] = wv;
  m["reconstruction"] = reconstruction_json(r.recon, &cfg.true_state);
  m["metrics"] = {{"fidelity", r.fidelity},
                  {"sum_rule_dev", r.sum_rule_dev},
                  {"oracle_sum_rule_dev", r.oracle_sum_rule_dev},
                  {"wv_rms_error", r.wv_rms_error},
                  {"wv_max_z", r.wv_max_z},
                  {"ps_success", r.ps_success}};
  return m;
}

std::vector<TargetRow> read_weak_values_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("weak-values CSV is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* req : {"n", "w_re", "w_im", "stderr_re", "stderr_im"}) {
    if (!col.count(req)) throw ConfigError(std::string("weak-values CSV lacks column '") + req + "'");
  }
  std::vector<TargetRow> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw ConfigError("weak-values CSV row has wrong column count");
    auto get = [&](const char* name, double fallback) {
      return col.count(name) ? parse_double(cells[col[name]], name) : fallback;
    };
    TargetRow r;
    r.n = static_cast<int>(get("n", 0));
    r.w.n = r.n;
    r.w.value = cplx(get("w_re", 0), get("w_im", 0));
    r.w.stderr_re = get("stderr_re", 0);
    r.w.stderr_im = get("stderr_im", 0);
    r.population = {get("population", 0), get("population_stderr", 0)};
    r.ps_success = get("ps_success", 0);
    r.ps_stderr = get("ps_stderr", 0);
    rows.push_back(r);
  }
  return rows;
}

std::string selectivity_csv(double chi, double gamma, double t, int m_max) {
  if (m_max < 1) throw ConfigError("m_max must be >= 1");
  if (!(chi > 0.0) || !(gamma >= 0.0) || !(t >= 0.0)) throw ConfigError("need chi > 0, gamma >= 0, t >= 0");
  std::vector<int> ms;
  for (int m = 0; m <= m_max; ++m) ms.push_back(m);
  const auto rows = selectivity_map(chi, gamma, t, ms);
  // Same numbers read off the propagator, block m with the drive resonant on block 0.
  DispersiveDriveParams p;
  p.chi = chi;
  p.gamma = gamma;
  p.t = t;
  p.delta1 = 0.0;
  p.omega = DispersiveDriveParams::resonant_omega(0.0, chi, 0);
  const CMatrix u = selective_drive_propagator(p, std::max(m_max, 1)).matrix();
  std::ostringstream os;
  os << "m,epsilon,gamma_tilde,P_e,bound,P_e_propagator\n";
  for (const auto& r : rows) {
    os << r.m << ',' << num(r.epsilon) << ',' << num(r.gamma_tilde) << ',' << num(r.p_e) << ',' << num(r.bound)
       << ',' << num(std::norm(u(2 * r.m + 1, 2 * r.m))) << '\n';
  }
  return os.str();
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "shots") return SweepAxis::shots;
  if (s == "gamma_tau") return SweepAxis::gamma_tau;
  if (s == "phi") return SweepAxis::phi;
  throw ConfigError("axis must be shots, gamma_tau or phi");
}

std::string sweep_csv(const RunConfig& base, SweepAxis axis, const std::vector<double>& values, RunMode mode) {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  std::ostringstream os;
  os << "value,fidelity,wv_rms_error,wv_stderr_mean,ps_success,converged,phi_violations,status,wall_time_s\n";
  for (double v : values) {
    RunConfig cfg = base;
    if (axis == SweepAxis::shots) {
      if (!(v >= 1.0)) throw ConfigError("shots values must be >= 1");
      cfg.shots = static_cast<std::uint64_t>(std::llround(v));
    } else if (axis == SweepAxis::gamma_tau) {
      if (!(v > 0.0)) throw ConfigError("gamma_tau values must be positive");
      cfg.gamma = v / cfg.tau;
    } else {
      cfg.phi = v;
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::string violations;
    for (int n : phi_violations(cfg.resolved_phi(), cfg.n_max)) {
      violations += (violations.empty() ? "" : ";") + std::to_string(n);
    }
    double fid = std::nan(""), rms = std::nan(""), se = std::nan(""), ps = std::nan("");
    int conv = 0;
    std::string status = "ok";
    try {
      const RunResult r = execute(cfg, mode);
      fid = r.fidelity;
      rms = r.wv_rms_error;
      ps = r.ps_success;
      conv = r.recon.converged ? 1 : 0;
      se = 0.0;
      for (const auto& row : r.rows) se += 0.5 * (row.w.stderr_re + row.w.stderr_im) / r.rows.size();
    } catch (const DegeneratePostSelection&) {
      status = "degenerate_postselection";
    } catch (const std::invalid_argument&) {
      status = "precondition_violation";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << num(v) << ',' << num(fid) << ',' << num(rms) << ',' << num(se) << ',' << num(ps) << ',' << conv << ','
       << violations << ',' << status << ',' << num(wall) << '\n';
  }
  return os.str();
}

std::filesystem::path output_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("WEAKFOCK_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
}

namespace {

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegeneratePostSelection& e) {
    std::cerr << "degenerate post-selection: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const NonConvergence& e) {
    std::cerr << "reconstruction did not converge: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + p.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out, bool force_exact,
                 bool record_time) {
  return guarded([&] {
    const RunConfig cfg = load_config(config);
    const RunMode mode = force_exact ? RunMode::exact : cfg.mode;
    const RunResult r = execute(cfg, mode);
    write_file(out / "weak_values.csv", weak_values_csv(r));
    write_file(out / "reconstruction.json", reconstruction_json(r.recon, &cfg.true_state).dump(2) + "\n");
    std::optional<std::string> ts;
    if (record_time) ts = utc_now();
    write_file(out / "manifest.json", manifest_json(cfg, r, ts).dump(2) + "\n");
    std::cout << "fidelity " << num(r.fidelity) << "  sum_rule_dev " << num(r.sum_rule_dev) << "  ps_success "
              << num(r.ps_success) << "\n";
    if (!r.phi_violations.empty()) std::cerr << "warning: phi is within 0.05 of a zero of sin(sqrt(n) phi)\n";
    if (r.recon.ambiguous) std::cerr << "warning: " << r.recon.note << '\n';
    if (!r.recon.converged) {
      std::cerr << "reconstruction did not converge\n";
      return kExitNonConvergence;
    }
    return kExitOk;
  });
}

int cmd_reconstruct(const std::filesystem::path& csv, const std::filesystem::path& config,
                    const std::filesystem::path& out) {
  return guarded([&] {
    const RunConfig cfg = load_config(config);
    const auto rows = read_weak_values_csv(read_text(csv));
    if (static_cast<int>(rows.size()) != cfg.n_max + 1) throw ConfigError("CSV rows do not match n_max");
    std::vector<WeakValueEstimate> est;
    for (const auto& r : rows) est.push_back(r.w);
    ReconstructionOptions opt = reconstruction_options(cfg, rows);
    bool has_pop = false;
    for (const auto& r : rows) has_pop = has_pop || r.population.value != 0.0;
    if (!has_pop) opt.populations.reset();
    if (!(*opt.success_probability > 0.0)) opt.success_probability.reset();
    const auto rec = reconstruct(est, jc_coefficients(cfg.resolved_phi(), cfg.n_max), opt);
    write_file(out / "reconstruction.json", reconstruction_json(rec, &cfg.true_state).dump(2) + "\n");
    return rec.converged ? kExitOk : kExitNonConvergence;
  });
}

int cmd_selectivity(double chi, double gamma, double t, int m_max, const std::optional<std::filesystem::path>& out) {
  return guarded([&] {
    const std::string csv = selectivity_csv(chi, gamma, t, m_max);
    if (out) write_file(*out, csv);
    else std::cout << csv;
    return kExitOk;
  });
}

int cmd_sweep(const std::filesystem::path& config, const std::string& axis, const std::vector<double>& values,
              bool exact, const std::filesystem::path& out) {
  return guarded([&] {
    const RunConfig cfg = load_config(config);
    const std::string csv = sweep_csv(cfg, parse_axis(axis), values, exact ? RunMode::exact : cfg.mode);
    write_file(out / ("sweep_" + axis + ".csv"), csv);
    return kExitOk;
  });
}

}  // namespace weakfock::cli
