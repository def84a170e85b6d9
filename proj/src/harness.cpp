#include <accdngd/error.hpp>
#include <accdngd/harness.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace accdngd {

std::string_view to_string(WeightMethod m) {
  return m == WeightMethod::Laplacian ? "laplacian" : "metropolis";
}

std::string_view to_string(PresetScaling s) { return s == PresetScaling::Relative ? "relative" : "absolute"; }

// ---- presets ---------------------------------------------------------------------

namespace {

using SK = StepSchedule::Kind;

struct PanelSC {
  const char* fig;
  const char* graph;
  double l_ref;
  double sc_eta, sc_alpha, dng_c, dgd_c, extra_eta, accdgd_eta, cgd_eta, cngd_eta, cngd_alpha;
};

struct PanelNSC {
  const char* graph;
  double l_ref;
  double van_eta, van_alpha0, fix_eta, fix_alpha0, dng_c, dgd_c, extra_eta, accdgd_eta, cgd_eta, cngd_eta,
      cngd_alpha0;
};

std::vector<Preset> build_presets() {
  const PanelSC sc[] = {
      {"fig1", "random", 1 / 0.0015337, 0.00017, 0.011821, 0.00076687, 0.0015337, 0.00092025, 0.00030675, 0.0015337,
       0.0015337, 0.035508},
      {"fig1", "kcycle", 1 / 0.0015337, 0.00013, 0.010338, 0.00076687, 0.0015337, 0.00092025, 0.00015337, 0.0015337,
       0.0015337, 0.035508},
      {"fig1", "grid", 1 / 0.0015337, 0.00006, 0.0071159, 0.00076687, 0.0015337, 0.00092025, 0.00010736, 0.0015337,
       0.0015337, 0.035977},
      {"fig2", "random", 1 / 0.32667, 0.03, 0.016707, 0.16334, 0.32667, 0.16334, 0.081669, 0.32667, 0.32667,
       0.055131},
      {"fig2", "kcycle", 1 / 0.32667, 0.015, 0.011814, 0.16334, 0.32667, 0.081669, 0.032667, 0.32667, 0.32667,
       0.055131},
      {"fig2", "grid", 1 / 0.42319, 0.015, 0.014345, 0.2116, 0.42319, 0.2116, 0.063479, 0.42319, 0.42319, 0.076193},
  };
  const PanelNSC nsc[] = {
      {"random", 1 / 0.0055283, 0.0027642, 0.70711, 0.0027642, 0.70711, 0.0027642, 0.0055283, 0.0055283, 0.0027642,
       0.0055283, 0.0055283, 0.5},
      {"kcycle", 1 / 0.0055283, 0.0027642, 0.70711, 0.0022113, 0.63246, 0.0027642, 0.0055283, 0.0055283, 0.0022113,
       0.0055283, 0.0055283, 0.5},
      {"grid", 1 / 0.0049856, 0.0024928, 0.70711, 0.0014957, 0.54772, 0.0024928, 0.0049856, 0.0049856, 0.0014957,
       0.0049856, 0.0049856, 0.5},
  };

  std::vector<Preset> out;
  auto add = [&](std::string name, AlgoKind k, SK s, double eta, double beta, std::optional<double> alpha,
                 double l_ref) { out.push_back({std::move(name), k, s, eta, beta, alpha, l_ref}); };

  for (const auto& p : sc) {
    const std::string base = std::string(p.fig) + "_" + p.graph + "_";
    add(base + "acc_dngd_sc", AlgoKind::AccDngdSC, SK::Fixed, p.sc_eta, 0, p.sc_alpha, p.l_ref);
    add(base + "dng", AlgoKind::DNG, SK::Harmonic, p.dng_c, 0, {}, p.l_ref);
    add(base + "dgd", AlgoKind::DGD, SK::InvSqrt, p.dgd_c, 0, {}, p.l_ref);
    add(base + "extra", AlgoKind::EXTRA, SK::Fixed, p.extra_eta, 0, {}, p.l_ref);
    add(base + "acc_dgd", AlgoKind::AccDGD, SK::Fixed, p.accdgd_eta, 0, {}, p.l_ref);
    add(base + "cgd", AlgoKind::CGD, SK::Fixed, p.cgd_eta, 0, {}, p.l_ref);
    add(base + "cngd_sc", AlgoKind::CNGDSC, SK::Fixed, p.cngd_eta, 0, p.cngd_alpha, p.l_ref);
  }
  for (const auto& p : nsc) {
    const std::string base = std::string("fig3_") + p.graph + "_";
    add(base + "acc_dngd_nsc_vanishing", AlgoKind::AccDngdNSC, SK::Vanishing, p.van_eta, 0.61, p.van_alpha0, p.l_ref);
    add(base + "acc_dngd_nsc_fixed", AlgoKind::AccDngdNSC, SK::Fixed, p.fix_eta, 0, p.fix_alpha0, p.l_ref);
    add(base + "dng", AlgoKind::DNG, SK::Harmonic, p.dng_c, 0, {}, p.l_ref);
    add(base + "dgd", AlgoKind::DGD, SK::InvSqrt, p.dgd_c, 0, {}, p.l_ref);
    add(base + "extra", AlgoKind::EXTRA, SK::Fixed, p.extra_eta, 0, {}, p.l_ref);
    add(base + "acc_dgd", AlgoKind::AccDGD, SK::Fixed, p.accdgd_eta, 0, {}, p.l_ref);
    add(base + "cgd", AlgoKind::CGD, SK::Fixed, p.cgd_eta, 0, {}, p.l_ref);
    add(base + "cngd_nsc", AlgoKind::CNGDNSC, SK::Fixed, p.cngd_eta, 0, p.cngd_alpha0, p.l_ref);
  }
  // individual-error and time-varying figures
  add("fig4_case1_acc_dngd_sc", AlgoKind::AccDngdSC, SK::Fixed, 0.00017, 0, 0.011821, 1 / 0.0015337);
  add("fig4_case3_acc_dngd_nsc_fixed", AlgoKind::AccDngdNSC, SK::Fixed, 0.0027642, 0, 0.70711, 1 / 0.0055283);
  add("fig5_case1_acc_dngd_sc", AlgoKind::AccDngdSC, SK::Fixed, 0.000011717, 0, 0.0031445, 1 / 0.0015337);
  add("fig5_case3_acc_dngd_nsc_fixed", AlgoKind::AccDngdNSC, SK::Fixed, 0.0014957, 0, 0.54772, 1 / 0.0049856);
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw Error(ErrorKind::ValidationError, "unknown preset `" + std::string(name) + "`");
}

// ---- config text -------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ValidationError, field + ": " + msg);
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  std::string name;   // run, graph, ..., algorithm
  std::string label;  // algorithm only
  int line = 0;
  std::map<std::string, Entry> keys;
  std::vector<std::string> order;
};

double to_double(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) parse_fail(e.line, "`" + key + "` expects a number, got `" + e.value + "`");
  return v;
}

long to_long(const Entry& e, const std::string& key) {
  long v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    parse_fail(e.line, "`" + key + "` expects an integer, got `" + e.value + "`");
  return v;
}

std::uint64_t to_u64(const Entry& e, const std::string& key) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    parse_fail(e.line, "`" + key + "` expects a non-negative integer, got `" + e.value + "`");
  return v;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"run", {"seed", "iterations", "record_every", "output"}},
      {"graph", {"spec"}},
      {"weights", {"method"}},
      {"objective", {"case", "samples_per_agent", "dim"}},
      {"time_varying", {"remove_fraction", "reseed"}},
      {"algorithm", {"kind", "preset", "preset_scaling", "schedule", "eta", "eta_l", "c", "bound_fraction", "beta", "t0",
                     "alpha0", "init", "tau"}},
  };
  return k;
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> out;
  std::set<std::string> seen;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(lineno, "unterminated section header");
      const std::string_view inner = trim(line.substr(1, line.size() - 2));
      Section s;
      s.line = lineno;
      const auto sp = inner.find_first_of(" \t");
      s.name = std::string(inner.substr(0, sp));
      if (sp != std::string_view::npos) s.label = std::string(trim(inner.substr(sp)));
      if (!allowed_keys().count(s.name)) parse_fail(lineno, "unknown section `" + s.name + "`");
      if (s.name == "algorithm") {
        if (s.label.empty()) parse_fail(lineno, "algorithm section needs a label");
        const bool ok = std::all_of(s.label.begin(), s.label.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
        });
        if (!ok) parse_fail(lineno, "algorithm label may only contain letters, digits, '_' and '-'");
        if (s.label == "summary" || s.label == "meta") parse_fail(lineno, "reserved algorithm label `" + s.label + "`");
      } else if (!s.label.empty()) {
        parse_fail(lineno, "section `" + s.name + "` takes no label");
      }
      const std::string id = s.name + " " + s.label;
      if (!seen.insert(id).second) parse_fail(lineno, "duplicate section `" + std::string(inner) + "`");
      out.push_back(std::move(s));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(lineno, "expected `key = value`");
    if (out.empty()) parse_fail(lineno, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    Section& s = out.back();
    if (!allowed_keys().at(s.name).count(key)) parse_fail(lineno, "unknown key `" + key + "` in [" + s.name + "]");
    if (value.empty()) parse_fail(lineno, "empty value for `" + key + "`");
    if (s.keys.count(key)) parse_fail(lineno, "duplicate key `" + key + "`");
    s.keys.emplace(key, Entry{value, lineno});
    s.order.push_back(key);
  }
  return out;
}

void check_graph_spec(const std::string& spec) {
  std::istringstream in;
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  if (colon == std::string::npos || (family != "grid2d" && family != "kcycle" && family != "er"))
    invalid("graph.spec", "expected grid2d:RxC, kcycle:N:K or er:N:P, got `" + spec + "`");
  std::string rest = spec.substr(colon + 1);
  const char sep = family == "grid2d" ? 'x' : ':';
  const auto s2 = rest.find(sep);
  if (s2 == std::string::npos) invalid("graph.spec", "missing parameter in `" + spec + "`");
  const std::string a = rest.substr(0, s2), b = rest.substr(s2 + 1);
  auto as_int = [&](const std::string& v) {
    int x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || x < 1)
      invalid("graph.spec", "bad integer `" + v + "` in `" + spec + "`");
    return x;
  };
  const int first = as_int(a);
  if (family == "er") {
    double p = 0;
    auto r = std::from_chars(b.data(), b.data() + b.size(), p);
    if (r.ec != std::errc() || r.ptr != b.data() + b.size() || !(p > 0.0 && p <= 1.0))
      invalid("graph.spec", "edge probability must lie in (0, 1]");
    if (first < 2) invalid("graph.spec", "need at least two nodes");
  } else {
    const int second = as_int(b);
    if (family == "kcycle" && 2 * second >= first) invalid("graph.spec", "k-cycle needs n > 2k");
    if (family == "grid2d" && first * second < 2) invalid("graph.spec", "grid needs at least two nodes");
  }
}

SK schedule_from_string(const Entry& e) {
  for (SK k : {SK::Fixed, SK::Vanishing, SK::Harmonic, SK::InvSqrt})
    if (to_string(k) == e.value) return k;
  parse_fail(e.line, "unknown schedule `" + e.value + "`");
}

bool allows_schedule(AlgoKind k, SK s) {
  switch (k) {
    case AlgoKind::AccDngdNSC:
    case AlgoKind::CNGDNSC:
    case AlgoKind::AccDGD: return s == SK::Fixed || s == SK::Vanishing;
    case AlgoKind::DGD: return true;
    case AlgoKind::DNG: return s == SK::Harmonic;
    default: return s == SK::Fixed;
  }
}

SK default_schedule(AlgoKind k) {
  if (k == AlgoKind::DNG) return SK::Harmonic;
  if (k == AlgoKind::DGD) return SK::InvSqrt;
  return SK::Fixed;
}

bool is_sc_momentum(AlgoKind k) { return k == AlgoKind::AccDngdSC || k == AlgoKind::CNGDSC; }
bool is_nsc_momentum(AlgoKind k) { return k == AlgoKind::AccDngdNSC || k == AlgoKind::CNGDNSC; }

void validate_algorithm(AlgorithmSpec& a) {
  const std::string f = "algorithm." + a.label + ".";
  if (a.preset) {
    const Preset& p = [&]() -> const Preset& {
      try {
        return find_preset(*a.preset);
      } catch (const Error&) {
        invalid(f + "preset", "unknown preset `" + *a.preset + "`");
      }
    }();
    if (a.kind != p.kind)
      invalid(f + "kind", "preset `" + p.name + "` is for " + std::string(to_string(p.kind)));
    if (a.schedule || a.eta || a.eta_l || a.bound_fraction || a.beta || a.t0 || a.alpha0)
      invalid(f + "preset", "a preset fixes schedule, eta, eta_l, bound_fraction, beta, t0 and alpha0");
  } else {
    const int sources = (a.eta ? 1 : 0) + (a.eta_l ? 1 : 0) + (a.bound_fraction ? 1 : 0);
    if (sources != 1) invalid(f + "eta", "give exactly one of preset, eta, eta_l, bound_fraction");
    if (a.eta && !(*a.eta > 0.0 && std::isfinite(*a.eta))) invalid(f + "eta", "must be positive");
    if (a.eta_l && !(*a.eta_l > 0.0 && std::isfinite(*a.eta_l))) invalid(f + "eta_l", "must be positive");
    if (a.bound_fraction) {
      if (a.kind != AlgoKind::AccDngdSC && a.kind != AlgoKind::AccDngdNSC)
        invalid(f + "bound_fraction", "only defined for acc_dngd_sc and acc_dngd_nsc");
      if (!(*a.bound_fraction > 0.0 && *a.bound_fraction <= 1.0)) invalid(f + "bound_fraction", "must lie in (0, 1]");
    }
    const SK s = a.schedule.value_or(default_schedule(a.kind));
    if (!allows_schedule(a.kind, s))
      invalid(f + "schedule", std::string(to_string(s)) + " is not available for " + std::string(to_string(a.kind)));
    if (s == SK::Vanishing) {
      if (!a.beta) invalid(f + "beta", "required for the vanishing schedule");
      if (!(*a.beta > 0.0 && *a.beta < 2.0)) invalid(f + "beta", "must lie in (0, 2)");
      if (a.t0 && !(*a.t0 >= 1.0)) invalid(f + "t0", "must be at least 1");
    } else {
      if (a.beta) invalid(f + "beta", "only used by the vanishing schedule");
      if (a.t0) invalid(f + "t0", "only used by the vanishing schedule");
    }
    if (a.alpha0) {
      if (!is_sc_momentum(a.kind) && !is_nsc_momentum(a.kind))
        invalid(f + "alpha0", "only used by momentum methods");
      if (!(*a.alpha0 > 0.0 && *a.alpha0 <= 1.0)) invalid(f + "alpha0", "must lie in (0, 1]");
      if (is_nsc_momentum(a.kind) && *a.alpha0 >= 1.0) invalid(f + "alpha0", "must lie in (0, 1)");
    }
  }
  if (a.init && a.kind != AlgoKind::AccDngdNSC) invalid(f + "init", "only used by acc_dngd_nsc");
  if (a.tau) {
    if (a.kind != AlgoKind::DNC) invalid(f + "tau", "only used by dnc");
    if (*a.tau < 0) invalid(f + "tau", "must be non-negative");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  bool have_graph = false;
  for (Section& s : tokenize(text)) {
    auto get = [&](const std::string& k) -> const Entry* {
      auto it = s.keys.find(k);
      return it == s.keys.end() ? nullptr : &it->second;
    };
    if (s.name == "run") {
      if (auto e = get("seed")) cfg.seed = to_u64(*e, "seed");
      if (auto e = get("iterations")) cfg.iterations = to_long(*e, "iterations");
      if (auto e = get("record_every")) cfg.record_every = to_long(*e, "record_every");
      if (auto e = get("output")) cfg.output = e->value;
    } else if (s.name == "graph") {
      if (auto e = get("spec")) {
        cfg.graph = e->value;
        have_graph = true;
      }
    } else if (s.name == "weights") {
      if (auto e = get("method")) {
        if (e->value == "laplacian") cfg.weights = WeightMethod::Laplacian;
        else if (e->value == "metropolis") cfg.weights = WeightMethod::Metropolis;
        else parse_fail(e->line, "unknown weight method `" + e->value + "`");
      }
    } else if (s.name == "objective") {
      if (auto e = get("case")) {
        const std::string v = e->value;
        if (v == "1" || v == "case1") cfg.objective = CaseKind::LeastSquares;
        else if (v == "2" || v == "case2") cfg.objective = CaseKind::Logistic;
        else if (v == "3" || v == "case3") cfg.objective = CaseKind::PiecewisePower;
        else parse_fail(e->line, "unknown objective case `" + v + "`");
      }
      if (auto e = get("samples_per_agent")) cfg.samples_per_agent = static_cast<int>(to_long(*e, "samples_per_agent"));
      if (auto e = get("dim")) cfg.dim = static_cast<int>(to_long(*e, "dim"));
    } else if (s.name == "time_varying") {
      auto e = get("remove_fraction");
      if (!e) invalid("time_varying.remove_fraction", "required when [time_varying] is present");
      cfg.remove_fraction = to_double(*e, "remove_fraction");
      if (auto r = get("reseed"); r && r->value != "per_iteration")
        parse_fail(r->line, "reseed only supports `per_iteration`");
    } else {
      AlgorithmSpec a;
      a.label = s.label;
      const std::string f = "algorithm." + a.label + ".";
      if (auto e = get("preset")) a.preset = e->value;
      if (auto e = get("kind")) {
        try {
          a.kind = algo_kind_from_string(e->value);
        } catch (const Error&) {
          parse_fail(e->line, "unknown algorithm kind `" + e->value + "`");
        }
      } else if (a.preset) {
        try {
          a.kind = find_preset(*a.preset).kind;
        } catch (const Error&) {
          invalid(f + "preset", "unknown preset `" + *a.preset + "`");
        }
      } else {
        invalid(f + "kind", "required unless a preset is given");
      }
      if (auto e = get("preset_scaling")) {
        if (e->value == "relative") a.preset_scaling = PresetScaling::Relative;
        else if (e->value == "absolute") a.preset_scaling = PresetScaling::Absolute;
        else parse_fail(e->line, "preset_scaling must be `relative` or `absolute`");
      }
      if (auto e = get("schedule")) a.schedule = schedule_from_string(*e);
      if (get("eta") && get("c")) parse_fail(get("c")->line, "`c` is an alias of `eta`; give only one");
      if (auto e = get("eta")) a.eta = to_double(*e, "eta");
      if (auto e = get("c")) a.eta = to_double(*e, "c");
      if (auto e = get("eta_l")) a.eta_l = to_double(*e, "eta_l");
      if (auto e = get("bound_fraction")) a.bound_fraction = to_double(*e, "bound_fraction");
      if (auto e = get("beta")) a.beta = to_double(*e, "beta");
      if (auto e = get("t0")) a.t0 = to_double(*e, "t0");
      if (auto e = get("alpha0")) a.alpha0 = to_double(*e, "alpha0");
      if (auto e = get("init")) {
        if (e->value == "exact") a.init = InitMode::Exact;
        else if (e->value == "relaxed") a.init = InitMode::Relaxed;
        else parse_fail(e->line, "init must be `exact` or `relaxed`");
      }
      if (auto e = get("tau")) {
        if (e->value != "log") a.tau = static_cast<int>(to_long(*e, "tau"));
      }
      validate_algorithm(a);
      cfg.algorithms.push_back(std::move(a));
    }
  }

  if (cfg.iterations < 1) invalid("run.iterations", "must be at least 1");
  if (cfg.record_every < 1) invalid("run.record_every", "must be at least 1");
  if (!have_graph) invalid("graph.spec", "required");
  check_graph_spec(cfg.graph);
  if (cfg.samples_per_agent < 0) invalid("objective.samples_per_agent", "must be positive");
  if (cfg.dim < 0) invalid("objective.dim", "must be positive");
  if (cfg.objective == CaseKind::PiecewisePower && cfg.samples_per_agent != 0)
    invalid("objective.samples_per_agent", "not used by case 3");
  if (cfg.remove_fraction && !(*cfg.remove_fraction >= 0.0 && *cfg.remove_fraction < 1.0))
    invalid("time_varying.remove_fraction", "must lie in [0, 1)");
  if (cfg.algorithms.empty()) invalid("algorithm", "at least one [algorithm <label>] section is required");
  return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[run]\n";
  os << "seed = " << cfg.seed << "\n";
  os << "iterations = " << cfg.iterations << "\n";
  os << "record_every = " << cfg.record_every << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  os << "\n[graph]\nspec = " << cfg.graph << "\n";
  os << "\n[weights]\nmethod = " << to_string(cfg.weights) << "\n";
  os << "\n[objective]\ncase = " << static_cast<int>(cfg.objective) << "\n";
  if (cfg.samples_per_agent) os << "samples_per_agent = " << cfg.samples_per_agent << "\n";
  if (cfg.dim) os << "dim = " << cfg.dim << "\n";
  if (cfg.remove_fraction)
    os << "\n[time_varying]\nremove_fraction = " << fmt(*cfg.remove_fraction) << "\nreseed = per_iteration\n";
  for (const auto& a : cfg.algorithms) {
    os << "\n[algorithm " << a.label << "]\n";
    os << "kind = " << to_string(a.kind) << "\n";
    if (a.preset) {
      os << "preset = " << *a.preset << "\n";
      os << "preset_scaling = " << to_string(a.preset_scaling) << "\n";
    }
    if (a.schedule) os << "schedule = " << to_string(*a.schedule) << "\n";
    if (a.eta) os << "eta = " << fmt(*a.eta) << "\n";
    if (a.eta_l) os << "eta_l = " << fmt(*a.eta_l) << "\n";
    if (a.bound_fraction) os << "bound_fraction = " << fmt(*a.bound_fraction) << "\n";
    if (a.beta) os << "beta = " << fmt(*a.beta) << "\n";
    if (a.t0) os << "t0 = " << fmt(*a.t0) << "\n";
    if (a.alpha0) os << "alpha0 = " << fmt(*a.alpha0) << "\n";
    if (a.init) os << "init = " << (*a.init == InitMode::Exact ? "exact" : "relaxed") << "\n";
    if (a.tau) os << "tau = " << *a.tau << "\n";
  }
  return os.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config `" + path.string() + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---- execution ---------------------------------------------------------------------

namespace {

struct ResolvedStep {
  StepSchedule schedule;
  std::optional<double> alpha;
};

ResolvedStep resolve_step(const AlgorithmSpec& a, const ObjectiveSuite& suite, double sigma) {
  ResolvedStep r;
  SK kind;
  double magnitude;
  double beta = 0.0, t0 = 1.0;
  if (a.preset) {
    const Preset& p = find_preset(*a.preset);
    const double scale = a.preset_scaling == PresetScaling::Relative ? p.L_ref / suite.L : 1.0;
    kind = p.schedule;
    magnitude = p.eta * scale;
    beta = p.beta;
    // alpha = sqrt(mu eta) is instance dependent; alpha_0 = sqrt(eta_0 L) is not
    if (is_nsc_momentum(a.kind) || a.preset_scaling == PresetScaling::Absolute) r.alpha = p.alpha;
  } else {
    kind = a.schedule.value_or(default_schedule(a.kind));
    if (a.eta) {
      magnitude = *a.eta;
    } else if (a.eta_l) {
      magnitude = *a.eta_l / suite.L;
    } else {
      const double bound =
          a.kind == AlgoKind::AccDngdSC ? bound_thm3(sigma, suite.L, suite.mu) : bound_thm4_ii(sigma, suite.L);
      magnitude = *a.bound_fraction * bound;
    }
    beta = a.beta.value_or(0.0);
    t0 = a.t0.value_or(1.0);
    r.alpha = a.alpha0;
  }
  switch (kind) {
    case SK::Fixed: r.schedule = StepSchedule::fixed(magnitude); break;
    case SK::Vanishing: r.schedule = StepSchedule::vanishing(magnitude, t0, beta); break;
    case SK::Harmonic: r.schedule = StepSchedule::harmonic(magnitude); break;
    case SK::InvSqrt: r.schedule = StepSchedule::inv_sqrt(magnitude); break;
  }
  return r;
}

}  // namespace

AlgoState init_algorithm(const AlgorithmSpec& spec, const ObjectiveSuite& suite, double sigma, const Matrix& x0) {
  const ResolvedStep r = resolve_step(spec, suite, sigma);
  const double eta = r.schedule.eta;
  const RowVector mean = row_mean(x0);
  switch (spec.kind) {
    case AlgoKind::AccDngdSC: return init_acc_dngd_sc(suite, eta, x0, r.alpha);
    case AlgoKind::AccDngdNSC:
      return init_acc_dngd_nsc(suite, r.schedule, spec.init.value_or(InitMode::Relaxed), x0, r.alpha);
    case AlgoKind::CGD: return init_cgd(suite, eta, mean);
    case AlgoKind::CNGDSC: return init_cngd_sc(suite, eta, mean, r.alpha);
    case AlgoKind::CNGDNSC: return init_cngd_nsc(suite, r.schedule, mean, r.alpha);
    case AlgoKind::DGD: return init_dgd(suite, r.schedule, x0);
    case AlgoKind::DNG: return init_dng(suite, r.schedule.c, x0);
    case AlgoKind::DNC: return init_dnc(suite, eta, x0, spec.tau ? TauRule{false, *spec.tau} : TauRule{});
    case AlgoKind::EXTRA: return init_extra(suite, eta, x0);
    case AlgoKind::AccDGD: return init_acc_dgd(suite, r.schedule, x0);
  }
  throw Error(ErrorKind::InvalidParam, "unknown algorithm kind");
}

AlgorithmSummary summarize(const std::vector<TraceRecord>& trace, long iterations, bool diverged) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  AlgorithmSummary s;
  s.diverged = diverged;
  if (trace.empty()) {
    s.final_avg_obj_err = s.final_max_individual_err = nan;
    s.loglog_slope = s.linear_rate = s.linear_r2 = nan;
    return s;
  }
  s.final_t = trace.back().t;
  s.final_avg_obj_err = trace.back().avg_obj_err;
  s.final_max_individual_err = trace.back().max_individual_err;
  const long burn = std::max<long>(100, iterations / 10);
  try {
    s.loglog_slope = loglog_slope(trace, burn, iterations);
  } catch (const Error&) {
    s.loglog_slope = nan;
  }
  try {
    const RateFit f = linear_rate(trace, burn, iterations);
    s.linear_rate = f.rate;
    s.linear_r2 = f.r_squared;
  } catch (const Error&) {
    s.linear_rate = s.linear_r2 = nan;
  }
  return s;
}

Instance build_instance(const ExperimentConfig& cfg) {
  Rng graph_rng = derive_rng(cfg.seed, {1});
  Rng data_rng = derive_rng(cfg.seed, {2});
  Rng init_rng = derive_rng(cfg.seed, {3});

  Graph g = graph_from_spec(cfg.graph, graph_rng);
  const WeightMatrix wm = cfg.weights == WeightMethod::Laplacian ? laplacian_weights(g) : metropolis_weights(g);

  ObjectiveSuite suite = [&] {
    switch (cfg.objective) {
      case CaseKind::LeastSquares:
        return gen_case1(g.n(), cfg.samples_per_agent ? cfg.samples_per_agent : 50, cfg.dim ? cfg.dim : 3, data_rng);
      case CaseKind::Logistic:
        return gen_case2(g.n(), cfg.samples_per_agent ? cfg.samples_per_agent : 100, cfg.dim ? cfg.dim : 3, data_rng);
      case CaseKind::PiecewisePower: return gen_case3(g.n(), cfg.dim ? cfg.dim : 4, data_rng);
    }
    throw Error(ErrorKind::InvalidParam, "unknown objective case");
  }();

  std::normal_distribution<double> gauss(0.0, 5.0);
  Matrix x0(suite.n, suite.dim);
  for (int i = 0; i < suite.n; ++i)
    for (int c = 0; c < suite.dim; ++c) x0(i, c) = gauss(init_rng);

  const double sigma = wm.sigma();
  return Instance{std::move(g), wm.w(), sigma, std::move(suite), std::move(x0)};
}

ExperimentResult run(const ExperimentConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const std::uint64_t tv_seed = derive_rng(cfg.seed, {4})();

  ExperimentResult res;
  res.config = cfg;
  res.n = inst.suite.n;
  res.dim = inst.suite.dim;
  res.sigma = inst.sigma;
  res.L = inst.suite.L;
  res.mu = inst.suite.mu;
  res.fstar = inst.suite.fstar;

  for (const auto& spec : cfg.algorithms) {
    const auto start = std::chrono::steady_clock::now();
    AlgorithmRun out;
    out.label = spec.label;
    out.kind = spec.kind;

    std::unique_ptr<WeightProvider> weights;
    if (cfg.remove_fraction)
      weights = std::make_unique<TimeVaryingWeights>(inst.graph, *cfg.remove_fraction, tv_seed);
    else
      weights = std::make_unique<FixedWeights>(inst.w);

    AlgoState st = init_algorithm(spec, inst.suite, inst.sigma, inst.x0);
    out.trace.push_back(record(st, inst.suite, inst.suite.fstar));
    bool diverged = false;
    while (st.t < cfg.iterations) {
      try {
        step(st, inst.suite, weights->at(st.t));
        if (st.t % cfg.record_every == 0 || st.t == cfg.iterations)
          out.trace.push_back(record(st, inst.suite, inst.suite.fstar));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonFinite) throw;
        diverged = true;
        break;
      }
    }
    out.summary = summarize(out.trace, cfg.iterations, diverged);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.runs.push_back(std::move(out));
  }
  return res;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write `" + p.string() + "`");
  out << body;
  out.close();
  if (!out) throw Error(ErrorKind::IoError, "write failed for `" + p.string() + "`");
}

}  // namespace

void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create `" + dir.string() + "`: " + ec.message());

  for (const auto& r : result.runs) {
    std::ostringstream os;
    os << kTraceHeader << "\n";
    for (const auto& t : r.trace)
      os << t.t << ',' << fmt(t.avg_obj_err) << ',' << fmt(t.max_individual_err) << ',' << fmt(t.consensus_y) << ','
         << fmt(t.consensus_s) << ',' << fmt(t.grad_norm) << ',' << fmt(t.eta_t) << ',' << fmt(t.alpha_t) << ','
         << t.comm_count << "\n";
    write_file(dir / (r.label + ".csv"), os.str());
  }

  std::ostringstream sum;
  sum << "label,kind,final_t,final_avg_obj_err,final_max_individual_err,loglog_slope,linear_rate,linear_r2,diverged\n";
  for (const auto& r : result.runs) {
    const auto& s = r.summary;
    sum << r.label << ',' << to_string(r.kind) << ',' << s.final_t << ',' << fmt(s.final_avg_obj_err) << ','
        << fmt(s.final_max_individual_err) << ',' << fmt(s.loglog_slope) << ',' << fmt(s.linear_rate) << ','
        << fmt(s.linear_r2) << ',' << (s.diverged ? 1 : 0) << "\n";
  }
  write_file(dir / "summary.csv", sum.str());

  std::ostringstream meta;
  meta << "# n = " << result.n << "\n";
  meta << "# dim = " << result.dim << "\n";
  meta << "# sigma = " << fmt(result.sigma) << "\n";
  meta << "# L = " << fmt(result.L) << "\n";
  meta << "# mu = " << fmt(result.mu) << "\n";
  meta << "# fstar = " << fmt(result.fstar) << "\n\n";
  meta << emit_config(result.config);
  write_file(dir / "meta", meta.str());
}

}  // namespace accdngd
