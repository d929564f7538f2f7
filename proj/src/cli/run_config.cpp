#include "corticarc/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace corticarc::cli {

namespace {

using connectivity::DelayKind;
using connectivity::KernelKind;
using engine::TransportKind;

struct Key {
  std::string_view name;
  std::function<void(RunConfig&, const std::string&, const std::string&)> apply;
};

std::int64_t parse_int(const std::string& v, const std::string& where) {
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(where + ": '" + v + "' is not an integer");
  return x;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(where + ": '" + v + "' is not a boolean");
}

Key quantity(std::string_view name, Unit unit, std::function<double&(RunConfig&)> field) {
  return {name, [unit, field](RunConfig& c, const std::string& v, const std::string& where) {
            field(c) = parse_quantity(v, unit, where);
          }};
}

Key integer(std::string_view name, std::int64_t lo, std::int64_t hi, std::function<void(RunConfig&, std::int64_t)> set) {
  return {name, [lo, hi, set](RunConfig& c, const std::string& v, const std::string& where) {
            const std::int64_t x = parse_int(v, where);
            if (x < lo || x > hi) {
              throw ConfigError(where + ": " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            }
            set(c, x);
          }};
}

std::vector<Key> neuron_keys(std::function<std::vector<NeuronParams*>(RunConfig&)> targets) {
  auto q = [targets](std::string_view name, Unit unit, double NeuronParams::*field) {
    return Key{name, [=](RunConfig& c, const std::string& v, const std::string& where) {
                 const double x = parse_quantity(v, unit, where);
                 for (NeuronParams* p : targets(c)) p->*field = x;
               }};
  };
  return {q("tau_m", Unit::time_ms, &NeuronParams::tau_m),       q("C_m", Unit::none, &NeuronParams::C_m),
          q("E", Unit::potential_mv, &NeuronParams::E),           q("tau_c", Unit::time_ms, &NeuronParams::tau_c),
          q("g_c", Unit::none, &NeuronParams::g_c),               q("V_theta", Unit::potential_mv, &NeuronParams::V_theta),
          q("V_r", Unit::potential_mv, &NeuronParams::V_r),       q("tau_arp", Unit::time_ms, &NeuronParams::tau_arp),
          q("alpha_c", Unit::none, &NeuronParams::alpha_c)};
}

const std::map<std::string, std::vector<Key>>& schema() {
  static const std::map<std::string, std::vector<Key>> table = [] {
    std::map<std::string, std::vector<Key>> t;
    t["grid"] = {
        integer("nx", 1, 4096, [](RunConfig& c, std::int64_t x) { c.sim.grid.nx = static_cast<int>(x); }),
        integer("ny", 1, 4096, [](RunConfig& c, std::int64_t x) { c.sim.grid.ny = static_cast<int>(x); }),
        quantity("spacing_alpha", Unit::distance_um, [](RunConfig& c) -> double& { return c.sim.grid.spacing_um; }),
        integer("neurons_per_column", 1, 1 << 20,
                [](RunConfig& c, std::int64_t x) { c.sim.grid.neurons_per_column = static_cast<std::uint32_t>(x); }),
        quantity("excitatory_fraction", Unit::none,
                 [](RunConfig& c) -> double& { return c.sim.grid.excitatory_fraction; }),
    };
    t["kernel"] = {
        {"kind",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           if (v == "gaussian") {
             c.sim.kernel.kind = KernelKind::gaussian;
           } else if (v == "exponential") {
             c.sim.kernel.kind = KernelKind::exponential;
           } else {
             throw ConfigError(where + ": kind must be gaussian or exponential, got '" + v + "'");
           }
         }},
        quantity("amplitude_A", Unit::none, [](RunConfig& c) -> double& { return c.sim.kernel.amplitude; }),
        quantity("scale", Unit::distance_um, [](RunConfig& c) -> double& { return c.sim.kernel.scale_um; }),
        quantity("cutoff_p", Unit::none, [](RunConfig& c) -> double& { return c.sim.kernel.cutoff_p; }),
        quantity("local_p", Unit::none, [](RunConfig& c) -> double& { return c.sim.kernel.local_p; }),
    };
    t["neuron"] = neuron_keys([](RunConfig& c) { return std::vector<NeuronParams*>{&c.sim.excitatory, &c.sim.inhibitory}; });
    t["neuron.excitatory"] = neuron_keys([](RunConfig& c) { return std::vector<NeuronParams*>{&c.sim.excitatory}; });
    t["neuron.inhibitory"] = neuron_keys([](RunConfig& c) { return std::vector<NeuronParams*>{&c.sim.inhibitory}; });
    t["synapse"] = {
        quantity("weight_ee", Unit::potential_mv, [](RunConfig& c) -> double& { return c.sim.synapses.weight_ee; }),
        quantity("weight_ei", Unit::potential_mv, [](RunConfig& c) -> double& { return c.sim.synapses.weight_ei; }),
        quantity("weight_ie", Unit::potential_mv, [](RunConfig& c) -> double& { return c.sim.synapses.weight_ie; }),
        quantity("weight_ii", Unit::potential_mv, [](RunConfig& c) -> double& { return c.sim.synapses.weight_ii; }),
        quantity("weight_sd_ratio", Unit::none, [](RunConfig& c) -> double& { return c.sim.synapses.weight_sd_ratio; }),
        {"delay_kind",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           if (v == "uniform") {
             c.sim.synapses.delay_kind = DelayKind::uniform;
           } else if (v == "exponential") {
             c.sim.synapses.delay_kind = DelayKind::exponential;
           } else {
             throw ConfigError(where + ": delay_kind must be uniform or exponential, got '" + v + "'");
           }
         }},
        quantity("delay_min", Unit::time_ms, [](RunConfig& c) -> double& { return c.sim.synapses.delay_min_ms; }),
        quantity("delay_max", Unit::time_ms, [](RunConfig& c) -> double& { return c.sim.synapses.delay_max_ms; }),
        quantity("delay_mean", Unit::time_ms, [](RunConfig& c) -> double& { return c.sim.synapses.delay_mean_ms; }),
        integer("D_max", 1, std::numeric_limits<std::uint16_t>::max(),
                [](RunConfig& c, std::int64_t x) { c.sim.synapses.max_delay_steps = static_cast<std::uint16_t>(x); }),
    };
    t["external"] = {
        quantity("synapses_per_neuron", Unit::none,
                 [](RunConfig& c) -> double& { return c.sim.external.synapses_per_neuron; }),
        quantity("rate_per_synapse", Unit::frequency_hz, [](RunConfig& c) -> double& { return c.sim.external.rate_hz; }),
        quantity("weight", Unit::potential_mv, [](RunConfig& c) -> double& { return c.sim.external.weight_mv; }),
    };
    t["run"] = {
        quantity("timestep", Unit::time_ms, [](RunConfig& c) -> double& { return c.sim.timestep_ms; }),
        quantity("duration", Unit::time_s, [](RunConfig& c) -> double& { return c.sim.duration_s; }),
        {"seed",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           std::uint64_t x = 0;
           const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
           if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(where + ": bad seed '" + v + "'");
           c.sim.seed = x;
         }},
        {"initial_state",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           if (v == "uniform") {
             c.sim.initial_at_rest = false;
           } else if (v == "rest") {
             c.sim.initial_at_rest = true;
           } else {
             throw ConfigError(where + ": initial_state must be uniform or rest, got '" + v + "'");
           }
         }},
        {"memory_budget",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           c.sim.memory_budget_bytes = static_cast<std::uint64_t>(parse_quantity(v, Unit::bytes, where));
         }},
        integer("workers", 1, 4096, [](RunConfig& c, std::int64_t x) { c.sim.workers = static_cast<int>(x); }),
    };
    t["transport"] = {
        {"kind",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           if (v == "inprocess") {
             c.sim.transport = TransportKind::inprocess;
           } else if (v == "multiprocess") {
             c.sim.transport = TransportKind::multiprocess;
           } else {
             throw ConfigError(where + ": transport must be inprocess or multiprocess, got '" + v + "'");
           }
         }},
        {"timeout",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           const double ms = parse_quantity(v, Unit::time_ms, where);
           if (!(ms > 0.0)) throw ConfigError(where + ": timeout must be positive");
           c.sim.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(ms)));
         }},
        {"chunk_size",
         [](RunConfig& c, const std::string& v, const std::string& where) {
           c.sim.chunk_bytes = static_cast<std::uint64_t>(parse_quantity(v, Unit::bytes, where));
         }},
    };
    t["output"] = {
        {"dir", [](RunConfig& c, const std::string& v, const std::string&) { c.output_dir = v; }},
        {"raster",
         [](RunConfig& c, const std::string& v, const std::string& where) { c.write_raster = parse_bool(v, where); }},
    };
    return t;
  }();
  return table;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::pair<int, int> parse_grid_size(std::string_view text) {
  const auto x = text.find('x');
  int nx = 0;
  int ny = 0;
  if (x == std::string_view::npos ||
      std::from_chars(text.data(), text.data() + x, nx).ptr != text.data() + x ||
      std::from_chars(text.data() + x + 1, text.data() + text.size(), ny).ptr != text.data() + text.size() || nx < 1 ||
      ny < 1) {
    throw ConfigError("grid size '" + std::string(text) + "' is not of the form NXxNY");
  }
  return {nx, ny};
}

RunConfig run_config_from_ini(const IniFile& ini) {
  RunConfig c;
  const auto& table = schema();
  // Shared neuron keys first so the population sections override them.
  std::vector<std::string> order;
  for (const auto& [name, _] : ini.sections()) {
    if (!table.count(name)) throw ConfigError(ini.origin() + ": unknown section [" + name + "]");
    if (name == "neuron") order.insert(order.begin(), name);
    else order.push_back(name);
  }
  for (const std::string& name : order) {
    const auto& keys = table.at(name);
    for (const auto& [key, entry] : ini.sections().at(name)) {
      const std::string where = ini.origin() + ":" + std::to_string(entry.line) + " [" + name + "] " + key;
      auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return k.name == key; });
      if (it == keys.end()) throw ConfigError(where + ": unknown key");
      it->apply(c, entry.value, where);
    }
  }
  try {
    c.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ini.origin() + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) { return run_config_from_ini(IniFile::load(path)); }

std::string echo_config(const RunConfig& c) {
  const engine::SimConfig& s = c.sim;
  std::ostringstream o;
  o << "[grid]\nnx = " << s.grid.nx << "\nny = " << s.grid.ny << "\nspacing_alpha = " << num(s.grid.spacing_um)
    << "um\nneurons_per_column = " << s.grid.neurons_per_column
    << "\nexcitatory_fraction = " << num(s.grid.excitatory_fraction) << "\n\n";
  o << "[kernel]\nkind = " << connectivity::to_string(s.kernel.kind) << "\namplitude_A = " << num(s.kernel.amplitude)
    << "\nscale = " << num(s.kernel.scale_um) << "um\ncutoff_p = " << num(s.kernel.cutoff_p)
    << "\nlocal_p = " << num(s.kernel.local_p) << "\n\n";
  for (const auto& [name, p] : {std::pair{"neuron.excitatory", &s.excitatory}, std::pair{"neuron.inhibitory", &s.inhibitory}}) {
    o << "[" << name << "]\ntau_m = " << num(p->tau_m) << "ms\nC_m = " << num(p->C_m) << "\nE = " << num(p->E)
      << "mV\ntau_c = " << num(p->tau_c) << "ms\ng_c = " << num(p->g_c) << "\nV_theta = " << num(p->V_theta)
      << "mV\nV_r = " << num(p->V_r) << "mV\ntau_arp = " << num(p->tau_arp) << "ms\nalpha_c = " << num(p->alpha_c)
      << "\n\n";
  }
  const auto& y = s.synapses;
  o << "[synapse]\nweight_ee = " << num(y.weight_ee) << "mV\nweight_ei = " << num(y.weight_ei)
    << "mV\nweight_ie = " << num(y.weight_ie) << "mV\nweight_ii = " << num(y.weight_ii)
    << "mV\nweight_sd_ratio = " << num(y.weight_sd_ratio)
    << "\ndelay_kind = " << (y.delay_kind == DelayKind::uniform ? "uniform" : "exponential")
    << "\ndelay_min = " << num(y.delay_min_ms) << "ms\ndelay_max = " << num(y.delay_max_ms)
    << "ms\ndelay_mean = " << num(y.delay_mean_ms) << "ms\nD_max = " << y.max_delay_steps << "\n\n";
  o << "[external]\nsynapses_per_neuron = " << num(s.external.synapses_per_neuron)
    << "\nrate_per_synapse = " << num(s.external.rate_hz) << "Hz\nweight = " << num(s.external.weight_mv) << "mV\n\n";
  o << "[run]\ntimestep = " << num(s.timestep_ms) << "ms\nduration = " << num(s.duration_s) << "s\nseed = " << s.seed
    << "\ninitial_state = " << (s.initial_at_rest ? "rest" : "uniform") << "\nmemory_budget = " << s.memory_budget_bytes
    << "B\nworkers = " << s.workers << "\n\n";
  o << "[transport]\nkind = " << engine::to_string(s.transport) << "\ntimeout = " << s.timeout.count()
    << "ms\nchunk_size = " << s.chunk_bytes << "B\n\n";
  o << "[output]\ndir = " << c.output_dir << "\nraster = " << (c.write_raster ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace corticarc::cli
