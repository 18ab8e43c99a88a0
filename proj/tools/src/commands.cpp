#include "slowvary_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slowvary/bounds.hpp"
#include "slowvary/csv.hpp"
#include "slowvary/simulator.hpp"
#include "slowvary_cli/config.hpp"
#include "slowvary_cli/registry.hpp"

namespace slowvary::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Loaded {
  ExperimentConfig config;
  fs::path base_dir;
};

Loaded load(const Options& opt) {
  if (!opt.config) throw std::invalid_argument("--config is required");
  Loaded l{load_config(*opt.config), fs::path(*opt.config).parent_path()};
  if (opt.seed) l.config.base_seed = *opt.seed;
  if (opt.runs) {
    if (*opt.runs < 1) throw std::invalid_argument("--runs must be >= 1");
    l.config.n_runs = *opt.runs;
  }
  if (opt.decimate) {
    if (*opt.decimate < 1) throw std::invalid_argument("--decimate must be >= 1");
    l.config.decimation = *opt.decimate;
  }
  if (opt.out) l.config.output_dir = *opt.out;
  return l;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return f;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto f = open_output(path);
  writer(f);
  f.flush();
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

// Instance from --instance, --config, or --spec with --T.
BanditInstance resolve_instance(const Options& opt) {
  if (opt.instance) return read_instance(*opt.instance);
  if (opt.config) {
    const auto l = load(opt);
    return materialize(l.config, l.base_dir);
  }
  if (opt.spec) {
    if (!opt.T) throw std::invalid_argument("--spec requires --T");
    json doc;
    try {
      doc = json::parse(*opt.spec);
    } catch (const json::parse_error& e) {
      throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return generate(parse_generator_spec(doc), *opt.T);
  }
  throw std::invalid_argument("one of --instance, --config or --spec is required");
}

std::vector<std::pair<std::string, double>> bound_table(Timestep T, double delta,
                                                        const BanditInstance* instance) {
  const auto part = block_partition(T, delta);
  std::vector<std::pair<std::string, double>> rows = {
      {"T", static_cast<double>(T)},
      {"delta", delta},
      {"tau", part.tau},
      {"block_length", static_cast<double>(part.block_length)},
      {"n_blocks", static_cast<double>(part.blocks.size())},
      {"min_episode_length", min_episode_length(T, delta)},
      {"max_episodes", max_episodes(T, delta)},
      {"minimax_upper_rate", minimax_upper_rate(T, delta)},
      {"minimax_lower_rate", minimax_lower_rate(T, delta)},
      {"good_event_violation_bound", 2.0 / static_cast<double>(T)},
  };
  if (instance) {
    rows.emplace_back("instance_dependent_bound",
                      instance_dependent_bound(*instance, delta, detectable_gap_profile(*instance)));
  }
  return rows;
}

void write_table(std::ostream& os, const std::vector<std::pair<std::string, double>>& rows) {
  os << "name,value\n";
  for (const auto& [name, value] : rows) os << name << ',' << csv::format(value) << '\n';
}

struct PolicyResult {
  std::string label;
  ReplicationSummary summary;
};

// Runs every policy of the config on `inst` and writes its CSVs under `dir`.
std::vector<PolicyResult> run_policies(const ExperimentConfig& c, const BanditInstance& inst, const fs::path& dir,
                                       bool write_runs) {
  std::vector<PolicyResult> results;
  for (const auto& spec : c.policies) {
    const auto runs = replicate_runs(make_factory(spec), inst, c.n_runs, c.base_seed);
    auto summary = summarize(runs);
    write_file(dir / (spec.label + "_summary.csv"), [&](std::ostream& os) { csv::write_summary(os, summary, c.decimation); });
    if (write_runs) {
      write_file(dir / (spec.label + "_runs.csv"), [&](std::ostream& os) { csv::write_runs(os, runs, c.decimation); });
      for (std::size_t k = 0; k < runs.size(); ++k) {
        if (runs[k].episodes.empty()) continue;
        write_file(dir / (spec.label + "_episodes_" + std::to_string(k) + ".csv"),
                   [&](std::ostream& os) { csv::write_episodes(os, runs[k].episodes); });
      }
    }
    results.push_back({spec.label, std::move(summary)});
  }
  return results;
}

void print_finals(std::ostream& out, const std::vector<PolicyResult>& results) {
  for (const auto& r : results) {
    out << r.label << ": final mean regret " << csv::format(r.summary.final_mean()) << " (std "
        << csv::format(r.summary.final_std()) << ", " << r.summary.n_runs << " runs)\n";
  }
}

std::string delta_tag(double delta) { return "delta_" + csv::format(delta); }

}  // namespace

int cmd_validate(const Options& opt, std::ostream& out) {
  RewardProfile profile({0.0}, {0.0});
  double delta = 0.0;
  if (opt.instance) {
    auto doc = read_instance_document(*opt.instance);
    profile = std::move(doc.profile);
    delta = doc.delta;
  } else if (opt.config) {
    const auto l = load(opt);
    if (const auto* path = std::get_if<std::string>(&l.config.instance)) {
      fs::path p(*path);
      if (p.is_relative() && !l.base_dir.empty()) p = l.base_dir / p;
      auto doc = read_instance_document(p);
      if (doc.profile.horizon() != l.config.T) {
        throw ConfigError("$.T", "config T differs from instance file T=" + std::to_string(doc.profile.horizon()));
      }
      profile = std::move(doc.profile);
      delta = doc.delta;
    } else {
      const auto inst = materialize(l.config, l.base_dir);
      profile = inst.profile();
      delta = inst.drift_limit();
    }
  } else {
    throw std::invalid_argument("validate needs --instance or --config");
  }
  if (opt.delta) delta = *opt.delta;

  const auto report = validate_drift(profile, delta);
  out << "T=" << profile.horizon() << " delta=" << csv::format(delta) << '\n';
  if (report.ok) {
    out << "drift check: ok\n";
    return kOk;
  }
  out << "drift check: " << report.violations.size() << " violation(s)\n";
  const std::size_t shown = std::min<std::size_t>(report.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = report.violations[i];
    out << "  arm " << id_of(v.arm) << " between t=" << v.t << " and t=" << v.t + 1 << ": |change| "
        << csv::format(v.magnitude) << '\n';
  }
  if (shown < report.violations.size()) out << "  ...\n";
  return kCheckFailed;
}

int cmd_gen(const Options& opt, std::ostream& out) {
  if (!opt.out) throw std::invalid_argument("gen needs --out <instance file>");
  Options src = opt;
  src.out.reset();
  const auto inst = resolve_instance(src);
  const fs::path path(*opt.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_instance(inst, path);
  out << "wrote " << path.string() << " (T=" << inst.horizon() << ", delta=" << csv::format(inst.drift_limit())
      << ")\n";
  return kOk;
}

int cmd_gap_profile(const Options& opt, std::ostream& out) {
  Options src = opt;
  src.out.reset();
  const auto inst = resolve_instance(src);
  std::int64_t d = 1;
  if (opt.config) d = load(src).config.decimation;
  if (opt.decimate) d = *opt.decimate;
  const auto gap = gap_profile(inst);
  const auto lambda = detectable_gap_profile(inst);
  if (opt.out) {
    write_file(*opt.out, [&](std::ostream& os) { csv::write_gap_profile(os, gap, lambda, d); });
  } else {
    csv::write_gap_profile(out, gap, lambda, d);
  }
  return kOk;
}

int cmd_run(const Options& opt, std::ostream& out) {
  const auto l = load(opt);
  const auto& c = l.config;
  const auto inst = materialize(c, l.base_dir);
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const auto results = run_policies(c, inst, dir, true);
  if (c.bound_overlays) {
    write_file(dir / "bounds.csv", [&](std::ostream& os) { write_table(os, bound_table(c.T, inst.drift_limit(), &inst)); });
    write_file(dir / "gap_profile.csv", [&](std::ostream& os) {
      csv::write_gap_profile(os, gap_profile(inst), detectable_gap_profile(inst), c.decimation);
    });
  }
  print_finals(out, results);
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const auto l = load(opt);
  const auto& c = l.config;
  const auto* base = std::get_if<GeneratorSpec>(&c.instance);
  if (!base) throw ConfigError("$.instance", "sweep needs an inline generator instance");
  std::vector<double> deltas = c.sweep_deltas;
  if (opt.delta) deltas = {*opt.delta};
  if (deltas.empty()) throw ConfigError("$.sweep.deltas", "sweep needs at least one delta");

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  std::ostringstream table;
  table << "delta,policy,mean_final_regret,std_final_regret,n_runs\n";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    GeneratorSpec spec = *base;
    spec.params["delta"] = deltas[i];
    BanditInstance inst = [&] {
      try {
        return generate(spec, c.T);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("$.sweep.deltas[" + std::to_string(i) + "]", e.what());
      }
    }();
    out << delta_tag(deltas[i]) << '\n';
    const auto results = run_policies(c, inst, dir / delta_tag(deltas[i]), false);
    print_finals(out, results);
    for (const auto& r : results) {
      table << csv::format(deltas[i]) << ',' << r.label << ',' << csv::format(r.summary.final_mean()) << ','
            << csv::format(r.summary.final_std()) << ',' << r.summary.n_runs << '\n';
    }
  }
  write_file(dir / "sweep_final.csv", [&](std::ostream& os) { os << table.str(); });
  return kOk;
}

int cmd_bounds(const Options& opt, std::ostream& out) {
  std::optional<BanditInstance> inst;
  if (opt.instance || opt.config || opt.spec) {
    Options src = opt;
    src.out.reset();
    inst = resolve_instance(src);
  }
  const Timestep T = opt.T ? *opt.T : (inst ? inst->horizon() : 0);
  if (T < 2) throw std::invalid_argument("bounds needs --T >= 2 or an instance");
  if (inst && inst->horizon() != T) throw std::invalid_argument("--T differs from the instance horizon");
  const double delta = opt.delta ? *opt.delta : (inst ? inst->drift_limit() : -1.0);
  if (!(delta >= 0.0)) throw std::invalid_argument("bounds needs --delta >= 0 or an instance");
  const auto rows = bound_table(T, delta, inst ? &*inst : nullptr);
  write_table(out, rows);
  if (opt.out) write_file(*opt.out, [&](std::ostream& os) { write_table(os, rows); });
  return kOk;
}

int cmd_lb_verify(const Options& opt, std::ostream& out) {
  const Timestep m = opt.m.value_or(64);
  if (m < 2) throw std::invalid_argument("--m must be >= 2");
  const std::int64_t runs = opt.runs.value_or(10000);
  if (runs < 1) throw std::invalid_argument("--runs must be >= 1");
  const std::uint64_t seed = opt.seed.value_or(0);
  std::vector<std::string> names = opt.policies;
  if (names.empty()) names = {"round_robin", "rexp3", "snoozeit"};

  const auto block = lb_block_bounds(m);
  const double delta = block.epsilon / static_cast<double>(m);
  const auto nu = generate({Family::stationary, {{"mu1", 0.5}, {"mu2", 0.5}, {"delta", delta}}, RewardModel::bernoulli()}, m);
  const auto nu_prime = generate({Family::lower_bound_nu_prime, {{"m", m}}, std::nullopt}, m);

  std::ostringstream report;
  report << "policy,m,epsilon,n_runs,lhs,rhs,mc_error,holds,mean_z_nu,mean_z_nu_prime,block_regret,block_lower,"
            "block_upper,within_upper\n";
  bool all = true;
  for (const auto& name : names) {
    PolicySpec spec{name, json::object(), name};
    validate_policy(spec, "--policies");
    const auto factory = make_factory(spec);
    const auto rep = change_of_measure_check(factory, nu, nu_prime, runs, seed);
    const PolicyFactory from_nu = [&](const BanditInstance&) { return factory(nu); };
    const auto regret = replicate(from_nu, nu_prime, runs, seed + static_cast<std::uint64_t>(runs));
    const bool within = regret.final_mean() <= block.upper;
    all = all && rep.holds && within;
    report << name << ',' << m << ',' << csv::format(block.epsilon) << ',' << runs << ',' << csv::format(rep.lhs_estimate)
           << ',' << csv::format(rep.rhs_estimate) << ',' << csv::format(rep.mc_error) << ',' << (rep.holds ? 1 : 0)
           << ',' << csv::format(rep.mean_z_nu) << ',' << csv::format(rep.mean_z_nu_prime) << ','
           << csv::format(regret.final_mean()) << ',' << csv::format(block.lower) << ',' << csv::format(block.upper)
           << ',' << (within ? 1 : 0) << '\n';
  }
  out << report.str();
  if (opt.out) write_file(*opt.out, [&](std::ostream& os) { os << report.str(); });
  return all ? kOk : kCheckFailed;
}

}  // namespace slowvary::cli
