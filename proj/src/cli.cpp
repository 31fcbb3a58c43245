#include "biasperm/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "biasperm/analysis.hpp"
#include "biasperm/bias_models.hpp"
#include "biasperm/canonical_paths.hpp"
#include "biasperm/errors.hpp"
#include "biasperm/invariants.hpp"
#include "json.hpp"

namespace biasperm {

namespace {

using Cell = nlohmann::json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string number_text(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string cell_text(const Cell& c) {
  if (c.is_null()) return "";
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  if (c.is_number_integer()) return std::to_string(c.get<long long>());
  if (c.is_number_unsigned()) return std::to_string(c.get<unsigned long long>());
  if (c.is_number_float()) return number_text(c.get<double>());
  std::string s = c.get<std::string>();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

void write_output(std::ostream& out, const ExperimentConfig& cfg, const Table& t, const std::vector<std::string>& meta) {
  if (cfg.format == "json") {
    nlohmann::json doc;
    doc["meta"] = {{"tool", "biasperm"},
                   {"subcommand", cfg.subcommand},
                   {"spec_revision", kSpecRevision},
                   {"seed", cfg.seed},
                   {"config", cfg.echo()},
                   {"notes", meta}};
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = row[c];
      doc["rows"].push_back(obj);
    }
    out << doc.dump(1) << '\n';
    return;
  }
  out << "# biasperm " << cfg.subcommand << '\n';
  out << "# spec-revision: " << kSpecRevision << '\n';
  out << "# seed: " << cfg.seed << '\n';
  out << "# config: " << cfg.echo() << '\n';
  for (const auto& m : meta) out << "# " << m << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << '\n';
  }
}

Cell opt_int(const std::optional<int>& v) { return v ? Cell(*v) : Cell(nullptr); }

struct BuiltKernel {
  ChainKernel kernel;
  std::string label;
};

BuiltKernel make_kernel(const ExperimentConfig& cfg, int n, std::vector<std::string>& notes) {
  const std::string& chain = cfg.chain;
  if (chain == "oned") return {OnedKernel{cfg.r, cfg.k}, "r=" + number_text(cfg.r) + " k=" + std::to_string(cfg.k)};
  if (chain == "asep") {
    return {AsepKernel{cfg.p, cfg.ones, cfg.zeros},
            "p=" + number_text(cfg.p) + " ones=" + std::to_string(cfg.ones) + " zeros=" + std::to_string(cfg.zeros)};
  }
  const ModelSpec m = parse_model(cfg.model);
  if (chain == "walk" || chain == "walk-transposition") {
    WalkWeightModel wm;
    if (m.kind == ModelSpec::Kind::slowmix) {
      wm = WalkWeightModel::slowmix(solve_delta(m.slowmix_n));
    } else if (m.kind == ModelSpec::Kind::constant) {
      if (m.p >= 1.0) throw InvalidArgument("walk chains need p < 1");
      wm = WalkWeightModel::constant(n, m.p);
    } else {
      throw InvalidArgument("walk chains take slowmix:<n> or constant:<p> models");
    }
    if (chain == "walk") return {WalkKernel{wm}, m.text};
    return {WalkTranspositionKernel{wm}, m.text};
  }
  if (chain == "nn") return {NnKernel{model_table(m, n)}, m.text};
  if (chain == "inv") {
    auto cyw = model_as_cyw(m, n);
    if (!cyw) throw InvalidArgument("chain inv needs a cyw model (or constant:<p> with p < 1)");
    if (m.kind == ModelSpec::Kind::constant) notes.push_back("notice: constant model coerced to cyw with every r_i = p");
    return {InvKernel(*cyw), m.text};
  }
  if (chain == "tree") {
    if (m.kind == ModelSpec::Kind::league && m.tree->size() != n) {
      throw InvalidArgument("league tree has " + std::to_string(m.tree->size()) + " leaves; n = " + std::to_string(n) +
                            " does not match");
    }
    auto T = model_as_league(m, n);
    if (!T) throw InvalidArgument("chain tree needs a league model");
    if (m.kind == ModelSpec::Kind::constant) notes.push_back("notice: constant model realized as a complete league tree");
    if (m.kind == ModelSpec::Kind::cyw) notes.push_back("notice: cyw model realized as a comb league tree");
    return {TreeKernel(*T), m.text};
  }
  throw InvalidArgument("unknown chain '" + chain + "'");
}

int default_size(const ExperimentConfig& cfg) {
  if (cfg.n) return *cfg.n;
  if (cfg.chain == "oned" || cfg.chain == "asep") return 0;
  const ModelSpec m = parse_model(cfg.model);
  if (cfg.chain == "walk" || cfg.chain == "walk-transposition") {
    if (m.kind == ModelSpec::Kind::slowmix) return m.slowmix_n;
    return 5;
  }
  if (auto s = m.natural_size()) return *s;
  return 5;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return exit_cap;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const SoundnessFailure& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_soundness;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_soundness;
  }
}

struct ExactRow {
  int n = 0;
  std::optional<int> tau;
  std::optional<double> gap;
  double pi_min = 0.0;
  std::string caveat;
};

ExactRow exact_row(const ExperimentConfig& cfg, int n, std::vector<std::string>& notes) {
  const BuiltKernel bk = make_kernel(cfg, n, notes);
  const StateSpaceIndex index = StateSpaceIndex::for_kernel(bk.kernel, cfg.cap);
  const SparseMatrix P = build_transition_matrix(bk.kernel, index);
  const Eigen::VectorXd pi = stationary_exact(bk.kernel, index);
  const auto starts = worst_case_starts(index, 720);
  const MixingResult mix = mixing_time_exact(P, pi, cfg.eps, starts);
  ExactRow row;
  row.n = n;
  row.tau = mix.tau;
  row.pi_min = pi.minCoeff();
  std::vector<std::string> caveats;
  if (!mix.all_starts) caveats.push_back("extreme-starts");
  if (!mix.tau) caveats.push_back("horizon");
  if (!mix.monotone) caveats.push_back("non-monotone-trace");
  if (cfg.gap) {
    if (index.size() > 10000) {
      caveats.push_back("gap-over-cap");
    } else if (row.pi_min <= 0.0) {
      caveats.push_back("gap-undefined");
    } else {
      row.gap = spectral_gap(P, pi).gap;
    }
  }
  // Cross-check against the conductance of one cut: permutations starting with the largest label.
  if (row.tau && index.kind() == StateSpaceIndex::Kind::permutations && index.size() > 1 && row.pi_min > 0.0) {
    std::vector<bool> S(index.size());
    const int top = static_cast<int>(index.state(0).size());
    for (int s = 0; s < index.size(); ++s) S[s] = index.state(s)[0] == top;
    const CutConductance c = conductance_of_cut(P, pi, S);
    if (c.phi > 0.0 && *row.tau + 1e-9 < conductance_mixing_lower_bound(c.phi)) {
      throw SoundnessFailure("exact tau falls below a conductance lower bound");
    }
  }
  for (std::size_t i = 0; i < caveats.size(); ++i) row.caveat += (i ? ";" : "") + caveats[i];
  return row;
}

std::string model_label(const ExperimentConfig& cfg) {
  if (cfg.chain == "oned") return "r=" + number_text(cfg.r) + ";k=" + std::to_string(cfg.k);
  if (cfg.chain == "asep") return "p=" + number_text(cfg.p);
  return cfg.model;
}

std::ostream& open_out(const ExperimentConfig& cfg, std::ofstream& file, std::ostream& fallback) {
  if (cfg.out.empty()) return fallback;
  file.open(cfg.out, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open output file '" + cfg.out + "'");
  return file;
}

}  // namespace

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("range must be lo:hi");
  int lo = 0, hi = 0;
  const char* b = text.data();
  auto r1 = std::from_chars(b, b + colon, lo);
  auto r2 = std::from_chars(b + colon + 1, b + text.size(), hi);
  if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != b + colon || r2.ptr != b + text.size() || lo > hi) {
    throw InvalidArgument("bad range '" + text + "'");
  }
  return {lo, hi};
}

std::vector<int> ExperimentConfig::sizes(std::optional<int> fallback) const {
  std::vector<int> out;
  if (n_range) {
    for (int v = n_range->first; v <= n_range->second; ++v) out.push_back(v);
  } else if (n) {
    out.push_back(*n);
  } else if (fallback) {
    out.push_back(*fallback);
  }
  return out;
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os << "subcommand=" << subcommand << " chain=" << chain << " model=" << model << " kind=" << kind;
  os << " n=" << (n ? std::to_string(*n) : std::string("-"));
  os << " n-range=" << (n_range ? std::to_string(n_range->first) + ":" + std::to_string(n_range->second) : std::string("-"));
  os << " eps=" << number_text(eps) << " steps=" << steps << " stride=" << stride << " seed=" << seed;
  os << " format=" << format << " cap=" << cap << " fast=" << (fast ? 1 : 0);
  if (chain == "oned") os << " r=" << number_text(r) << " k=" << k;
  if (chain == "asep") os << " p=" << number_text(p) << " ones=" << ones << " zeros=" << zeros;
  return os.str();
}

int cmd_sample(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> notes;
    const int n = default_size(cfg);
    const BuiltKernel bk = make_kernel(cfg, n, notes);
    for (const auto& note : notes) err << note << '\n';
    const std::uint64_t stride = cfg.stride ? cfg.stride : std::max<std::uint64_t>(1, cfg.steps / 1000);
    const Trajectory tr = run(bk.kernel, default_start(bk.kernel, n), cfg.steps, cfg.seed, stride);
    Table t{{"step", observable(bk.kernel, default_start(bk.kernel, n)).first}, {}};
    for (const auto& r : tr.rows) t.rows.push_back({Cell(r.step), Cell(r.value)});
    notes.push_back("kernel: " + kernel_name(bk.kernel) + " n=" + std::to_string(n));
    write_output(out, cfg, t, notes);
    return static_cast<int>(exit_ok);
  });
}

int cmd_exact(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> notes;
    Table t{{"n", "chain", "model", "eps", "tau", "gap", "pi_min", "caveat"}, {}};
    for (int n : cfg.sizes(default_size(cfg))) {
      const ExactRow r = exact_row(cfg, n, notes);
      t.rows.push_back({Cell(n), Cell(cfg.chain), Cell(model_label(cfg)), Cell(cfg.eps), opt_int(r.tau),
                        r.gap ? Cell(*r.gap) : Cell(nullptr), Cell(r.pi_min), Cell(r.caveat)});
    }
    for (const auto& note : notes) err << note << '\n';
    write_output(out, cfg, t, notes);
    return static_cast<int>(exit_ok);
  });
}

int cmd_scan(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> notes;
    std::vector<ExactRow> rows;
    for (int n : cfg.sizes(default_size(cfg))) rows.push_back(exact_row(cfg, n, notes));
    // Least-squares slope of log tau against log n.
    std::optional<double> slope;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
      if (r.tau && *r.tau > 0 && r.n > 0) pts.emplace_back(std::log(r.n), std::log(*r.tau));
    if (pts.size() >= 2 && pts.size() == rows.size()) {
      double mx = 0, my = 0;
      for (auto [x, y] : pts) mx += x, my += y;
      mx /= pts.size();
      my /= pts.size();
      double sxy = 0, sxx = 0;
      for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
      slope = sxy / sxx;
    }
    Table t{{"n", "chain", "model", "eps", "tau", "gap", "pi_min", "caveat", "slope"}, {}};
    for (const auto& r : rows) {
      t.rows.push_back({Cell(r.n), Cell(cfg.chain), Cell(model_label(cfg)), Cell(cfg.eps), opt_int(r.tau),
                        r.gap ? Cell(*r.gap) : Cell(nullptr), Cell(r.pi_min), Cell(r.caveat),
                        slope ? Cell(*slope) : Cell(nullptr)});
    }
    notes.push_back("slope: least-squares fit of ln(tau) on ln(n) over all rows");
    for (const auto& note : notes)
      if (note.rfind("notice", 0) == 0) err << note << '\n';
    write_output(out, cfg, t, notes);
    return static_cast<int>(exit_ok);
  });
}

int cmd_slowmix(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<int> sizes = cfg.sizes();
    if (sizes.empty())
      for (int n = 5; n <= 9; ++n) sizes.push_back(n);
    Table t{{"n", "delta", "xi", "piS1", "piS2", "piS3", "phi_bound", "tau_lower", "ratio"}, {}};
    if (cfg.transposition) {
      for (const char* c : {"piS2w", "ratio_w", "phi_w", "tau_lower_w"}) t.columns.push_back(c);
    }
    if (cfg.compare) t.columns.push_back("tau_compare");
    for (int n : sizes) {
      if (n < 4) throw InvalidArgument("slowmix needs n >= 4");
      const SlowmixRow r = slowmix_cut_report(n, cfg.transposition, cfg.compare, cfg.cap);
      std::vector<Cell> row = {Cell(r.n),    Cell(r.delta), Cell(r.xi),  Cell(r.piS1),      Cell(r.piS2),
                               Cell(r.piS3), Cell(r.phi),   Cell(r.tau_lower), Cell(r.ratio)};
      if (cfg.transposition) {
        for (double v : {r.piS2w, r.ratio_w, r.phi_w, r.tau_lower_w}) row.push_back(Cell(v));
      }
      if (cfg.compare) row.push_back(opt_int(r.tau_compare));
      t.rows.push_back(std::move(row));
    }
    const std::vector<std::string> notes = {
        "cut: S1 max height < floor(n - sqrt n), S2 equal, S3 above; corner tiles where a - b + 2n + 1 > n + M",
        "phi_bound: exact conductance of S1; tau_lower = 1/(4 phi) - 1/2"};
    write_output(out, cfg, t, notes);
    return static_cast<int>(exit_ok);
  });
}

int cmd_paths(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> notes = {"log-base: natural"};
    const ModelSpec m = parse_model(cfg.model);
    Table t{{"kind", "n", "model", "edge-count", "max-paths-per-edge", "max-path-length", "A", "comparison-bound",
             "exact-tau", "floor-check", "path-mode", "witness-collisions"},
            {}};
    bool hard_failure = false;
    for (int n : cfg.sizes(m.natural_size() ? *m.natural_size() : 5)) {
      if (n > 6) throw InvalidArgument("path enumeration needs n <= 6, got n = " + std::to_string(n));
      if (m.kind == ModelSpec::Kind::league && m.tree->size() != n) {
        throw InvalidArgument("league tree has " + std::to_string(m.tree->size()) + " leaves, not n = " + std::to_string(n));
      }
      PathKind kind;
      std::optional<ChainKernel> aux;
      if (cfg.kind == "inv") {
        kind = PathKind::inv;
        auto cyw = model_as_cyw(m, n);
        if (!cyw) throw InvalidArgument("inv paths need a cyw model");
        aux = InvKernel(*cyw);
      } else if (cfg.kind == "tree") {
        kind = PathKind::tree;
        auto T = model_as_league(m, n);
        if (!T) throw InvalidArgument("tree paths need a league model");
        aux = TreeKernel(*T);
      } else {
        throw InvalidArgument("paths --kind must be inv or tree");
      }
      const CongestionReport rep = congestion_A(kind, *aux);
      const BiasTable& P = kind == PathKind::inv ? std::get<InvKernel>(*aux).P : std::get<TreeKernel>(*aux).P;
      const ChainKernel nn = NnKernel{P};
      const StateSpaceIndex index = StateSpaceIndex::permutations(n, cfg.cap);
      const Eigen::VectorXd pi = stationary_exact(nn, index);
      const auto starts = worst_case_starts(index, 720);
      const MixingResult mix_nn = mixing_time_exact(build_transition_matrix(nn, index), pi, cfg.eps, starts);
      const MixingResult mix_aux = mixing_time_exact(build_transition_matrix(*aux, index), pi, cfg.eps, starts);
      Cell bound(nullptr);
      if (mix_aux.tau && pi.minCoeff() > 0.0 && cfg.eps < 0.5) {
        bound = comparison_bound(rep.A, *mix_aux.tau, pi.minCoeff(), cfg.eps);
      }
      const bool floors = rep.floor_failures == 0 && rep.illegal_paths == 0;
      const bool guaranteed = kind == PathKind::inv || rep.mode != TreePathMode::unguaranteed;
      if (!floors && guaranteed) hard_failure = true;
      const char* mode = kind == PathKind::inv ? "inv"
                         : rep.mode == TreePathMode::direct ? "direct"
                         : rep.mode == TreePathMode::mirrored ? "mirrored"
                                                              : "unguaranteed";
      t.rows.push_back({Cell(cfg.kind), Cell(n), Cell(cfg.model), Cell(rep.aux_edges), Cell(rep.max_paths_per_edge),
                        Cell(rep.max_path_length), Cell(rep.A), bound, opt_int(mix_nn.tau),
                        Cell(floors ? "pass" : "fail"), Cell(mode), Cell(rep.witness_collisions)});
    }
    write_output(out, cfg, t, notes);
    if (hard_failure) {
      err << "internal error: a weight floor failed on a weakly monotone model\n";
      return static_cast<int>(exit_soundness);
    }
    return static_cast<int>(exit_ok);
  });
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto results = run_invariant_suite(SuiteOptions{cfg.fast, cfg.seed});
    out << "# biasperm verify\n# spec-revision: " << kSpecRevision << "\n# seed: " << cfg.seed << "\n# config: "
        << cfg.echo() << '\n';
    int failed = 0;
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.detail.empty()) out << ": " << r.detail;
      out << '\n';
      if (!r.passed) ++failed;
    }
    out << "summary: " << results.size() - failed << "/" << results.size() << " passed\n";
    return failed ? static_cast<int>(exit_invariant) : static_cast<int>(exit_ok);
  });
}

int run_command(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.format != "csv" && cfg.format != "json") throw InvalidArgument("format must be csv or json");
    std::ofstream file;
    std::ostream& dst = open_out(cfg, file, out);
    if (cfg.subcommand == "sample") return cmd_sample(cfg, dst, err);
    if (cfg.subcommand == "exact") return cmd_exact(cfg, dst, err);
    if (cfg.subcommand == "scan") return cmd_scan(cfg, dst, err);
    if (cfg.subcommand == "slowmix") return cmd_slowmix(cfg, dst, err);
    if (cfg.subcommand == "paths") return cmd_paths(cfg, dst, err);
    if (cfg.subcommand == "verify") return cmd_verify(cfg, dst, err);
    throw InvalidArgument("unknown subcommand '" + cfg.subcommand + "'");
  });
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Biased permutation sampling and exact Markov chain analysis"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string range;
  int n = 0;
  bool no_transposition = false, no_gap = false;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "constant:<p>, cyw:<r1,...>[:max], league:<file>, slowmix:<n>");
    sub->add_option("--n", n, "number of labels (walk half-size for walk chains)");
    sub->add_option("--n-range", range, "inclusive range lo:hi");
    sub->add_option("--eps", cfg.eps, "total variation threshold");
    sub->add_option("--seed", cfg.seed, "64-bit seed");
    sub->add_option("--out", cfg.out, "output path (default standard output)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--cap", cfg.cap, "state-space size cap");
  };
  const auto chain_opts = [&](CLI::App* sub) {
    sub->add_option("--chain", cfg.chain, "nn, inv, tree, oned, asep, walk, walk-transposition");
    sub->add_option("--r", cfg.r, "oned: up probability");
    sub->add_option("--k", cfg.k, "oned: top height");
    sub->add_option("--p", cfg.p, "asep: sorting probability");
    sub->add_option("--ones", cfg.ones, "asep: number of ones");
    sub->add_option("--zeros", cfg.zeros, "asep: number of zeros");
  };

  CLI::App* sample = app.add_subcommand("sample", "run a chain and write observables");
  common(sample);
  chain_opts(sample);
  sample->add_option("--steps", cfg.steps, "number of steps");
  sample->add_option("--stride", cfg.stride, "record every this many steps (default steps/1000)");

  CLI::App* exact = app.add_subcommand("exact", "exact mixing time, spectral gap and pi_min");
  common(exact);
  chain_opts(exact);
  exact->add_flag("--no-gap", no_gap, "skip the dense eigensolve");

  CLI::App* scan = app.add_subcommand("scan", "exact over an n range with a fitted growth exponent");
  common(scan);
  chain_opts(scan);
  scan->add_flag("--no-gap", no_gap, "skip the dense eigensolve");

  CLI::App* slowmix = app.add_subcommand("slowmix", "cut masses and conductance bounds for the slow-mixing bias");
  common(slowmix);
  slowmix->add_flag("--no-transposition", no_transposition, "omit the widened cut for the transposition chain");
  slowmix->add_flag("--compare", cfg.compare, "add tau(1/4) of the constant 1/2+eps walk chain");

  CLI::App* paths = app.add_subcommand("paths", "canonical paths, congestion and comparison bounds");
  common(paths);
  paths->add_option("--kind", cfg.kind, "inv or tree")->check(CLI::IsMember({"inv", "tree"}));

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--fast", cfg.fast, "restrict exhaustive checks to n <= 4");
  verify->add_option("--seed", cfg.seed, "seed for randomized sub-checks");
  verify->add_option("--out", cfg.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(exit_usage);
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (n > 0) cfg.n = n;
  cfg.transposition = !no_transposition;
  cfg.gap = !no_gap;
  try {
    if (!range.empty()) cfg.n_range = parse_range(range);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return run_command(cfg, std::cout, std::cerr);
}

}  // namespace biasperm
