#include "obp/cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "obp/asymptotics.hpp"
#include "obp/bessel.hpp"
#include "obp/densities.hpp"
#include "obp/io.hpp"
#include "obp/oracles.hpp"
#include "obp/sampling.hpp"
#include "obp/stats.hpp"

namespace obp::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kParse = 1;
constexpr int kDomain = 2;
constexpr int kPrecondition = 3;
constexpr int kCheckFailure = 4;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    out.push_back(v);
  }
  if (out.empty()) throw parse_error("empty numeric list");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_list(s)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OBP_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::string reason_code(const std::string& msg) {
  if (msg.find("interlac") != std::string::npos) return "interlacing_violation";
  if (msg.find("ordering") != std::string::npos) return "ordering_violation";
  if (msg.find("coincident") != std::string::npos) return "coincident_points";
  if (msg.find("degenerate") != std::string::npos) return "degenerate_labels";
  return "domain";
}

void emit_error(const char* kind, const std::string& msg) {
  json j{{"error", {{"kind", kind}, {"reason", reason_code(msg)}, {"detail", msg}}}};
  std::cout << j.dump() << "\n";
}

struct SamplerOpts {
  std::uint64_t seed = default_seed();
  int chains = 2;
  int burn_in = 500;
  int thinning = 10;
  std::string proposal = "gibbs_inverse_cdf";
  int nodes = 64;

  SamplerConfig config() const {
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.chains = chains;
    cfg.burn_in = burn_in;
    cfg.thinning = thinning;
    cfg.quadrature_nodes = nodes;
    if (proposal == "gibbs_inverse_cdf") {
      cfg.proposal = Proposal::gibbs_inverse_cdf;
    } else if (proposal == "slice") {
      cfg.proposal = Proposal::slice;
    } else if (proposal == "beta_mh") {
      cfg.proposal = Proposal::beta_mh;
    } else if (proposal == "dirichlet_roots") {
      cfg.proposal = Proposal::dirichlet_roots;
    } else {
      throw parse_error("unknown proposal: " + proposal);
    }
    return cfg;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (default: OBP_SEED env or 0)");
    cmd->add_option("--chains", chains, "parallel chains");
    cmd->add_option("--burn-in", burn_in, "Gibbs sweeps per corner step");
    cmd->add_option("--thinning", thinning, "sweeps between retained chain draws");
    cmd->add_option("--proposal", proposal, "gibbs_inverse_cdf|slice|beta_mh|dirichlet_roots");
    cmd->add_option("--nodes", nodes, "inverse-CDF tabulation nodes");
  }
};

void write_manifest(const std::string& out_path, const std::vector<std::string>& argv_copy,
                    std::uint64_t seed) {
  json j{{"tool", "obp"},
         {"version", io::kLibraryVersion},
         {"seed", seed},
         {"argv", argv_copy}};
  io::write_text_file(out_path + ".manifest.json", j.dump(2) + "\n");
}

struct DensityArgs {
  std::string kind;
  double theta = 1.0;
  std::string input;
  std::string a_inline, x_inline;
  bool neg_inf = false;
};

int cmd_density(const DensityArgs& args) {
  Theta theta(args.theta);
  BoundaryPolicy policy = args.neg_inf ? BoundaryPolicy::neg_inf : BoundaryPolicy::raise;
  json j;
  if (!args.input.empty()) j = json::parse(io::read_text_file(args.input));
  double value = 0.0;
  if (args.kind == "orbital") {
    value = log_orbital_density(io::interlacing_from_json(j), theta, policy);
  } else if (args.kind == "gbe") {
    value = log_gbe_density(io::tuple_from_json(j), theta);
  } else if (args.kind == "gbe-corners") {
    value = log_gbe_corners_density(io::interlacing_from_json(j), theta, policy);
  } else if (args.kind == "gibbs") {
    InterlacingArray tri = io::interlacing_from_json(j);
    if (!tri.has_top()) throw domain_error("gibbs density needs the conditioning level as top");
    InterlacingArray lower(tri.levels());
    value = log_theta_gibbs_conditional(lower, OrderedTuple::strict_from_file(tri.top()), theta,
                                        policy);
  } else if (args.kind == "kernel") {
    OrderedTuple a = OrderedTuple::strict(parse_list(args.a_inline));
    OrderedTuple x = OrderedTuple::strict(parse_list(args.x_inline));
    value = log_corner_kernel(a, x, theta, policy);
  } else {
    throw parse_error("unknown density kind: " + args.kind);
  }
  std::cout << io::format_double(value) << "\n";
  return kOk;
}

struct SampleArgs {
  std::string kind;
  double theta = 1.0;
  std::string a_inline;
  std::size_t m = 1;
  std::size_t draws = 1;
  std::string out;
  SamplerOpts opts;
};

int cmd_sample(const SampleArgs& args, const std::vector<std::string>& argv_copy) {
  Theta theta(args.theta);
  SamplerConfig cfg = args.opts.config();
  std::ostringstream csv;
  csv << "draw_id,level,index,value\n";
  auto emit_levels = [&](std::size_t d, const std::vector<std::vector<double>>& levels) {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      for (std::size_t i = 0; i < levels[k].size(); ++i) {
        csv << d << ',' << levels[k].size() << ',' << (i + 1) << ','
            << io::format_double(levels[k][i]) << '\n';
      }
    }
  };
  if (args.kind == "corner") {
    OrderedTuple a = OrderedTuple::strict(parse_list(args.a_inline));
    Rng rng = Rng(cfg.seed).split(1);
    for (std::size_t d = 0; d < args.draws; ++d) {
      OrderedTuple x = sample_corner_step(a, theta, cfg, rng);
      emit_levels(d, {x.values()});
    }
  } else if (args.kind == "orbital") {
    OrderedTuple a = OrderedTuple::strict(parse_list(args.a_inline));
    run_orbital_draws(a, args.m, theta, cfg, args.draws, emit_levels);
  } else if (args.kind == "orbital-uniform1") {
    OrderedTuple a = OrderedTuple::strict(parse_list(args.a_inline));
    Rng rng = Rng(cfg.seed).split(1);
    for (std::size_t d = 0; d < args.draws; ++d) {
      InterlacingArray tri = sample_orbital_levels_uniform_theta1(a, args.m, rng);
      emit_levels(d, tri.levels());
    }
  } else if (args.kind == "gbe") {
    Rng rng = Rng(cfg.seed).split(1);
    if (args.m == 1) {
      for (std::size_t d = 0; d < args.draws; ++d) {
        emit_levels(d, {{rng.gaussian() / std::sqrt(theta.value)}});
      }
    } else {
      GbeChain chain(args.m, theta, cfg, rng);
      for (std::size_t d = 0; d < args.draws; ++d) emit_levels(d, {chain.next()});
    }
  } else if (args.kind == "gbe-tridiag") {
    Rng rng = Rng(cfg.seed).split(1);
    for (std::size_t d = 0; d < args.draws; ++d) {
      emit_levels(d, {sample_gbe_tridiagonal(args.m, theta, rng).values()});
    }
  } else if (args.kind == "gbe-corners") {
    run_gbe_corners_draws(args.m, theta, cfg, args.draws, emit_levels);
  } else {
    throw parse_error("unknown sample kind: " + args.kind);
  }
  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    io::write_text_file(args.out, csv.str());
    write_manifest(args.out, argv_copy, cfg.seed);
  }
  return kOk;
}

struct BesselArgs {
  std::string method;
  std::string a_inline;
  std::string y_inline;
  double theta = 1.0;
  std::size_t draws = 20000;
  std::string check;  // comma-separated list of methods to cross-check
  double abscissa = std::numeric_limits<double>::quiet_NaN();
  double truncation = std::numeric_limits<double>::quiet_NaN();
  SamplerOpts opts;
};

struct BesselValue {
  double value = 0.0;
  double stderror = 0.0;  // 0 for deterministic methods
};

BesselValue eval_bessel(const std::string& method, const OrderedTuple& a,
                        const std::vector<double>& y, Theta theta, const BesselArgs& args) {
  if (method == "oracle") {
    std::vector<std::complex<double>> yy(a.size(), 0.0);
    for (std::size_t i = 0; i < y.size() && i < a.size(); ++i) yy[i] = y[i];
    return {bessel::quadrature_small(a, yy, theta).real(), 0.0};
  }
  if (method == "mc") {
    std::vector<std::complex<double>> yy(y.begin(), y.end());
    MCEstimate est = bessel::mc(a, yy, theta, args.opts.config(), args.draws);
    return {est.mean.real(), est.stderror};
  }
  if (method == "contour") {
    if (y.size() != 1) throw precondition_error("contour method takes a single y");
    bessel::ContourSpec spec;
    spec.abscissa = args.abscissa;
    spec.truncation = args.truncation;
    auto res = bessel::contour_m1(a, y[0], theta, spec);
    return {res.value.real(), 0.0};
  }
  if (method == "steepest") {
    if (y.size() != 1) throw precondition_error("steepest method takes a single y");
    auto [b, shift] = bessel::recentre_labels(a);
    double sn = std::sqrt(static_cast<double>(a.size()));
    // steepest evaluates B(y/sqrt(N)); compensate the recentering shift.
    auto res = lab::bessel_steepest_m1(b, y[0] * sn, theta);
    return {std::exp(res.log_value + shift * y[0]), 0.0};
  }
  if (method == "theta0") {
    std::vector<std::complex<double>> aa(a.values().begin(), a.values().end());
    std::vector<std::complex<double>> yy(aa.size(), 0.0);
    for (std::size_t i = 0; i < y.size() && i < aa.size(); ++i) yy[i] = y[i];
    return {bessel::theta0(aa, yy).real(), 0.0};
  }
  throw parse_error("unknown bessel method: " + method);
}

int cmd_bessel(const BesselArgs& args) {
  OrderedTuple a = OrderedTuple::strict(parse_list(args.a_inline));
  std::vector<double> y = parse_list(args.y_inline);
  Theta theta(args.theta > 0.0 ? args.theta : 1.0);
  if (args.method == "theta0" && args.theta != 0.0) {
    // theta0 is its own closed form; the parameter is ignored by the formula.
  }
  if (!args.check.empty()) {
    std::stringstream ss(args.check);
    std::string item;
    std::vector<std::pair<std::string, BesselValue>> values;
    while (std::getline(ss, item, ',')) {
      values.emplace_back(item, eval_bessel(item, a, y, theta, args));
    }
    if (values.size() < 2) throw parse_error("--check needs at least two methods");
    bool ok = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::cout << values[i].first << " " << io::format_double(values[i].second.value);
      if (values[i].second.stderror > 0.0) {
        std::cout << " stderr " << io::format_double(values[i].second.stderror);
      }
      std::cout << "\n";
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      double delta = std::abs(values[i].second.value - values[0].second.value);
      double se = std::hypot(values[i].second.stderror, values[0].second.stderror);
      double tol = (se > 0.0) ? 3.0 * se
                              : 1e-6 * std::max(std::abs(values[0].second.value), 1.0);
      std::cout << "delta:" << values[0].first << "," << values[i].first << " "
                << io::format_double(delta) << " tol " << io::format_double(tol) << "\n";
      if (!(delta <= tol)) ok = false;
    }
    return ok ? kOk : kCheckFailure;
  }
  BesselValue v = eval_bessel(args.method, a, y, theta, args);
  std::cout << io::format_double(v.value);
  if (v.stderror > 0.0) std::cout << " stderr " << io::format_double(v.stderror);
  std::cout << "\n";
  return kOk;
}

lab::RegularSequenceSpec measure_from_cli(const std::string& name) {
  if (name == "two_atom") return lab::RegularSequenceSpec::two_atom();
  if (name == "uniform") return lab::RegularSequenceSpec::uniform();
  if (name.rfind("point:", 0) == 0) {
    return lab::RegularSequenceSpec::point_mass(std::stod(name.substr(6)));
  }
  lab::RegularSequenceSpec spec;
  spec.measure = io::measure_from_json(json::parse(io::read_text_file(name)));
  return spec;
}

void write_report(const lab::ExperimentReport& rep, const std::string& out,
                  const std::vector<std::string>& argv_copy, std::uint64_t seed) {
  if (out.empty()) {
    std::cout << io::report_to_json(rep).dump(2) << "\n";
    return;
  }
  io::write_text_file(out, io::report_to_json(rep).dump(2) + "\n");
  std::string csv_path = out + ".csv";
  io::write_text_file(csv_path, io::report_to_csv(rep));
  write_manifest(out, argv_copy, seed);
  std::cerr << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " ("
            << rep.runtime_seconds << " s)\n";
}

struct VerifyArgs {
  std::string subcommand;
  std::string measure = "two_atom";
  std::string sizes = "50,100,200,400";
  std::string y_inline = "1.0";
  double theta = 1.0;
  double tol = 0.02;
  std::size_t n = 200;
  std::size_t m = 2;
  std::size_t draws = 10000;
  bool null_test = false;
  double y1 = 1.0, y2 = 0.5;
  std::string a_inline;
  std::string out;
  SamplerOpts opts;
};

int cmd_verify(const VerifyArgs& args, const std::vector<std::string>& argv_copy) {
  Theta theta(args.theta);
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (args.subcommand == "normalization") {
    OrderedTuple a = args.a_inline.empty()
                         ? (args.n == 2 ? OrderedTuple::strict({1.0, 0.0})
                                        : OrderedTuple::strict({2.0, 1.0, 0.0}))
                         : OrderedTuple::strict(parse_list(args.a_inline));
    double tol = a.size() == 2 ? 1e-6 : 1e-3;
    double mass = oracles::orbital_unnormalized_mass(a, theta, tol * 0.05);
    double closed = std::exp(log_orbital_normalization(a, theta));
    double delta = std::abs(mass / closed - 1.0);
    lab::ExperimentReport rep;
    rep.name = "normalization";
    rep.seed = 0;
    rep.pass = delta < tol;
    rep.rows.push_back({std::to_string(a.size()), mass, closed, delta, 0.0});
    rep.runtime_seconds = elapsed();
    write_report(rep, args.out, argv_copy, 0);
    return rep.pass ? kOk : kCheckFailure;
  }

  if (args.subcommand == "pieri") {
    OrderedTuple a = args.a_inline.empty()
                         ? (args.n == 2 ? OrderedTuple::strict({1.0, 0.0})
                                        : OrderedTuple::strict({2.0, 1.0, 0.0}))
                         : OrderedTuple::strict(parse_list(args.a_inline));
    std::size_t mc_draws = (a.size() <= 3 && args.draws == 10000) ? 0 : args.draws;
    auto res = bessel::pieri_check_m1(a, args.y1, args.y2, theta, args.opts.config(), mc_draws);
    double delta = std::abs(res.lhs - res.rhs);
    double tol = (res.rhs_stderr > 0.0) ? 3.0 * res.rhs_stderr
                                        : 1e-6 * std::max(std::abs(res.lhs), 1.0);
    lab::ExperimentReport rep;
    rep.name = "pieri-m1";
    rep.seed = args.opts.seed;
    rep.pass = delta <= tol;
    rep.rows.push_back({"pieri", res.lhs, res.rhs, delta, res.rhs_stderr});
    rep.runtime_seconds = elapsed();
    write_report(rep, args.out, argv_copy, args.opts.seed);
    return rep.pass ? kOk : kCheckFailure;
  }

  if (args.subcommand == "asymptotics") {
    lab::RegularSequenceSpec spec = measure_from_cli(args.measure);
    spec.sizes = parse_sizes(args.sizes);
    std::vector<double> y = parse_list(args.y_inline);
    lab::ExperimentReport rep = lab::verify_bessel_asymptotics(
        spec, y, theta, args.opts.config(), args.draws, args.tol);
    rep.runtime_seconds = elapsed();
    write_report(rep, args.out, argv_copy, args.opts.seed);
    return rep.pass ? kOk : kCheckFailure;
  }

  if (args.subcommand == "universality") {
    lab::RegularSequenceSpec spec = measure_from_cli(args.measure);
    lab::UniversalityConfig ucfg;
    ucfg.n = args.n;
    ucfg.m = args.m;
    ucfg.draws = args.draws;
    ucfg.null_test = args.null_test;
    lab::ExperimentReport rep = lab::verify_universality(spec, theta, args.opts.config(), ucfg);
    rep.runtime_seconds = elapsed();
    write_report(rep, args.out, argv_copy, args.opts.seed);
    return rep.pass ? kOk : kCheckFailure;
  }

  throw parse_error("unknown verify subcommand: " + args.subcommand);
}

int dispatch(const std::vector<std::string>& argv_copy);

int cmd_replay(const std::string& manifest_path) {
  json j = json::parse(io::read_text_file(manifest_path));
  std::vector<std::string> argv_copy = j.at("argv").get<std::vector<std::string>>();
  if (!argv_copy.empty() && argv_copy[0] == "replay") {
    throw parse_error("manifest encodes a replay command");
  }
  return dispatch(argv_copy);
}

int dispatch(const std::vector<std::string>& argv_copy) {
  CLI::App app{"orbital beta process laboratory"};
  app.require_subcommand(1);

  DensityArgs density;
  auto* cd = app.add_subcommand("density", "evaluate log densities");
  cd->add_option("--kind", density.kind, "orbital|gbe|gbe-corners|gibbs|kernel")->required();
  cd->add_option("--theta", density.theta)->required();
  cd->add_option("--input", density.input, "JSON input file");
  cd->add_option("--a", density.a_inline, "inline upper level (kernel)");
  cd->add_option("--x", density.x_inline, "inline lower level (kernel)");
  cd->add_flag("--neginf", density.neg_inf, "return -inf instead of a domain error");

  SampleArgs sample;
  auto* cs = app.add_subcommand("sample", "draw from the samplers");
  cs->add_option("--kind", sample.kind,
                 "corner|orbital|orbital-uniform1|gbe|gbe-tridiag|gbe-corners")
      ->required();
  cs->add_option("--theta", sample.theta)->required();
  cs->add_option("--a", sample.a_inline, "top level for corner/orbital kinds");
  cs->add_option("--m", sample.m, "levels kept / GbE rank");
  cs->add_option("--draws", sample.draws);
  cs->add_option("--out", sample.out, "CSV output path");
  sample.opts.attach(cs);

  BesselArgs bes;
  auto* cb = app.add_subcommand("bessel", "evaluate multivariate Bessel functions");
  cb->add_option("--method", bes.method, "oracle|mc|contour|steepest|theta0");
  cb->add_option("--a", bes.a_inline)->required();
  cb->add_option("--y", bes.y_inline)->required();
  cb->add_option("--theta", bes.theta)->required();
  cb->add_option("--draws", bes.draws);
  cb->add_option("--check", bes.check, "comma-separated methods to cross-check");
  cb->add_option("--abscissa", bes.abscissa, "contour line abscissa M");
  cb->add_option("--truncation", bes.truncation, "contour truncation T");
  bes.opts.attach(cb);

  VerifyArgs verify;
  auto* cv = app.add_subcommand("verify", "run verification experiments");
  cv->add_option("subcommand", verify.subcommand,
                 "normalization|pieri|asymptotics|universality")
      ->required();
  cv->add_option("--measure", verify.measure, "two_atom|uniform|point:<c>|<file.json>");
  cv->add_option("--sizes", verify.sizes);
  cv->add_option("--y", verify.y_inline);
  cv->add_option("--theta", verify.theta);
  cv->add_option("--tol", verify.tol);
  cv->add_option("--N", verify.n);
  cv->add_option("--m", verify.m);
  cv->add_option("--draws", verify.draws);
  cv->add_flag("--null", verify.null_test, "null test: GbE tops");
  cv->add_option("--y1", verify.y1, "pieri: larger argument");
  cv->add_option("--y2", verify.y2, "pieri: smaller argument");
  cv->add_option("--a", verify.a_inline);
  cv->add_option("--out", verify.out, "report JSON path (CSV written alongside)");
  verify.opts.attach(cv);

  std::string manifest_path;
  auto* cr = app.add_subcommand("replay", "re-run a command from its manifest");
  cr->add_option("manifest", manifest_path)->required();

  std::vector<const char*> argv_c;
  argv_c.push_back("obp");
  for (const auto& s : argv_copy) argv_c.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv_c.size()), argv_c.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  if (cd->parsed()) return cmd_density(density);
  if (cs->parsed()) return cmd_sample(sample, argv_copy);
  if (cb->parsed()) return cmd_bessel(bes);
  if (cv->parsed()) return cmd_verify(verify, argv_copy);
  if (cr->parsed()) return cmd_replay(manifest_path);
  return kParse;
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> argv_copy;
  for (int i = 1; i < argc; ++i) argv_copy.emplace_back(argv[i]);
  try {
    return dispatch(argv_copy);
  } catch (const parse_error& e) {
    emit_error("parse", e.what());
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    emit_error("parse", e.what());
    return kParse;
  } catch (const domain_error& e) {
    emit_error("domain", e.what());
    return kDomain;
  } catch (const precondition_error& e) {
    emit_error("precondition", e.what());
    return kPrecondition;
  } catch (const numeric_error& e) {
    emit_error("numeric", e.what());
    return kPrecondition;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kParse;
  }
}

}  // namespace obp::cli
