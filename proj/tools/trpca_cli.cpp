// trpca command-line front end. Talks to the library through the C API only.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trpca/trpca.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Library failure carrying the message from trpca_last_error().
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(int status, const char* what) {
  if (status != TRPCA_OK) {
    throw RuntimeFailure(std::string(what) + ": " + trpca_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using TensorPtr = std::unique_ptr<trpca_tensor, Deleter<trpca_tensor, trpca_tensor_free>>;
using TransformPtr =
    std::unique_ptr<trpca_transform, Deleter<trpca_transform, trpca_transform_free>>;
using SolutionPtr =
    std::unique_ptr<trpca_solution, Deleter<trpca_solution, trpca_solution_free>>;
using ImagePtr = std::unique_ptr<trpca_image, Deleter<trpca_image, trpca_image_free>>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// "--max-iters" -> "TRPCA_MAX_ITERS"
std::string env_name(const std::string& flag) {
  std::string out = "TRPCA_";
  for (char c : flag.substr(flag.find_first_not_of('-'))) {
    out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  }
  return out;
}

void attach_env(CLI::App* app) {
  for (CLI::Option* opt : app->get_options()) {
    const std::string l = opt->get_single_name();
    if (opt->get_lnames().empty() || l == "help" || l == "version") continue;
    opt->envname(env_name(l));
  }
}

// Every option of the subcommand with its effective value, defaults included.
// Returned as both a JSON object and a replayable argument list.
void resolve_options(const CLI::App* sub, json& config, std::vector<std::string>& argv) {
  argv.push_back(sub->get_name());
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    const std::string flag = "--" + name;
    if (opt->get_expected_max() == 0) {
      const bool on = opt->count() > 0;
      config[name] = on;
      if (on) argv.push_back(flag);
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      value = opt->as<std::string>();
    } else if (!opt->get_default_str().empty()) {
      value = opt->get_default_str();
    } else {
      config[name] = nullptr;
      continue;
    }
    config[name] = value;
    argv.push_back(flag);
    argv.push_back(value);
  }
}

struct RunContext {
  const CLI::App* sub = nullptr;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void write_manifest(const RunContext& ctx, const std::string& primary_output,
                    std::size_t threads) {
  json config;
  std::vector<std::string> argv;
  resolve_options(ctx.sub, config, argv);
  argv.insert(argv.begin(), {"--threads", std::to_string(threads)});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  json m;
  m["command"] = ctx.sub->get_name();
  m["config"] = config;
  m["seed"] = ctx.has_seed ? json(ctx.seed) : json(nullptr);
  m["threads"] = threads;
  m["artifact_version"] = trpca_version();
  m["tensor_format_version"] = trpca_tensor_format_version();
  m["wall_seconds"] = secs;
  m["argv"] = argv;
  const std::string path = primary_output + ".manifest.json";
  std::ofstream out(path);
  out << m.dump(2) << '\n';
  if (!out) throw RuntimeFailure("cannot write manifest " + path);
}

trpca_solver_config solver_config(double lambda, double mu0, double rho,
                                  double mu_max, double tol, std::size_t max_iters) {
  trpca_solver_config cfg;
  trpca_solver_config_default(&cfg);
  cfg.lambda = lambda;
  cfg.mu0 = mu0;
  cfg.rho = rho;
  cfg.mu_max = mu_max;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  return cfg;
}

struct SolverFlags {
  double lambda = 0.0;
  double mu0 = 1e-3;
  double rho = 1.1;
  double mu_max = 1e10;
  double tol = 1e-8;
  std::size_t max_iters = 500;

  void add(CLI::App* sub) {
    sub->add_option("--lambda", lambda, "Sparse weight; 0 selects 1/sqrt(max(n1,n2) ell)")
        ->capture_default_str();
    sub->add_option("--mu0", mu0, "Initial penalty")->capture_default_str();
    sub->add_option("--rho", rho, "Penalty growth factor")->capture_default_str();
    sub->add_option("--mu-max", mu_max, "Penalty cap")->capture_default_str();
    sub->add_option("--tol", tol, "Stopping tolerance")->capture_default_str();
    sub->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
  }
  trpca_solver_config config() const {
    return solver_config(lambda, mu0, rho, mu_max, tol, max_iters);
  }
};

TransformPtr make_transform(const std::string& spec, std::size_t n3) {
  trpca_transform* t = nullptr;
  check(trpca_transform_parse(spec.c_str(), n3, &t), "transform");
  return TransformPtr(t);
}

TensorPtr load_tensor(const std::string& path) {
  trpca_tensor* t = nullptr;
  check(trpca_tensor_load(path.c_str(), &t), "load tensor");
  return TensorPtr(t);
}

void save_tensor(const trpca_tensor* t, const std::string& path) {
  if (ends_with(path, ".csv")) {
    check(trpca_tensor_save_csv(t, path.c_str()), "save tensor");
  } else {
    check(trpca_tensor_save(t, path.c_str()), "save tensor");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << text;
    if (!out) throw RuntimeFailure("cannot write " + out_path);
  }
}

int run(std::vector<std::string> args);

int run(std::vector<std::string> args) {
  CLI::App app{"Tensor robust PCA under invertible linear transforms", "trpca"};
  app.set_version_flag("--version",
                       std::string("trpca ") + trpca_version() + " (tensor format " +
                           std::to_string(trpca_tensor_format_version()) + ")");
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads for per-slice work")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));

  RunContext ctx;
  std::function<void()> action;

  // solve
  auto* solve = app.add_subcommand("solve", "Decompose a tensor file into low-rank + sparse");
  std::string in_path, transform = "dct", out_l, out_s, trace;
  SolverFlags sf;
  solve->add_option("--input", in_path, "Tensor file (binary or .csv)")->required();
  solve->add_option("--transform", transform, "dct | hadamard | identity | rom:<seed> | file:<csv>")
      ->capture_default_str();
  sf.add(solve);
  solve->add_option("--out-lowrank", out_l, "Output file for the low-rank part")->required();
  solve->add_option("--out-sparse", out_s, "Output file for the sparse part")->required();
  solve->add_option("--trace", trace, "Per-iteration CSV");
  solve->callback([&] {
    action = [&] {
      const TensorPtr x = load_tensor(in_path);
      size_t dims[3];
      trpca_tensor_dims(x.get(), dims);
      const TransformPtr t = make_transform(transform, dims[2]);
      const trpca_solver_config cfg = sf.config();
      trpca_solution* raw = nullptr;
      check(trpca_solve(x.get(), t.get(), &cfg, &raw), "solve");
      const SolutionPtr sol(raw);
      trpca_tensor *l = nullptr, *s = nullptr;
      check(trpca_solution_low_rank(sol.get(), &l), "solve");
      const TensorPtr lp(l);
      check(trpca_solution_sparse(sol.get(), &s), "solve");
      const TensorPtr sp(s);
      save_tensor(lp.get(), out_l);
      save_tensor(sp.get(), out_s);
      if (!trace.empty()) {
        check(trpca_solution_write_trace_csv(sol.get(), trace.c_str()), "trace");
      }
      trpca_solution_info info;
      trpca_solution_info_get(sol.get(), &info);
      std::cout << "iterations," << info.iterations << "\nconverged,"
                << (info.converged ? 1 : 0) << "\nlambda," << fmt(info.lambda) << '\n';
      write_manifest(ctx, out_l, threads);
    };
  });

  // synth-recover
  auto* synth = app.add_subcommand("synth-recover", "One synthetic recovery trial");
  std::size_t n = 0, n2 = 0, n3 = 0, r = 0, m = 0;
  std::uint64_t seed = 0;
  bool coherent = false;
  std::string synth_out;
  SolverFlags synth_sf;
  synth->add_option("--n", n, "Rows (and columns unless --n2 is given)")->required();
  synth->add_option("--n2", n2, "Columns; 0 means same as --n")->capture_default_str();
  synth->add_option("--n3", n3, "Tube length")->required();
  synth->add_option("--r", r, "Tubal rank of the low-rank part")->required();
  synth->add_option("--m", m, "Number of sparse corruptions")->required();
  synth->add_option("--transform", transform, "Transform spec")->capture_default_str();
  synth->add_option("--seed", seed, "Master seed")->required();
  synth->add_flag("--coherent-signs", coherent, "Sparse signs follow sgn(L0)");
  synth_sf.add(synth);
  synth->add_option("--out", synth_out, "Also write the report CSV here");
  synth->callback([&] {
    action = [&] {
      ctx.seed = seed;
      ctx.has_seed = true;
      const trpca_trial_config cfg{n, n2 == 0 ? n : n2, n3, r, m,
                                   coherent ? TRPCA_SIGNS_COHERENT : TRPCA_SIGNS_RANDOM,
                                   transform.c_str(), seed};
      const trpca_solver_config scfg = synth_sf.config();
      trpca_trial_report rep;
      check(trpca_run_recovery_trial(&cfg, &scfg, &rep), "synth-recover");
      std::ostringstream os;
      os << "n1,n2,n3,r,m,transform,seed,rank_recovered,support_recovered,"
            "rel_err_lowrank,rel_err_sparse,iterations,converged,success,wall_seconds\n"
         << rep.n1 << ',' << rep.n2 << ',' << rep.n3 << ',' << rep.r << ',' << rep.m << ','
         << transform << ',' << seed << ',' << rep.recovered_rank << ','
         << rep.recovered_support << ',' << fmt(rep.low_rank_rel_error) << ','
         << fmt(rep.sparse_rel_error) << ',' << rep.iterations << ',' << rep.converged << ','
         << rep.success << ',' << fmt(rep.wall_seconds) << '\n';
      emit(os.str(), synth_out);
      if (!synth_out.empty()) write_manifest(ctx, synth_out, threads);
    };
  });

  // phase-grid
  auto* grid = app.add_subcommand("phase-grid", "Success fractions over (r/n, rho_s)");
  std::string rank_ratios, sparsity_ratios, grid_out;
  std::size_t trials = 10, grid_n = 30, grid_n3 = 15;
  SolverFlags grid_sf;
  grid->add_option("--rank-ratios", rank_ratios, "start:step:stop or a,b,c")->required();
  grid->add_option("--sparsity-ratios", sparsity_ratios, "start:step:stop or a,b,c")
      ->required();
  grid->add_option("--trials", trials, "Trials per cell")->capture_default_str();
  grid->add_option("--n", grid_n, "Rows and columns")->capture_default_str();
  grid->add_option("--n3", grid_n3, "Tube length")->capture_default_str();
  grid->add_option("--transform", transform, "Transform spec")->capture_default_str();
  grid->add_option("--seed", seed, "Master seed")->capture_default_str();
  grid->add_flag("--coherent-signs", coherent, "Sparse signs follow sgn(L0)");
  grid_sf.add(grid);
  grid->add_option("--out", grid_out, "CSV matrix of success fractions")->required();
  grid->callback([&] {
    action = [&] {
      ctx.seed = seed;
      ctx.has_seed = true;
      auto parse = [](const std::string& text) {
        size_t count = 0;
        check(trpca_parse_ratio_list(text.c_str(), nullptr, 0, &count), "ratio list");
        std::vector<double> v(count);
        check(trpca_parse_ratio_list(text.c_str(), v.data(), v.size(), &count), "ratio list");
        return v;
      };
      const std::vector<double> rr = parse(rank_ratios), sr = parse(sparsity_ratios);
      const trpca_trial_config base{grid_n, grid_n, grid_n3, 1, 0,
                                    coherent ? TRPCA_SIGNS_COHERENT : TRPCA_SIGNS_RANDOM,
                                    transform.c_str(), seed};
      const trpca_solver_config scfg = grid_sf.config();
      std::vector<double> success(rr.size() * sr.size());
      check(trpca_run_phase_grid(&base, rr.data(), rr.size(), sr.data(), sr.size(), trials,
                                 &scfg, success.data()),
            "phase-grid");
      std::ostringstream os;
      os << "rank_ratio";
      for (double s : sr) os << ',' << fmt(s);
      os << '\n';
      for (std::size_t a = 0; a < rr.size(); ++a) {
        os << fmt(rr[a]);
        for (std::size_t b = 0; b < sr.size(); ++b) os << ',' << fmt(success[a * sr.size() + b]);
        os << '\n';
      }
      emit(os.str(), grid_out);
      write_manifest(ctx, grid_out, threads);
    };
  });

  // denoise-image
  auto* den = app.add_subcommand("denoise-image", "Corrupt a PPM image and recover it");
  std::string img_in, img_out, report, corrupted_out;
  double fraction = 0.1;
  SolverFlags den_sf;
  den->add_option("--input", img_in, "Binary PPM (P6) image")->required();
  den->add_option("--fraction", fraction, "Fraction of pixels to corrupt")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  den->add_option("--seed", seed, "Master seed")->required();
  den->add_option("--transform", transform, "Transform spec (n3 = 3)")->capture_default_str();
  den_sf.add(den);
  den->add_option("--out", img_out, "Recovered image (PPM)")->required();
  den->add_option("--corrupted-out", corrupted_out, "Also save the corrupted image");
  den->add_option("--report", report, "Report CSV");
  den->callback([&] {
    action = [&] {
      ctx.seed = seed;
      ctx.has_seed = true;
      const auto t0 = std::chrono::steady_clock::now();
      trpca_image* raw = nullptr;
      check(trpca_image_load(img_in.c_str(), &raw), "load image");
      const ImagePtr clean(raw);
      std::size_t pixels = 0;
      check(trpca_image_corrupt(clean.get(), fraction, seed, &raw, &pixels), "corrupt");
      const ImagePtr bad(raw);
      const TransformPtr t = make_transform(transform, 3);
      const trpca_solver_config scfg = den_sf.config();
      trpca_solution* sraw = nullptr;
      check(trpca_image_denoise(bad.get(), t.get(), &scfg, &raw, &sraw), "denoise");
      const ImagePtr rec(raw);
      const SolutionPtr sol(sraw);
      double before = 0, after = 0;
      check(trpca_image_psnr(bad.get(), clean.get(), &before), "psnr");
      check(trpca_image_psnr(rec.get(), clean.get(), &after), "psnr");
      check(trpca_image_save(rec.get(), img_out.c_str()), "save image");
      if (!corrupted_out.empty()) {
        check(trpca_image_save(bad.get(), corrupted_out.c_str()), "save image");
      }
      trpca_solution_info info;
      trpca_solution_info_get(sol.get(), &info);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream os;
      os << "image,psnr_corrupted_db,psnr_recovered_db,iterations,wall_seconds\n"
         << img_in << ',' << fmt(before) << ',' << fmt(after) << ',' << info.iterations << ','
         << fmt(secs) << '\n';
      emit(os.str(), report);
      write_manifest(ctx, img_out, threads);
    };
  });

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Tubal rank, norms and incoherence of a tensor");
  std::string diag_out;
  double rank_tol = 1e-8;
  diag->add_option("--input", in_path, "Tensor file (binary or .csv)")->required();
  diag->add_option("--transform", transform, "Transform spec")->capture_default_str();
  diag->add_option("--rank-tol", rank_tol, "Relative tubal-rank tolerance")
      ->capture_default_str();
  diag->add_option("--out", diag_out, "Also write the report CSV here");
  diag->callback([&] {
    action = [&] {
      const TensorPtr a = load_tensor(in_path);
      size_t dims[3];
      trpca_tensor_dims(a.get(), dims);
      const TransformPtr t = make_transform(transform, dims[2]);
      std::size_t rank = 0;
      double spec = 0, nuc = 0;
      check(trpca_tubal_rank(a.get(), t.get(), rank_tol, &rank), "tubal rank");
      check(trpca_spectral_norm(a.get(), t.get(), &spec), "spectral norm");
      check(trpca_nuclear_norm(a.get(), t.get(), &nuc), "nuclear norm");
      std::ostringstream os;
      os << "n1,n2,n3,transform,ell,tubal_rank,spectral_norm,nuclear_norm,mu1,mu2,mu3,mu\n"
         << dims[0] << ',' << dims[1] << ',' << dims[2] << ',' << transform << ','
         << fmt(trpca_transform_ell(t.get())) << ',' << rank << ',' << fmt(spec) << ','
         << fmt(nuc);
      if (rank > 0) {
        trpca_incoherence_report rep;
        check(trpca_incoherence(a.get(), t.get(), &rep), "incoherence");
        os << ',' << fmt(rep.mu1) << ',' << fmt(rep.mu2) << ',' << fmt(rep.mu3) << ','
           << fmt(rep.mu) << '\n';
      } else {
        os << ",,,,\n";
      }
      emit(os.str(), diag_out);
      if (!diag_out.empty()) write_manifest(ctx, diag_out, threads);
    };
  });

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  std::string manifest_path;
  replay->add_option("manifest", manifest_path, "A *.manifest.json file")->required();
  int replay_status = kExitOk;
  replay->callback([&] {
    action = [&] {
      std::ifstream in(manifest_path);
      if (!in) throw RuntimeFailure("cannot open manifest " + manifest_path);
      json m;
      try {
        in >> m;
      } catch (const json::exception& e) {
        throw RuntimeFailure("malformed manifest " + manifest_path + ": " + e.what());
      }
      if (!m.contains("argv") || !m["argv"].is_array()) {
        throw RuntimeFailure("manifest " + manifest_path + " has no argv");
      }
      replay_status = run(m["argv"].get<std::vector<std::string>>());
    };
  });

  for (CLI::App* sub : app.get_subcommands({})) attach_env(sub);
  attach_env(&app);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << (app.get_subcommands().empty() ? app.help()
                                                 : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    std::cout << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n"
              << (app.get_subcommands().empty() ? app.help()
                                                 : app.get_subcommands().front()->help());
    return kExitUsage;
  }

  ctx.sub = app.get_subcommands().front();
  trpca_set_threads(threads);
  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return replay_status;
}

}  // namespace

int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}
