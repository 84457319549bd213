// cstar_frames: command line front end. Subcommands read JSON documents,
// print CSV tables on stdout and write JSON results to stdout or --out.
//
// Exit codes: 0 pass / success, 1 certified fail, 2 inconclusive,
// 64 usage error, 65 invalid input document, 66 unreadable input file.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cstar/certifier.hpp"
#include "cstar/counterexample.hpp"
#include "cstar/io.hpp"
#include "cstar/seminorm.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

/// 12 significant digits: enough to read, stable across platforms.
std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

int exit_code(cstar::Verdict v) {
  switch (v) {
    case cstar::Verdict::Pass: return 0;
    case cstar::Verdict::Fail: return kExitFail;
    case cstar::Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int worst(int a, int b) {
  if (a == kExitFail || b == kExitFail) return kExitFail;
  return std::max(a, b);
}

cstar::Frame load_frame(const std::string& path, double tol) {
  const auto doc = cstar::io::parse_frame(read_file(path));
  return cstar::Frame::build(doc.family.vectors, doc.scope, tol);
}

struct Options {
  std::string frame_file;
  std::string sample_file;
  std::string gens_file;
  std::string spec_file;
  std::string operator_file;
  std::string config_file;
  std::string out_file;
  std::string csv_file;
  std::string condition = "all";
  std::vector<double> eps;
  std::optional<std::size_t> rank_budget;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 64;
  std::optional<std::size_t> prefix;
  int trunc = 8;
  int dim = 0;
  std::string setting_file;
};

cstar::io::RunConfig load_config(const Options& o) {
  cstar::io::RunConfig config;
  if (!o.config_file.empty()) {
    config = cstar::io::parse_run_config(read_file(o.config_file));
    // Relative paths in a config are relative to the config file.
    const std::filesystem::path base = std::filesystem::path(o.config_file).parent_path();
    for (auto& [key, value] : config.paths)
      if (std::filesystem::path(value).is_relative()) value = (base / value).string();
  }
  if (o.seed) config.seed = *o.seed;
  return config;
}

std::string path_or(const std::string& flag, const cstar::io::RunConfig& config, const char* key) {
  if (!flag.empty()) return flag;
  const auto it = config.paths.find(key);
  return it == config.paths.end() ? std::string() : it->second;
}

int cmd_frame_bounds(const Options& o) {
  const cstar::Frame frame = load_frame(o.frame_file, cstar::kDefaultTolerance);
  const auto b = frame.bounds();
  std::cout << "lower,upper\n" << num(b.lower) << "," << num(b.upper) << "\n";
  return 0;
}

int cmd_dual(const Options& o) {
  const auto doc = cstar::io::parse_frame(read_file(o.frame_file));
  const cstar::Frame frame = cstar::Frame::build(doc.family.vectors, doc.scope);
  cstar::io::FrameDocument dual{{doc.family.shape, doc.family.dim, frame.dual()}, doc.scope};
  write_output(o.out_file, cstar::io::serialize(dual));
  return 0;
}

int cmd_reconstruct(const Options& o) {
  const cstar::Frame frame = load_frame(o.frame_file, cstar::kDefaultTolerance);
  const cstar::SampleSet sample = cstar::io::parse_sample(read_file(o.sample_file));
  std::cout << "point,n,tail\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (o.prefix) {
      std::cout << i << "," << *o.prefix << "," << num(frame.reconstruction_tail(sample.points[i], *o.prefix)) << "\n";
      continue;
    }
    const auto profile = frame.tail_profile(sample.points[i]);
    for (std::size_t n = 0; n < profile.size(); ++n) std::cout << i << "," << n << "," << num(profile[n]) << "\n";
  }
  return 0;
}

int cmd_seminorm(const Options& o) {
  const auto spec = cstar::io::parse_seminorm_spec(read_file(o.spec_file));
  const cstar::SampleSet sample = cstar::io::parse_sample(read_file(o.sample_file));
  const auto report = cstar::admissible_check(spec.spec.system, sample);
  std::cout << "point,seminorm,norm\n";
  for (std::size_t i = 0; i < sample.size(); ++i)
    std::cout << i << "," << num(cstar::seminorm(spec.spec, sample.points[i])) << ","
              << num(cstar::norm(sample.points[i])) << "\n";
  if (!report) std::cerr << "warning: system is not admissible: " << report.reason << "\n";
  return 0;
}

int cmd_net(const Options& o) {
  const auto spec = cstar::io::parse_seminorm_spec(read_file(o.spec_file));
  const cstar::SampleSet sample = cstar::io::parse_sample(read_file(o.sample_file));
  const double eps = o.eps.empty() ? 0.25 : o.eps.front();
  const auto net = cstar::epsilon_net(sample, spec.spec, eps);
  std::cout << "net_index\n";
  for (std::size_t i : net) std::cout << i << "\n";
  return 0;
}

std::string write_csv_residuals(const cstar::Certificate& c) {
  std::ostringstream os;
  os << "point,residual\n";
  for (std::size_t i = 0; i < c.residuals.size(); ++i) os << i << "," << num(c.residuals[i]) << "\n";
  return os.str();
}

int cmd_precompact(const Options& o) {
  const cstar::io::RunConfig config = load_config(o);
  const double tol = config.tolerances.residual;
  const std::vector<double> grid = o.eps.empty() ? config.eps_grid : o.eps;
  const std::string frame_file = path_or(o.frame_file, config, "frame");
  const std::string gens_file = path_or(o.gens_file, config, "gens");
  const std::string sample_file = path_or(o.sample_file, config, "sample");
  const std::string operator_file = path_or(o.operator_file, config, "operator");
  const std::string out_file = path_or(o.out_file, config, "out");

  std::optional<cstar::Frame> frame;
  if (!frame_file.empty()) frame = load_frame(frame_file, cstar::kDefaultTolerance);
  std::optional<std::vector<cstar::ModuleVector>> gens;
  if (!gens_file.empty()) gens = cstar::io::parse_generators(read_file(gens_file)).vectors;

  std::vector<std::string> documents;
  std::string csv;
  int code = 0;

  if (!operator_file.empty()) {
    const cstar::ModuleOperator f = cstar::io::parse_operator(read_file(operator_file));
    cstar::BallSampler sampler{config.seed, o.samples, true};
    for (double eps : grid) {
      const auto report = cstar::operator_precompact(f, sampler, eps, {o.rank_budget, frame, cstar::kDefaultTolerance});
      documents.push_back(cstar::io::serialize(report));
      csv += write_csv_residuals(report.certificate);
      code = worst(code, exit_code(report.certificate.verdict));
    }
  } else {
    if (sample_file.empty()) throw CLI::ValidationError("precompact needs --sample or --operator");
    const cstar::SampleSet sample = cstar::io::parse_sample(read_file(sample_file));
    for (double eps : grid) {
      cstar::Certificate single;
      bool is_single = true;
      if (o.condition == "a") {
        if (!gens && !frame) throw CLI::ValidationError("--condition a needs --gens or --frame");
        single = cstar::check_condition_a(sample, gens ? *gens : frame->vectors(), eps, {std::nullopt, tol});
      } else if (o.condition == "b") {
        const auto f = frame ? frame : cstar::sample_frame(sample);
        if (!f) {
          single = cstar::check_condition_cd(sample, eps, 0);
          single.condition = cstar::Condition::B;
        } else {
          single = cstar::check_condition_b(sample, *f, eps, o.rank_budget);
        }
      } else if (o.condition == "cd") {
        single = cstar::check_condition_cd(sample, eps, o.rank_budget.value_or(static_cast<std::size_t>(sample.dim)),
                                           frame);
      } else if (o.condition == "free") {
        if (!gens) throw CLI::ValidationError("--condition free needs --gens");
        single = cstar::free_submodule_check(sample, *gens, eps, tol);
      } else {
        is_single = false;
        cstar::EquivalenceConfig ec;
        ec.eps = eps;
        ec.frame = frame;
        ec.generators = gens;
        ec.budget = o.rank_budget;
        ec.tol = tol;
        const auto report = cstar::certify_equivalences(sample, ec);
        documents.push_back(cstar::io::serialize(report));
        csv += write_csv_residuals(report.cd);
        code = worst(code, exit_code(report.verdict));
        if (!report.violations.empty()) {
          for (const auto& v : report.violations) std::cerr << "coherence violation: " << v << "\n";
        }
      }
      if (is_single) {
        documents.push_back(cstar::io::serialize(single));
        csv += write_csv_residuals(single);
        code = worst(code, exit_code(single.verdict));
      }
    }
  }

  write_output(out_file, documents.size() == 1 ? documents.front() : cstar::io::serialize_sweep(grid, documents));
  if (!o.csv_file.empty()) write_output(o.csv_file, csv);
  return code;
}

int cmd_series(const Options& o) {
  const cstar::ModuleOperator t = cstar::io::parse_operator(read_file(o.operator_file));
  std::optional<cstar::Frame> frame;
  if (!o.frame_file.empty()) frame = load_frame(o.frame_file, cstar::kDefaultTolerance);
  const double eps = o.eps.empty() ? 0.25 : o.eps.front();
  const auto series = cstar::series_decompose(t, frame, eps);
  std::cout << "n,residual_norm\n";
  for (std::size_t n = 0; n < series.residual_norms.size(); ++n)
    std::cout << n << "," << num(series.residual_norms[n]) << "\n";
  if (!o.out_file.empty()) write_output(o.out_file, cstar::io::serialize(series));
  return series.covers_range ? 0 : kExitFail;
}

int cmd_counterexample(const Options& o) {
  const cstar::io::RunConfig config = load_config(o);
  int trunc = o.trunc;
  int dim = o.dim;
  if (!o.setting_file.empty()) {
    const auto doc = cstar::io::parse_counterexample_setting(read_file(o.setting_file));
    trunc = doc.trunc;
    dim = doc.dim;
  }
  if (dim == 0) dim = trunc;
  const cstar::TruncatedCSetting setting = cstar::build_setting(trunc, dim);
  const std::vector<double> grid = o.eps.empty() ? config.eps_grid : o.eps;

  std::cout << "eps,k,required_norm,factorial\n";
  for (double eps : grid)
    for (const auto& row : cstar::coeff_growth(setting, eps))
      std::cout << num(eps) << "," << row.k << "," << num(row.required_norm) << "," << num(row.factorial) << "\n";
  std::cout << "\nn,tail\n";
  for (int n = 0; n < setting.dim; ++n) std::cout << n << "," << num(cstar::tail_obstruction(setting, n)) << "\n";

  // The image of the unit ball is not A-precompact at any budget below M.
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frames, seminorms and precompactness certificates in Hilbert C*-modules"};
  app.require_subcommand(1);
  Options o;

  auto* bounds = app.add_subcommand("frame-bounds", "Optimal frame bounds of a frame file");
  bounds->add_option("frame", o.frame_file, "Frame document")->required()->check(CLI::ExistingFile);

  auto* dual = app.add_subcommand("dual", "Canonical dual frame");
  dual->add_option("frame", o.frame_file, "Frame document")->required()->check(CLI::ExistingFile);
  dual->add_option("--out", o.out_file, "Output file (default stdout)");

  auto* rec = app.add_subcommand("reconstruct", "Reconstruction tails of sample points");
  rec->add_option("frame", o.frame_file, "Frame document")->required()->check(CLI::ExistingFile);
  rec->add_option("--sample", o.sample_file, "Sample document")->required()->check(CLI::ExistingFile);
  rec->add_option("--prefix", o.prefix, "Only this prefix length");

  auto* semi = app.add_subcommand("seminorm", "Seminorm values of sample points");
  semi->add_option("spec", o.spec_file, "Seminorm spec document")->required()->check(CLI::ExistingFile);
  semi->add_option("--sample", o.sample_file, "Sample document")->required()->check(CLI::ExistingFile);

  auto* net = app.add_subcommand("net", "Greedy eps-net of a sample under a seminorm");
  net->add_option("spec", o.spec_file, "Seminorm spec document")->required()->check(CLI::ExistingFile);
  net->add_option("--sample", o.sample_file, "Sample document")->required()->check(CLI::ExistingFile);
  net->add_option("--eps", o.eps, "Radius")->expected(1)->check(CLI::PositiveNumber);

  auto* pre = app.add_subcommand("precompact", "Precompactness certificates for a sample or an operator");
  pre->add_option("--condition", o.condition, "Condition to certify")
      ->check(CLI::IsMember({"a", "b", "cd", "all", "free"}));
  pre->add_option("--eps", o.eps, "Accuracy (repeatable; default: config eps grid)")->check(CLI::PositiveNumber);
  pre->add_option("--rank-budget", o.rank_budget, "Prefix / rank budget (default: module dimension)");
  pre->add_option("--seed", o.seed, "Ball sampler seed");
  pre->add_option("--samples", o.samples, "Random ball points for --operator");
  pre->add_option("--frame", o.frame_file, "Frame document")->check(CLI::ExistingFile);
  pre->add_option("--gens", o.gens_file, "Generators document")->check(CLI::ExistingFile);
  pre->add_option("--sample", o.sample_file, "Sample document")->check(CLI::ExistingFile);
  pre->add_option("--operator", o.operator_file, "Operator document: certify F(B)")->check(CLI::ExistingFile);
  pre->add_option("--config", o.config_file, "Run config document")->check(CLI::ExistingFile);
  pre->add_option("--out", o.out_file, "JSON output file (default stdout)");
  pre->add_option("--csv", o.csv_file, "Per-point residual CSV");

  auto* series = app.add_subcommand("series", "Theta-series decomposition of an operator");
  series->add_option("operator", o.operator_file, "Operator document")->required()->check(CLI::ExistingFile);
  series->add_option("--frame", o.frame_file, "Frame of the range")->check(CLI::ExistingFile);
  series->add_option("--eps", o.eps, "Accuracy")->expected(1)->check(CLI::PositiveNumber);
  series->add_option("--out", o.out_file, "JSON output file");

  auto* cex = app.add_subcommand("counterexample", "Coefficient growth and tail obstruction tables");
  cex->add_option("--trunc", o.trunc, "Sequence truncation N")->check(CLI::PositiveNumber);
  cex->add_option("--dim", o.dim, "Module dimension M (default N)")->check(CLI::PositiveNumber);
  cex->add_option("--eps", o.eps, "Accuracy (repeatable; default: config eps grid)")->check(CLI::PositiveNumber);
  cex->add_option("--setting", o.setting_file, "Counterexample setting document")->check(CLI::ExistingFile);
  cex->add_option("--config", o.config_file, "Run config document")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*bounds) return cmd_frame_bounds(o);
    if (*dual) return cmd_dual(o);
    if (*rec) return cmd_reconstruct(o);
    if (*semi) return cmd_seminorm(o);
    if (*net) return cmd_net(o);
    if (*pre) return cmd_precompact(o);
    if (*series) return cmd_series(o);
    if (*cex) return cmd_counterexample(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
