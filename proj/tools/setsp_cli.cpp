// setsp: command-line driver for set-function transforms, filtering,
// compression and sparse sampling.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setsp/setsp.hpp"

namespace {

using namespace setsp;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --oracle kind:key=value,key=value
struct OracleSpec {
  std::string kind;
  std::map<std::string, std::string> params;

  [[nodiscard]] const std::string &get(const std::string &key) const {
    const auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument("oracle '" + kind + "' needs parameter '" +
                                  key + "'");
    return it->second;
  }
  [[nodiscard]] bool has(const std::string &key) const {
    return params.count(key) != 0;
  }
  [[nodiscard]] std::uint64_t get_u64(const std::string &key) const {
    const std::string &v = get(key);
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size())
      throw std::invalid_argument("oracle parameter '" + key +
                                  "' is not an integer: " + v);
    return x;
  }
  [[nodiscard]] int get_int(const std::string &key) const {
    return static_cast<int>(get_u64(key));
  }
};

OracleSpec parse_oracle_spec(const std::string &text) {
  const auto colon = text.find(':');
  OracleSpec spec;
  spec.kind = text.substr(0, colon);
  static const std::vector<std::string> kinds = {
      "file", "gaussian", "bandlimited", "sparse4", "synthetic-sparse"};
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
    throw std::invalid_argument("unknown oracle kind '" + spec.kind +
                                "' (expected file, gaussian, bandlimited, "
                                "sparse4 or synthetic-sparse)");
  if (colon == std::string::npos)
    return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty())
      continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      // bare value is the path
      spec.params["path"] = item;
      continue;
    }
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

std::shared_ptr<const SparseSetFunction> read_sparse(const std::string &path,
                                                     std::optional<Model> *tag) {
  const SetFnDocument doc = read_setfn(path);
  if (tag)
    *tag = doc.model;
  return std::make_shared<const SparseSetFunction>(doc.to_sparse());
}

SetFunctionOracle make_oracle(const OracleSpec &spec) {
  if (spec.kind == "file") {
    const SetFnDocument doc = read_setfn(spec.get("path"));
    if (doc.model)
      throw std::invalid_argument("file oracle expects a signal (model none), got "
                                  "a model " +
                                  std::to_string(to_int(*doc.model)) + " spectrum");
    if (doc.kind() == StorageKind::Dense)
      return SetFunctionOracle::from_dense(doc.to_dense());
    auto data = std::make_shared<const SparseSetFunction>(doc.to_sparse());
    return {data->ground(), [data](mask_t a) { return data->get(a); }, true};
  }
  if (spec.kind == "gaussian") {
    if (spec.has("cov"))
      return SetFunctionOracle::from_gaussian(
          GaussianModel::from_rows(read_covariance_csv(spec.get("cov"))));
    Rng rng(spec.get_u64("seed"));
    const int n = spec.get_int("n");
    const std::string kind = spec.has("kind") ? spec.get("kind") : "sensor";
    if (kind == "sensor")
      return SetFunctionOracle::from_gaussian(random_sensor_covariance(n, rng));
    if (kind == "wishart")
      return SetFunctionOracle::from_gaussian(random_wishart_covariance(n, rng));
    throw std::invalid_argument("gaussian kind must be sensor or wishart");
  }
  if (spec.kind == "bandlimited") {
    std::optional<Model> tag;
    const auto spec_fn = read_sparse(spec.get("path"), &tag);
    if (!tag)
      throw std::invalid_argument("bandlimited oracle needs a spectrum file "
                                  "(model 1-5)");
    const GroundSet g = spec_fn->ground();
    const int order = spec.has("order") ? spec.get_int("order") : g.size();
    std::vector<mask_t> support;
    std::vector<double> coeffs;
    for (const auto &[b, v] : spec_fn->entries())
      if (cardinality(b) <= order) {
        support.push_back(b);
        coeffs.push_back(v);
      }
    auto approx = std::make_shared<const BandlimitedApprox>(
        g, *tag, std::move(support), std::move(coeffs));
    return {g, [approx](mask_t a) { return (*approx)(a); }, true};
  }
  if (spec.kind == "sparse4") {
    std::optional<Model> tag;
    const auto spec_fn = read_sparse(spec.get("path"), &tag);
    if (tag != Model::Advance)
      throw std::invalid_argument("sparse4 oracle needs a model 4 spectrum file");
    auto s = std::make_shared<const SparseSpectrum4>(
        SparseSpectrum4::from_sparse(*spec_fn));
    return {s->ground(), [s](mask_t a) { return (*s)(a); }, true};
  }
  // synthetic-sparse
  Rng rng(spec.get_u64("seed"));
  auto s = std::make_shared<const SparseSpectrum4>(random_sparse_spectrum4(
      GroundSet(spec.get_int("n")), spec.get_u64("k"), rng));
  return {s->ground(), [s](mask_t a) { return (*s)(a); }, true};
}

// Result table: method, parameters, seed, queries_used, relative_error,
// wall_time. wall_time is only filled with --timing so that default output
// is reproducible byte for byte.
class CsvTable {
public:
  CsvTable(std::string path, bool timing)
      : path_(std::move(path)), timing_(timing) {
    out_ << "method,parameters,seed,queries_used,relative_error,wall_time\n";
  }

  void row(const std::string &method, const std::string &params,
           std::uint64_t seed, std::uint64_t queries, double error,
           double wall) {
    out_ << method << ',' << params << ',' << seed << ',' << queries << ','
         << detail::format_double(error) << ',';
    if (timing_)
      out_ << detail::format_double(wall);
    out_ << '\n';
  }

  void flush() const {
    if (path_.empty() || path_ == "-") {
      std::cout << out_.str();
      return;
    }
    std::ofstream f(path_);
    if (!f || !(f << out_.str()))
      throw std::runtime_error("cannot write " + path_);
  }

private:
  std::string path_;
  bool timing_;
  std::ostringstream out_;
};

Filter read_filter(const std::string &path) {
  const SetFnDocument doc = read_setfn(path);
  if (doc.model)
    throw std::invalid_argument("filter file must have model none");
  return Filter(doc.to_sparse());
}

// Evaluates any spectrum file as a band-limited approximation of its model.
BandlimitedApprox read_approx(const std::string &path) {
  std::optional<Model> tag;
  const auto s = read_sparse(path, &tag);
  if (!tag)
    throw std::invalid_argument("approximation file must be a spectrum "
                                "(model 1-5)");
  std::vector<mask_t> support;
  std::vector<double> coeffs;
  for (const auto &[b, v] : s->entries()) {
    support.push_back(b);
    coeffs.push_back(v);
  }
  return {s->ground(), *tag, std::move(support), std::move(coeffs)};
}

SparseSetFunction approx_to_sparse(const BandlimitedApprox &a) {
  SparseSetFunction out(a.ground());
  for (std::size_t k = 0; k < a.support().size(); ++k)
    out.set(a.support()[k], a.coeffs()[k]);
  return out;
}

std::string fmt_params(
    const std::vector<std::pair<std::string, std::string>> &kv) {
  std::string s;
  for (const auto &[k, v] : kv) {
    if (!s.empty())
      s += ';';
    s += k + '=' + v;
  }
  return s;
}

struct Options {
  int model = 1;
  bool inverse = false;
  bool timing = false;
  std::string in, out, filter, path = "auto", oracle, csv, support, approx,
                                methods = "dsft4-band,wht-regression";
  std::uint64_t seed = 0, samples = 1000, probes = kDefaultErrorProbes;
  std::optional<std::uint64_t> probe_seed;
  int order = 2;
  // generate
  std::string cov, fragments, cov_out, gauss_kind = "sensor";
  int n = 0;
  std::uint64_t k = 0;
  bool signal = false;
};

int cmd_transform(const Options &o) {
  const Model m = model_from_int(o.model);
  const SetFnDocument doc = read_setfn(o.in);
  const SetFunction s = doc.to_dense();
  TransformStats st;
  const auto t0 = Clock::now();
  if (o.inverse) {
    if (doc.model != m)
      throw std::invalid_argument(
          "inverse model " + std::to_string(o.model) + " needs a model " +
          std::to_string(o.model) + " spectrum, input is " +
          (doc.model ? "model " + std::to_string(to_int(*doc.model))
                     : std::string("a signal (model none)")));
    write_setfn_file(o.out, idsft(Spectrum(m, s), &st));
  } else {
    std::optional<Model> out_tag = m;
    if (doc.model) {
      // the type-3 transform is self-inverse: forward on a type-3 spectrum
      // gives back the signal
      if (m != Model::Delay || doc.model != Model::Delay)
        throw std::invalid_argument(
            "forward model " + std::to_string(o.model) +
            " needs a signal (model none), input is a model " +
            std::to_string(to_int(*doc.model)) + " spectrum");
      out_tag = std::nullopt;
    }
    const Spectrum spec = dsft(m, s, &st);
    write_setfn_file(o.out, spec.as_set_function(), out_tag);
  }
  const double wall = seconds_since(t0);
  std::cout << "n=" << s.ground().size() << " model=" << o.model
            << " direction=" << (o.inverse ? "inverse" : "forward")
            << " additions=" << st.additions << '\n';
  if (o.timing)
    std::cout << "wall_time=" << detail::format_double(wall) << '\n';
  return 0;
}

int cmd_convolve(const Options &o) {
  const Model m = model_from_int(o.model);
  const SetFnDocument doc = read_setfn(o.in);
  if (doc.model)
    throw std::invalid_argument("convolve input must be a signal (model none)");
  const Filter h = read_filter(o.filter);
  const ConvolutionPath path = o.path == "direct"     ? ConvolutionPath::Direct
                               : o.path == "spectral" ? ConvolutionPath::Spectral
                                                      : ConvolutionPath::Auto;
  write_setfn_file(o.out, convolve(m, h, doc.to_dense(), path), std::nullopt);
  return 0;
}

int cmd_freqresp(const Options &o) {
  const Model m = model_from_int(o.model);
  const FrequencyResponse fr = frequency_response(m, read_filter(o.filter));
  write_setfn_file(o.out, fr.values, m);
  return 0;
}

constexpr int kMaxDenseGaussian = 22;

int cmd_generate_gaussian(const Options &o) {
  std::optional<GaussianModel> model;
  if (!o.cov.empty()) {
    model.emplace(GaussianModel::from_rows(read_covariance_csv(o.cov)));
  } else {
    if (o.n <= 0)
      throw std::invalid_argument("generate gaussian needs --cov or --n with --seed");
    Rng rng(o.seed);
    if (o.gauss_kind == "sensor")
      model.emplace(random_sensor_covariance(o.n, rng));
    else if (o.gauss_kind == "wishart")
      model.emplace(random_wishart_covariance(o.n, rng));
    else
      throw std::invalid_argument("--kind must be sensor or wishart");
  }
  if (!o.cov_out.empty()) {
    std::ofstream f(o.cov_out);
    write_covariance_csv(f, model->to_rows());
    if (!f)
      throw std::runtime_error("cannot write " + o.cov_out);
  }
  if (model->dim() <= kMaxDenseGaussian) {
    write_setfn_file(o.out, entropy_set_function(*model), std::nullopt);
  } else {
    // too large to densify: store the covariance and name the oracle
    std::ofstream f(o.out);
    write_covariance_csv(f, model->to_rows());
    if (!f)
      throw std::runtime_error("cannot write " + o.out);
    std::cout << "oracle gaussian:cov=" << o.out << '\n';
  }
  return 0;
}

int cmd_generate_coverage(const Options &o) {
  std::optional<Model> tag;
  const auto f = read_sparse(o.fragments, &tag);
  CoverageRepresentation rep;
  if (tag == Model::Advance) {
    rep = coverage_from_spectrum4(*f);
  } else if (!tag) {
    // plain weights: mask 0 holds the offset c, other masks w(T_B)
    rep.ground = f->ground();
    for (const auto &[b, v] : f->entries()) {
      if (b == 0)
        rep.offset = v;
      else
        rep.fragment_weights[b] = v;
    }
  } else {
    throw std::invalid_argument("fragment file must have model 4 or none");
  }
  write_setfn_file(o.out, coverage_to_set_function(rep), std::nullopt);
  return 0;
}

int cmd_generate_sparse4(const Options &o) {
  Rng rng(o.seed);
  const SparseSpectrum4 s = random_sparse_spectrum4(GroundSet(o.n), o.k, rng);
  if (o.signal) {
    write_setfn_file(o.out, idsft(s.densify()), std::nullopt);
  } else {
    write_setfn_file(o.out, s.to_sparse(), Model::Advance);
  }
  return 0;
}

int cmd_generate_modular(const Options &o) {
  Rng rng(o.seed);
  const GroundSet g(o.n);
  std::vector<double> w(static_cast<std::size_t>(o.n));
  for (double &x : w)
    x = uniform01(rng);
  SetFunction s(g);
  for (mask_t a = 0; a < s.size(); ++a)
    for (int i = 0; i < o.n; ++i)
      if ((a >> i) & 1)
        s[a] += w[static_cast<std::size_t>(i)];
  write_setfn_file(o.out, s, std::nullopt);
  return 0;
}

std::uint64_t probe_seed(const Options &o) {
  return o.probe_seed ? *o.probe_seed : o.seed + 1;
}

int cmd_compress(const Options &o) {
  const SetFunctionOracle oracle = make_oracle(parse_oracle_spec(o.oracle));
  const GroundSet g = oracle.ground();
  if (o.order < 0 || o.order > g.size())
    throw std::invalid_argument("--order must be in [0, n]");
  CsvTable table(o.csv, o.timing);
  std::stringstream list(o.methods);
  std::string method;
  while (std::getline(list, method, ',')) {
    const auto t0 = Clock::now();
    if (method == "dsft4-band") {
      CompressionStats st;
      const BandlimitedApprox approx = compress_band(oracle, o.order, &st);
      if (!o.approx.empty())
        write_setfn_file(o.approx, approx_to_sparse(approx), Model::Advance);
      const double err =
          estimate_relative_error(oracle, approx, o.probes, probe_seed(o));
      table.row(method,
                fmt_params({{"order", std::to_string(o.order)},
                            {"probes", std::to_string(o.probes)}}),
                o.seed, st.distinct, err, seconds_since(t0));
    } else if (method == "wht-regression") {
      Rng rng(o.seed);
      const auto samples = draw_regression_samples(oracle, o.samples, rng);
      const BandlimitedApprox approx = wht_regression(
          g, samples, subsets_of_cardinality_at_most(g, o.order));
      const double err =
          estimate_relative_error(oracle, approx, o.probes, probe_seed(o));
      table.row(method,
                fmt_params({{"order", std::to_string(o.order)},
                            {"samples", std::to_string(o.samples)},
                            {"probes", std::to_string(o.probes)}}),
                o.seed, o.samples, err, seconds_since(t0));
    } else {
      throw std::invalid_argument("unknown method '" + method +
                                  "' (expected dsft4-band or wht-regression)");
    }
  }
  table.flush();
  return 0;
}

int cmd_sample(const Options &o) {
  const SetFunctionOracle oracle = make_oracle(parse_oracle_spec(o.oracle));
  const SetFnDocument doc = read_setfn(o.support);
  // sparse files list the support explicitly, including zero coefficients
  if (doc.kind() == StorageKind::Dense)
    throw std::invalid_argument("support file must be sparse");
  const SparseSetFunction listed = doc.to_sparse();
  std::vector<mask_t> freqs;
  for (const auto &[b, v] : listed.entries())
    freqs.push_back(b);
  const SparseSupport support(doc.ground(), std::move(freqs));
  const auto t0 = Clock::now();
  const std::uint64_t before = oracle.queries();
  const SparseSpectrum4 spec = reconstruct(oracle, support);
  const std::uint64_t used = oracle.queries() - before;
  write_setfn_file(o.out, spec.to_sparse(), Model::Advance);
  const double err = estimate_relative_error(oracle, spec, o.probes, probe_seed(o));
  CsvTable table(o.csv, o.timing);
  table.row("dsft4-sample",
            fmt_params({{"k", std::to_string(support.size())},
                        {"probes", std::to_string(o.probes)}}),
            o.seed, used, err, seconds_since(t0));
  table.flush();
  return 0;
}

int cmd_error(const Options &o) {
  const SetFunctionOracle oracle = make_oracle(parse_oracle_spec(o.oracle));
  const BandlimitedApprox approx = read_approx(o.approx);
  if (approx.ground() != oracle.ground())
    throw std::invalid_argument("approximation and oracle use different n");
  const auto t0 = Clock::now();
  const double err = estimate_relative_error(oracle, approx, o.probes, o.seed);
  CsvTable table(o.csv, o.timing);
  table.row("approx-file",
            fmt_params({{"model", std::to_string(to_int(approx.model()))},
                        {"terms", std::to_string(approx.support().size())},
                        {"probes", std::to_string(o.probes)}}),
            o.seed, 0, err, seconds_since(t0));
  table.flush();
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Discrete-set signal processing: transforms, filters, "
               "compression and sparse sampling of set functions."};
  app.require_subcommand(1);
  Options o;

  const auto add_model = [&](CLI::App *c) {
    c->add_option("--model", o.model, "Shift model 1-5")
        ->required()
        ->check(CLI::Range(1, 5));
  };
  const auto add_timing = [&](CLI::App *c) {
    c->add_flag("--timing", o.timing,
                "Report wall-clock time (output is then not reproducible)");
  };
  const auto add_oracle = [&](CLI::App *c) {
    c->add_option("--oracle", o.oracle,
                  "Oracle spec kind:key=value,...; kinds: file:path=P, "
                  "gaussian:cov=P | gaussian:n=N,seed=S[,kind=sensor|wishart], "
                  "bandlimited:path=P[,order=M], sparse4:path=P, "
                  "synthetic-sparse:n=N,k=K,seed=S")
        ->required();
  };
  const auto add_probes = [&](CLI::App *c) {
    c->add_option("--probes", o.probes,
                  "Random subsets for the relative-error estimate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  const auto add_csv = [&](CLI::App *c) {
    c->add_option("--csv", o.csv, "Result table path (default: stdout)");
  };

  auto *transform = app.add_subcommand("transform", "Fast forward or inverse transform");
  add_model(transform);
  transform->add_flag("--inverse", o.inverse, "Inverse transform of a spectrum");
  transform->add_option("--in", o.in, "Input file")->required();
  transform->add_option("--out", o.out, "Output file")->required();
  add_timing(transform);

  auto *conv = app.add_subcommand("convolve", "Filter a signal");
  add_model(conv);
  conv->add_option("--filter", o.filter, "Filter taps file (model none)")->required();
  conv->add_option("--in", o.in, "Input signal")->required();
  conv->add_option("--out", o.out, "Output signal")->required();
  conv->add_option("--path", o.path, "Evaluation path")
      ->check(CLI::IsMember({"auto", "direct", "spectral"}))
      ->capture_default_str();

  auto *fr = app.add_subcommand("freqresp", "Frequency response of a filter");
  add_model(fr);
  fr->add_option("--filter", o.filter, "Filter taps file (model none)")->required();
  fr->add_option("--out", o.out, "Output file")->required();

  auto *gen = app.add_subcommand("generate", "Generate set functions");
  gen->require_subcommand(1);
  auto *g_gauss = gen->add_subcommand("gaussian", "Gaussian joint entropy");
  auto *cov_opt = g_gauss->add_option("--cov", o.cov, "Covariance CSV");
  auto *n_opt = g_gauss->add_option("--n", o.n, "Synthetic covariance size");
  auto *seed_opt = g_gauss->add_option("--seed", o.seed, "Seed for a synthetic covariance");
  g_gauss->add_option("--kind", o.gauss_kind, "Synthetic covariance family")
      ->check(CLI::IsMember({"sensor", "wishart"}))
      ->capture_default_str();
  g_gauss->add_option("--cov-out", o.cov_out, "Also write the covariance CSV");
  g_gauss->add_option("--out", o.out,
                      "Dense entropy function (n <= 22) or covariance CSV")
      ->required();
  cov_opt->excludes(n_opt);
  n_opt->needs(seed_opt);
  seed_opt->needs(n_opt);

  auto *g_cov = gen->add_subcommand("coverage", "Coverage function from fragment weights");
  g_cov->add_option("--fragments", o.fragments,
                    "Sparse file: model 4 spectrum, or model none weights with "
                    "the offset at mask 0")
      ->required();
  g_cov->add_option("--out", o.out, "Output signal")->required();

  auto *g_sp = gen->add_subcommand("sparse4", "Random Fourier-sparse (model 4) function");
  g_sp->add_option("--n", o.n, "Ground set size")->required()->check(CLI::Range(0, 62));
  g_sp->add_option("--k", o.k, "Number of coefficients")->required();
  g_sp->add_option("--seed", o.seed, "Random seed")->required();
  g_sp->add_flag("--signal", o.signal, "Write the dense signal instead of the spectrum");
  g_sp->add_option("--out", o.out, "Output file")->required();

  auto *g_mod = gen->add_subcommand("modular", "Random modular function");
  g_mod->add_option("--n", o.n, "Ground set size")->required()->check(CLI::Range(0, 30));
  g_mod->add_option("--seed", o.seed, "Random seed")->required();
  g_mod->add_option("--out", o.out, "Output signal")->required();

  auto *comp = app.add_subcommand("compress", "Band-limited compression of an oracle");
  add_oracle(comp);
  comp->add_option("--order", o.order, "Band order m")->capture_default_str();
  comp->add_option("--methods", o.methods, "Comma-separated: dsft4-band, wht-regression")
      ->capture_default_str();
  comp->add_option("--samples", o.samples, "Regression samples p")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  comp->add_option("--seed", o.seed, "Random seed")->required();
  comp->add_option("--probe-seed", o.probe_seed, "Error-probe seed (default: seed + 1)");
  comp->add_option("--approx-out", o.approx, "Write the model 4 coefficients");
  add_probes(comp);
  add_csv(comp);
  add_timing(comp);

  auto *samp = app.add_subcommand("sample", "Reconstruct a model 4 sparse function");
  add_oracle(samp);
  samp->add_option("--support", o.support, "Sparse file whose masks form the support")
      ->required();
  samp->add_option("--out", o.out, "Reconstructed model 4 coefficients")->required();
  samp->add_option("--seed", o.seed, "Random seed for the error estimate")->required();
  samp->add_option("--probe-seed", o.probe_seed, "Error-probe seed (default: seed + 1)");
  add_probes(samp);
  add_csv(samp);
  add_timing(samp);

  auto *err = app.add_subcommand("error", "Relative error of a spectrum against an oracle");
  add_oracle(err);
  err->add_option("--approx", o.approx, "Spectrum file (model 1-5)")->required();
  err->add_option("--seed", o.seed, "Random seed")->required();
  add_probes(err);
  add_csv(err);
  add_timing(err);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform)
      return cmd_transform(o);
    if (*conv)
      return cmd_convolve(o);
    if (*fr)
      return cmd_freqresp(o);
    if (*g_gauss)
      return cmd_generate_gaussian(o);
    if (*g_cov)
      return cmd_generate_coverage(o);
    if (*g_sp)
      return cmd_generate_sparse4(o);
    if (*g_mod)
      return cmd_generate_modular(o);
    if (*comp)
      return cmd_compress(o);
    if (*samp)
      return cmd_sample(o);
    if (*err)
      return cmd_error(o);
  } catch (const std::exception &e) {
    std::cerr << "setsp: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
