#include "mdist/cli.hpp"

#include "mdist/analysis.hpp"
#include "mdist/errors.hpp"
#include "mdist/moments.hpp"
#include "mdist/precision.hpp"
#include "mdist/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

namespace mdist::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

// Writes to `fallback` when path is "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed for " + path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SourceFlags {
  bool uniform = false;
  std::vector<std::string> beta;
  std::string point_mass;
  bool sir = false;
  std::string theta_db;
  std::string delta = "0.5";
  std::string moments_file;
};

void add_source_flags(CLI::App* cmd, SourceFlags& s, bool allow_file) {
  auto* group = cmd->add_option_group("source", "moment source");
  group->add_flag("--uniform", s.uniform, "uniform distribution on [0,1]");
  group->add_option("--beta", s.beta, "Beta(alpha, beta)")->expected(2)->type_name("A B");
  group->add_option("--point-mass", s.point_mass, "point mass at nu");
  group->add_flag("--sir", s.sir, "Poisson cellular SIR model (needs --theta-db)");
  if (allow_file) group->add_option("--moments", s.moments_file, "moment CSV file (j,M_j)");
  group->require_option(1);
  cmd->add_option("--theta-db", s.theta_db, "SIR threshold in dB");
  cmd->add_option("--delta", s.delta, "2 / path-loss exponent")->capture_default_str();
}

std::string describe(const SourceFlags& s) {
  if (s.uniform) return "uniform";
  if (!s.beta.empty()) return "beta(" + s.beta[0] + "," + s.beta[1] + ")";
  if (!s.point_mass.empty()) return "point-mass(" + s.point_mass + ")";
  if (s.sir) return "sir(theta_db=" + s.theta_db + ",delta=" + s.delta + ")";
  return "file(" + s.moments_file + ")";
}

MomentVector make_moments(const SourceFlags& s, unsigned n, unsigned digits) {
  if (s.uniform) return uniform_moments(n, digits);
  if (!s.beta.empty()) return beta_moments(BetaParams(Real(s.beta[0], digits), Real(s.beta[1], digits)), n, digits);
  if (!s.point_mass.empty()) return point_mass_moments(Real(s.point_mass, digits), n, digits);
  if (s.sir) {
    if (s.theta_db.empty()) throw ParseError("--sir needs --theta-db", 0);
    const unsigned work = std::max(digits, 16u);
    const SirParams params(db_to_linear(Real(s.theta_db, work), work), Real(s.delta, work));
    return sir_poisson_moments(params, n, work);
  }
  LoadOptions options;
  options.digits = digits;
  options.validate = false;
  return load_moments(s.moments_file, options).truncated(n);
}

unsigned resolve_digits(const std::optional<unsigned>& digits, unsigned n) {
  return digits.value_or(rule_of_thumb_digits(n).digits);
}

// ---------------------------------------------------------------------------

struct MatrixArgs {
  unsigned n = 0;
  unsigned max_n = kDefaultMaxOrder;
  std::string output = "-";
};

int cmd_matrix(const MatrixArgs& a, std::ostream& out, std::ostream& err) {
  const TransformMatrix matrix = build_matrix(a.n, a.max_n);
  if (!verify_antidiagonal_symmetry(matrix)) {
    err << "error: antidiagonal symmetry self-check failed for n=" << a.n << '\n';
    return kFailure;
  }
  Output o(a.output, out);
  write_matrix_csv(matrix, *o);
  o.finish();
  err << "# order=" << a.n << '\n'
      << "# max_abs_entry=" << max_abs_entry(matrix).get_str() << '\n'
      << "# distinct_entries=" << TransformMatrix::distinct_entry_count(a.n) << '\n'
      << "# antidiagonal_symmetry=ok\n";
  return kSuccess;
}

struct MomentsArgs {
  SourceFlags source;
  unsigned n = 0;
  std::optional<unsigned> digits;
  std::string output = "-";
};

int cmd_moments(const MomentsArgs& a, std::ostream& out, std::ostream&) {
  const unsigned digits = resolve_digits(a.digits, a.n);
  const MomentVector m = make_moments(a.source, a.n, digits);
  Output o(a.output, out);
  write_moments(m, *o);
  o.finish();
  return kSuccess;
}

struct ReconstructArgs {
  SourceFlags source;
  unsigned n = 0;
  std::optional<unsigned> digits;
  bool pdf = false;
  std::string output = "-";
  std::string format = "csv";
  bool no_meta = false;
  unsigned print_digits = 17;
  unsigned k_max = 10;
  std::string eps_neg;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  Stopwatch clock;
  const unsigned digits = resolve_digits(a.digits, a.n);
  const MomentVector moments = make_moments(a.source, a.n, digits);

  const unsigned k_max = std::min(a.k_max, a.n);
  const auto violations = check_complete_monotonicity(moments, k_max);
  if (!violations.empty()) {
    err << "error: moment sequence is not completely monotone (" << violations.size() << " violations)\n";
    const std::size_t shown = std::min<std::size_t>(violations.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& v = violations[i];
      err << "  k=" << v.k << " n=" << v.n << " value=" << v.value.to_string(8) << '\n';
    }
    return kMonotonicityViolation;
  }

  ApplyOptions options;
  if (!a.eps_neg.empty()) options.negative_tolerance = Real(a.eps_neg, digits);
  const TransformMatrix matrix = build_matrix(a.n);
  const MixtureWeights weights = apply(matrix, moments, digits, options);
  const CdfApproximation cdf = cdf_samples(weights);
  const PdfApproximation pdf = pdf_samples(weights);

  std::vector<std::pair<std::string, std::string>> meta = {
      {"source", describe(a.source)},
      {"order", std::to_string(a.n)},
      {"digits", std::to_string(digits)},
      {"below_recommended_digits", weights.below_recommended ? "true" : "false"},
      {"small_negative_weights", std::to_string(weights.small_negative_count)},
      {"sum_deviation", format_double(weights.sum_deviation)},
      {"elapsed_ms", format_double(clock.elapsed_ms())},
  };

  const unsigned sig = a.print_digits;
  Output o(a.output, out);
  if (a.format == "json") {
    Json doc;
    doc["order"] = a.n;
    doc["digits"] = digits;
    Json xs = Json::array(), fs = Json::array(), ds = Json::array();
    for (std::size_t k = 0; k < cdf.values.size(); ++k) {
      xs.push_back(cdf.x(k).to_string(sig));
      fs.push_back(cdf.values[k].to_string(sig));
    }
    doc["x"] = xs;
    doc["F"] = fs;
    if (a.pdf) {
      for (const Real& v : pdf.values) ds.push_back(v.to_string(sig));
      doc["f"] = ds;
    }
    if (!a.no_meta) {
      Json m;
      for (const auto& [k, v] : meta) m[k] = v;
      doc["meta"] = m;
    }
    *o << doc.dump(2) << '\n';
  } else {
    if (!a.no_meta) {
      for (const auto& [k, v] : meta) *o << "# " << k << '=' << v << '\n';
    }
    *o << (a.pdf ? "x,F,f\n" : "x,F\n");
    for (std::size_t k = 0; k < cdf.values.size(); ++k) {
      *o << cdf.x(k).to_string(sig) << ',' << cdf.values[k].to_string(sig);
      if (a.pdf) {
        *o << ',';
        if (k < pdf.values.size()) *o << pdf.values[k].to_string(sig);
      }
      *o << '\n';
    }
  }
  o.finish();
  if (weights.below_recommended) {
    err << "warning: " << digits << " digits is below the recommended " << rule_of_thumb_digits(a.n).digits << '\n';
  }
  return kSuccess;
}

struct PercentilesArgs {
  std::vector<double> percentiles = {0.05, 0.1, 0.2, 0.5};
  double theta_min = -20.0;
  double theta_max = 20.0;
  double theta_step = 1.0;
  std::vector<double> theta_list;
  std::string delta = "0.5";
  unsigned n = 400;
  std::optional<unsigned> digits;
  std::string prefix = "percentile";
  std::string format = "csv";
  bool no_meta = false;
  bool gap = false;
  unsigned threads = 0;
};

int cmd_percentiles(const PercentilesArgs& a, std::ostream&, std::ostream& err) {
  Stopwatch clock;
  std::vector<double> grid = a.theta_list;
  if (grid.empty()) {
    if (!(a.theta_min < a.theta_max)) throw ParseError("--theta-min must be below --theta-max", 0);
    grid = theta_grid_db(a.theta_min, a.theta_max, a.theta_step);
  }
  const unsigned digits = resolve_digits(a.digits, a.n);
  const Real delta(a.delta, std::max(digits, 16u));
  const auto curves =
      percentile_curves(a.percentiles, delta, grid, a.n, std::max(digits, 16u), PercentileOptions{a.threads});

  for (const PercentileCurve& curve : curves) {
    const std::string path = a.prefix + "_p" + format_double(curve.percentile) + (a.format == "json" ? ".json" : ".csv");
    const auto rates = rate_reliability(curve);
    Output o(path, err);
    if (a.format == "json") {
      Json doc;
      doc["percentile"] = curve.percentile;
      doc["order"] = curve.order;
      doc["digits"] = curve.digits;
      doc["delta"] = a.delta;
      Json points = Json::array();
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        points.push_back({{"theta_dB", curve.points[i].theta_db},
                          {"spectral_efficiency", rates[i].spectral_efficiency},
                          {"reliability", curve.points[i].reliability},
                          {"saturated", curve.points[i].saturated}});
      }
      doc["points"] = points;
      *o << doc.dump(2) << '\n';
    } else {
      if (!a.no_meta) {
        *o << "# percentile=" << format_double(curve.percentile) << '\n'
           << "# order=" << curve.order << '\n'
           << "# digits=" << curve.digits << '\n'
           << "# delta=" << a.delta << '\n';
      }
      *o << "theta_dB,spectral_efficiency,reliability,saturated\n";
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const PercentilePoint& p = curve.points[i];
        *o << format_double(p.theta_db) << ',' << format_double(rates[i].spectral_efficiency) << ','
           << format_double(p.reliability) << ',' << (p.saturated ? 1 : 0) << '\n';
      }
    }
    o.finish();
    err << "# wrote " << path << '\n';
  }

  if (a.gap && curves.size() >= 2) {
    EdgeGaps gaps;
    try {
      gaps = edge_gaps(curves.front(), curves.back());
    } catch (const DomainError& e) {
      err << "warning: gap not computed: " << e.what() << '\n';
      return kSuccess;
    }
    const std::string path = a.prefix + "_gap.csv";
    Output o(path, err);
    if (!a.no_meta) {
      *o << "# lower_percentile=" << format_double(curves.front().percentile) << '\n'
         << "# upper_percentile=" << format_double(curves.back().percentile) << '\n';
    }
    *o << "edge,reliability,gap_dB\n"
       << "low_theta," << format_double(gaps.low_reliability) << ',' << format_double(gaps.low_gap_db) << '\n'
       << "high_theta," << format_double(gaps.high_reliability) << ',' << format_double(gaps.high_gap_db) << '\n';
    o.finish();
    err << "# gap low_theta=" << format_double(gaps.low_gap_db) << " dB high_theta=" << format_double(gaps.high_gap_db)
        << " dB\n";
  }
  if (!a.no_meta) err << "# elapsed_ms=" << format_double(clock.elapsed_ms()) << '\n';
  return kSuccess;
}

struct ConvergenceArgs {
  bool uniform = false;
  std::vector<double> beta;
  std::vector<unsigned> orders = {20, 50, 100, 200};
  std::optional<unsigned> digits;
  std::string output = "-";
  std::string format = "csv";
  bool no_meta = false;
};

int cmd_convergence(const ConvergenceArgs& a, std::ostream& out, std::ostream& err) {
  Stopwatch clock;
  ConvergenceOracle oracle;
  MomentSource source;
  std::string name;
  if (a.uniform) {
    oracle = uniform_oracle();
    source = [](unsigned n, unsigned d) { return uniform_moments(n, d); };
    name = "uniform";
  } else {
    const double alpha = a.beta[0], beta = a.beta[1];
    oracle = beta_oracle(alpha, beta);
    source = [alpha, beta](unsigned n, unsigned d) {
      return beta_moments(BetaParams(Real(alpha, d), Real(beta, d)), n, d);
    };
    name = "beta(" + format_double(alpha) + "," + format_double(beta) + ")";
  }
  ConvergenceOptions options;
  if (a.digits) {
    const unsigned fixed = *a.digits;
    options.digits_for_order = [fixed](unsigned) { return fixed; };
  }
  const ConvergenceReport report = convergence_study(source, oracle, a.orders, options);

  auto bound_at = [&](unsigned n) -> std::optional<double> {
    if (!report.bound_constant) return std::nullopt;
    return *report.bound_constant / (static_cast<double>(n) + 1.0);
  };

  Output o(a.output, out);
  if (a.format == "json") {
    Json doc;
    doc["oracle"] = name;
    Json rows = Json::array();
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
      Json row = {{"n", report.orders[i]}, {"max_error", report.max_errors[i]}};
      const auto b = bound_at(report.orders[i]);
      row["bound"] = b ? Json(*b) : Json(nullptr);
      rows.push_back(row);
    }
    doc["rows"] = rows;
    doc["fitted_rate"] = report.fitted_rate ? Json(*report.fitted_rate) : Json(nullptr);
    doc["bound_constant"] = report.bound_constant ? Json(*report.bound_constant) : Json(nullptr);
    *o << doc.dump(2) << '\n';
  } else {
    if (!a.no_meta) {
      *o << "# oracle=" << name << '\n';
      if (report.fitted_rate) *o << "# fitted_rate=" << format_double(*report.fitted_rate) << '\n';
      if (report.bound_constant) *o << "# bound_constant=" << format_double(*report.bound_constant) << '\n';
      *o << "# elapsed_ms=" << format_double(clock.elapsed_ms()) << '\n';
    }
    *o << "n,max_error,bound\n";
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
      *o << report.orders[i] << ',' << format_double(report.max_errors[i]) << ',';
      if (const auto b = bound_at(report.orders[i])) *o << format_double(*b);
      *o << '\n';
    }
  }
  o.finish();
  if (report.fitted_rate) {
    err << "fitted rate: " << format_double(*report.fitted_rate) << '\n';
  } else {
    err << "fitted rate: n/a (zero error)\n";
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meta distributions from moments via the binomial-mixture transform", "mdist"};
  app.require_subcommand(1);

  MatrixArgs matrix_args;
  auto* matrix = app.add_subcommand("matrix", "write the transform matrix A as integer CSV");
  matrix->add_option("--n", matrix_args.n, "order")->required();
  matrix->add_option("--max-n", matrix_args.max_n, "largest accepted order")->capture_default_str();
  matrix->add_option("-o,--output", matrix_args.output, "output path, - for stdout")->capture_default_str();

  MomentsArgs moments_args;
  auto* moments = app.add_subcommand("moments", "write an analytic moment sequence as CSV");
  add_source_flags(moments, moments_args.source, false);
  moments->add_option("--n", moments_args.n, "order")->required();
  moments->add_option("--digits", moments_args.digits, "decimal digits (default n/2+16)");
  moments->add_option("-o,--output", moments_args.output, "output path, - for stdout")->capture_default_str();

  ReconstructArgs rec_args;
  auto* reconstruct = app.add_subcommand("reconstruct", "sample F_n (and f_n) from a moment sequence");
  add_source_flags(reconstruct, rec_args.source, true);
  reconstruct->add_option("--n", rec_args.n, "order")->required();
  reconstruct->add_option("--digits", rec_args.digits, "decimal digits (default n/2+16)");
  reconstruct->add_flag("--pdf", rec_args.pdf, "add the f column");
  reconstruct->add_option("-o,--output", rec_args.output, "output path, - for stdout")->capture_default_str();
  reconstruct->add_option("--format", rec_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  reconstruct->add_flag("--no-meta", rec_args.no_meta, "omit metadata");
  reconstruct->add_option("--print-digits", rec_args.print_digits, "significant digits in output")
      ->capture_default_str();
  reconstruct->add_option("--k-max", rec_args.k_max, "highest difference order checked")->capture_default_str();
  reconstruct->add_option("--eps-neg", rec_args.eps_neg, "tolerance for negative weights");

  PercentilesArgs pct_args;
  auto* percentiles = app.add_subcommand("percentiles", "user-percentile curves for the Poisson SIR model");
  percentiles->add_option("--p", pct_args.percentiles, "percentiles")->delimiter(',')->capture_default_str();
  percentiles->add_option("--theta-min", pct_args.theta_min, "lowest theta in dB")->capture_default_str();
  percentiles->add_option("--theta-max", pct_args.theta_max, "highest theta in dB")->capture_default_str();
  percentiles->add_option("--theta-step", pct_args.theta_step, "theta step in dB")->capture_default_str();
  percentiles->add_option("--theta-db", pct_args.theta_list, "explicit theta values in dB")->delimiter(',');
  percentiles->add_option("--delta", pct_args.delta, "2 / path-loss exponent")->capture_default_str();
  percentiles->add_option("--n", pct_args.n, "order")->capture_default_str();
  percentiles->add_option("--digits", pct_args.digits, "decimal digits (default n/2+16)");
  percentiles->add_option("--output-prefix", pct_args.prefix, "prefix for the per-percentile files")
      ->capture_default_str();
  percentiles->add_option("--format", pct_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  percentiles->add_flag("--no-meta", pct_args.no_meta, "omit metadata");
  percentiles->add_flag("--gap", pct_args.gap, "write the dB gap between the first and last percentile");
  percentiles->add_option("--threads", pct_args.threads, "worker threads, 0 = all cores")->capture_default_str();

  ConvergenceArgs conv_args;
  auto* convergence = app.add_subcommand("convergence", "max reconstruction error against a closed-form cdf");
  auto* oracle = convergence->add_option_group("oracle");
  oracle->add_flag("--uniform", conv_args.uniform);
  oracle->add_option("--beta", conv_args.beta, "Beta(alpha, beta)")->expected(2)->type_name("A B");
  oracle->require_option(1);
  convergence->add_option("--orders", conv_args.orders, "orders n")->delimiter(',')->capture_default_str();
  convergence->add_option("--digits", conv_args.digits, "fixed digits (default n/2+16 per order)");
  convergence->add_option("-o,--output", conv_args.output, "output path, - for stdout")->capture_default_str();
  convergence->add_option("--format", conv_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  convergence->add_flag("--no-meta", conv_args.no_meta, "omit metadata");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*matrix) return cmd_matrix(matrix_args, out, err);
    if (*moments) return cmd_moments(moments_args, out, err);
    if (*reconstruct) return cmd_reconstruct(rec_args, out, err);
    if (*percentiles) return cmd_percentiles(pct_args, out, err);
    if (*convergence) return cmd_convergence(conv_args, out, err);
  } catch (const PrecisionFailure& e) {
    err << "precision failure: " << e.what() << "\nsuggested digits: " << e.suggested_digits() << '\n';
    return kPrecisionFailure;
  } catch (const InvalidMoments& e) {
    err << "invalid moments: " << e.what() << '\n';
    return kMonotonicityViolation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsageError;
}

}  // namespace mdist::cli
