#include "commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbz/errors.hpp"
#include "hbz/extremal.hpp"
#include "hbz/solver.hpp"

#ifndef HBZ_VERSION
#define HBZ_VERSION "0.0.0"
#endif

namespace hbz::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kResidualBound = 1e-6;
constexpr std::size_t kResidualRows = 50;
constexpr double kVerifyContraction = bounds::kContraction + bounds::kContractionSlack;
// Below this truncation the certificates lean mostly on tail slack.
constexpr std::size_t kLowTruncation = 64;

/// A command failed with a specific exit code; message goes to stderr.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
  int code;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError(kBadInput, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CommandError(kBadInput, "cannot write " + path.string());
  out << bytes;
  if (!out) throw CommandError(kBadInput, "write failed for " + path.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json config_json(const SolverConfig& cfg) {
  return {{"n_truncate", cfg.n},
          {"tol", cfg.tol},
          {"max_iter", cfg.max_iter},
          {"quad_order", cfg.quad_order},
          {"fast_apply", cfg.fast_apply}};
}

json certificates_json(const CertificateResult& certs) {
  json arr = json::array();
  for (const auto& c : certs.items) {
    arr.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"slack", c.slack}, {"pass", c.pass}});
  }
  return arr;
}

void print_certificates(std::ostream& out, const CertificateResult& certs) {
  out << std::left << std::setw(16) << "certificate" << std::setw(16) << "value" << std::setw(12) << "bound"
      << std::setw(14) << "slack"
      << "status\n";
  for (const auto& c : certs.items) {
    out << std::left << std::setw(16) << c.name << std::setw(16) << std::setprecision(9) << c.value << std::setw(12)
        << std::setprecision(6) << c.bound << std::setw(14) << std::setprecision(6) << c.slack
        << (c.pass ? "PASS" : "FAIL") << '\n';
  }
}

// c in |v_n| <= c/n, read off the same window as l2_tail_estimate.
double tail_constant(const CoeffSequence& v) {
  return l2_tail_estimate(v) * std::sqrt(static_cast<double>(v.size()));
}

/// max_k |residual_start(k)| for k <= min(50, N/2). Zeros past N are unknown;
/// with |delta_n| <= c/n each contributes at most 2c/(pi n (n-k)), and the
/// sum over n > N is below 2c/(pi (N-k)).
Certificate residual_certificate(const ZeroTable& zeros, const CoeffSequence& delta) {
  const std::size_t n = zeros.size();
  const std::size_t rows = std::min(kResidualRows, n / 2);
  double worst = 0.0;
  for (std::size_t k = 1; k <= rows; ++k) worst = std::max(worst, std::abs(residual_start(zeros, k)));
  const double slack = 2.0 * tail_constant(delta) / (std::numbers::pi * static_cast<double>(n - rows));
  return {"residual_start", worst, kResidualBound, slack, worst <= kResidualBound + slack};
}

struct SolverFlags {
  SolverConfig cfg;
  void add_to(CLI::App* app) {
    app->add_option("--n-truncate", cfg.n, "truncation size N (>= 8)")->capture_default_str();
    app->add_option("--tol", cfg.tol, "step-norm tolerance")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "iteration cap")->capture_default_str();
    app->add_option("--quad-order", cfg.quad_order, "Gauss-Legendre order for w and Q")->capture_default_str();
    app->add_flag("--fast-apply", cfg.fast_apply, "FFT-based operator products");
  }
  void validate() const {
    try {
      cfg.validate();
    } catch (const PreconditionViolation& e) {
      throw CommandError(kUsage, e.what());
    }
  }
};

SolveReport run_solver(const SolverConfig& cfg) {
  SolveReport report = fixed_point_iterate(cfg);
  if (!report.converged) {
    throw CommandError(kNumericalFailure, "no convergence after " + std::to_string(report.iterations) +
                                              " iterations (last step " +
                                              format_double(report.step_norms.back()) + ")");
  }
  return report;
}

/// Zeros from --zeros when given, otherwise from a fresh solve.
CoeffSequence load_or_solve(const std::string& zeros_path, const SolverFlags& flags) {
  if (!zeros_path.empty()) {
    try {
      return parse_zeros_csv(read_file(zeros_path));
    } catch (const CommandError&) {
      throw;
    } catch (const std::exception& e) {
      throw CommandError(kBadInput, zeros_path + ": " + e.what());
    }
  }
  flags.validate();
  return run_solver(flags.cfg).delta;
}

PhiEvaluator make_evaluator(const CoeffSequence& delta, std::optional<std::size_t> tail_start) {
  ZeroTable zeros = deltas_to_zeros(delta);
  if (tail_start && (*tail_start < 1 || *tail_start > zeros.size())) {
    throw CommandError(kUsage, "--tail-start must lie in [1, " + std::to_string(zeros.size()) + "]");
  }
  return PhiEvaluator(std::move(zeros), tail_start);
}

// ---- solve ----

struct SolveArgs {
  SolverFlags flags;
  std::string out = "zeros.csv";
  std::string report;
  std::string manifest;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  a.flags.validate();
  const SolveReport report = run_solver(a.flags.cfg);
  CertificateResult certs = certify_ball(report);
  const ZeroTable zeros = deltas_to_zeros(report.delta);
  certs.items.push_back(residual_certificate(zeros, report.delta));

  const fs::path zeros_path = a.out;
  const fs::path dir = zeros_path.parent_path();
  const fs::path report_path = a.report.empty() ? dir / "report.json" : fs::path(a.report);
  const fs::path manifest_path = a.manifest.empty() ? dir / "manifest.json" : fs::path(a.manifest);

  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = "solve";
  r["config"] = config_json(report.config);
  r["n_truncate"] = report.delta.size();
  r["iterations"] = report.iterations;
  r["converged"] = report.converged;
  r["step_norms"] = report.step_norms;
  r["contraction_ratios"] = report.contraction_ratios;
  r["observed_contraction"] = observed_contraction(report);
  r["norm_delta"] = report.norm_delta;
  r["norm_x"] = report.norm_x;
  r["norm_Bw"] = report.norm_Bw;
  r["residual"] = report.residual;
  r["tail_delta"] = report.tail_delta;
  r["tail_x"] = report.tail_x;
  r["tail_Bw"] = report.tail_Bw;
  r["tail_model"] = "|v_n| <= c/n, c = max n|v_n| over N/4 < n <= N/2";
  r["linear_iterations"] = report.linear_iterations;
  r["certificates"] = certificates_json(certs);
  r["all_pass"] = certs.all_pass();

  const std::string csv = zeros_csv(report.delta);
  const std::string report_text = r.dump(2) + "\n";
  write_file(zeros_path, csv);
  write_file(report_path, report_text);

  json m;
  m["schema_version"] = kSchemaVersion;
  m["software_version"] = HBZ_VERSION;
  m["timestamp"] = utc_timestamp();
  m["config"] = config_json(report.config);
  m["artifacts"] = json::array({
      {{"path", zeros_path.string()}, {"bytes", csv.size()}, {"sha256", sha256_hex(csv)}},
      {{"path", report_path.string()}, {"bytes", report_text.size()}, {"sha256", sha256_hex(report_text)}},
  });
  write_file(manifest_path, m.dump(2) + "\n");

  out << "converged in " << report.iterations << " iterations, N = " << report.delta.size() << '\n';
  for (std::size_t n = 1; n <= std::min<std::size_t>(4, zeros.size()); ++n) {
    out << "tau_" << n << " = " << std::setprecision(10) << zeros(n) << '\n';
  }
  print_certificates(out, certs);
  if (!certs.all_pass()) {
    err << "error: certificate failure\n";
    return kCertificateFailure;
  }
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string zeros;
  std::string report;
  int quad_order = SolverConfig{}.quad_order;
  bool fast_apply = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const CoeffSequence delta = load_or_solve(a.zeros, {});
  const std::size_t n = delta.size();
  if (n < kMinTruncation) {
    throw CommandError(kBadInput, a.zeros + ": need at least " + std::to_string(kMinTruncation) + " zeros, got " +
                                      std::to_string(n));
  }
  ZeroTable zeros = [&] {
    try {
      return deltas_to_zeros(delta);
    } catch (const InvariantViolation& e) {
      throw CommandError(kBadInput, a.zeros + ": " + e.what());
    }
  }();
  const bool low_n = n < kLowTruncation;
  if (low_n) {
    err << "warn: only " << n << " zeros; certificates rely on tail estimates\n";
  }

  SolverConfig cfg;
  cfg.n = n;
  cfg.quad_order = a.quad_order;
  cfg.fast_apply = a.fast_apply;
  try {
    cfg.validate();
  } catch (const PreconditionViolation& e) {
    throw CommandError(kUsage, e.what());
  }
  const FixedPointMap map(cfg);
  const CoeffSequence& bw = map.bw();
  const CoeffSequence x = delta - bw;

  CertificateResult certs;
  const double norm_delta = l2_norm(delta), tail_delta = l2_tail_estimate(delta);
  certs.items.push_back({"norm_delta", norm_delta + tail_delta, bounds::kDeltaNorm, tail_delta,
                         norm_delta + tail_delta <= bounds::kDeltaNorm});
  const double norm_x = l2_norm(x), tail_x = l2_tail_estimate(x);
  certs.items.push_back(
      {"norm_x", norm_x + tail_x, bounds::kBallRadius, tail_x, norm_x + tail_x <= bounds::kBallRadius});
  const double norm_bw = l2_norm(bw), tail_bw = l2_tail_estimate(bw);
  certs.items.push_back({"norm_Bw", norm_bw, bounds::kBwNorm, tail_bw, norm_bw <= bounds::kBwNorm + tail_bw});

  // Two-point contraction estimate between the file's point and the ball centre.
  const double spread = l2_norm(x);
  double ratio = 0.0;
  if (spread > 0.0) ratio = l2_norm(map(delta) - map(bw)) / spread;
  certs.items.push_back({"contraction", ratio, kVerifyContraction, 0.0, ratio <= kVerifyContraction});
  certs.items.push_back(residual_certificate(zeros, delta));

  out << "verify " << a.zeros << ": N = " << n << (low_n ? " (low N)" : "") << '\n';
  print_certificates(out, certs);

  if (!a.report.empty()) {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = "verify";
    r["input"] = a.zeros;
    r["n_truncate"] = n;
    r["low_n"] = low_n;
    r["quad_order"] = a.quad_order;
    r["fast_apply"] = a.fast_apply;
    r["certificates"] = certificates_json(certs);
    r["all_pass"] = certs.all_pass();
    write_file(a.report, r.dump(2) + "\n");
  }
  if (!certs.all_pass()) {
    err << "error: certificate failure\n";
    return kCertificateFailure;
  }
  return kOk;
}

// ---- constants ----

struct ConstantsArgs {
  SolverFlags flags;
  std::string zeros;
  std::size_t n_zeros = ConstantConfig{}.n_zeros;
  double quad_tol = ConstantConfig{}.tol;
  std::optional<std::size_t> tail_start;
  std::string out = "constants.json";
};

int cmd_constants(const ConstantsArgs& a, std::ostream& out, std::ostream& /*err*/) {
  const CoeffSequence delta = load_or_solve(a.zeros, a.flags);
  const PhiEvaluator ev = make_evaluator(delta, a.tail_start);
  if (a.n_zeros < 1 || a.n_zeros + 5 > ev.tail_start()) {
    throw CommandError(kUsage, "--n-zeros must lie in [1, " + std::to_string(ev.tail_start() - 5) + "]");
  }
  if (!(a.quad_tol > 0.0)) throw CommandError(kUsage, "--quad-tol must be positive");
  const ConstantBracket b = constant_bracket(ev, {a.n_zeros, a.quad_tol});
  const double gap = b.reference_lower - b.lower;

  out << std::setprecision(12);
  out << "phi_l1       " << b.phi_l1 << '\n'
      << "lower_bound  " << b.lower << '\n'
      << "band         [" << b.lower_min << ", " << b.lower_max << "]\n"
      << "reference    [" << b.reference_lower << ", " << b.reference_upper << "]\n"
      << "gap          " << gap << '\n'
      << "tail         " << b.tail << '\n'
      << "uncertainty  " << b.uncertainty << '\n'
      << "note: " << ConstantBracket::kNote << '\n';

  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = "constants";
  r["zeros_source"] = a.zeros.empty() ? "solve" : a.zeros;
  if (a.zeros.empty()) r["config"] = config_json(a.flags.cfg);
  r["n_truncate"] = delta.size();
  r["tail_start"] = ev.tail_start();
  r["n_zeros"] = b.n_zeros;
  r["quad_tol"] = a.quad_tol;
  r["phi_l1"] = b.phi_l1;
  r["lower_bound"] = b.lower;
  r["lower_bound_min"] = b.lower_min;
  r["lower_bound_max"] = b.lower_max;
  r["tail"] = b.tail;
  r["uncertainty"] = b.uncertainty;
  r["reference_lower"] = b.reference_lower;
  r["reference_upper"] = b.reference_upper;
  r["gap"] = gap;
  r["note"] = std::string(ConstantBracket::kNote);
  write_file(a.out, r.dump(2) + "\n");
  return kOk;
}

// ---- eval ----

struct EvalArgs {
  SolverFlags flags;
  std::string zeros;
  std::optional<double> at;
  std::optional<double> from, to, step;
  std::optional<std::size_t> tail_start;
  std::string out;
};

std::vector<double> eval_grid(const EvalArgs& a) {
  if (a.at) return {*a.at};
  if (!a.from || !a.to || !a.step) throw CommandError(kUsage, "give --at or all of --from, --to, --step");
  if (!(*a.step > 0.0) || !(*a.to >= *a.from) || !std::isfinite(*a.to) || !std::isfinite(*a.from)) {
    throw CommandError(kUsage, "grid needs --step > 0 and --to >= --from");
  }
  const double count = std::floor((*a.to - *a.from) / *a.step + 1e-9);
  if (count > 1e8) throw CommandError(kUsage, "grid has too many points");
  std::vector<double> xs;
  for (long i = 0; i <= static_cast<long>(count); ++i) xs.push_back(*a.from + static_cast<double>(i) * *a.step);
  return xs;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& /*err*/) {
  const std::vector<double> xs = eval_grid(a);
  const CoeffSequence delta = load_or_solve(a.zeros, a.flags);
  const PhiEvaluator ev = make_evaluator(delta, a.tail_start);
  for (double x : xs) {
    if (!(std::abs(x) <= ev.max_abs_x())) {
      throw CommandError(kEvalRange, "x = " + format_double(x) + " outside the evaluation range |x| <= " +
                                         format_double(ev.max_abs_x()));
    }
  }
  std::string csv = "x,phi\n";
  for (double x : xs) csv += format_double(x) + "," + format_double(eval_phi(ev, x)) + "\n";
  if (a.out.empty()) {
    out << csv;
  } else {
    write_file(a.out, csv);
  }
  return kOk;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string zeros_csv(const CoeffSequence& delta) {
  std::string s = "n,tau_n,delta_n\n";
  for (std::size_t n = 1; n <= delta.size(); ++n) {
    const double tau = static_cast<double>(n) + 0.5 - delta(n);
    s += std::to_string(n) + "," + format_double(tau) + "," + format_double(delta(n)) + "\n";
  }
  return s;
}

CoeffSequence parse_zeros_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line() || line != "n,tau_n,delta_n") throw std::runtime_error("missing header n,tau_n,delta_n");
  std::vector<double> delta;
  while (next_line()) {
    if (line.empty()) continue;
    const std::size_t row = delta.size() + 1;
    const std::string where = "row " + std::to_string(row);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw std::runtime_error(where + ": expected 3 fields");
    }
    auto field = [&](std::size_t b, std::size_t e) { return std::string_view(line).substr(b, e - b); };
    auto parse = [&]<typename T>(std::string_view f, T& v) {
      const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
      if (r.ec != std::errc{} || r.ptr != f.data() + f.size()) {
        throw std::runtime_error(where + ": cannot parse '" + std::string(f) + "'");
      }
    };
    std::size_t n = 0;
    double tau = 0.0, d = 0.0;
    parse(field(0, c1), n);
    parse(field(c1 + 1, c2), tau);
    parse(field(c2 + 1, line.size()), d);
    if (n != row) throw std::runtime_error(where + ": index " + std::to_string(n) + " out of sequence");
    if (!std::isfinite(tau) || !std::isfinite(d)) throw std::runtime_error(where + ": non-finite value");
    const double expect = static_cast<double>(n) + 0.5 - d;
    if (std::abs(tau - expect) > 1e-12 * expect) {
      throw std::runtime_error(where + ": tau_n disagrees with n + 1/2 - delta_n");
    }
    delta.push_back(d);
  }
  if (delta.empty()) throw std::runtime_error("no data rows");
  return CoeffSequence(std::move(delta));
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += kHex[md[i] >> 4];
    s += kHex[md[i] & 0xf];
  }
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros of the L1-extremal function and the point-evaluation constant", "hbz"};
  app.set_version_flag("--version", HBZ_VERSION);
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run the fixed-point iteration and write zeros.csv");
  solve.flags.add_to(s);
  s->add_option("--out", solve.out, "zeros CSV path")->capture_default_str();
  s->add_option("--report", solve.report, "report JSON path (default: report.json next to --out)");
  s->add_option("--manifest", solve.manifest, "manifest JSON path (default: manifest.json next to --out)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "recheck certificates for a zeros.csv");
  v->add_option("--zeros", verify.zeros, "zeros CSV")->required();
  v->add_option("--quad-order", verify.quad_order, "Gauss-Legendre order")->capture_default_str();
  v->add_flag("--fast-apply", verify.fast_apply, "FFT-based operator products");
  v->add_option("--report", verify.report, "optional JSON report path");

  ConstantsArgs constants;
  auto* c = app.add_subcommand("constants", "L1 norm of phi and the lower bound for the constant");
  constants.flags.add_to(c);
  c->add_option("--zeros", constants.zeros, "zeros CSV (default: solve afresh)");
  c->add_option("--n-zeros", constants.n_zeros, "zeros integrated exactly before the tail model")
      ->capture_default_str();
  c->add_option("--quad-tol", constants.quad_tol, "adaptive quadrature tolerance")->capture_default_str();
  c->add_option("--tail-start", constants.tail_start, "last tabulated zero used (default: all)");
  c->add_option("--out", constants.out, "constants JSON path")->capture_default_str();

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "evaluate phi at a point or on a grid");
  eval.flags.add_to(e);
  e->add_option("--zeros", eval.zeros, "zeros CSV (default: solve afresh)");
  auto* at = e->add_option("--at", eval.at, "single point");
  auto* from = e->add_option("--from", eval.from, "grid start");
  auto* to = e->add_option("--to", eval.to, "grid end");
  auto* step = e->add_option("--step", eval.step, "grid step");
  at->excludes(from)->excludes(to)->excludes(step);
  e->add_option("--tail-start", eval.tail_start, "last tabulated zero used (default: all)");
  e->add_option("--out", eval.out, "CSV path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << HBZ_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (v->parsed()) return cmd_verify(verify, out, err);
    if (c->parsed()) return cmd_constants(constants, out, err);
    if (e->parsed()) return cmd_eval(eval, out, err);
  } catch (const CommandError& ex) {
    err << "error: " << ex.what() << '\n';
    return ex.code;
  } catch (const NoConvergence& ex) {
    err << "error: " << ex.what() << '\n';
    return kNumericalFailure;
  } catch (const OutOfRange& ex) {
    err << "error: " << ex.what() << '\n';
    return kEvalRange;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace hbz::cli
