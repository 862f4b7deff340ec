#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qmult/families.hpp"
#include "qmult/io.hpp"
#include "qmult/norms.hpp"
#include "qmult/qubit.hpp"
#include "qmult/verify.hpp"

namespace qmult::cli {

namespace {

struct ChannelSpec {
  std::string family;
  std::string file;
  int d = 2;
  std::optional<double> lambda;
  std::vector<double> lambdas;
  std::vector<double> ts;
  std::vector<double> gamma;
  int n = 2;
  int m = 2;
  int kraus = 2;
  std::uint64_t channel_seed = 0;
  bool trace_preserving = true;
};

void add_channel_options(CLI::App& cmd, ChannelSpec& spec) {
  cmd.add_option("--family", spec.family,
                 "identity | depolarizing | generalized-depolarizing | qubit-diagonal | werner-holevo | "
                 "transpose | random-cp | random-ep-cp");
  cmd.add_option("--file", spec.file, "channel JSON file");
  cmd.add_option("--d", spec.d, "dimension");
  cmd.add_option("--lambda", spec.lambda, "depolarizing parameter");
  cmd.add_option("--lambdas", spec.lambdas, "qubit lambda1,lambda2,lambda3")->delimiter(',');
  cmd.add_option("--ts", spec.ts, "qubit t1,t2,t3")->delimiter(',');
  cmd.add_option("--gamma", spec.gamma, "diagonal of the fixed density matrix")->delimiter(',');
  cmd.add_option("--n", spec.n, "input dimension (random families)");
  cmd.add_option("--m", spec.m, "output dimension (random families)");
  cmd.add_option("--kraus", spec.kraus, "Kraus count (random families)");
  cmd.add_option("--channel-seed", spec.channel_seed, "seed (random families)");
  cmd.add_flag("!--not-tp", spec.trace_preserving, "random families: trace-nonincreasing instead of trace-preserving");
}

double require_lambda(const ChannelSpec& s) {
  if (!s.lambda) throw InputError("--lambda: required for family " + s.family);
  return *s.lambda;
}

std::array<double, 3> triple(const std::vector<double>& v, const char* field) {
  if (v.size() != 3) throw InputError(std::string(field) + ": expected three comma-separated values");
  return {v[0], v[1], v[2]};
}

DescribedChannel build_channel(const ChannelSpec& s) {
  if (!s.file.empty()) {
    if (!s.family.empty()) throw InputError("--family: cannot be combined with --file");
    return load_channel(s.file);
  }
  if (s.family.empty()) throw InputError("--family: a channel family or --file is required");
  const std::string& f = s.family;
  if (f == "identity") return {identity_channel(s.d), {f, {{"d", s.d}}, std::nullopt}};
  if (f == "depolarizing") {
    const double lam = require_lambda(s);
    return {depolarizing(s.d, lam), {f, {{"d", s.d}, {"lambda", lam}}, std::nullopt}};
  }
  if (f == "generalized-depolarizing") {
    const double lam = require_lambda(s);
    if (s.gamma.empty()) throw InputError("--gamma: required for family " + f);
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(s.gamma.size()), static_cast<Eigen::Index>(s.gamma.size()));
    for (std::size_t k = 0; k < s.gamma.size(); ++k) g(k, k) = s.gamma[k];
    return {generalized_depolarizing(lam, g), {f, {{"lambda", lam}, {"gamma", s.gamma}}, std::nullopt}};
  }
  if (f == "qubit-diagonal") {
    QubitDiagonalParams p;
    p.lambda = triple(s.lambdas, "--lambdas");
    p.t = triple(s.ts, "--ts");
    return {qubit_from_diagonal(p), {f, {{"lambda", p.lambda}, {"t", p.t}}, std::nullopt}};
  }
  if (f == "werner-holevo") return {werner_holevo(s.d), {f, {{"d", s.d}}, std::nullopt}};
  if (f == "transpose") return {transpose_map(s.d), {f, {{"d", s.d}}, std::nullopt}};
  if (f == "random-cp" || f == "random-ep-cp") {
    const json params = {{"n", s.n}, {"m", s.m}, {"kraus_count", s.kraus}, {"trace_preserving", s.trace_preserving}};
    ChannelMap k = f == "random-cp" ? random_cp_channel(s.n, s.m, s.kraus, s.channel_seed, s.trace_preserving)
                                    : random_ep_cp_channel(s.n, s.m, s.kraus, s.channel_seed, s.trace_preserving);
    return {std::move(k), {f, params, s.channel_seed}};
  }
  throw InputError("--family: unknown family '" + f + "'");
}

json spec_to_json(const ChannelSpec& s) {
  json j = {{"family", s.family.empty() ? json(nullptr) : json(s.family)},
            {"file", s.file.empty() ? json(nullptr) : json(s.file)}};
  return j;
}

std::optional<QubitDiagonalParams> qubit_params(const ChannelSpec& s) {
  if (s.family != "qubit-diagonal") return std::nullopt;
  QubitDiagonalParams p;
  p.lambda = triple(s.lambdas, "--lambdas");
  p.t = triple(s.ts, "--ts");
  return p;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const json& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  if (format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << csv_quote(k) << ',' << csv_quote(v) << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

struct OptimizerOptions {
  int restarts = 32;
  int max_iters = 500;
  double step_tolerance = 1e-8;
  std::uint64_t seed = 0;
};

void apply_env_defaults(OptimizerOptions& o) {
  if (const char* s = std::getenv("QMULT_SEED")) o.seed = std::strtoull(s, nullptr, 10);
  if (const char* r = std::getenv("QMULT_RESTARTS")) o.restarts = std::atoi(r);
}

void add_optimizer_options(CLI::App& cmd, OptimizerOptions& o) {
  cmd.add_option("--seed", o.seed, "master seed (env QMULT_SEED)");
  cmd.add_option("--restarts", o.restarts, "optimizer restarts (env QMULT_RESTARTS)");
  cmd.add_option("--max-iters", o.max_iters, "optimizer iterations per restart");
  cmd.add_option("--step-tolerance", o.step_tolerance, "relative first-order stationarity tolerance");
}

OptimizerConfig to_config(const OptimizerOptions& o) {
  OptimizerConfig c;
  c.restarts = o.restarts;
  c.max_iters = o.max_iters;
  c.step_tolerance = o.step_tolerance;
  c.seed = o.seed;
  c.validate();
  return c;
}

json optimizer_json(const OptimizerConfig& c) {
  return {{"restarts", c.restarts},
          {"max_iters", c.max_iters},
          {"step_tolerance", c.step_tolerance},
          {"value_tolerance", c.value_tolerance},
          {"seed", c.seed}};
}

void write_output(const std::string& path, const json& doc, const std::string& format, std::ostream& out) {
  if (path.empty()) {
    emit(doc, format, out);
    return;
  }
  std::ostringstream buf;
  emit(doc, format, buf);
  write_text_file(path, buf.str());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmult: Schatten norms, maximal output purity and multiplicativity checks for linear maps"};
  app.require_subcommand(1);
  std::string format = "json";
  std::string output_path;

  // norm
  ChannelSpec norm_spec;
  OptimizerOptions norm_opt;
  apply_env_defaults(norm_opt);
  std::string p_text = "2", q_text = "2", t_text = "2";
  bool use_nu = false;
  auto* norm = app.add_subcommand("norm", "p->q norm or maximal output t-norm of a channel");
  add_channel_options(*norm, norm_spec);
  add_optimizer_options(*norm, norm_opt);
  norm->add_option("--p", p_text, "input Schatten exponent (number or inf)");
  norm->add_option("--q", q_text, "output Schatten exponent (number or inf)");
  norm->add_flag("--nu", use_nu, "compute nu_t instead of the p->q norm");
  norm->add_option("--t", t_text, "exponent for --nu");

  // check
  ChannelSpec check_spec;
  int samples = 1000;
  std::uint64_t check_seed = 0;
  if (const char* s = std::getenv("QMULT_SEED")) check_seed = std::strtoull(s, nullptr, 10);
  auto* check = app.add_subcommand("check", "CP, EP, TP and 2-positivity of a channel");
  add_channel_options(*check, check_spec);
  check->add_option("--samples", samples, "random inputs for the 2-positivity falsification");
  check->add_option("--seed", check_seed, "seed for the 2-positivity falsification");

  // verify
  OptimizerOptions verify_opt;
  apply_env_defaults(verify_opt);
  int theorem = 0;
  bool wh = false, ep_hat = false, timing = false;
  std::optional<int> cases;
  std::vector<int> t_values;
  std::vector<double> p_values{1.0, 1.5, 2.0};
  int max_dim = 3, wh_d = 3;
  double tolerance = kOptimizerTolerance;
  std::string report_path, summary_path;
  auto* verify = app.add_subcommand("verify", "run multiplicativity experiments");
  add_optimizer_options(*verify, verify_opt);
  auto* thm_opt = verify->add_option("--theorem", theorem, "1, 2 or 4")->check(CLI::IsMember({1, 2, 4}));
  auto* wh_opt = verify->add_flag("--wh", wh, "Werner-Holevo witness");
  auto* ep_opt = verify->add_flag("--ep-hat", ep_hat, "qubit Phi^ o Phi probe");
  thm_opt->excludes(wh_opt)->excludes(ep_opt);
  wh_opt->excludes(ep_opt);
  verify->add_option("--cases", cases, "number of generated cases");
  verify->add_option("--t", t_values, "integer t list")->delimiter(',');
  verify->add_option("--p", p_values, "p list for theorem 1")->delimiter(',');
  verify->add_option("--max-dim", max_dim, "dimension cap for generated channels (2 or 3)");
  verify->add_option("--d", wh_d, "dimension for --wh");
  verify->add_option("--tolerance", tolerance, "relative equality tolerance");
  verify->add_option("--report", report_path, "JSON-lines report path");
  verify->add_option("--summary", summary_path, "CSV summary path");
  verify->add_flag("--timing", timing, "include wall-clock times in outputs");

  // channel export
  ChannelSpec export_spec;
  std::string export_path;
  auto* exporter = app.add_subcommand("channel", "write a channel to the JSON interchange format");
  add_channel_options(*exporter, export_spec);
  exporter->add_option("--out", export_path, "destination file")->required();

  for (auto* cmd : {norm, check, verify}) {
    cmd->add_option("--format", format, "json | csv | table")->check(CLI::IsMember({"json", "csv", "table"}));
    cmd->add_option("--out", output_path, "write the result here instead of stdout");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*norm) {
      const DescribedChannel ch = build_channel(norm_spec);
      const OptimizerConfig cfg = to_config(norm_opt);
      json config = {{"command", "norm"},
                     {"channel", spec_to_json(norm_spec)},
                     {"descriptor", descriptor_to_json(ch.descriptor)},
                     {"optimizer", optimizer_json(cfg)},
                     {"format", format}};
      NormResult r;
      if (use_nu) {
        const SchattenExponent t = SchattenExponent::parse(t_text);
        config["objective"] = "nu";
        config["t"] = t.to_string();
        r = nu(ch.map, t, cfg);
      } else {
        const SchattenExponent p = SchattenExponent::parse(p_text);
        const SchattenExponent q = SchattenExponent::parse(q_text);
        config["objective"] = "p_to_q";
        config["p"] = p.to_string();
        config["q"] = q.to_string();
        r = p2q_norm(ch.map, p, q, cfg);
      }
      json doc = {{"config", config}, {"result", norm_result_to_json(r)}};
      write_output(output_path, doc, format, out);
      return r.converged ? kOk : kNotConverged;
    }

    if (*check) {
      const DescribedChannel ch = build_channel(check_spec);
      const CpReport cp = is_cp(ch.map);
      const EpReport ep = is_ep_in_basis(ch.map);
      const auto qp = qubit_params(check_spec);
      const bool canonical = qp && qubit_is_ep_canonical(*qp);
      const TwoPositivityReport two = two_positive_falsify(ch.map, samples, check_seed);
      json result = {
          {"cp", cp.cp},
          {"hermiticity_preserving", cp.hermiticity_preserving},
          {"cp_min_eigenvalue", cp.min_eigenvalue},
          {"ep", ep.ep || canonical},
          {"ep_standard_basis", ep.ep},
          {"ep_violation", ep.violation},
          {"ep_worst_entry", {{"i", ep.i}, {"j", ep.j}, {"k", ep.k}, {"l", ep.l}}},
          {"tp", is_trace_preserving(ch.map)},
          {"two_positive_not_falsified", two.not_falsified},
          {"two_positive_min_eigenvalue", two.min_eigenvalue},
      };
      if (qp) result["ep_qubit_canonical"] = canonical;
      json config = {{"command", "check"},
                     {"channel", spec_to_json(check_spec)},
                     {"descriptor", descriptor_to_json(ch.descriptor)},
                     {"samples", samples},
                     {"seed", check_seed},
                     {"format", format}};
      write_output(output_path, {{"config", config}, {"result", result}}, format, out);
      return kOk;
    }

    if (*verify) {
      SuiteConfig sc;
      if (wh) {
        sc.theorem = "wh";
      } else if (ep_hat) {
        sc.theorem = "ep_hat";
      } else if (theorem != 0) {
        sc.theorem = "thm" + std::to_string(theorem);
      } else {
        throw InputError("--theorem: one of --theorem, --wh or --ep-hat is required");
      }
      if (!t_values.empty()) {
        sc.t_values = t_values;
      } else if (sc.theorem == "thm1" || sc.theorem == "thm4") {
        sc.t_values = {1, 2};
      }
      sc.p_values = p_values;
      sc.max_dim = max_dim;
      sc.wh_dim = wh_d;
      sc.tolerance = tolerance;
      sc.master_seed = verify_opt.seed;
      sc.optimizer = to_config(verify_opt);
      if (cases) {
        sc.cases = *cases;
      } else if (sc.theorem == "wh") {
        sc.cases = static_cast<int>(sc.t_values.size());
      } else {
        throw InputError("--cases: required for --theorem and --ep-hat");
      }
      const SuiteResult res = run_suite(sc);

      json config = {{"command", "verify"},
                     {"theorem", sc.theorem},
                     {"cases", sc.cases},
                     {"t", sc.t_values},
                     {"p", sc.p_values},
                     {"max_dim", sc.max_dim},
                     {"d", sc.wh_dim},
                     {"tolerance", sc.tolerance},
                     {"master_seed", sc.master_seed},
                     {"optimizer", optimizer_json(sc.optimizer)},
                     {"format", format}};
      json reports = json::array();
      for (const auto& r : res.reports) reports.push_back(report_to_json(r, timing));
      json doc = {{"config", config}, {"summary", summary_to_json(res.summary, timing)}, {"reports", reports}};
      try {
        if (!report_path.empty()) write_text_file(report_path, reports_jsonl(res.reports, timing));
        if (!summary_path.empty()) write_text_file(summary_path, summary_csv(res.summary, timing));
        write_output(output_path, doc, format, out);
      } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
      }
      if (res.summary.failed > 0 || res.summary.rejected > 0) return kCheckFailed;
      return res.summary.non_converged > 0 ? kNotConverged : kOk;
    }

    if (*exporter) {
      const DescribedChannel ch = build_channel(export_spec);
      save_channel(export_path, ch.map, ch.descriptor);
      return kOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace qmult::cli
