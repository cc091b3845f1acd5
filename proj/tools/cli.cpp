#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pvmerge/dual_cert.hpp"
#include "pvmerge/error.hpp"
#include "pvmerge/extremal2.hpp"
#include "pvmerge/grid_copula.hpp"
#include "pvmerge/merge.hpp"
#include "pvmerge/ucp.hpp"
#include "pvmerge/ucp_exact.hpp"

namespace pvmerge::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Common {
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// ---- parsing helpers ------------------------------------------------------

double parse_number(const std::string& text, const std::string& field) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw InvalidArgument(field + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  std::size_t i = 0;
  while (std::getline(in, token, ',')) {
    out.push_back(parse_number(token, field + "[" + std::to_string(i++) + "]"));
  }
  if (out.empty()) throw InvalidArgument(field + ": empty list");
  return out;
}

MergingRule parse_rule(const std::string& text, std::size_t order) {
  if (text == "bonferroni") return rule::Bonferroni{};
  if (text == "hommel") return rule::Hommel{};
  if (text == "ruger") return rule::Ruger{order};
  if (text.rfind("ruger:", 0) == 0) {
    const double k = parse_number(text.substr(6), "--rule");
    if (!(k >= 1.0) || k != std::floor(k)) throw InvalidArgument("--rule: ruger order must be a positive integer");
    return rule::Ruger{static_cast<std::size_t>(k)};
  }
  if (text == "avg2") return rule::ScaledAverage{2.0};
  if (text.rfind("avg:", 0) == 0) return rule::ScaledAverage{parse_number(text.substr(4), "--rule")};
  if (text.rfind("scaled:", 0) == 0) return rule::ScaledSum{parse_number(text.substr(7), "--rule")};
  throw InvalidArgument("--rule: unknown rule '" + text +
                        "' (expected bonferroni, ruger, ruger:<k>, hommel, avg2, avg:<factor> or "
                        "scaled:<alpha>)");
}

Json rule_json(const MergingRule& r) {
  Json j;
  j["name"] = describe(r);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, rule::Ruger>) j["k"] = x.k;
        if constexpr (std::is_same_v<T, rule::ScaledAverage>) j["factor"] = x.factor;
        if constexpr (std::is_same_v<T, rule::ScaledSum>) j["alpha"] = x.alpha;
      },
      r);
  return j;
}

std::string read_file(const std::string& path, const std::string& field) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(field + ": cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> parse_pvalue_text(const std::string& text, const std::string& source) {
  std::vector<double> out;
  std::string token;
  std::size_t i = 0;
  auto flush = [&] {
    if (token.empty()) return;
    out.push_back(parse_number(token, source + " p[" + std::to_string(i++) + "]"));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

unsigned resolve_threads(unsigned t) {
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- output ---------------------------------------------------------------

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) joined += ';';
      joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
    out.emplace_back(prefix, joined);
    return;
  }
  out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  if (format == "csv") {
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << csv_field(rows[i].first);
    out << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << csv_field(rows[i].second);
    out << "\n";
    return;
  }
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

Json header(const char* command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

// ---- commands ---------------------------------------------------------------

struct MergeArgs {
  std::string rule;
  std::size_t order = 1;
  std::string input;
  std::vector<std::string> values;
};

int cmd_merge(const MergeArgs& a, const Common& c, std::ostream& out) {
  std::vector<double> p;
  if (!a.input.empty()) {
    if (!a.values.empty()) throw InvalidArgument("give p-values either inline or via --input, not both");
    p = parse_pvalue_text(read_file(a.input, "--input"), "--input");
  } else {
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      p.push_back(parse_number(a.values[i], "p[" + std::to_string(i) + "]"));
    }
  }
  const PValueVector pv(std::move(p));
  const auto r = parse_rule(a.rule, a.order);
  validate_rule(r, pv.size());
  const auto m = merge(r, pv);
  Json j = header("merge");
  j["rule"] = rule_json(r);
  j["K"] = pv.size();
  j["p_values"] = std::vector<double>(pv.values().begin(), pv.values().end());
  j["raw"] = m.raw;
  j["clipped"] = m.clipped;
  emit(j, c.format, out);
  return kSuccess;
}

struct SpecArgs {
  std::optional<double> sum_threshold;
  std::string box;
  std::string ruger_set;
};

DecreasingSetSpec spec_from_args(const SpecArgs& a, std::size_t K) {
  const int given = (a.sum_threshold ? 1 : 0) + (a.box.empty() ? 0 : 1) + (a.ruger_set.empty() ? 0 : 1);
  if (given != 1) {
    throw InvalidArgument("give exactly one of --sum-threshold, --box, --ruger-set");
  }
  DecreasingSetSpec spec;
  if (a.sum_threshold) {
    spec = set::SumThreshold{*a.sum_threshold};
  } else if (!a.box.empty()) {
    spec = set::Box{parse_list(a.box, "--box")};
  } else {
    const auto v = parse_list(a.ruger_set, "--ruger-set");
    if (v.size() != 2 || !(v[1] >= 1.0) || v[1] != std::floor(v[1])) {
      throw InvalidArgument("--ruger-set: expected alpha,k with k a positive integer");
    }
    spec = set::RugerSet{v[0], static_cast<std::size_t>(v[1])};
  }
  validate_spec(spec, K);
  return spec;
}

struct UcpArgs {
  SpecArgs spec;
  std::size_t K = 2;
  std::size_t n = 64;
  std::string method = "auto";
  std::string emit_witness;
  bool exact = false;
  std::optional<std::size_t> size_budget;
};

std::string rational_string(const lp::Rational& r) { return r.str(); }

int cmd_ucp(const UcpArgs& a, const Common& c, std::ostream& out) {
  const auto spec = spec_from_args(a.spec, a.K);
  UcpOptions opt;
  if (a.size_budget) opt.size_budget = *a.size_budget;
  if (a.method == "transportation") opt.method = LpMethod::Transportation;
  else if (a.method == "simplex") opt.method = LpMethod::Simplex;
  const auto lower = ucp_primal_lp(spec, a.K, a.n, CellEvaluation::Pessimistic, opt);
  const auto upper = ucp_primal_lp(spec, a.K, a.n, CellEvaluation::Optimistic, opt);

  Json j = header("ucp");
  j["set"] = Json::parse(spec_to_json(spec));
  j["K"] = a.K;
  j["n"] = a.n;
  j["method"] = lower.method;
  j["lower"] = lower.value;
  j["upper"] = upper.value;
  j["width"] = upper.value - lower.value;
  if (const auto ref = closed_form_ucp(spec, a.K)) {
    j["reference"] = *ref;
    j["reference_in_bounds"] = BoundPair{lower.value, upper.value}.contains(*ref);
  } else {
    j["reference"] = nullptr;
    j["reference_in_bounds"] = nullptr;
  }
  if (a.exact) {
    const auto el = ucp_primal_lp_exact(spec, a.K, a.n, CellEvaluation::Pessimistic);
    const auto eu = ucp_primal_lp_exact(spec, a.K, a.n, CellEvaluation::Optimistic);
    j["exact"] = {{"lower", rational_string(el.value)}, {"upper", rational_string(eu.value)}};
  }
  if (!a.emit_witness.empty()) {
    write_file(a.emit_witness, to_json(lower.witness) + "\n");
    j["witness_path"] = a.emit_witness;
  }
  j["size_budget"] = opt.size_budget;
  j["tolerances"] = {{"boundary", kBoundaryTolerance}, {"marginal", kMarginalTolerance},
                     {"bound_containment", 1e-9}};
  emit(j, c.format, out);
  return kSuccess;
}

struct CertifyArgs {
  double s = 0.0;
  std::size_t K = 2;
  std::optional<std::size_t> grid_n;
  bool symmetrize = false;
  bool clamp = false;
  bool monotone = false;
  double scale = 1.0;
  std::optional<std::size_t> n;
};

std::size_t default_grid(std::size_t K) {
  switch (K) {
    case 2: return 101;
    case 3: return 31;
    case 4: return 17;
    default: return 5;
  }
}

int cmd_certify(const CertifyArgs& a, const Common& c, std::ostream& out) {
  auto cert = build_ruschendorf_certificate(a.s, a.K);
  Json transforms = Json::array();
  if (a.scale != 1.0) {
    cert = scale_certificate(cert, a.scale);
    transforms.push_back("scale");
  }
  if (a.symmetrize) {
    cert = symmetrize_certificate(cert);
    transforms.push_back("symmetrize");
  }
  if (a.clamp) {
    cert = clamp_nonnegative(cert);
    transforms.push_back("clamp");
  }
  if (a.monotone) {
    cert = monotone_envelope(cert);
    transforms.push_back("monotone");
  }
  FeasibilityOptions fo;
  fo.workers = resolve_threads(c.threads);
  const std::size_t grid = a.grid_n.value_or(default_grid(a.K));
  const auto report = check_feasibility(cert, grid, fo);
  const double half = static_cast<double>(a.K) / 2.0;

  Json j = header("certify");
  j["set"] = Json::parse(spec_to_json(cert.target));
  j["K"] = a.K;
  j["transforms"] = transforms;
  j["value"] = report.value;
  j["closed_form"] = ruschendorf_value(a.s, a.K);
  // Below K/2 the closed-form certificate attains 2s/K; above, its value
  // 2 - K/(2s) is strictly smaller.
  j["regime"] = a.s <= half ? "s <= K/2" : "s > K/2";
  j["feasible"] = report.feasible_on_grid;
  j["worst_violation"] = report.worst_violation;
  j["raw_worst_violation"] = report.raw_worst_violation;
  j["worst_point"] = report.worst_point;
  j["grid_n"] = report.grid_resolution;
  j["points_checked"] = report.points_checked;
  bool ok = report.feasible_on_grid;
  if (a.n) {
    const double primal =
        ucp_primal_lp(cert.target, a.K, *a.n, CellEvaluation::Pessimistic).value;
    const bool holds = weak_duality_check(primal, cert);
    j["weak_duality"] = {{"n", *a.n}, {"primal_lower", primal}, {"holds", holds}};
    ok = ok && holds;
  }
  j["tolerances"] = {{"feasibility", report.tolerance}, {"weak_duality", kWeakDualityTolerance}};
  emit(j, c.format, out);
  return ok ? kSuccess : kCertificationFailed;
}

struct WorstCaseArgs {
  double t = 0.0;
  std::size_t count = 1000;
  std::string output;
};

int cmd_worst_case(const WorstCaseArgs& a, const Common& c, std::ostream& out) {
  const auto copula = build_extremal_copula(a.t);
  const auto pts = sample_extremal(copula, c.seed, a.count);
  std::string csv = "u1,u2\n";
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pts[i][0], pts[i][1]);
    csv += buf;
  }
  if (a.output.empty()) {
    out << csv;
    return kSuccess;
  }
  write_file(a.output, csv);
  Json meta = header("worst-case");
  meta["t"] = a.t;
  meta["count"] = a.count;
  meta["seed"] = c.seed;
  meta["samples_path"] = a.output;
  meta["columns"] = {"u1", "u2"};
  meta["support"] = {a.t, 1.0 + a.t};
  meta["tolerances"] = {{"support", 1e-12}};
  write_file(a.output + ".json", meta.dump(2) + "\n");
  emit(meta, c.format, out);
  return kSuccess;
}

struct ValidateArgs {
  std::string rule;
  std::size_t order = 1;
  std::string copula = "independence";
  std::size_t K = 2;
  double epsilon = 0.05;
  std::size_t count = 100'000;
};

int cmd_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
  std::unique_ptr<CopulaSampler> sampler;
  Json source;
  if (a.copula == "independence") {
    sampler = std::make_unique<IndependenceSampler>(a.K);
    source = {{"type", "independence"}};
  } else if (a.copula.rfind("extremal:", 0) == 0) {
    if (a.K != 2) throw InvalidArgument("--copula extremal:<t> requires --k 2");
    const double t = parse_number(a.copula.substr(9), "--copula");
    sampler = std::make_unique<ExtremalSampler>(build_extremal_copula(t));
    source = {{"type", "extremal"}, {"t", t}};
  } else if (a.copula.rfind("grid:", 0) == 0) {
    const std::string path = a.copula.substr(5);
    auto grid = grid_copula_from_json(read_file(path, "--copula"));
    source = {{"type", "grid"}, {"path", path}, {"n", grid.resolution()}};
    sampler = std::make_unique<GridCopulaSampler>(std::move(grid));
  } else {
    throw InvalidArgument("--copula: unknown source '" + a.copula +
                          "' (expected independence, extremal:<t> or grid:<path>)");
  }
  const auto r = parse_rule(a.rule, a.order);
  const auto res = type1_error_mc(r, *sampler, a.epsilon, c.seed, a.count, resolve_threads(c.threads));

  Json j = header("validate");
  j["rule"] = rule_json(r);
  j["copula"] = source;
  j["K"] = sampler->dimension();
  j["epsilon"] = a.epsilon;
  j["count"] = res.count;
  j["seed"] = res.seed;
  j["rejections"] = res.rejections;
  j["rate"] = res.rate;
  j["band"] = res.band;
  j["verdict"] = res.within_band() ? "PASS" : "FAIL";
  j["tolerances"] = {{"band_sigmas", 3}};
  emit(j, c.format, out);
  return res.within_band() ? kSuccess : kCertificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Merging p-values under arbitrary dependence", "pvmerge"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--seed", common.seed, "Seed for stochastic commands");
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)");

  MergeArgs merge_args;
  auto* merge_cmd = app.add_subcommand("merge", "Merge p-values with a fixed rule");
  merge_cmd->add_option("--rule", merge_args.rule,
                        "bonferroni | ruger | ruger:<k> | hommel | avg2 | avg:<factor> | scaled:<alpha>")
      ->required();
  merge_cmd->add_option("--k", merge_args.order, "Order statistic for ruger");
  merge_cmd->add_option("--input", merge_args.input, "File of p-values ('-' for stdin)");
  merge_cmd->add_option("p", merge_args.values, "p-values");

  UcpArgs ucp_args;
  auto* ucp_cmd = app.add_subcommand("ucp", "Grid LP bounds on the upper copular probability");
  ucp_cmd->add_option("--sum-threshold", ucp_args.spec.sum_threshold, "Set {u_1+...+u_K <= s}");
  ucp_cmd->add_option("--box", ucp_args.spec.box, "Set [0,u_1] x ... x [0,u_K], as u1,u2,...");
  ucp_cmd->add_option("--ruger-set", ucp_args.spec.ruger_set, "Set {#(u_k <= alpha) >= k}, as alpha,k");
  ucp_cmd->add_option("--k", ucp_args.K, "Dimension K");
  ucp_cmd->add_option("--n", ucp_args.n, "Grid resolution");
  ucp_cmd->add_option("--method", ucp_args.method, "LP solver")
      ->check(CLI::IsMember({"auto", "transportation", "simplex"}));
  ucp_cmd->add_option("--emit-witness", ucp_args.emit_witness, "Write the lower-bound witness copula");
  ucp_cmd->add_flag("--exact", ucp_args.exact, "Also solve in rational arithmetic (n <= 8, K <= 3)");
  ucp_cmd->add_option("--size-budget", ucp_args.size_budget, "Maximum number of grid cells");

  CertifyArgs cert_args;
  auto* cert_cmd = app.add_subcommand("certify", "Check the closed-form dual certificate");
  cert_cmd->add_option("--sum-threshold", cert_args.s, "Target set {u_1+...+u_K <= s}")->required();
  cert_cmd->add_option("--k", cert_args.K, "Dimension K");
  cert_cmd->add_option("--grid-n", cert_args.grid_n, "Points per axis of the feasibility grid");
  cert_cmd->add_flag("--symmetrize", cert_args.symmetrize, "Average the components");
  cert_cmd->add_flag("--clamp", cert_args.clamp, "Take positive parts");
  cert_cmd->add_flag("--monotone", cert_args.monotone, "Take decreasing envelopes");
  cert_cmd->add_option("--scale", cert_args.scale, "Multiply the certificate first");
  cert_cmd->add_option("--n", cert_args.n, "Compare with the grid LP lower bound at this resolution");

  WorstCaseArgs wc_args;
  auto* wc_cmd = app.add_subcommand("worst-case", "Sample the antidiagonal extremal copula");
  wc_cmd->add_option("--t", wc_args.t, "Mass of the lower segment")->required();
  wc_cmd->add_option("--count", wc_args.count, "Number of samples");
  wc_cmd->add_option("--output", wc_args.output, "CSV path; metadata goes to <path>.json");

  ValidateArgs val_args;
  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo type I error of a rule");
  val_cmd->add_option("--rule", val_args.rule, "Merging rule")->required();
  val_cmd->add_option("--ruger-k", val_args.order, "Order statistic for ruger");
  val_cmd->add_option("--copula", val_args.copula, "independence | extremal:<t> | grid:<path>");
  val_cmd->add_option("--k", val_args.K, "Dimension K (independence)");
  val_cmd->add_option("--epsilon", val_args.epsilon, "Significance level");
  val_cmd->add_option("--count", val_args.count, "Number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (merge_cmd->parsed()) return cmd_merge(merge_args, common, out);
    if (ucp_cmd->parsed()) return cmd_ucp(ucp_args, common, out);
    if (cert_cmd->parsed()) return cmd_certify(cert_args, common, out);
    if (wc_cmd->parsed()) return cmd_worst_case(wc_args, common, out);
    if (val_cmd->parsed()) return cmd_validate(val_args, common, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInputError;
}

}  // namespace pvmerge::cli
