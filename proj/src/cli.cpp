#include "rrt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "rrt/bounds.hpp"
#include "rrt/exact.hpp"
#include "rrt/rare_event.hpp"
#include "rrt/tree.hpp"
#include "rrt/verify.hpp"

namespace rrt::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Kind { uint, real, choice, uint_list };

struct ParamSpec {
  std::string flag;
  Kind kind = Kind::uint;
  /// Canonical default; empty means the flag is required (or, for bounds,
  /// required only by the kinds that use it).
  std::string fallback;
  std::string help;
  std::function<std::string(double)> check;  // returns an error message or ""
  std::vector<std::string> choices;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
  Format default_format = Format::csv;
};

std::function<std::string(double)> at_least(double lo) {
  return [lo](double v) { return v >= lo ? "" : "must be >= " + std::to_string(static_cast<long long>(lo)); };
}

std::function<std::string(double)> positive() {
  return [](double v) { return v > 0.0 ? "" : "must be positive"; };
}

std::function<std::string(double)> open_unit() {
  return [](double v) { return v > 0.0 && v < 1.0 ? "" : "must lie in (0, 1)"; };
}

std::function<std::string(double)> half_open_unit() {
  return [](double v) { return v > 0.0 && v <= 1.0 ? "" : "must lie in (0, 1]"; };
}

std::function<std::string(double)> above_e() {
  return [](double v) { return v > std::numbers::e ? "" : "must exceed e"; };
}

std::function<std::string(double)> any() {
  return [](double) { return std::string(); };
}

ParamSpec uint_param(std::string flag, std::string fallback, std::string help,
                     std::function<std::string(double)> check = any()) {
  return {std::move(flag), Kind::uint, std::move(fallback), std::move(help), std::move(check), {}};
}

ParamSpec real_param(std::string flag, std::string fallback, std::string help,
                     std::function<std::string(double)> check = any()) {
  return {std::move(flag), Kind::real, std::move(fallback), std::move(help), std::move(check), {}};
}

ParamSpec reps_param(const char* fallback) { return uint_param("reps", fallback, "replicates", at_least(1)); }
ParamSpec seed_param() { return uint_param("seed", "1", "root seed"); }

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> specs{
      {"simulate",
       "Grow random recursive trees and report their heights",
       {uint_param("n", "", "tree size", at_least(1)), reps_param("1000"), seed_param(),
        {"generator", Kind::choice, "uniform", "uniform | floor-map | yule", any(), {"uniform", "floor-map", "yule"}}},
       Format::csv},
      {"exact-cdf",
       "Exact table A_k(n) = (n-1)! P(H_n <= k)",
       {uint_param("n-max", "", "largest n", at_least(1)), uint_param("k-max", "", "largest k (default n-max - 1)")},
       Format::csv},
      {"omega",
       "omega_alpha(n) = -ln P(H_n <= floor(alpha e ln n)) / (n^(1-alpha) (ln n)^(-3/(2e)))",
       {{"n", Kind::uint_list, "", "comma-separated sizes, each >= 2", at_least(2), {}},
        real_param("alpha", "", "alpha in (0, 1)", open_unit())},
       Format::csv},
      {"tail-upper",
       "Monte Carlo estimate of P(H_n >= ceil(beta ln n))",
       {uint_param("n", "", "tree size", at_least(2)), real_param("beta", "", "beta > 0", positive()),
        reps_param("100000"), seed_param()},
       Format::json},
      {"tail-lower",
       "Importance-sampling estimate of P(H_n <= floor(alpha e ln n))",
       {uint_param("n", "", "tree size", at_least(2)), real_param("alpha", "", "alpha in (0, 1)", open_unit()),
        real_param("theta", "0.6", "tilt theta in (0, 1]", half_open_unit()), reps_param("100000"), seed_param()},
       Format::json},
      {"pi-chain",
       "Estimate of P(pi^(k)(n) >= n e^(-k/beta)) with its analytic sandwich",
       {uint_param("n", "", "start value", at_least(1)), uint_param("k", "", "chain length", at_least(1)),
        real_param("beta", "", "beta > 0", positive()), reps_param("100000"), seed_param()},
       Format::json},
      {"good-vertices",
       "Good-vertex count Sigma_n on floor-map trees",
       {uint_param("n", "", "tree size", at_least(4)), real_param("beta", "", "beta > e", above_e()),
        reps_param("10000"), seed_param()},
       Format::json},
      {"bounds",
       "Evaluate closed-form bounds and rates",
       {{"kind",
         Kind::choice,
         "",
         "rates | kl | poisson | gamma | sandwich | x1 | remark13 | tower | partition",
         any(),
         {"rates", "kl", "poisson", "gamma", "sandwich", "x1", "remark13", "tower", "partition"}},
        real_param("beta", "", "beta > 0", positive()),
        real_param("gamma", "", "gamma in [0, 1]", [](double v) { return v >= 0 && v <= 1 ? "" : "must lie in [0, 1]"; }),
        real_param("p", "", "p in [0, 1]", [](double v) { return v >= 0 && v <= 1 ? "" : "must lie in [0, 1]"; }),
        real_param("count", "", "number of indicators (> 0)", positive()),
        real_param("lambda", "", "lambda > 0", positive()), real_param("x", "", "real argument"),
        real_param("z", "", "z >= 0", [](double v) { return v >= 0 ? "" : "must be >= 0"; }),
        uint_param("n", "", "size", at_least(1)), uint_param("k", "", "integer order"),
        uint_param("t", "", "tail point (x1)"), uint_param("N", "", "set size (partition), >= 3", at_least(3))},
       Format::json},
      {"verify",
       "Run invariant checks; exit 1 if any fails",
       {{"suite", Kind::choice, "all", "all | tree | exact | bounds | rare", any(), {"all", "tree", "exact", "bounds", "rare"}}},
       Format::csv},
  };
  return specs;
}

const std::map<std::string, std::vector<std::string>>& bounds_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"rates", {"beta"}},           {"kl", {"gamma", "p", "count"}}, {"poisson", {"lambda", "x"}},
      {"gamma", {"k", "z"}},         {"sandwich", {"n", "k", "beta"}}, {"x1", {"n", "t"}},
      {"remark13", {"lambda"}},      {"tower", {"x", "k"}},           {"partition", {"N"}},
  };
  return kinds;
}

const char* kJsonFieldsHelp =
    "JSON artifacts carry \"schema\": \"rrt-ldp/1\" and \"command\". Tail commands add\n"
    "  event, threshold, estimate, std_error, reps, seed and their raw inputs;\n"
    "  pi-chain adds sandwich_lower, sandwich_upper; good-vertices reports\n"
    "  estimate/std_error for P(Sigma_n >= 1) and mean_sigma/mean_sigma_std_error;\n"
    "  bounds reports kind plus one field per input and output.\n"
    "CSV headers: simulate n,rep,height; exact-cdf n,k,A_k_n,prob_num,prob_den,prob_float;\n"
    "  omega n,alpha,threshold,neg_ln_F,omega; other commands flatten their JSON fields.\n"
    "Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.\n"
    "RRT_LDP_THREADS caps the worker pool.";

const CommandSpec& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw UsageError("unknown command '" + name + "'");
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string canonical_uint(const std::string& flag, const std::string& text, const ParamSpec& spec) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("--" + flag + ": expected a non-negative integer, got '" + text + "'");
  if (auto msg = spec.check(static_cast<double>(v)); !msg.empty()) throw UsageError("--" + flag + ": " + msg);
  return std::to_string(v);
}

std::string canonical_value(const ParamSpec& spec, const std::string& text) {
  const std::string& flag = spec.flag;
  switch (spec.kind) {
    case Kind::uint:
      return canonical_uint(flag, text, spec);
    case Kind::real: {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw UsageError("--" + flag + ": expected a finite number, got '" + text + "'");
      if (auto msg = spec.check(v); !msg.empty()) throw UsageError("--" + flag + ": " + msg);
      return format_real(v);
    }
    case Kind::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), text) == spec.choices.end())
        throw UsageError("--" + flag + ": '" + text + "' is not one of " + spec.help);
      return text;
    case Kind::uint_list: {
      std::string out;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!out.empty()) out += ",";
        out += canonical_uint(flag, item, spec);
      }
      if (out.empty()) throw UsageError("--" + flag + ": empty list");
      return out;
    }
  }
  return text;
}

std::uint64_t get_uint(const RunPlan& plan, const std::string& key) {
  return std::stoull(plan.params.at(key));
}

double get_real(const RunPlan& plan, const std::string& key) {
  const std::string& s = plan.params.at(key);
  double v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::vector<std::uint64_t> get_list(const RunPlan& plan, const std::string& key) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(plan.params.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::string float17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_number_float()) return float17(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

// JSON cannot hold infinities; they are written as null.
Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void emit_record(std::ostream& out, Format format, const Json& record) {
  if (format == Format::json) {
    out << record.dump(2) << "\n";
    return;
  }
  std::string header, row;
  for (const auto& [key, value] : record.items()) {
    if (!header.empty()) {
      header += ",";
      row += ",";
    }
    header += key;
    row += csv_cell(value);
  }
  out << header << "\n" << row << "\n";
}

Json tail_json(const RunPlan& plan, const TailEstimate& est) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = plan.command;
  for (const auto& [k, v] : plan.params)
    if (k != "reps" && k != "seed") j[k] = v.find_first_not_of("0123456789") == std::string::npos ? Json(std::stoull(v)) : Json(std::stod(v));
  j["event"] = est.event_desc;
  j["threshold"] = est.threshold;
  j["estimate"] = est.value;
  j["std_error"] = est.std_error;
  j["reps"] = est.reps;
  j["seed"] = est.root_seed;
  return j;
}

void run_simulate(const RunPlan& plan, std::ostream& out) {
  const auto n = get_uint(plan, "n");
  const auto reps = get_uint(plan, "reps");
  const auto seed = get_uint(plan, "seed");
  const auto& generator = plan.params.at("generator");
  std::vector<std::uint32_t> heights(reps);
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(seed, i);
    const RecursiveTree t = generator == "uniform"     ? grow_uniform(n, s)
                            : generator == "floor-map" ? grow_floor_map(n, s)
                                                       : grow_yule(n, s).tree;
    heights[i] = tree_stats(t).height;
  }
  if (plan.format == Format::csv) {
    out << "n,rep,height\n";
    for (std::uint64_t i = 0; i < reps; ++i) out << n << "," << i << "," << heights[i] << "\n";
    return;
  }
  Json j;
  j["schema"] = kSchema;
  j["command"] = plan.command;
  j["n"] = n;
  j["generator"] = generator;
  j["reps"] = reps;
  j["seed"] = seed;
  j["heights"] = heights;
  out << j.dump(2) << "\n";
}

void run_exact_cdf(const RunPlan& plan, std::ostream& out) {
  const auto n_max = get_uint(plan, "n-max");
  const auto k_max = get_uint(plan, "k-max");
  const auto table = build_cdf_table(n_max, k_max);
  Json rows = Json::array();
  if (plan.format == Format::csv) out << "n,k,A_k_n,prob_num,prob_den,prob_float\n";
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t k = 0; k <= k_max; ++k) {
      const auto p = exact_height_cdf(table, n, k);
      const std::string a = table.count(n, k).get_str();
      const std::string num = p.value.get_num().get_str(), den = p.value.get_den().get_str();
      const std::string approx = to_decimal(p.value, 17);
      if (plan.format == Format::csv)
        out << n << "," << k << "," << a << "," << num << "," << den << "," << approx << "\n";
      else
        rows.push_back(Json{{"n", n}, {"k", k}, {"A_k_n", a}, {"prob_num", num}, {"prob_den", den}, {"prob_float", approx}});
    }
  }
  if (plan.format == Format::json) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = plan.command;
    j["n_max"] = n_max;
    j["k_max"] = k_max;
    j["rows"] = rows;
    out << j.dump(2) << "\n";
  }
}

void run_omega(const RunPlan& plan, std::ostream& out) {
  const auto sizes = get_list(plan, "n");
  const double alpha = get_real(plan, "alpha");
  const auto n_max = *std::max_element(sizes.begin(), sizes.end());
  std::size_t k_max = 0;
  for (auto n : sizes) k_max = std::max(k_max, lower_tail_threshold(n, alpha));
  const auto table = build_cdf_table(n_max, k_max);
  Json rows = Json::array();
  if (plan.format == Format::csv) out << "n,alpha,threshold,neg_ln_F,omega\n";
  for (auto n : sizes) {
    const auto w = omega_alpha(table, n, alpha);
    if (plan.format == Format::csv)
      out << n << "," << float17(alpha) << "," << w.threshold << "," << float17(w.neg_ln_f) << "," << float17(w.omega)
          << "\n";
    else
      rows.push_back(Json{{"n", n},
                          {"alpha", alpha},
                          {"threshold", w.threshold},
                          {"neg_ln_F", real_json(w.neg_ln_f)},
                          {"neg_ln_F_text", w.neg_ln_f_text},
                          {"omega", real_json(w.omega)}});
  }
  if (plan.format == Format::json) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = plan.command;
    j["rows"] = rows;
    out << j.dump(2) << "\n";
  }
}

Json run_bounds(const RunPlan& plan) {
  const auto& kind = plan.params.at("kind");
  Json j;
  j["schema"] = kSchema;
  j["command"] = plan.command;
  j["kind"] = kind;
  for (const auto& key : bounds_kinds().at(kind)) {
    const auto& v = plan.params.at(key);
    j[key] = v.find_first_not_of("0123456789") == std::string::npos ? Json(std::stoull(v)) : Json(get_real(plan, key));
  }
  if (kind == "rates") {
    const auto r = rate_functions(get_real(plan, "beta"));
    j["J"] = r.J;
    j["J_sf"] = r.J_sf;
  } else if (kind == "kl") {
    const double g = get_real(plan, "gamma"), p = get_real(plan, "p");
    j["binary_kl"] = real_json(binary_kl(g, p));
    j["chernoff_bound"] = generalized_chernoff(get_real(plan, "count"), g, p);
  } else if (kind == "poisson") {
    const double lambda = get_real(plan, "lambda"), x = get_real(plan, "x");
    const auto xi = static_cast<std::int64_t>(std::floor(x));
    j["cdf"] = x < 0 ? 0.0 : poisson_cdf(lambda, xi);
    j["sf"] = x < 0 ? 1.0 : poisson_sf(lambda, xi);
    if (x > lambda) {
      const auto c = poisson_chernoff(lambda, x);
      j["chernoff_tight"] = c.tight;
      j["chernoff_loose"] = c.loose;
    }
  } else if (kind == "gamma") {
    const auto k = get_uint(plan, "k");
    if (k < 1) throw UsageError("--k: must be >= 1 for --kind gamma");
    j["cdf"] = gamma_cdf(k, get_real(plan, "z"));
    j["log_cdf"] = real_json(log_gamma_cdf(k, get_real(plan, "z")));
  } else if (kind == "sandwich") {
    const auto k = get_uint(plan, "k");
    if (k < 1) throw UsageError("--k: must be >= 1 for --kind sandwich");
    const auto b = pi_tail_sandwich(get_uint(plan, "n"), k, get_real(plan, "beta"));
    j["lower"] = b.lower;
    j["upper"] = b.upper;
  } else if (kind == "x1") {
    const auto n = get_uint(plan, "n");
    const auto t = get_uint(plan, "t");
    if (n < 2) throw UsageError("--n: must be >= 2 for --kind x1");
    const auto law = poisson_binomial_x1(n);
    j["mean"] = law.mean();
    j["pmf"] = law.pmf(t);
    j["log_tail"] = real_json(law.log_tail(t));
    j["exact"] = !law.exact.empty();
  } else if (kind == "remark13") {
    const auto r = remark13_inequality(get_real(plan, "lambda"));
    j["left"] = r.left;
    j["right"] = r.right;
    j["holds"] = r.holds;
  } else if (kind == "tower") {
    const double x = get_real(plan, "x");
    const auto k = static_cast<unsigned>(get_uint(plan, "k"));
    j["tower_index"] = tower_index(x);
    j["iterated_ln"] = iterated_ln(k, x);
  } else if (kind == "partition") {
    const auto ps = partition_scheme(get_uint(plan, "N"));
    j["s"] = ps.s;
    j["d"] = ps.d;
    j["r"] = ps.r;
    j["count"] = ps.count.get_str();
  }
  return j;
}

int run_verify(const RunPlan& plan, std::ostream& out, std::ostream& diag) {
  const auto results = verify::run_suite(plan.params.at("suite"));
  for (const auto& r : results)
    diag << r.suite << "/" << r.name << ": " << format_real(std::round(r.seconds * 1000) / 1000) << " s\n";
  bool ok = true;
  if (plan.format == Format::json) {
    Json checks = Json::array();
    for (const auto& r : results) {
      checks.push_back(Json{{"suite", r.suite}, {"name", r.name}, {"passed", r.outcome.passed}, {"detail", r.outcome.detail}});
      ok = ok && r.outcome.passed;
    }
    Json j;
    j["schema"] = kSchema;
    j["command"] = plan.command;
    j["suite"] = plan.params.at("suite");
    j["passed"] = ok;
    j["checks"] = checks;
    out << j.dump(2) << "\n";
  } else {
    ok = verify::print_report(out, results);
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int dispatch(const RunPlan& plan, std::ostream& out, std::ostream& diag) {
  const auto& c = plan.command;
  if (c == "simulate") {
    run_simulate(plan, out);
  } else if (c == "exact-cdf") {
    run_exact_cdf(plan, out);
  } else if (c == "omega") {
    run_omega(plan, out);
  } else if (c == "tail-upper") {
    const auto est = estimate_upper_tail(get_uint(plan, "n"), get_real(plan, "beta"), get_uint(plan, "reps"),
                                         get_uint(plan, "seed"));
    emit_record(out, plan.format, tail_json(plan, est));
  } else if (c == "tail-lower") {
    const auto est = estimate_lower_tail_is(get_uint(plan, "n"), get_real(plan, "alpha"), {get_real(plan, "theta")},
                                            get_uint(plan, "reps"), get_uint(plan, "seed"));
    emit_record(out, plan.format, tail_json(plan, est));
  } else if (c == "pi-chain") {
    const auto n = get_uint(plan, "n"), k = get_uint(plan, "k");
    const double beta = get_real(plan, "beta");
    const auto est = estimate_pi_tail(n, k, beta, get_uint(plan, "reps"), get_uint(plan, "seed"));
    auto j = tail_json(plan, est);
    const auto band = pi_tail_sandwich(n, k, beta);
    j["sandwich_lower"] = band.lower;
    j["sandwich_upper"] = band.upper;
    emit_record(out, plan.format, j);
  } else if (c == "good-vertices") {
    const auto g = estimate_good_vertices(get_uint(plan, "n"), get_real(plan, "beta"), get_uint(plan, "reps"),
                                          get_uint(plan, "seed"));
    auto j = tail_json(plan, g.p_nonempty);
    j["mean_sigma"] = g.mean_sigma.value;
    j["mean_sigma_std_error"] = g.mean_sigma.std_error;
    emit_record(out, plan.format, j);
  } else if (c == "bounds") {
    emit_record(out, plan.format, run_bounds(plan));
  } else if (c == "verify") {
    return run_verify(plan, out, diag);
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& c : commands()) names.push_back(c.name);
  return names;
}

RunPlan parse_args(std::span<const std::string> tokens) {
  CLI::App app{"Height of random recursive trees: simulation, exact tables, bounds and rare-event estimators",
               "rrt-ldp"};
  app.footer(kJsonFieldsHelp);
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> formats, outputs;
  for (const auto& spec : commands()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    auto& values = raw[spec.name];
    for (const auto& p : spec.params) {
      auto* opt = sub->add_option("--" + p.flag, values[p.flag], p.help);
      if (p.fallback.empty() && spec.name != "bounds" && !(spec.name == "exact-cdf" && p.flag == "k-max"))
        opt->required();
      if (spec.name == "bounds" && p.flag == "kind") opt->required();
    }
    sub->add_option("--format", formats[spec.name], "csv | json");
    sub->add_option("--output", outputs[spec.name], "output path (default: standard output)");
  }

  std::vector<std::string> args(tokens.rbegin(), tokens.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    const auto* chosen = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    throw HelpRequested(chosen ? chosen->help() : app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const auto* sub = app.get_subcommands().front();
  const auto& spec = find_command(sub->get_name());
  RunPlan plan;
  plan.command = spec.name;
  plan.format = spec.default_format;
  if (const auto& f = formats[spec.name]; !f.empty()) {
    if (f == "csv")
      plan.format = Format::csv;
    else if (f == "json")
      plan.format = Format::json;
    else
      throw UsageError("--format: expected csv or json, got '" + f + "'");
  }
  plan.output = outputs[spec.name];

  for (const auto& p : spec.params) {
    const bool given = sub->count("--" + p.flag) > 0;
    if (given)
      plan.params[p.flag] = canonical_value(p, raw[spec.name][p.flag]);
    else if (!p.fallback.empty())
      plan.params[p.flag] = p.fallback;
  }

  if (spec.name == "exact-cdf" && !plan.params.count("k-max"))
    plan.params["k-max"] = std::to_string(get_uint(plan, "n-max") - 1);

  if (spec.name == "bounds") {
    const auto& needed = bounds_kinds().at(plan.params.at("kind"));
    for (const auto& [key, value] : plan.params) {
      (void)value;
      if (key != "kind" && std::find(needed.begin(), needed.end(), key) == needed.end())
        throw UsageError("--" + key + ": not used by --kind " + plan.params.at("kind"));
    }
    for (const auto& key : needed)
      if (!plan.params.count(key)) throw UsageError("--" + key + ": required by --kind " + plan.params.at("kind"));
  }
  return plan;
}

std::vector<std::string> render(const RunPlan& plan) {
  std::vector<std::string> tokens{plan.command};
  for (const auto& [key, value] : plan.params) {
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  tokens.push_back("--format");
  tokens.push_back(plan.format == Format::csv ? "csv" : "json");
  if (!plan.output.empty()) {
    tokens.push_back("--output");
    tokens.push_back(plan.output);
  }
  return tokens;
}

std::string canonical_string(const RunPlan& plan) {
  std::string out;
  for (const auto& t : render(plan)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& diag) {
  if (plan.output.empty()) return dispatch(plan, out, diag);
  std::ostringstream buffer;
  const int code = dispatch(plan, buffer, diag);
  std::ofstream file(plan.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + plan.output + "' for writing");
  file << buffer.str();
  if (!file) throw std::runtime_error("write to '" + plan.output + "' failed");
  return code;
}

int run(std::span<const std::string> tokens, std::ostream& out, std::ostream& diag) {
  RunPlan plan;
  try {
    plan = parse_args(tokens);
  } catch (const HelpRequested& h) {
    out << h.what() << "\n";
    return kExitOk;
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return execute(plan, out, diag);
  } catch (const ResourceLimitError& e) {
    diag << "resource limit: " << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    diag << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    diag << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}

}  // namespace rrt::cli
