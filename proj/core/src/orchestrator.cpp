#include "reldom/config.hpp"
#include "reldom/cusped_graph.hpp"
#include "reldom/domination.hpp"
#include "reldom/floyd.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace reldom {

using json = nlohmann::ordered_json;

namespace {

std::vector<Word> enumerate_for_fit(const GeneratorSet& gens, int max_len,
                                    double max_bracket_hi) {
  std::vector<Word> words;
  for_each_reduced_word(gens, max_len, [&](const Word& w) {
    if (max_bracket_hi >= 0 && cusped_length_estimate(gens, w).hi > max_bracket_hi)
      return EnumStep::SkipSubtree;  // the damped length never shrinks under extension
    words.push_back(w);
    return EnumStep::Continue;
  });
  return words;
}

std::string csv_of_points(const std::vector<GapSample>& points) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "x_value,y_value,word_text\n";
  for (const auto& p : points) os << p.length << ',' << p.log_gap << ',' << p.word << '\n';
  return os.str();
}

json fit_to_json(const GapFit& fit, const std::string& check_type, int max_length,
                 double mu_cap) {
  json out;
  out["check"] = check_type;
  out["condition"] = fit.condition;
  out["verdict"] = fit.verdict;
  out["C"] = std::exp(fit.log_c);
  out["log_C"] = fit.log_c;
  out["mu"] = fit.mu;
  if (mu_cap >= 0) out["mu_cap"] = mu_cap;
  out["sample_size"] = fit.points.size();
  out["max_length"] = max_length;
  out["violations"] = fit.violations;
  out["witnesses"] = fit.witnesses;
  out["excluded"] = fit.excluded;
  json pts = json::array();
  for (const auto& p : fit.points) pts.push_back(json::array({p.length, p.log_gap, p.word}));
  out["points"] = pts;
  out["lower_bound"] = fit.lower_bound;
  return out;
}

GapFit fit_from_json(const json& in) {
  GapFit fit;
  fit.condition = in.at("condition").get<std::string>();
  fit.lower_bound = in.at("lower_bound").get<bool>();
  fit.excluded = in.at("excluded").get<std::int64_t>();
  for (const auto& p : in.at("points"))
    fit.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<std::string>()});
  return fit;
}

int verdict_rank(const std::string& verdict) {
  if (verdict == "certified-on-sample" || verdict == "certified") return 0;
  if (verdict == "inconclusive") return 3;
  return 2;
}

const Representation& need_rep(const ExperimentConfig& config, const std::string& check) {
  if (!config.rep) throw ConfigError(check + " requires a representation");
  return *config.rep;
}

struct CheckOutput {
  json report;
  std::vector<std::pair<std::string, std::string>> extra_files;  // name suffix -> content
  std::string verdict = "certified";
};

CheckOutput run_check(const ExperimentConfig& config, const CheckRequest& req,
                      std::uint64_t seed) {
  const GeneratorSet& gens = config.gens;
  CheckOutput out;
  if (req.type == "fit_D_minus" || req.type == "fit_D_plus") {
    const auto& rep = need_rep(config, req.type);
    const auto words = enumerate_for_fit(gens, req.max_word_length, req.max_bracket_hi);
    FitOptions opts;
    opts.mode = req.mode == "exact" ? LengthMode::Exact : LengthMode::Bracket;
    opts.mu_cap = req.mu_cap;
    const GapFit fit = req.type == "fit_D_minus" ? fit_d_minus(rep, words, opts)
                                                 : fit_d_plus(rep, words, opts);
    out.report = fit_to_json(fit, req.type, req.max_word_length, req.mu_cap);
    out.extra_files.push_back({"points.csv", csv_of_points(fit.points)});
    out.verdict = fit.verdict;
  } else if (req.type == "fit_D_lambda") {
    const auto& rep = need_rep(config, req.type);
    const auto words = enumerate_for_fit(gens, req.max_word_length, req.max_bracket_hi);
    LambdaFitOptions opts;
    opts.rate_power = req.rate_power;
    opts.mu_cap = req.mu_cap;
    opts.unit_moduli_tol = req.tolerance;
    const LambdaFits fits = fit_d_lambda(rep, words, opts);
    out.report["check"] = req.type;
    out.report["lower"] = fit_to_json(fits.lower, req.type, req.max_word_length, -1);
    out.report["upper"] = fit_to_json(fits.upper, req.type, req.max_word_length, req.mu_cap);
    out.report["peripheral_ok"] = fits.peripheral_ok;
    json peri = json::array();
    for (const auto& p : fits.peripheral)
      peri.push_back({{"word", p.word},
                      {"log_lambda_spread", p.log_lambda_spread},
                      {"unit_moduli", p.unit_moduli}});
    out.report["peripheral"] = peri;
    const bool bad = fits.lower.verdict == "refuted-on-sample" ||
                     fits.upper.verdict == "refuted-on-sample" || !fits.peripheral_ok;
    out.verdict = bad ? "refuted-on-sample" : "certified-on-sample";
    out.report["verdict"] = out.verdict;
    out.extra_files.push_back({"lower_points.csv", csv_of_points(fits.lower.points)});
    out.extra_files.push_back({"upper_points.csv", csv_of_points(fits.upper.points)});
  } else if (req.type == "unique_limits") {
    const auto& rep = need_rep(config, req.type);
    out.report["check"] = req.type;
    json all = json::array();
    bool any_inconclusive = false, any_nonunique = false;
    for (int p = 0; p < gens.peripheral_count(); ++p) {
      if (req.peripheral >= 0 && p != req.peripheral) continue;
      const auto r = check_unique_limits(rep, p, 1L << std::min(req.n_max, 40), req.tolerance);
      any_inconclusive = any_inconclusive || !r.conclusive;
      any_nonunique = any_nonunique || (r.conclusive && !r.unique);
      all.push_back({{"peripheral", p},
                     {"conclusive", r.conclusive},
                     {"unique", r.unique},
                     {"line_mismatch", r.line_mismatch},
                     {"hyperplane_mismatch", r.hyperplane_mismatch}});
    }
    out.report["peripherals"] = all;
    out.verdict = any_nonunique      ? "refuted-on-sample"
                  : any_inconclusive ? "inconclusive"
                                     : "certified-on-sample";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "transversality") {
    const auto& rep = need_rep(config, req.type);
    TransversalityOptions opts;
    opts.sample_count = req.samples;
    opts.max_word_len = req.max_word_length;
    opts.tail_depth = req.tail_depth;
    opts.qg = {req.qg_lower, req.qg_upper};
    opts.delta0_floor = req.delta0_floor;
    opts.seed = seed;
    const auto r = check_uniform_transversality(rep, opts);
    out.report["check"] = req.type;
    out.report["min_sin"] = r.min_sin;
    out.report["checked"] = r.checked;
    out.report["filtered"] = r.filtered;
    out.report["delta0_floor"] = req.delta0_floor;
    out.report["argmin_g"] = format_word(gens, r.argmin.g);
    out.report["argmin_h"] = format_word(gens, r.argmin.h);
    out.verdict = r.checked < req.samples ? "inconclusive"
                  : r.positive            ? "certified-on-sample"
                                          : "refuted-on-sample";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "peripheral_spectra") {
    const auto& rep = need_rep(config, req.type);
    out.report["check"] = req.type;
    json all = json::array();
    bool ok = true;
    for (int p = 0; p < gens.peripheral_count(); ++p) {
      const Letter s = gens.peripheral_letter(p);
      const Word sw = Word::from_reduced({s});
      NormalizedMatrix acc = normalize_matrix(rep.letter_matrix(s));
      long long n = 1;
      while (2 * n <= req.rate_power) {
        acc = nproduct(acc, acc);
        n *= 2;
      }
      const double spread = log_gap_full(acc.unit) / static_cast<double>(n);
      StableCuspedOptions sopts;
      sopts.n_max = req.n_max;
      const auto stable = stable_cusped_length(gens, sw, sopts);
      const bool unit = std::abs(spread) <= req.tolerance;
      const bool stable_ok = req.stable_upper_max < 0 || stable.upper <= req.stable_upper_max;
      ok = ok && unit && stable_ok;
      all.push_back({{"peripheral", p},
                     {"log_lambda_spread", spread},
                     {"unit_moduli", unit},
                     {"stable_upper", stable.upper},
                     {"stable_lower", stable.lower}});
    }
    out.report["peripherals"] = all;
    out.verdict = ok ? "certified-on-sample" : "refuted-on-sample";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "flag_convergence") {
    const auto& rep = need_rep(config, req.type);
    PathWindow path;
    if (!req.path_letter.empty()) {
      const auto l = gens.letter_by_name(req.path_letter);
      if (!l) throw ConfigError("flag_convergence: unknown path_letter");
      const Word g = Word::from_reduced({*l});
      path.first_index = -req.path_steps;
      for (int n = -req.path_steps; n <= req.path_steps; ++n) path.points.push_back(power(g, n));
    } else {
      if (req.path_points.empty()) throw ConfigError("flag_convergence: no path given");
      path.first_index = 0;
      for (const auto& t : req.path_points) path.points.push_back(parse_word(gens, t));
    }
    const int k = path.last_index();
    const auto r = measure_flag_convergence(rep, path, k, req.n_max);
    out.report["check"] = req.type;
    out.report["slope"] = r.slope;
    out.report["intercept"] = r.intercept;
    out.report["r_squared"] = r.r_squared;
    out.report["defined_points"] = r.defined_points;
    out.report["excluded"] = r.excluded;
    std::ostringstream csv;
    csv << std::setprecision(17) << "x_value,y_value,word_text\n";
    for (std::size_t i = 0; i < r.step_u1.size(); ++i)
      if (!std::isnan(r.step_u1[i])) csv << (i + 1) << ',' << r.step_u1[i] << ",\n";
    out.extra_files.push_back({"trace.csv", csv.str()});
    out.verdict = (r.defined_points >= 3 && r.slope < 0) ? "certified-on-sample"
                                                         : "inconclusive";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "floyd_karlsson") {
    FloydFunction f = req.floyd_function == "inverse_square"
                          ? FloydFunction::inverse_square()
                          : FloydFunction::geometric(req.floyd_parameter);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, req.max_word_length);
    std::vector<std::pair<Word, Word>> pairs;
    pairs.reserve(req.samples);
    for (int i = 0; i < req.samples; ++i)
      pairs.push_back({random_reduced_word(gens, len(rng), rng),
                       random_reduced_word(gens, len(rng), rng)});
    const auto violations = check_karlsson_bounds(gens, pairs, f, req.ball_radius);
    out.report["check"] = req.type;
    out.report["pairs"] = req.samples;
    out.report["ball_radius"] = req.ball_radius;
    out.report["floyd_function"] = f.name();
    out.report["floyd_parameter"] = f.parameter();
    json viol = json::array();
    for (const auto& v : violations)
      viol.push_back({{"g", format_word(gens, v.g)},
                      {"h", format_word(gens, v.h)},
                      {"distance", v.distance},
                      {"bound", v.bound}});
    out.report["violations"] = viol;
    out.verdict = violations.empty() ? "certified-on-sample" : "refuted-on-sample";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "property_U") {
    std::vector<Word> candidates = {Word{}};
    for (Letter l = 0; l < gens.letter_count(); ++l)
      candidates.push_back(Word::from_reduced({l}));
    double bound_l = req.bound_l;
    if (bound_l < 0) bound_l = 2.0 * 1.0 + 5.0;  // 2 max |f| + 5 over F = {e} u letters
    long failures = 0, total = 0;
    json fail_list = json::array();
    for_each_reduced_word(gens, req.max_word_length, [&](const Word& w) {
      ++total;
      const auto r = property_u_search(gens, w, candidates, bound_l);
      if (!r.success && static_cast<int>(fail_list.size()) < 20)
        fail_list.push_back(format_word(gens, w));
      failures += r.success ? 0 : 1;
      return EnumStep::Continue;
    });
    out.report["check"] = req.type;
    out.report["bound_l"] = bound_l;
    out.report["words"] = total;
    out.report["failures"] = failures;
    out.report["failure_examples"] = fail_list;
    out.verdict = failures == 0 ? "certified-on-sample" : "refuted-on-sample";
    out.report["verdict"] = out.verdict;
  } else if (req.type == "estimate_delta") {
    CuspedGraph graph(gens, {req.graph_radius, req.graph_depth});
    const auto d = estimate_delta(graph, req.samples, seed);
    out.report["check"] = req.type;
    out.report["delta_hat"] = d.delta;
    out.report["quadruples"] = d.quadruples;
    out.report["pool"] = d.pool;
    out.report["vertices"] = graph.vertex_count();
    out.verdict = "certified-on-sample";
    out.report["verdict"] = out.verdict;
  } else {
    throw ConfigError("unknown check type " + req.type);
  }
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  RunResult result;
  fs::create_directories(config.output_dir);
  int worst = 0;
  json summary;
  summary["seed"] = config.seed;
  json reports = json::array();
  for (std::size_t i = 0; i < config.checks.size(); ++i) {
    const CheckRequest& req = config.checks[i];
    const std::uint64_t seed = config.seed + 1000003ull * (i + 1);
    CheckOutput out = run_check(config, req, seed);
    const std::string stem = std::to_string(i) + "_" + req.type;
    const fs::path report_path = fs::path(config.output_dir) / (stem + ".json");
    std::ofstream(report_path) << out.report.dump(2) << '\n';
    result.report_files.push_back(report_path.string());
    for (const auto& [suffix, content] : out.extra_files) {
      const fs::path extra = fs::path(config.output_dir) / (stem + "_" + suffix);
      std::ofstream(extra) << content;
      result.report_files.push_back(extra.string());
    }
    const int rank = verdict_rank(out.verdict);
    if (rank == 2 || (rank == 3 && worst != 2)) worst = rank;
    reports.push_back({{"check", req.type}, {"verdict", out.verdict}, {"file", stem + ".json"}});
  }
  result.exit_code = worst;
  summary["checks"] = reports;
  summary["exit_code"] = worst;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  summary["generated_at"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  result.summary = summary.dump(2) + "\n";
  std::ofstream(fs::path(config.output_dir) / "summary.json") << result.summary;
  return result;
}

std::string merge_gap_reports(const std::vector<std::string>& report_texts) {
  if (report_texts.empty()) throw ConfigError("report merge needs at least one report");
  std::optional<GapFit> acc;
  double mu_cap = -1;
  std::string check_type;
  int max_length = 0;
  for (const std::string& text : report_texts) {
    const json in = json::parse(text);
    if (in.contains("mu_cap")) mu_cap = in["mu_cap"].get<double>();
    if (in.contains("check")) check_type = in["check"].get<std::string>();
    if (in.contains("max_length"))
      max_length = std::max(max_length, in["max_length"].get<int>());
    GapFit part = fit_from_json(in);
    acc = acc ? merge_fits(*acc, part, mu_cap) : (fit_points(part, mu_cap), part);
  }
  return fit_to_json(*acc, check_type, max_length, mu_cap).dump(2) + "\n";
}

}  // namespace reldom
