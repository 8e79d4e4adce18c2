#include "reldom/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace reldom {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

Matrix parse_matrix(const json& arr, int d, const std::string& where) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != d * d)
    throw ConfigError(where + ": expected a row-major array of " + std::to_string(d * d) +
                      " numbers");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = arr[i * d + j].get<double>();
  return m;
}

GeneratorSet parse_group(const json& group) {
  reject_unknown_keys(group, {"letters", "inverses", "peripheral_ids"}, "group");
  if (!group.contains("letters")) throw ConfigError("group.letters is required");
  const auto letters = group["letters"].get<std::vector<std::string>>();
  std::map<std::string, std::string> inverses;
  if (group.contains("inverses"))
    inverses = group["inverses"].get<std::map<std::string, std::string>>();
  std::map<std::string, std::string> peripheral_ids;
  if (group.contains("peripheral_ids"))
    peripheral_ids = group["peripheral_ids"].get<std::map<std::string, std::string>>();

  // Positive letters are those that are not the declared inverse of another.
  std::set<std::string> declared_inverses;
  for (const auto& [base, inv] : inverses) declared_inverses.insert(inv);

  std::map<std::string, int> peripheral_index;
  GeneratorSet gens;
  std::set<std::string> seen(letters.begin(), letters.end());
  if (seen.size() != letters.size()) throw ConfigError("group.letters contains duplicates");
  for (const std::string& name : letters) {
    if (declared_inverses.contains(name)) continue;
    std::string inv_name = name + "^-1";
    if (auto it = inverses.find(name); it != inverses.end()) inv_name = it->second;
    if (!seen.contains(inv_name))
      throw ConfigError("group.letters is not closed under inversion: missing " + inv_name);
    std::optional<int> peripheral;
    const auto tag = peripheral_ids.find(name);
    const auto tag_inv = peripheral_ids.find(inv_name);
    if ((tag == peripheral_ids.end()) != (tag_inv == peripheral_ids.end()))
      throw ConfigError("peripheral tag must cover both " + name + " and " + inv_name);
    if (tag != peripheral_ids.end()) {
      if (tag->second != tag_inv->second)
        throw ConfigError("peripheral tags of " + name + " and its inverse disagree");
      auto [it, inserted] =
          peripheral_index.try_emplace(tag->second, static_cast<int>(peripheral_index.size()));
      peripheral = it->second;
    }
    gens.add_generator(name, peripheral);
  }
  if (gens.rank() == 0) throw ConfigError("group has no generators");
  return gens;
}

CheckRequest parse_check(const json& obj, int index) {
  const std::string where = "checks[" + std::to_string(index) + "]";
  if (!obj.is_object() || !obj.contains("type")) throw ConfigError(where + ": needs a type");
  CheckRequest req;
  req.type = obj["type"].get<std::string>();

  static const std::map<std::string, std::set<std::string>> allowed = {
      {"fit_D_minus", {"type", "max_word_length", "max_bracket_hi", "mode"}},
      {"fit_D_plus", {"type", "max_word_length", "max_bracket_hi", "mode", "mu_cap"}},
      {"fit_D_lambda", {"type", "max_word_length", "max_bracket_hi", "rate_power", "mu_cap",
                        "tolerance"}},
      {"unique_limits", {"type", "peripheral", "n_max", "tolerance"}},
      {"transversality",
       {"type", "samples", "max_word_length", "tail_depth", "qg_lower", "qg_upper",
        "delta0_floor"}},
      {"peripheral_spectra", {"type", "rate_power", "tolerance", "n_max", "stable_upper_max"}},
      {"flag_convergence", {"type", "path_letter", "path_points", "path_steps", "n_max"}},
      {"floyd_karlsson",
       {"type", "samples", "max_word_length", "floyd_function", "floyd_parameter",
        "ball_radius"}},
      {"property_U", {"type", "max_word_length", "bound_l"}},
      {"estimate_delta", {"type", "graph_radius", "graph_depth", "samples"}},
  };
  const auto it = allowed.find(req.type);
  if (it == allowed.end()) throw ConfigError(where + ": unknown check type " + req.type);
  reject_unknown_keys(obj, it->second, where);

  auto get_int = [&](const char* key, int& into) {
    if (obj.contains(key)) into = obj[key].get<int>();
  };
  auto get_double = [&](const char* key, double& into) {
    if (obj.contains(key)) into = obj[key].get<double>();
  };
  auto get_string = [&](const char* key, std::string& into) {
    if (obj.contains(key)) into = obj[key].get<std::string>();
  };
  get_int("max_word_length", req.max_word_length);
  get_double("max_bracket_hi", req.max_bracket_hi);
  get_string("mode", req.mode);
  get_int("n_max", req.n_max);
  if (obj.contains("rate_power")) req.rate_power = obj["rate_power"].get<long long>();
  get_double("mu_cap", req.mu_cap);
  get_int("samples", req.samples);
  get_int("peripheral", req.peripheral);
  get_double("delta0_floor", req.delta0_floor);
  get_double("qg_lower", req.qg_lower);
  get_double("qg_upper", req.qg_upper);
  get_int("tail_depth", req.tail_depth);
  get_double("tolerance", req.tolerance);
  get_double("stable_upper_max", req.stable_upper_max);
  get_string("floyd_function", req.floyd_function);
  get_double("floyd_parameter", req.floyd_parameter);
  get_int("ball_radius", req.ball_radius);
  get_double("bound_l", req.bound_l);
  get_string("path_letter", req.path_letter);
  if (obj.contains("path_points"))
    req.path_points = obj["path_points"].get<std::vector<std::string>>();
  get_int("path_steps", req.path_steps);
  get_int("graph_radius", req.graph_radius);
  get_int("graph_depth", req.graph_depth);
  if (req.mode != "bracket" && req.mode != "exact")
    throw ConfigError(where + ": mode must be bracket or exact");
  return req;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(root, {"seed", "output_dir", "group", "representation", "checks"},
                      "config root");
  ExperimentConfig config;
  if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();
  if (root.contains("output_dir")) config.output_dir = root["output_dir"].get<std::string>();
  if (const char* env = std::getenv("RELDOM_OUTPUT_DIR"); env && !root.contains("output_dir"))
    config.output_dir = env;
  if (!root.contains("group")) throw ConfigError("config.group is required");
  config.gens = parse_group(root["group"]);

  if (root.contains("representation")) {
    const json& rep = root["representation"];
    reject_unknown_keys(rep, {"dimension", "matrices"}, "representation");
    if (!rep.contains("dimension") || !rep.contains("matrices"))
      throw ConfigError("representation needs dimension and matrices");
    const int d = rep["dimension"].get<int>();
    Representation r(config.gens, d);
    std::set<std::string> assigned;
    for (const auto& [name, arr] : rep["matrices"].items()) {
      const auto letter = config.gens.letter_by_name(name);
      if (!letter || is_inverse_letter(*letter))
        throw ConfigError("representation.matrices: " + name + " is not a positive letter");
      r.set_generator(*letter, parse_matrix(arr, d, "representation.matrices." + name));
      assigned.insert(name);
    }
    for (const auto& g : config.gens.generators())
      if (!assigned.contains(g.name))
        throw ConfigError("representation.matrices: no matrix for generator " + g.name);
    config.rep = std::move(r);
  }

  if (root.contains("checks")) {
    const json& checks = root["checks"];
    if (!checks.is_array()) throw ConfigError("checks must be an array");
    for (std::size_t i = 0; i < checks.size(); ++i)
      config.checks.push_back(parse_check(checks[i], static_cast<int>(i)));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace reldom
