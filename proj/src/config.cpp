#include "seamanship/config.hpp"

#include <set>

namespace seamanship {

void RunConfig::validate() const {
  ingest.validate();
  domain.validate();
  risk.validate();
  kinodynamics.validate();
  search.validate();
  score.validate();
  speed_model.validate();
  if (t_start && t_end && !(*t_start <= *t_end)) throw ConfigError("window start must not exceed its end");
  for (int n : sweep.n_t)
    if (n < 1) throw ConfigError("sweep.n_t entries must be at least 1");
  for (int n : sweep.n_alpha)
    if (n < 1) throw ConfigError("sweep.n_alpha entries must be at least 1");
  for (int n : sweep.n_v)
    if (n < 1) throw ConfigError("sweep.n_v entries must be at least 1");
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::exception&) {
    value = text;
  }

  if (!doc.is_object()) doc = Json::object();
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty segment in override key " + key);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    Json& child = (*node)[part];
    if (child.is_null()) child = Json::object();
    if (!child.is_object()) throw ConfigError("override " + key + " descends into a non-object");
    node = &child;
    start = dot + 1;
  }
}

namespace {

std::filesystem::path resolve(const Json& v, const std::filesystem::path& base, const std::string& key) {
  if (!v.is_string()) throw ConfigError("paths." + key + " must be a string");
  std::filesystem::path p = v.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::vector<int> int_list(const Json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key + " must be a list of integers");
  std::vector<int> out;
  for (const Json& x : v) {
    if (!x.is_number_integer()) throw ConfigError(key + " must be a list of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

double number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + " must be a number");
  return v.get<double>();
}

} // namespace

RunConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::set<std::string> kKnown = {"paths",  "schema", "ingest",  "domain", "risk",
                                               "kinodynamics", "search", "score", "speed_model", "ownship",
                                               "window", "time",   "sweep",  "compare_exhaustive"};
  for (const auto& [key, value] : doc.items())
    if (!kKnown.count(key)) throw ConfigError("unknown configuration key " + key);

  RunConfig cfg;
  if (auto it = doc.find("paths"); it != doc.end()) {
    const Json& p = *it;
    if (!p.is_object()) throw ConfigError("paths must be an object");
    for (const auto& [key, value] : p.items()) {
      if (value.is_null()) continue;
      if (key == "ais") cfg.paths.ais = resolve(value, base_dir, key);
      else if (key == "chart") cfg.paths.chart = resolve(value, base_dir, key);
      else if (key == "scenario") cfg.paths.scenario = resolve(value, base_dir, key);
      else if (key == "model") cfg.paths.model = resolve(value, base_dir, key);
      else if (key == "output_dir") cfg.paths.output_dir = resolve(value, base_dir, key);
      else if (key == "scenarios") {
        if (!value.is_array()) throw ConfigError("paths.scenarios must be a list");
        for (const Json& s : value) cfg.paths.scenarios.push_back(resolve(s, base_dir, key));
      } else {
        throw ConfigError("unknown key paths." + key);
      }
    }
  }
  if (auto it = doc.find("schema"); it != doc.end()) apply_json(*it, cfg.schema);
  if (auto it = doc.find("ingest"); it != doc.end()) apply_json(*it, cfg.ingest);
  if (auto it = doc.find("domain"); it != doc.end()) apply_json(*it, cfg.domain);
  if (auto it = doc.find("risk"); it != doc.end()) apply_json(*it, cfg.risk);
  if (auto it = doc.find("kinodynamics"); it != doc.end()) apply_json(*it, cfg.kinodynamics);
  if (auto it = doc.find("search"); it != doc.end()) apply_json(*it, cfg.search);
  if (auto it = doc.find("score"); it != doc.end()) apply_json(*it, cfg.score);
  if (auto it = doc.find("speed_model"); it != doc.end()) apply_json(*it, cfg.speed_model);

  if (auto it = doc.find("ownship"); it != doc.end() && !it->is_null()) {
    // MMSIs are often written as bare numbers.
    if (it->is_string()) cfg.ownship = it->get<std::string>();
    else if (it->is_number_integer()) cfg.ownship = std::to_string(it->get<long long>());
    else throw ConfigError("ownship must be a string or an integer");
  }
  if (auto it = doc.find("window"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) throw ConfigError("window must be [t_start, t_end]");
    cfg.t_start = number((*it)[0], "window[0]");
    cfg.t_end = number((*it)[1], "window[1]");
  }
  if (auto it = doc.find("time"); it != doc.end() && !it->is_null()) cfg.time = number(*it, "time");
  if (auto it = doc.find("sweep"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw ConfigError("sweep must be an object");
    for (const auto& [key, value] : it->items()) {
      if (key == "n_t") cfg.sweep.n_t = int_list(value, "sweep.n_t");
      else if (key == "n_alpha") cfg.sweep.n_alpha = int_list(value, "sweep.n_alpha");
      else if (key == "n_v") cfg.sweep.n_v = int_list(value, "sweep.n_v");
      else if (key == "exhaustive") {
        if (!value.is_boolean()) throw ConfigError("sweep.exhaustive must be true or false");
        cfg.sweep.exhaustive = value.get<bool>();
      } else {
        throw ConfigError("unknown key sweep." + key);
      }
    }
  }
  if (auto it = doc.find("compare_exhaustive"); it != doc.end()) {
    if (!it->is_boolean()) throw ConfigError("compare_exhaustive must be true or false");
    cfg.compare_exhaustive = it->get<bool>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides) {
  Json doc = Json::object();
  std::filesystem::path base;
  if (file) {
    try {
      doc = read_json(*file);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
    base = file->parent_path();
  }
  // Paths given on the command line are relative to the working directory,
  // so file paths are resolved before overrides land.
  if (!base.empty() && doc.contains("paths") && doc["paths"].is_object()) {
    for (auto& [key, value] : doc["paths"].items()) {
      if (value.is_string()) value = resolve(value, base, key).string();
      else if (value.is_array())
        for (Json& s : value) s = resolve(s, base, key).string();
    }
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return config_from_json(doc, {});
}

Json config_echo(const RunConfig& c) {
  Json sweep = {{"n_t", c.sweep.n_t}, {"n_alpha", c.sweep.n_alpha}, {"n_v", c.sweep.n_v}, {"exhaustive", c.sweep.exhaustive}};
  return {{"schema", to_json(c.schema)},
          {"ingest", to_json(c.ingest)},
          {"domain", to_json(c.domain)},
          {"risk", to_json(c.risk)},
          {"kinodynamics", to_json(c.kinodynamics)},
          {"search", to_json(c.search)},
          {"score", to_json(c.score)},
          {"speed_model", to_json(c.speed_model)},
          {"ownship", c.ownship},
          {"window", c.t_start && c.t_end ? Json{*c.t_start, *c.t_end} : Json(nullptr)},
          {"time", c.time ? Json(*c.time) : Json(nullptr)},
          {"sweep", sweep},
          {"compare_exhaustive", c.compare_exhaustive}};
}

std::string params_hash(const RunConfig& config) { return sha256_hex(config_echo(config).dump()); }

} // namespace seamanship
