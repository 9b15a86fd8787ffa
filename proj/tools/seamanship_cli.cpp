#include "seamanship/commands.hpp"
#include "seamanship/config.hpp"
#include "seamanship/io.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace seamanship;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string output_dir, ais, chart, scenario, model, ownship;
  std::vector<double> window;
  std::optional<double> time;
};

std::vector<std::string> collect_overrides(const Options& o) {
  std::vector<std::string> out = o.overrides;
  auto quoted = [](const std::string& s) { return Json(s).dump(); };
  if (!o.output_dir.empty()) out.push_back("paths.output_dir=" + quoted(o.output_dir));
  if (!o.ais.empty()) out.push_back("paths.ais=" + quoted(o.ais));
  if (!o.chart.empty()) out.push_back("paths.chart=" + quoted(o.chart));
  if (!o.scenario.empty()) out.push_back("paths.scenario=" + quoted(o.scenario));
  if (!o.model.empty()) out.push_back("paths.model=" + quoted(o.model));
  if (!o.ownship.empty()) out.push_back("ownship=" + quoted(o.ownship));
  if (o.window.size() == 2) out.push_back("window=[" + format_number(o.window[0]) + "," + format_number(o.window[1]) + "]");
  if (o.time) out.push_back("time=" + format_number(*o.time));
  return out;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a config key, e.g. --set search.n_t=3");
  cmd->add_option("-o,--output-dir", o.output_dir, "Run directory for all outputs");
  cmd->add_option("--ais", o.ais, "AIS CSV file");
  cmd->add_option("--chart", o.chart, "GeoJSON chart file");
  cmd->add_option("--scenario", o.scenario, "Scenario archive from `ingest`");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Good seamanship scoring from AIS tracks and charts"};
  app.require_subcommand(1);
  Options o;

  CLI::App* ingest = app.add_subcommand("ingest", "Build a scenario archive from AIS and chart files");
  add_common(ingest, o);

  CLI::App* fit = app.add_subcommand("fit-speed-model", "Fit per-type speed-change densities at domain violation");
  add_common(fit, o);

  CLI::App* score = app.add_subcommand("score", "Risk series, safest-path normalisation and GSS for one vessel");
  add_common(score, o);
  score->add_option("--model", o.model, "Speed model file or directory");
  score->add_option("--ownship", o.ownship, "Vessel id to score");
  score->add_option("--window", o.window, "Start and end time in seconds since the scenario epoch")->expected(2);

  CLI::App* safest = app.add_subcommand("safest-path", "Lowest-risk feasible path from one time step");
  add_common(safest, o);
  safest->add_option("--ownship", o.ownship, "Vessel id");
  safest->add_option("--time", o.time, "Planning time in seconds since the scenario epoch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  std::optional<std::filesystem::path> output_dir;
  if (!o.output_dir.empty()) output_dir = o.output_dir;
  try {
    const RunConfig config = load_config(o.config.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.config),
                                         collect_overrides(o));
    output_dir = config.paths.output_dir;
    if (ingest->parsed()) {
      const Scenario s = cmd_ingest(config);
      std::cout << "ingested " << s.tracks.size() << " track(s), " << s.obstacles.polygons().size()
                << " obstacle polygon(s) into " << config.paths.output_dir.string() << '\n';
    } else if (fit->parsed()) {
      const SpeedModelSet models = cmd_fit_speed_model(config);
      for (const auto& [type, m] : models)
        std::cout << to_string(type) << ": " << m.samples.size() << " sample(s)" << (m.degenerate ? ", uniform" : "")
                  << '\n';
    } else if (score->parsed()) {
      const ScoreOutcome out = cmd_score(config);
      std::cout << "vessel " << config.ownship << "  GSS " << format_number(out.proposed.score.gss) << "  baseline "
                << format_number(out.baseline.score.gss) << '\n';
    } else if (safest->parsed()) {
      const PathResult r = cmd_safest_path(config);
      std::cout << "sr_star " << format_number(r.sr_star) << " over " << r.paths.size() << " path(s), "
                << r.nodes_evaluated << " node(s) evaluated\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    std::cerr << "error: " << e.what() << '\n';
    if (output_dir) {
      try {
        write_text(*output_dir / "error.json", dump_json(error_json(e)));
      } catch (const std::exception&) {
        // The error itself may be an unwritable output directory.
      }
    }
    return code;
  }
}
