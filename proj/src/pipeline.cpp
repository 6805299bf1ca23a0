#include "crn/pipeline.hpp"

#include <json.hpp>

#include "crn/dsl.hpp"
#include "crn/errors.hpp"
#include "crn/io.hpp"
#include "crn/numfmt.hpp"
#include "crn/plot.hpp"
#include "crn/rng.hpp"
#include "crn/sbml.hpp"

#ifndef CRN_VERSION
#define CRN_VERSION "0.0.0"
#endif

namespace crn {
namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

std::string plot_file_name(const std::string& species) { return "ensemble_" + species + ".svg"; }

nlohmann::ordered_json reproduce_commands(const McConfig& c, bool from_table) {
  const std::string options = "--runs " + std::to_string(*c.n_runs) + " --t-end " + format_double(*c.t_end) +
                              " --grid " + std::to_string(std::get<std::vector<double>>(c.grid).size()) +
                              " --seed " + std::to_string(c.base_seed) + " --mode " +
                              std::string(to_string(c.mode)) + " --max-steps " + std::to_string(c.max_steps);
  nlohmann::ordered_json cmds = nlohmann::ordered_json::array();
  cmds.push_back("crn matrix network.crn --csv");
  cmds.push_back("crn ensemble network.crn " + options + " --out-dir <dir>");
  cmds.push_back("crn export-sbml network.crn --out model.xml");
  cmds.push_back(from_table ? "crn pipeline input.json --from-table " + options + " --out-dir <dir>"
                            : "crn pipeline input.txt " + options + " --out-dir <dir>");
  return cmds;
}

PipelineResult finish(ReactionNetwork network, ArtifactWriter& out, const PipelineOptions& options,
                      nlohmann::ordered_json manifest, bool from_table) {
  PipelineResult result;
  result.report = validate(network);
  out.write("kinetic_table.json", emit_kinetic_table(network));
  out.write("network.crn", emit_dsl(network));
  out.write("validation.json", result.report.to_json());
  if (!result.report.is_admissible) throw InadmissibleNetworkError("network is not admissible; see validation.json");

  result.matrix = build_stoichiometry(network);
  out.write("matrix.csv", result.matrix.to_csv());

  result.ensemble = run_ensemble(network, options.ensemble);
  out.write("ensemble.csv", result.ensemble.to_csv());
  out.write("ensemble_meta.json", result.ensemble.metadata_json());
  out.write("model.xml", export_sbml(network));

  if (options.plots) {
    PlotOptions all;
    all.title = "ensemble mean with p5-p95 band";
    out.write("ensemble_all.svg", emit_plot(result.ensemble, all));
    for (const auto& s : network.species) {
      PlotOptions one;
      one.species = std::vector<std::string>{s.name};
      one.title = s.name;
      out.write(plot_file_name(s.name), emit_plot(result.ensemble, one));
    }
  }

  const McConfig& c = result.ensemble.config;
  nlohmann::ordered_json ens;
  ens["n_runs"] = *c.n_runs;
  ens["t_end"] = *c.t_end;
  ens["grid_points"] = std::get<std::vector<double>>(c.grid).size();
  ens["base_seed"] = c.base_seed;
  ens["mode"] = std::string(to_string(c.mode));
  ens["max_steps"] = c.max_steps;
  ens["generator"] = std::string(kGeneratorId);
  ens["heuristic_trace"] = result.ensemble.trace;
  manifest["ensemble"] = ens;
  manifest["admissible"] = result.report.is_admissible;
  manifest["reproduce"] = reproduce_commands(c, from_table);
  manifest["artifacts"] = out.names();
  out.write("manifest.json", manifest.dump(2) + "\n");

  result.network = std::move(network);
  result.artifacts = out.names();
  return result;
}

nlohmann::ordered_json manifest_header(const char* input_kind, const char* input_file) {
  nlohmann::ordered_json m;
  m["tool"] = "crn";
  m["version"] = CRN_VERSION;
  m["command"] = "pipeline";
  m["input"] = {{"kind", input_kind}, {"file", input_file}};
  return m;
}

}  // namespace

PipelineResult run_pipeline(const std::string& prose, const LlmConfig& llm, ChatTransport& transport,
                            const PipelineOptions& options) {
  ArtifactWriter out(options.out_dir);
  out.write("input.txt", prose);
  auto manifest = manifest_header("prose", "input.txt");
  manifest["llm"] = {{"base_url", llm.base_url},
                     {"model", llm.model},
                     {"temperature", llm.temperature},
                     {"max_repair_rounds", llm.max_repair_rounds},
                     {"prompt_version", std::string(kPromptVersion)}};

  Extraction extraction;
  try {
    extraction = extract_network(prose, llm, transport);
  } catch (const ExtractionFailedError& e) {
    out.write("transcript.json", e.transcript().to_json());
    throw;
  }
  out.write("transcript.json", extraction.transcript.to_json());
  manifest["llm"]["rounds"] = extraction.transcript.rounds.size();
  PipelineResult result = finish(std::move(extraction.network), out, options, std::move(manifest), false);
  result.transcript = std::move(extraction.transcript);
  return result;
}

PipelineResult run_pipeline_from_table(const std::string& table_json, const PipelineOptions& options) {
  ArtifactWriter out(options.out_dir);
  ReactionNetwork network = parse_kinetic_table(table_json);
  out.write("input.json", table_json);
  return finish(std::move(network), out, options, manifest_header("kinetic_table", "input.json"), true);
}

}  // namespace crn
