// Command-line front end: every pipeline stage as a subcommand.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crn/dsl.hpp"
#include "crn/ensemble.hpp"
#include "crn/errors.hpp"
#include "crn/io.hpp"
#include "crn/llm.hpp"
#include "crn/mock_llm.hpp"
#include "crn/numfmt.hpp"
#include "crn/ode.hpp"
#include "crn/pipeline.hpp"
#include "crn/plot.hpp"
#include "crn/sbml.hpp"
#include "crn/ssa.hpp"
#include "crn/validator.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kUsage = 2, kInput = 3, kEngine = 4, kEndpoint = 5 };

enum class Verbosity { Quiet, Normal, Verbose };
Verbosity g_verbosity = Verbosity::Normal;

void warn(const std::string& message) {
  if (g_verbosity != Verbosity::Quiet) std::cerr << "crn: " << message << "\n";
}

void info(const std::string& message) {
  if (g_verbosity == Verbosity::Verbose) std::cerr << "crn: " << message << "\n";
}

bool is_json_path(const fs::path& path) { return path.extension() == ".json"; }

crn::ReactionNetwork load_network(const fs::path& path) {
  const std::string text = crn::read_text_file(path);
  std::vector<crn::ParseNote> notes;
  crn::ReactionNetwork network =
      is_json_path(path) ? crn::parse_kinetic_table(text, &notes) : crn::parse_dsl(text, &notes);
  for (const auto& note : notes) warn(path.string() + ": " + note.where + ": " + note.message);
  info("loaded " + std::to_string(network.species.size()) + " species, " +
       std::to_string(network.reactions.size()) + " reactions from " + path.string());
  return network;
}

// Engines and exporters accept admissible networks only.
crn::ReactionNetwork load_admissible(const fs::path& path) {
  crn::ReactionNetwork network = load_network(path);
  const crn::ValidationReport report = crn::validate(network);
  for (const auto& issue : report.issues)
    if (issue.severity == crn::Severity::Warning) info(issue.code + " " + issue.subject + ": " + issue.message);
  if (!report.is_admissible) {
    std::cerr << report.to_text();
    throw crn::InadmissibleNetworkError(path.string() + " is not admissible");
  }
  return network;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    crn::write_text_file(out_path, text);
    info("wrote " + out_path);
  }
}

std::optional<std::size_t> parse_count_or_auto(const std::string& text, const char* option) {
  if (text == "auto") return std::nullopt;
  const auto value = crn::parse_double(text);
  if (!value || *value < 1 || *value != static_cast<double>(static_cast<std::size_t>(*value)))
    throw CLI::ValidationError(option, "expected a positive integer or 'auto'");
  return static_cast<std::size_t>(*value);
}

std::optional<double> parse_time_or_auto(const std::string& text, const char* option) {
  if (text == "auto") return std::nullopt;
  const auto value = crn::parse_double(text);
  if (!value || !(*value > 0)) throw CLI::ValidationError(option, "expected a positive time or 'auto'");
  return *value;
}

crn::PropensityMode parse_mode(const std::string& text) {
  const auto mode = crn::propensity_mode_from_string(text);
  if (!mode) throw CLI::ValidationError("--mode", "expected 'power-law' or 'combinatorial'");
  return *mode;
}

std::string matrix_text(const crn::StoichiometryMatrix& m) {
  std::size_t label_width = 7;
  for (const auto& r : m.row_labels()) label_width = std::max(label_width, r.size());
  std::vector<std::size_t> widths;
  for (const auto& c : m.col_labels()) widths.push_back(std::max<std::size_t>(c.size(), 3));
  auto pad = [](const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  std::string out = std::string(label_width, ' ');
  for (std::size_t c = 0; c < m.cols(); ++c) out += "  " + pad(m.col_labels()[c], widths[c]);
  out += "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += m.row_labels()[r] + std::string(label_width - m.row_labels()[r].size(), ' ');
    for (std::size_t c = 0; c < m.cols(); ++c) out += "  " + pad(std::to_string(m.at(r, c)), widths[c]);
    out += "\n";
  }
  return out;
}

struct EnsembleArgs {
  std::string runs = "auto";
  std::string t_end = "auto";
  std::size_t grid = crn::kDefaultGridPoints;
  std::uint64_t seed = 0;
  std::string mode = "power-law";
  unsigned threads = 0;
  std::uint64_t max_steps = 100'000'000;
  bool no_plots = false;

  void add_to(CLI::App* cmd, bool seed_required) {
    cmd->add_option("--runs", runs, "Replicate count or 'auto'")->capture_default_str();
    cmd->add_option("--t-end", t_end, "End time or 'auto'")->capture_default_str();
    cmd->add_option("--grid", grid, "Number of grid points")->capture_default_str()->check(CLI::Range(2, 10'000'000));
    auto* s = cmd->add_option("--seed", seed, "Base seed");
    if (seed_required) s->required();
    cmd->add_option("--mode", mode, "Propensity: power-law|combinatorial")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--max-steps", max_steps, "Per-replicate event cap")->capture_default_str();
    cmd->add_flag("--no-plots", no_plots, "Skip SVG output");
  }

  crn::McConfig config() const {
    crn::McConfig c;
    c.n_runs = parse_count_or_auto(runs, "--runs");
    c.t_end = parse_time_or_auto(t_end, "--t-end");
    c.grid = crn::AutoGrid{grid};
    c.base_seed = seed;
    c.mode = parse_mode(mode);
    c.threads = threads;
    c.max_steps = max_steps;
    return c;
  }
};

crn::LlmConfig llm_config(int max_repairs) {
  crn::LlmConfig config = crn::LlmConfig::from_env();
  if (config.base_url.empty()) throw crn::EndpointError(0, "CRN_LLM_BASE_URL is not set");
  config.max_repair_rounds = max_repairs;
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"Reaction-network toolkit: parse, validate, simulate and export mass-action models"};
  app.require_subcommand(1);
  bool quiet = false;
  bool verbose = false;
  app.add_flag("-q,--quiet", quiet, "Only errors on stderr");
  app.add_flag("-v,--verbose", verbose, "Progress details on stderr");

  std::string file;
  std::string out;

  auto* parse = app.add_subcommand("parse", "Print the canonical kinetic-table JSON of a DSL or JSON file");
  parse->add_option("file", file)->required();

  bool json_report = false;
  auto* validate = app.add_subcommand("validate", "Check admissibility");
  validate->add_option("file", file)->required();
  validate->add_flag("--json", json_report, "JSON report");

  bool csv = false;
  auto* matrix = app.add_subcommand("matrix", "Stoichiometry matrix");
  matrix->add_option("file", file)->required();
  matrix->add_flag("--csv", csv, "CSV instead of an aligned table");

  double t_end = 0.0;
  std::uint64_t seed = 0;
  std::string mode = "power-law";
  std::size_t grid = crn::kDefaultGridPoints;
  bool record_all = false;
  std::uint64_t max_steps = 100'000'000;
  auto* ssa = app.add_subcommand("simulate-ssa", "One Gillespie trajectory as CSV");
  ssa->add_option("file", file)->required();
  ssa->add_option("--t-end", t_end)->required()->check(CLI::PositiveNumber);
  ssa->add_option("--seed", seed)->required();
  ssa->add_option("--mode", mode, "power-law|combinatorial")->capture_default_str();
  ssa->add_option("--grid", grid, "Grid points")->capture_default_str()->check(CLI::Range(2, 10'000'000));
  ssa->add_flag("--record-all", record_all, "Record every event instead of a grid");
  ssa->add_option("--max-steps", max_steps)->capture_default_str();
  ssa->add_option("--out", out, "CSV path (stdout if omitted); metadata goes to <out>.meta.json");

  std::optional<double> dt;
  bool adaptive = false;
  double rtol = 1e-6;
  double atol = 1e-8;
  auto* ode = app.add_subcommand("simulate-ode", "Deterministic mass-action trajectory as CSV");
  ode->add_option("file", file)->required();
  ode->add_option("--t-end", t_end)->required()->check(CLI::PositiveNumber);
  auto* dt_opt = ode->add_option("--dt", dt, "Fixed RK4 step")->check(CLI::PositiveNumber);
  ode->add_flag("--adaptive", adaptive, "Dormand-Prince 5(4)")->excludes(dt_opt);
  ode->add_option("--rtol", rtol)->capture_default_str();
  ode->add_option("--atol", atol)->capture_default_str();
  ode->add_option("--grid", grid, "Output points")->capture_default_str()->check(CLI::Range(2, 10'000'000));
  ode->add_option("--out", out, "CSV path (stdout if omitted)");

  EnsembleArgs ens;
  std::string out_dir;
  auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo SSA ensemble statistics");
  ensemble->add_option("file", file)->required();
  ens.add_to(ensemble, true);
  ensemble->add_option("--out-dir", out_dir)->required();

  auto* sbml = app.add_subcommand("export-sbml", "SBML Level 3 Version 1 model");
  sbml->add_option("file", file)->required();
  sbml->add_option("--out", out, "XML path (stdout if omitted)");

  std::string transcript_path;
  int max_repairs = 3;
  auto* from_text = app.add_subcommand("from-text", "Extract a kinetic table from prose via the LLM endpoint");
  from_text->add_option("file", file)->required();
  from_text->add_option("--transcript", transcript_path, "Write the extraction transcript JSON");
  from_text->add_option("--max-repairs", max_repairs)->capture_default_str()->check(CLI::NonNegativeNumber);
  from_text->add_option("--out", out, "Kinetic-table path (stdout if omitted)");

  bool from_table = false;
  EnsembleArgs pens;
  auto* pipeline = app.add_subcommand("pipeline", "Prose (or kinetic table) to every artifact in one directory");
  pipeline->add_option("file", file)->required();
  pipeline->add_option("--out-dir", out_dir)->required();
  pipeline->add_flag("--from-table", from_table, "Input is a kinetic-table JSON; skip the endpoint");
  pipeline->add_option("--max-repairs", max_repairs)->capture_default_str()->check(CLI::NonNegativeNumber);
  pens.add_to(pipeline, false);

  std::string rules_path;
  auto* mock = app.add_subcommand("mock-llm", "Serve canned chat completions on 127.0.0.1 for offline runs");
  mock->add_option("--rules", rules_path, "Mock rules JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  g_verbosity = quiet ? Verbosity::Quiet : verbose ? Verbosity::Verbose : Verbosity::Normal;

  if (*parse) {
    const auto network = load_network(file);
    std::cout << crn::emit_kinetic_table(network);
    const auto report = crn::validate(network);
    if (!report.is_admissible) {
      warn("network is not admissible");
      return kInvalid;
    }
    return kOk;
  }
  if (*validate) {
    const auto report = crn::validate(load_network(file));
    std::cout << (json_report ? report.to_json() : report.to_text());
    return report.is_admissible ? kOk : kInput;
  }
  if (*matrix) {
    const auto m = crn::build_stoichiometry(load_admissible(file));
    std::cout << (csv ? m.to_csv() : matrix_text(m));
    return kOk;
  }
  if (*ssa) {
    const auto network = load_admissible(file);
    crn::SimConfig config;
    config.t_end = t_end;
    config.seed = seed;
    config.mode = parse_mode(mode);
    config.max_steps = max_steps;
    if (record_all) {
      config.record = crn::RecordAll{};
    } else {
      config.record = crn::RecordOnGrid{crn::uniform_grid(t_end, grid)};
    }
    const auto trajectory = crn::simulate_ssa(network, config);
    if (trajectory.terminated_by == crn::Termination::StepCap) warn("step cap reached before t_end");
    emit(trajectory.to_csv(), out);
    if (!out.empty()) crn::write_text_file(out + ".meta.json", crn::ssa_metadata_json(config, trajectory));
    return kOk;
  }
  if (*ode) {
    const auto network = load_admissible(file);
    crn::OdeConfig config;
    config.t_end = t_end;
    config.method = adaptive ? crn::OdeMethod::AdaptiveDopri5 : crn::OdeMethod::FixedRk4;
    config.dt = dt;
    config.rel_tol = rtol;
    config.abs_tol = atol;
    config.grid = crn::uniform_grid(t_end, grid);
    const auto trajectory = crn::simulate_ode(network, config);
    if (trajectory.clamped_steps > 0)
      info(std::to_string(trajectory.clamped_steps) + " step(s) clamped a small negative undershoot to 0");
    emit(trajectory.to_csv(), out);
    return kOk;
  }
  if (*ensemble) {
    const auto network = load_admissible(file);
    const auto result = crn::run_ensemble(network, ens.config());
    for (const auto& line : result.trace) info(line);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    crn::write_text_file(dir / "ensemble.csv", result.to_csv());
    crn::write_text_file(dir / "ensemble_meta.json", result.metadata_json());
    if (!ens.no_plots) {
      crn::write_text_file(dir / "ensemble_all.svg", crn::emit_plot(result, {}));
      for (const auto& s : result.species) {
        crn::PlotOptions one;
        one.species = std::vector<std::string>{s};
        one.title = s;
        crn::write_text_file(dir / ("ensemble_" + s + ".svg"), crn::emit_plot(result, one));
      }
    }
    info("wrote ensemble artifacts to " + out_dir);
    return kOk;
  }
  if (*sbml) {
    emit(crn::export_sbml(load_admissible(file)), out);
    return kOk;
  }
  if (*from_text) {
    const auto config = llm_config(max_repairs);
    crn::HttpChatTransport transport(config);
    try {
      const auto extraction = crn::extract_network(crn::read_text_file(file), config, transport);
      if (!transcript_path.empty()) crn::write_text_file(transcript_path, extraction.transcript.to_json());
      info("extracted after " + std::to_string(extraction.transcript.rounds.size()) + " round(s)");
      emit(extraction.kinetic_table, out);
    } catch (const crn::ExtractionFailedError& e) {
      if (!transcript_path.empty()) crn::write_text_file(transcript_path, e.transcript().to_json());
      throw;
    }
    return kOk;
  }
  if (*pipeline) {
    crn::PipelineOptions options;
    options.out_dir = out_dir;
    options.ensemble = pens.config();
    options.plots = !pens.no_plots;
    const std::string input = crn::read_text_file(file);
    crn::PipelineResult result;
    if (from_table) {
      result = crn::run_pipeline_from_table(input, options);
    } else {
      const auto config = llm_config(max_repairs);
      crn::HttpChatTransport transport(config);
      result = crn::run_pipeline(input, config, transport, options);
    }
    for (const auto& line : result.ensemble.trace) info(line);
    info("wrote " + std::to_string(result.artifacts.size()) + " artifacts to " + out_dir);
    return kOk;
  }
  if (*mock) {
    const auto rules = crn::load_mock_rules(nlohmann::json::parse(crn::read_text_file(rules_path)));
    crn::MockLlmServer server(rules);
    std::cout << server.base_url() << std::endl;
    server.wait();
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kUsage;
  } catch (const crn::IoError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kUsage;
  } catch (const crn::EndpointError& e) {
    std::cerr << "crn: endpoint: " << e.what() << "\n";
    return kEndpoint;
  } catch (const crn::ExtractionFailedError& e) {
    std::cerr << "crn: extraction failed: " << e.what() << "\n";
    return kEndpoint;
  } catch (const crn::SyntaxError& e) {
    std::cerr << "crn: syntax error at " << e.what() << "\n";
    return kInput;
  } catch (const crn::SchemaError& e) {
    std::cerr << "crn: schema error at " << e.what() << "\n";
    return kInput;
  } catch (const crn::DuplicateNameError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kInput;
  } catch (const crn::NegativeRateError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kInput;
  } catch (const crn::InadmissibleNetworkError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kInput;
  } catch (const crn::UnsupportedSbmlFeatureError& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kInput;
  } catch (const crn::Error& e) {
    std::cerr << "crn: " << e.what() << "\n";
    return kEngine;
  } catch (const std::exception& e) {
    std::cerr << "crn: internal error: " << e.what() << "\n";
    return kEngine;
  }
}
