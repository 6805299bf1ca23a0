#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crn/ensemble.hpp"
#include "crn/llm.hpp"
#include "crn/model.hpp"
#include "crn/validator.hpp"

namespace crn {

struct PipelineOptions {
  std::filesystem::path out_dir;
  McConfig ensemble;
  bool plots = true;
};

struct PipelineResult {
  ReactionNetwork network;
  ValidationReport report;
  StoichiometryMatrix matrix;
  EnsembleResult ensemble;
  std::optional<ExtractionTranscript> transcript;
  /// File names written to out_dir, manifest.json last.
  std::vector<std::string> artifacts;
};

/// Prose -> extraction -> validation -> matrix -> ensemble -> SBML -> plots.
/// Writes input.txt, transcript.json (also on failed extraction),
/// kinetic_table.json, network.crn, validation.json, matrix.csv,
/// ensemble.csv, ensemble_meta.json, model.xml, ensemble_*.svg and
/// manifest.json into out_dir.
PipelineResult run_pipeline(const std::string& prose, const LlmConfig& llm, ChatTransport& transport,
                            const PipelineOptions& options);

/// Same stages starting from a kinetic-table JSON document; the endpoint is never contacted.
PipelineResult run_pipeline_from_table(const std::string& table_json, const PipelineOptions& options);

}  // namespace crn
