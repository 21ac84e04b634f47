#ifndef TRG_PIPELINE_HPP
#define TRG_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trg/aligner.hpp"
#include "trg/generator.hpp"
#include "trg/model.hpp"

namespace trg {

struct TrainSummary {
  std::size_t instances = 0;
  std::size_t schemas = 0;
  std::size_t fragment_datasets = 0;
  std::size_t features = 0;
  std::size_t aligned_segments = 0;  // segments carrying at least one feature
};

/// Align -> extract -> train selectors -> write the model directory.
TrainSummary train_model(const std::filesystem::path& corpus, const std::filesystem::path& model_dir,
                         const AlignConfig& config = {}, std::size_t jobs = 1);

struct AlignmentScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t matched = 0;
};

/// Compares (start, end, feature) triples of instances present in both.
AlignmentScore score_alignment(const std::vector<AlignedInstance>& predicted,
                               const std::vector<AlignedInstance>& gold);

struct EvalReport {
  std::size_t instances = 0;
  double feature_coverage = 0.0;  // query features realised by a fragment aligned to them
  double exact_match = 0.0;       // generated text == test TD
  double mean_weight = 0.0;       // mean appropriation weight
  std::optional<AlignmentScore> alignment;
};

/// Generates from each test instance's CC and compares with its TD.
EvalReport evaluate(const TrgModel& model, const Corpus& test, const GenOptions& options = {}, std::size_t jobs = 1);

std::string report_to_json(const EvalReport& report);

}  // namespace trg

#endif  // TRG_PIPELINE_HPP
