#pragma once

#include <cstddef>

#include "motifmine/dataset.hpp"
#include "motifmine/decoder.hpp"
#include "motifmine/eval.hpp"
#include "motifmine/training.hpp"

namespace motifmine {

struct PipelineResult {
  TrainResult trained;
  GridResult decoded;
  EvalReport report;  // best grid config, with the pooled sigma AUC
};

/// Train, grid-decode against the dataset's own truth, evaluate.
PipelineResult run_pipeline(const DatasetBundle& data, const MinerConfig& config, const GridSpec& grid,
                            std::size_t jobs = 1);

/// run_pipeline with every score fixed at 0.5.
PipelineResult dummy_control(const DatasetBundle& data, MinerConfig config, const GridSpec& grid,
                             std::size_t jobs = 1);

}  // namespace motifmine
