#include "motifmine/pipeline.hpp"

namespace motifmine {

PipelineResult run_pipeline(const DatasetBundle& data, const MinerConfig& config, const GridSpec& grid,
                            std::size_t jobs) {
  PipelineResult out;
  out.trained = train(data, config, jobs);
  out.decoded = decode_grid_search(out.trained.model, data, grid, jobs);
  out.report = evaluate(out.decoded.assignments, data.truth);
  out.report.mean = out.decoded.score;
  out.report.std = out.decoded.score_std;
  const DatasetLayers layers = forward_dataset(out.trained.model, data.graphs, grid.seed, jobs);
  out.report.auc = sigma_separation(layers, data.truth).auc;
  out.report.config = {{"miner", to_json(config)},
                       {"layer", out.decoded.best.layer},
                       {"bits", out.decoded.best.bits},
                       {"rank", out.decoded.best.rank},
                       {"min_support", out.decoded.best.min_support},
                       {"repetitions", grid.repetitions}};
  return out;
}

PipelineResult dummy_control(const DatasetBundle& data, MinerConfig config, const GridSpec& grid,
                             std::size_t jobs) {
  config.dummy = true;
  return run_pipeline(data, config, grid, jobs);
}

}  // namespace motifmine
