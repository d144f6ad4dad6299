#pragma once

#include "amsom/engine.hpp"

namespace amsom {

/// Classic batch SOM on a fixed lattice. Positions, edges and ages are left
/// untouched; only weights (and win counts) change. Uses the same sigma
/// schedule and eps1 termination rule as AMSOM training.
[[nodiscard]] TrainResult train_batch_som(const Dataset& data, MapState map, const TrainConfig& config,
                                          const EpochCallback& on_epoch = {});

}  // namespace amsom
