#pragma once

#include "gladst/synth.hpp"
#include "gladst/trainer.hpp"

namespace testing_support {

/// Small ring/double-ring dataset and a narrow model, quick enough for unit tests.
inline gladst::GraphDataset small_fixture(std::uint64_t seed = 42, int anomaly_label = 1) {
  gladst::SynthSpec spec;
  spec.base_count = 30;
  spec.anomaly_count = 10;
  spec.seed = seed;
  spec.anomaly_label = anomaly_label;
  spec.name = "SMALL";
  return gladst::generate_synthetic(spec);
}

inline gladst::TrainConfig small_config() {
  gladst::TrainConfig c;
  c.epochs = 20;
  c.optimizer.learning_rate = 1e-3;
  c.shape = {32, 16};
  c.deterministic = true;
  return c;
}

}  // namespace testing_support
