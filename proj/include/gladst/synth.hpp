#pragma once

#include <cstdint>
#include <string>

#include "gladst/graph.hpp"

namespace gladst {

enum class BaseMotif { single_ring, tree };
enum class AnomalyKind { node_property, graph_property };

struct SynthSpec {
  int base_count = 100;
  int anomaly_count = 20;
  BaseMotif base_motif = BaseMotif::single_ring;
  AnomalyKind anomaly_kind = AnomalyKind::graph_property;
  int min_nodes = 6;
  int max_nodes = 14;
  double perturb_scale = 1.0;
  std::uint64_t seed = 42;
  int anomaly_label = 1;
  std::string name = "SYNTH";
};

/// Throws SpecError when the spec cannot be realized.
void validate(const SynthSpec& spec);

/// Base graphs first, then anomalies. Pure function of the spec.
///
/// node_property: a base motif where one node drops its edges, reconnects to
/// ceil(n/2) nodes (non-neighbors first) and receives gaussian feature noise.
/// graph_property: two disjoint rings joined by one bridge edge.
GraphDataset generate_synthetic(const SynthSpec& spec);

std::string to_string(BaseMotif m);
std::string to_string(AnomalyKind k);
BaseMotif parse_base_motif(const std::string& s);
AnomalyKind parse_anomaly_kind(const std::string& s);

/// One key=value line per field.
std::string describe(const SynthSpec& spec);

/// edges - nodes + connected components.
int cycle_rank(const Graph& g);

}  // namespace gladst
