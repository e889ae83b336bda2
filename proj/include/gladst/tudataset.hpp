#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "gladst/graph.hpp"

namespace gladst {

/// Counters for input rows that were tolerated rather than rejected.
struct ParseStats {
  std::size_t asymmetric_edges = 0;  // i→j present without j→i
  std::size_t self_loops = 0;        // dropped; self-loops enter only through normalization
};

/// Reads `<name>_A.txt`, `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`
/// and, when present, `<name>_node_attributes.txt` or `<name>_node_labels.txt`.
///
/// Feature precedence: node attributes, then one-hot node labels, then degree.
/// Graph labels already in {0,1} are kept; any other binary labelling is mapped
/// by ascending order of the distinct raw values.
GraphDataset parse_tudataset(const std::filesystem::path& dir, const std::string& name,
                             int anomaly_label, ParseStats* stats = nullptr);

/// Writes the dataset in the same layout. Features always go to
/// `<name>_node_attributes.txt` with 17 significant digits.
void write_tudataset(const GraphDataset& dataset, const std::filesystem::path& dir);

}  // namespace gladst
