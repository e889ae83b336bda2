#pragma once

#include <filesystem>
#include <iosfwd>

#include "gladst/graph.hpp"
#include "gladst/trainer.hpp"

namespace gladst {

/// Tab-separated graph-level representations, three rows per graph (teacher,
/// student_a, student_b). Header: graph_index, model, label, v0..v{out-1}.
/// Values use 17 significant digits; lines end in LF.
void export_representations(const GraphDataset& dataset, const ModelTriple& models,
                            std::ostream& out);
void export_representations(const GraphDataset& dataset, const ModelTriple& models,
                            const std::filesystem::path& path);

}  // namespace gladst
