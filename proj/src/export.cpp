#include "gladst/export.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "gladst/error.hpp"
#include "gladst/kernels.hpp"

namespace gladst {

void export_representations(const GraphDataset& dataset, const ModelTriple& models, std::ostream& out) {
  if (dataset.feature_dim != models.feature_dim) {
    throw ShapeError("dataset feature_dim " + std::to_string(dataset.feature_dim) +
                     " does not match model feature_dim " + std::to_string(models.feature_dim));
  }
  const std::pair<const char*, const GcnParams*> nets[] = {
      {"teacher", &models.teacher}, {"student_a", &models.student_a}, {"student_b", &models.student_b}};
  const auto width = static_cast<Index>(models.teacher.shape().output);

  out << "graph_index\tmodel\tlabel";
  for (Index k = 0; k < width; ++k) out << "\tv" << k;
  out << '\n';

  std::vector<std::vector<Representation>> reps;
  for (const auto& [name, params] : nets) reps.push_back(represent_batch(dataset.graphs, *params));

  char buf[32];
  for (std::size_t g = 0; g < dataset.size(); ++g) {
    for (std::size_t m = 0; m < 3; ++m) {
      out << g << '\t' << nets[m].first << '\t' << dataset[g].label();
      const Vector& hg = reps[m][g].hg;
      for (Index k = 0; k < hg.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", hg[k]);
        out << '\t' << buf;
      }
      out << '\n';
    }
  }
}

void export_representations(const GraphDataset& dataset, const ModelTriple& models,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write representations to " + path.string());
  export_representations(dataset, models, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace gladst
