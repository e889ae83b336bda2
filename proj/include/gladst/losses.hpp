#pragma once

#include <cstddef>
#include <span>

#include "gladst/gcn.hpp"

namespace gladst {

/// Which representation-error terms enter the student objective.
struct LossTerms {
  bool node = true;
  bool graph = true;
};

/// Spread statistics behind the teacher objective.
struct TeacherLoss {
  double graph_spread = 0.0;  // mean over graphs of Std(h_G)
  double node_spread = 0.0;   // mean over graphs of the mean node Std(h_i)
  double value = 0.0;         // 1 / (graph_spread + node_spread + eps)
};

/// Population standard deviation of the entries of v.
double population_std(const Eigen::Ref<const Eigen::RowVectorXd>& v);

TeacherLoss teacher_loss(std::span<const ForwardTrace> traces, double eps);

/// Output gradients of the teacher objective for one graph of a batch of
/// batch_size graphs, given the batch statistics in loss.
void teacher_output_grads(const ForwardTrace& trace, const TeacherLoss& loss,
                          std::size_t batch_size, Matrix& d_h1, Vector& d_hg);

struct StudentLoss {
  double graph_error = 0.0;  // mean ‖h_G − ĥ_G‖²
  double node_error = 0.0;   // mean over graphs of the mean ‖h_i − ĥ_i‖²
  double value = 0.0;        // sum of the enabled terms
};

/// Representation error of a student against frozen teacher outputs, paired
/// by position. Throws PairingError on length or shape mismatch.
StudentLoss student_loss(std::span<const Representation> teacher,
                         std::span<const ForwardTrace> student, LossTerms terms);

void student_output_grads(const Representation& teacher, const ForwardTrace& student,
                          std::size_t batch_size, LossTerms terms, Matrix& d_h1, Vector& d_hg);

}  // namespace gladst
