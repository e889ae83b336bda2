#include "gladst/losses.hpp"

#include <cmath>

#include "gladst/error.hpp"

namespace gladst {
namespace {

// d Std(v) / dv, zero where Std(v) = 0.
void std_gradient(const Eigen::Ref<const Eigen::RowVectorXd>& v, double scale,
                  Eigen::Ref<Eigen::RowVectorXd> out) {
  const double n = static_cast<double>(v.size());
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().sum() / n);
  if (sd > 0.0) {
    out = (scale / (n * sd)) * (v.array() - mean);
  } else {
    out.setZero();
  }
}

}  // namespace

double population_std(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

TeacherLoss teacher_loss(std::span<const ForwardTrace> traces, double eps) {
  TeacherLoss loss;
  if (traces.empty()) return loss;
  for (const auto& t : traces) {
    loss.graph_spread += population_std(t.hg.transpose());
    double nodes = 0.0;
    for (Index i = 0; i < t.h1.rows(); ++i) nodes += population_std(t.h1.row(i));
    loss.node_spread += nodes / static_cast<double>(t.h1.rows());
  }
  const double m = static_cast<double>(traces.size());
  loss.graph_spread /= m;
  loss.node_spread /= m;
  loss.value = 1.0 / (loss.graph_spread + loss.node_spread + eps);
  return loss;
}

void teacher_output_grads(const ForwardTrace& trace, const TeacherLoss& loss, std::size_t batch_size,
                          Matrix& d_h1, Vector& d_hg) {
  // dL/dspread = -L² for both spread terms.
  const double coef = -loss.value * loss.value / static_cast<double>(batch_size);
  const Index n = trace.h1.rows();
  d_h1.resize(n, trace.h1.cols());
  d_hg.resize(trace.hg.size());
  Eigen::RowVectorXd row(trace.hg.size());
  std_gradient(trace.hg.transpose(), coef, row);
  d_hg = row.transpose();
  for (Index i = 0; i < n; ++i) std_gradient(trace.h1.row(i), coef / static_cast<double>(n), d_h1.row(i));
}

StudentLoss student_loss(std::span<const Representation> teacher, std::span<const ForwardTrace> student,
                         LossTerms terms) {
  if (teacher.size() != student.size()) {
    throw PairingError("teacher batch has " + std::to_string(teacher.size()) + " graphs, student batch " +
                       std::to_string(student.size()));
  }
  StudentLoss loss;
  if (teacher.empty()) return loss;
  for (std::size_t g = 0; g < teacher.size(); ++g) {
    const auto& t = teacher[g];
    const auto& s = student[g];
    if (t.h1.rows() != s.h1.rows() || t.h1.cols() != s.h1.cols() || t.hg.size() != s.hg.size()) {
      throw PairingError("graph " + std::to_string(g) + ": teacher and student representations differ in shape");
    }
    loss.graph_error += (t.hg - s.hg).squaredNorm();
    loss.node_error += (t.h1 - s.h1).squaredNorm() / static_cast<double>(t.h1.rows());
  }
  const double m = static_cast<double>(teacher.size());
  loss.graph_error /= m;
  loss.node_error /= m;
  loss.value = (terms.graph ? loss.graph_error : 0.0) + (terms.node ? loss.node_error : 0.0);
  return loss;
}

void student_output_grads(const Representation& teacher, const ForwardTrace& student, std::size_t batch_size,
                          LossTerms terms, Matrix& d_h1, Vector& d_hg) {
  const double m = static_cast<double>(batch_size);
  if (terms.node) {
    d_h1 = (2.0 / (m * static_cast<double>(student.h1.rows()))) * (student.h1 - teacher.h1);
  } else {
    d_h1 = Matrix::Zero(student.h1.rows(), student.h1.cols());
  }
  if (terms.graph) {
    d_hg = (2.0 / m) * (student.hg - teacher.hg);
  } else {
    d_hg = Vector::Zero(student.hg.size());
  }
}

}  // namespace gladst
