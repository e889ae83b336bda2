#include "gladst/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gladst/error.hpp"

namespace gladst {
namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const char* p, std::size_t n) { buf_.append(p, n); }
  void matrix(const Matrix& m) {
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    for (Index i = 0; i < m.size(); ++i) f64(m.data()[i]);
  }
  void curve(const std::vector<double>& c) {
    u64(c.size());
    for (double v : c) f64(v);
  }
  const std::string& str() const { return buf_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Matrix matrix() {
    const auto rows = u32();
    const auto cols = u32();
    need(static_cast<std::size_t>(rows) * cols * 8);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = f64();
    return m;
  }
  std::vector<double> curve() {
    const auto n = u64();
    if (n > (data_.size() - pos_) / 8) fail("curve length exceeds file size");
    std::vector<double> c(n);
    for (auto& v : c) v = f64();
    return c;
  }
  bool at_end() const { return pos_ == data_.size(); }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("checkpoint " + path_ + ": " + why + " at byte " + std::to_string(pos_));
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail("truncated file");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelTriple& models, const std::string& config_text) {
  Writer w;
  w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(models.feature_dim));
  w.u64(models.config_fingerprint);
  w.u32(static_cast<std::uint32_t>(config_text.size()));
  w.bytes(config_text.data(), config_text.size());
  for (const GcnParams* p : {&models.teacher, &models.student_a, &models.student_b}) {
    w.matrix(p->theta0);
    w.matrix(p->theta1);
  }
  w.curve(models.curves.teacher);
  w.curve(models.curves.student_a);
  w.curve(models.curves.student_b);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(w.str().data(), static_cast<std::streamsize>(w.str().size()));
  if (!out) throw IoError("write failed for checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Reader r(ss.str(), path.string());

  if (r.bytes(sizeof kCheckpointMagic) != std::string(kCheckpointMagic, sizeof kCheckpointMagic)) {
    r.fail("missing GLADST1 magic");
  }
  if (const auto v = r.u32(); v != kCheckpointVersion) r.fail("unsupported version " + std::to_string(v));

  Checkpoint ck;
  ck.models.feature_dim = r.u32();
  ck.models.config_fingerprint = r.u64();
  ck.config_text = r.bytes(r.u32());
  for (GcnParams* p : {&ck.models.teacher, &ck.models.student_a, &ck.models.student_b}) {
    p->theta0 = r.matrix();
    p->theta1 = r.matrix();
    if (p->feature_dim() != ck.models.feature_dim || p->theta1.rows() != p->theta0.cols()) {
      r.fail("parameter shapes disagree with feature_dim " + std::to_string(ck.models.feature_dim));
    }
  }
  if (!(ck.models.student_a.shape() == ck.models.teacher.shape()) ||
      !(ck.models.student_b.shape() == ck.models.teacher.shape())) {
    r.fail("student and teacher layer widths differ");
  }
  ck.models.curves.teacher = r.curve();
  ck.models.curves.student_a = r.curve();
  ck.models.curves.student_b = r.curve();
  if (!r.at_end()) r.fail("trailing bytes");
  return ck;
}

}  // namespace gladst
