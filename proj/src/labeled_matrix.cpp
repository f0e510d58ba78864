#include "tarskiq/labeled_matrix.hpp"

#include "json.hpp"

#include "tarskiq/symbol.hpp"

namespace tarskiq {

namespace {

template <class T>
void require_same_labels(const BasicLabeledMatrix<T>& a, const BasicLabeledMatrix<T>& b) {
  if (a.dim() != b.dim()) {
    invalid_argument("hadamard: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.label(i) != b.label(i)) {
      invalid_argument("hadamard: labels differ at index " + std::to_string(i) + " ('" +
                       render_label(a.label(i), LabelStyle::Hex) + "' vs '" +
                       render_label(b.label(i), LabelStyle::Hex) + "')");
    }
  }
}

template <class T>
BasicLabeledMatrix<T> hadamard_impl(const BasicLabeledMatrix<T>& a, const BasicLabeledMatrix<T>& b) {
  require_same_labels(a, b);
  const std::size_t n = a.dim();
  std::vector<T> out(n * n);
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ea[k] * eb[k];
  return BasicLabeledMatrix<T>(a.labels(), std::move(out));
}

template <class T>
BasicLabeledMatrix<T> tensor_impl(const BasicLabeledMatrix<T>& a, const BasicLabeledMatrix<T>& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  const std::size_t n = na * nb;
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) labels.push_back(a.label(i) + b.label(j));
  }
  std::vector<T> out(n * n);
  for (std::size_t i1 = 0; i1 < na; ++i1) {
    for (std::size_t j1 = 0; j1 < nb; ++j1) {
      const std::size_t r = i1 * nb + j1;
      for (std::size_t i2 = 0; i2 < na; ++i2) {
        const T& av = a(i1, i2);
        for (std::size_t j2 = 0; j2 < nb; ++j2) out[r * n + i2 * nb + j2] = av * b(j1, j2);
      }
    }
  }
  return BasicLabeledMatrix<T>(std::move(labels), std::move(out));
}

nlohmann::json labels_json(const std::vector<std::string>& labels, LabelStyle style) {
  auto arr = nlohmann::json::array();
  for (const auto& l : labels) arr.push_back(render_label(l, style));
  return arr;
}

}  // namespace

LabeledMatrix to_float(const RationalMatrix& m) {
  std::vector<double> out;
  out.reserve(m.entries().size());
  for (const auto& v : m.entries()) out.push_back(to_double(v));
  return LabeledMatrix(m.labels(), std::move(out));
}

LabeledMatrix hadamard(const LabeledMatrix& a, const LabeledMatrix& b) { return hadamard_impl(a, b); }
RationalMatrix hadamard(const RationalMatrix& a, const RationalMatrix& b) { return hadamard_impl(a, b); }
LabeledMatrix tensor(const LabeledMatrix& a, const LabeledMatrix& b) { return tensor_impl(a, b); }
RationalMatrix tensor(const RationalMatrix& a, const RationalMatrix& b) { return tensor_impl(a, b); }

std::vector<std::string> index_labels(std::size_t n) {
  if (n > 256) invalid_argument("index_labels: at most 256 one-byte labels, got " + std::to_string(n));
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>(i));
  return out;
}

std::string render_label(const std::string& label, LabelStyle style) {
  if (style == LabelStyle::Symbols) return render_instance(label);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(label.size() * 2);
  for (unsigned char c : label) {
    out += kHex[c >> 4];
    out += kHex[c & 0xf];
  }
  return out;
}

std::string to_json(const LabeledMatrix& m, LabelStyle style) {
  nlohmann::json j;
  j["dim"] = m.dim();
  j["labels"] = labels_json(m.labels(), style);
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["entries"] = std::move(rows);
  return j.dump();
}

std::string to_json(const RationalMatrix& m, LabelStyle style) {
  nlohmann::json j;
  j["dim"] = m.dim();
  j["labels"] = labels_json(m.labels(), style);
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    auto row = nlohmann::json::array();
    for (const auto& v : m.row(r)) row.push_back(to_string(v));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j.dump();
}

}  // namespace tarskiq
