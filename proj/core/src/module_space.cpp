#include "shiftlab/module_space.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace shiftlab {

namespace {

// Cheap norm proxy for the storage threshold: max |entry| bounds the operator
// norm from below and d * max |entry| from above; entries this small are dust.
bool below_storage_threshold(const CompactOp& c) {
  return c.entries().cwiseAbs().maxCoeff() <= ModuleVector::kStorageThreshold;
}

}  // namespace

ModuleVector::ModuleVector(BasisWindow w, std::map<long, CompactOp> coeffs) : window_(w) {
  for (auto& [xi, c] : coeffs) {
    require_same_window(window_, c.window(), "ModuleVector");
    if (below_storage_threshold(c)) continue;
    coeffs_.emplace(xi, std::move(c));
  }
}

ModuleVector ModuleVector::single(long xi, const CompactOp& coeff) {
  std::map<long, CompactOp> m;
  m.emplace(xi, coeff);
  return ModuleVector(coeff.window(), std::move(m));
}

CompactOp ModuleVector::coeff(long xi) const {
  auto it = coeffs_.find(xi);
  if (it == coeffs_.end()) return CompactOp::zero(window_);
  return it->second;
}

CompactOp inner_product(const ModuleVector& x, const ModuleVector& y) {
  require_same_window(x.window(), y.window(), "inner_product");
  Matrix acc = Matrix::Zero(x.window().dim(), x.window().dim());
  for (const auto& [xi, cx] : x.coeffs()) {
    auto it = y.coeffs().find(xi);
    if (it == y.coeffs().end()) continue;
    acc += cx.entries().adjoint() * it->second.entries();
  }
  return CompactOp(x.window(), std::move(acc));
}

double norm2(const ModuleVector& x) {
  if (x.empty()) return 0.0;
  return std::sqrt(op_norm(inner_product(x, x)));
}

ModuleVector dense_class_element(const BasisWindow& w, IndexRange J, long m,
                                 const std::map<long, CompactOp>& coeffs) {
  const CompactOp pm = projection_P(w, m);
  std::map<long, CompactOp> out;
  for (const auto& [j, c] : coeffs) {
    if (!J.contains(j)) {
      std::ostringstream oss;
      oss << "dense_class_element: coefficient index " << j << " outside [" << -J.J << ", "
          << J.J << "]";
      throw InvalidArgumentError(oss.str());
    }
    require_same_window(w, c.window(), "dense_class_element");
    out.emplace(j, matmul(pm, c));
  }
  return ModuleVector(w, std::move(out));
}

ModuleVector ptilde(const BasisWindow& w, IndexRange J, long m) {
  const CompactOp pm = projection_P(w, m);
  std::map<long, CompactOp> out;
  for (long j = -J.J; j <= J.J; ++j) out.emplace(j, pm);
  return ModuleVector(w, std::move(out));
}

ModuleVector add(const ModuleVector& x, const ModuleVector& y) {
  require_same_window(x.window(), y.window(), "add");
  std::map<long, CompactOp> out = x.coeffs();
  for (const auto& [xi, cy] : y.coeffs()) {
    auto it = out.find(xi);
    if (it == out.end()) {
      out.emplace(xi, cy);
    } else {
      it->second = shiftlab::add(it->second, cy);
    }
  }
  return ModuleVector(x.window(), std::move(out));
}

ModuleVector sub(const ModuleVector& x, const ModuleVector& y) {
  return add(x, scale(y, Complex(-1.0, 0.0)));
}

ModuleVector scale(const ModuleVector& x, Complex c) {
  std::map<long, CompactOp> out;
  for (const auto& [xi, cx] : x.coeffs()) out.emplace(xi, shiftlab::scale(cx, c));
  return ModuleVector(x.window(), std::move(out));
}

double distance(const ModuleVector& x, const ModuleVector& y) { return norm2(sub(x, y)); }

std::string to_json_string(const ModuleVector& x, int indent) {
  nlohmann::json doc;
  doc["m_max"] = x.window().m_max();
  doc["coeffs"] = nlohmann::json::array();
  const long d = x.window().dim();
  for (const auto& [xi, c] : x.coeffs()) {
    nlohmann::json entry;
    entry["xi"] = xi;
    auto re = nlohmann::json::array();
    auto im = nlohmann::json::array();
    for (long r = 0; r < d; ++r) {
      auto re_row = nlohmann::json::array();
      auto im_row = nlohmann::json::array();
      for (long col = 0; col < d; ++col) {
        re_row.push_back(c.entries()(r, col).real());
        im_row.push_back(c.entries()(r, col).imag());
      }
      re.push_back(std::move(re_row));
      im.push_back(std::move(im_row));
    }
    entry["re"] = std::move(re);
    entry["im"] = std::move(im);
    doc["coeffs"].push_back(std::move(entry));
  }
  return doc.dump(indent);
}

ModuleVector module_vector_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInputError(std::string("module_vector_from_json: ") + e.what());
  }
  if (!doc.contains("m_max") || !doc["m_max"].is_number_integer())
    throw MalformedInputError("module_vector_from_json: missing integer field m_max");
  const BasisWindow w(doc["m_max"].get<long>());
  const long d = w.dim();
  std::map<long, CompactOp> coeffs;
  for (const auto& entry : doc.value("coeffs", nlohmann::json::array())) {
    if (!entry.contains("xi") || !entry.contains("re") || !entry.contains("im"))
      throw MalformedInputError("module_vector_from_json: coefficient needs xi/re/im");
    const long xi = entry["xi"].get<long>();
    const auto& re = entry["re"];
    const auto& im = entry["im"];
    if (static_cast<long>(re.size()) != d || static_cast<long>(im.size()) != d)
      throw MalformedInputError("module_vector_from_json: matrix rows do not match window");
    Matrix m(d, d);
    for (long r = 0; r < d; ++r) {
      if (static_cast<long>(re[r].size()) != d || static_cast<long>(im[r].size()) != d)
        throw MalformedInputError("module_vector_from_json: matrix cols do not match window");
      for (long col = 0; col < d; ++col) {
        m(r, col) = Complex(re[r][col].get<double>(), im[r][col].get<double>());
      }
    }
    coeffs.emplace(xi, CompactOp(w, std::move(m)));
  }
  return ModuleVector(w, std::move(coeffs));
}

}  // namespace shiftlab
