#include "optomech/small_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/error.hpp"

namespace optomech {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDegenerateArray: return "DegenerateArray";
    case ErrorCode::kNoPhysicalRoot: return "NoPhysicalRoot";
    case ErrorCode::kSingularDenominator: return "SingularDenominator";
    case ErrorCode::kInvalidBranch: return "InvalidBranch";
    case ErrorCode::kRegimeViolation: return "RegimeViolation";
    case ErrorCode::kNoMinimumInBracket: return "NoMinimumInBracket";
    case ErrorCode::kDivergentDenominator: return "DivergentDenominator";
    case ErrorCode::kNegativeStiffness: return "NegativeStiffness";
    case ErrorCode::kSingularResolvent: return "SingularResolvent";
    case ErrorCode::kNoPeakInRange: return "NoPeakInRange";
    case ErrorCode::kNotCooling: return "NotCooling";
    case ErrorCode::kUnstable: return "Unstable";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void check_order(std::size_t n) {
  if (n == 0 || n > kMaxMatrixOrder) {
    throw Error(ErrorCode::kInvalidArgument,
                "matrix order must be in 1..12, got " + std::to_string(n));
  }
}

double magnitude(double x) { return std::abs(x); }
double magnitude(const Complex& z) { return std::abs(z); }

}  // namespace

template <typename T>
SmallMatrix<T>::SmallMatrix(std::size_t n) : n_(n), data_(n * n, T{}) {
  check_order(n);
}

template <typename T>
SmallMatrix<T>::SmallMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : n_(rows.size()) {
  check_order(n_);
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorCode::kInvalidArgument, "matrix rows must be square");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

template <typename T>
SmallMatrix<T> SmallMatrix<T>::identity(std::size_t n) {
  SmallMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <typename T>
T SmallMatrix<T>::trace() const {
  T t{};
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

template <typename T>
SmallMatrix<T> SmallMatrix<T>::transpose() const {
  SmallMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

template <typename T>
double SmallMatrix<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, magnitude(v));
  return m;
}

template <typename T>
bool SmallMatrix<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const T& v) { return is_finite(v); });
}

template <typename T>
SmallMatrix<T>& SmallMatrix<T>::operator*=(T s) {
  for (auto& v : data_) v *= s;
  return *this;
}

template <typename T>
SmallMatrix<T>& SmallMatrix<T>::operator+=(const SmallMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorCode::kInvalidArgument, "matrix order mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <typename T>
SmallMatrix<T>& SmallMatrix<T>::operator-=(const SmallMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorCode::kInvalidArgument, "matrix order mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <typename T>
SmallMatrix<T> SmallMatrix<T>::multiply(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.n_ != b.n_) throw Error(ErrorCode::kInvalidArgument, "matrix order mismatch");
  const std::size_t n = a.n_;
  SmallMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <typename T>
std::vector<T> SmallMatrix<T>::apply(std::span<const T> v) const {
  if (v.size() != n_) throw Error(ErrorCode::kInvalidArgument, "vector length mismatch");
  std::vector<T> out(n_, T{});
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.order());
  for (std::size_t r = 0; r < m.order(); ++r)
    for (std::size_t c = 0; c < m.order(); ++c) out(r, c) = m(r, c);
  return out;
}

template class SmallMatrix<double>;
template class SmallMatrix<Complex>;

}  // namespace optomech
