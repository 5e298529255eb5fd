#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ifmlab {

/// A quantum amplitude. Everything in the library is finite double-precision.
using Amplitude = std::complex<double>;

/// Shared absolute tolerance for numeric checks (unitarity, normalization,
/// distribution sums). Overridable per call wherever a tol parameter exists.
inline constexpr double kDefaultTol = 1e-12;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector/operator dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Invalid basis, circuit, detector map, or argument.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Post-selection or conditioning on an outcome of (numerically) zero
/// probability.
class ZeroProbabilityError : public Error {
public:
  using Error::Error;
};

/// An internal invariant failed, e.g. a probability below -1e-12.
class InternalError : public Error {
public:
  using Error::Error;
};

inline bool is_finite(Amplitude a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

/// Complex amplitudes over an ordered basis of modes (sinks included).
class StateVector {
public:
  explicit StateVector(std::size_t dim) : amps_(check_dim(dim)) {}

  explicit StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {
    check_dim(amps_.size());
    for (const Amplitude& a : amps_) {
      if (!is_finite(a)) throw ValidationError("state vector has a non-finite amplitude");
    }
  }

  static StateVector basis_state(std::size_t dim, std::size_t index) {
    StateVector s(dim);
    if (index >= dim) throw DimensionError("basis index out of range");
    s.amps_[index] = 1.0;
    return s;
  }

  std::size_t dim() const { return amps_.size(); }

  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }

  double norm2() const {
    double n = 0.0;
    for (const Amplitude& a : amps_) n += std::norm(a);
    return n;
  }

  double norm() const { return std::sqrt(norm2()); }

  /// Returns the state scaled to unit norm; the norm must not be ~zero.
  StateVector normalized() const {
    double n = norm();
    if (n * n < 1e-14) throw ZeroProbabilityError("cannot normalize a (near-)zero state");
    StateVector out(*this);
    for (Amplitude& a : out.amps_) a /= n;
    return out;
  }

  auto begin() const { return amps_.begin(); }
  auto end() const { return amps_.end(); }

private:
  static std::size_t check_dim(std::size_t dim) {
    if (dim == 0) throw DimensionError("state vector dimension must be >= 1");
    return dim;
  }

  std::vector<Amplitude> amps_;
};

/// Dense square operator. Entries are stored row-major with the row index
/// being the OUTPUT index and the column the INPUT index; this convention
/// is used everywhere in the library.
class Operator {
public:
  explicit Operator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw DimensionError("operator dimension must be >= 1");
  }

  static Operator identity(std::size_t dim) {
    Operator op(dim);
    for (std::size_t i = 0; i < dim; ++i) op.at(i, i) = 1.0;
    return op;
  }

  static Operator diagonal(std::vector<Amplitude> diag) {
    Operator op(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) op.at(i, i) = diag[i];
    return op;
  }

  std::size_t dim() const { return dim_; }

  Amplitude& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Amplitude& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  Operator adjoint() const {
    Operator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
  }

  bool all_finite() const {
    for (const Amplitude& a : entries_)
      if (!is_finite(a)) return false;
    return true;
  }

private:
  std::size_t dim_;
  std::vector<Amplitude> entries_;
};

/// <a|b> with conjugation on the first argument.
inline Amplitude inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  Amplitude acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline StateVector apply(const Operator& op, const StateVector& s) {
  if (op.dim() != s.dim()) throw DimensionError("apply: dimension mismatch");
  StateVector out(s.dim());
  for (std::size_t r = 0; r < op.dim(); ++r) {
    Amplitude acc = 0.0;
    for (std::size_t c = 0; c < op.dim(); ++c) acc += op.at(r, c) * s[c];
    out[r] = acc;
  }
  return out;
}

/// Matrix product later*earlier (apply `earlier` first).
inline Operator compose(const Operator& later, const Operator& earlier) {
  if (later.dim() != earlier.dim()) throw DimensionError("compose: dimension mismatch");
  const std::size_t n = later.dim();
  Operator out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      Amplitude l = later.at(r, k);
      if (l == Amplitude{}) continue;
      for (std::size_t c = 0; c < n; ++c) out.at(r, c) += l * earlier.at(k, c);
    }
  return out;
}

/// Kronecker product; the first argument's index is the major one.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

inline Operator tensor(const Operator& a, const Operator& b) {
  const std::size_t n = a.dim(), m = b.dim();
  Operator out(n * m);
  for (std::size_t r1 = 0; r1 < n; ++r1)
    for (std::size_t c1 = 0; c1 < n; ++c1) {
      Amplitude f = a.at(r1, c1);
      if (f == Amplitude{}) continue;
      for (std::size_t r2 = 0; r2 < m; ++r2)
        for (std::size_t c2 = 0; c2 < m; ++c2)
          out.at(r1 * m + r2, c1 * m + c2) = f * b.at(r2, c2);
    }
  return out;
}

/// True iff U†U deviates from the identity by at most tol, entrywise.
inline bool is_unitary(const Operator& op, double tol = kDefaultTol) {
  if (tol <= 0.0) throw ValidationError("is_unitary: tol must be > 0");
  if (!op.all_finite()) return false;
  Operator gram = compose(op.adjoint(), op);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c) {
      Amplitude want = (r == c) ? Amplitude{1.0} : Amplitude{};
      if (std::abs(gram.at(r, c) - want) > tol) return false;
    }
  return true;
}

inline bool is_self_adjoint(const Operator& op, double tol = kDefaultTol) {
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c)
      if (std::abs(op.at(r, c) - std::conj(op.at(c, r))) > tol) return false;
  return true;
}

/// <s|op|s>, returned as its real part (meaningful for self-adjoint op).
inline double expectation(const Operator& op, const StateVector& s) {
  return inner(s, apply(op, s)).real();
}

}  // namespace ifmlab
