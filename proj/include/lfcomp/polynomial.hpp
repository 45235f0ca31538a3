#ifndef LFCOMP_POLYNOMIAL_HPP
#define LFCOMP_POLYNOMIAL_HPP

// Dense truncated power series in N variables: coefficient vectors indexed
// by the graded-lex monomial basis of total degree <= D.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "lfcomp/spaces.hpp"
#include "lfcomp/types.hpp"

namespace lfcomp {

class MonomialBasis {
 public:
  MonomialBasis(int n, int d) : n_(n), d_(d) {
    if (n < 1 || d < 0) throw DomainError("MonomialBasis: need N >= 1 and D >= 0");
    offsets_.push_back(0);
    for (int s = 0; s <= d; ++s) {
      for (auto& a : multi_indices(n, s)) {
        index_.emplace(a, static_cast<int>(indices_.size()));
        degrees_.push_back(s);
        indices_.push_back(std::move(a));
      }
      offsets_.push_back(static_cast<int>(indices_.size()));
    }
    const std::size_t m = indices_.size();
    sum_.assign(m * m, -1);
    MultiIndex c(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m; ++i) {
      const int limit = offsets_[static_cast<std::size_t>(d - degrees_[i] + 1)];
      for (int j = 0; j < limit; ++j) {
        for (int k = 0; k < n; ++k) {
          c[static_cast<std::size_t>(k)] = indices_[i][static_cast<std::size_t>(k)] +
                                           indices_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
        sum_[i * m + static_cast<std::size_t>(j)] = index_.at(c);
      }
    }
  }

  /// Shared instance per (N, D).
  static std::shared_ptr<const MonomialBasis> get(int n, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, d}];
    if (!slot) slot = std::make_shared<const MonomialBasis>(n, d);
    return slot;
  }

  int dim() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& index(int i) const { return indices_[static_cast<std::size_t>(i)]; }
  int degree_of(int i) const { return degrees_[static_cast<std::size_t>(i)]; }
  int position(const MultiIndex& a) const {
    const auto it = index_.find(a);
    if (it == index_.end()) throw DomainError("MonomialBasis: multi-index outside the basis");
    return it->second;
  }
  /// First position of degree s; offset(D+1) == size().
  int offset(int s) const { return offsets_[static_cast<std::size_t>(s)]; }
  /// Position of index(i) + index(j), or -1 above degree D.
  int sum(int i, int j) const { return sum_[static_cast<std::size_t>(i) * indices_.size() + static_cast<std::size_t>(j)]; }

 private:
  int n_, d_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  std::map<MultiIndex, int, GradedLex> index_;
  std::vector<int> sum_;
};

class TruncatedPolynomial {
 public:
  explicit TruncatedPolynomial(std::shared_ptr<const MonomialBasis> basis)
      : basis_(std::move(basis)), c_(CVector::Zero(basis_->size())) {}

  static TruncatedPolynomial constant(std::shared_ptr<const MonomialBasis> basis, Complex v) {
    TruncatedPolynomial p(std::move(basis));
    p.c_(0) = v;
    return p;
  }

  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }
  int dim() const { return basis_->dim(); }
  int degree() const { return basis_->degree(); }
  const CVector& coefficients() const { return c_; }
  CVector& coefficients() { return c_; }
  Complex coefficient(const MultiIndex& a) const { return c_(basis_->position(a)); }

  Complex evaluate(const CVector& z) const {
    require_dim(z, dim(), "TruncatedPolynomial::evaluate");
    Complex v(0.0, 0.0);
    for (int i = 0; i < basis_->size(); ++i) {
      if (c_(i) != 0.0) v += c_(i) * monomial_value(basis_->index(i), z);
    }
    return v;
  }

  CoefficientVector to_coefficients() const {
    CoefficientVector out(dim(), degree());
    for (int i = 0; i < basis_->size(); ++i) {
      if (c_(i) != 0.0) out.coeffs[basis_->index(i)] = c_(i);
    }
    return out;
  }

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  CVector c_;
};

/// Product truncated at the common degree cap.
inline TruncatedPolynomial multiply(const TruncatedPolynomial& p, const TruncatedPolynomial& q) {
  if (p.basis_ptr() != q.basis_ptr()) throw DomainError("multiply: polynomials on different bases");
  const MonomialBasis& b = p.basis();
  TruncatedPolynomial out(p.basis_ptr());
  CVector& r = out.coefficients();
  const CVector& pc = p.coefficients();
  const CVector& qc = q.coefficients();
  const int d = b.degree();
  for (int i = 0; i < b.size(); ++i) {
    const Complex a = pc(i);
    if (a == 0.0) continue;
    const int limit = b.offset(d - b.degree_of(i) + 1);
    for (int j = 0; j < limit; ++j) {
      const Complex c = qc(j);
      if (c != 0.0) r(b.sum(i, j)) += a * c;
    }
  }
  return out;
}

inline TruncatedPolynomial power(const TruncatedPolynomial& p, int e) {
  TruncatedPolynomial out = TruncatedPolynomial::constant(p.basis_ptr(), 1.0);
  for (int i = 0; i < e; ++i) out = multiply(out, p);
  return out;
}

}  // namespace lfcomp

#endif  // LFCOMP_POLYNOMIAL_HPP
