/*
 * Copyright 2026 the adaptive-pir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "apir/field.hpp"

#include <string>

namespace apir {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t q) {
  std::uint64_t acc = 1 % q;
  base %= q;
  while (e != 0) {
    if (e & 1) acc = mulmod(acc, base, q);
    base = mulmod(base, base, q);
    e >>= 1;
  }
  return acc;
}

void require_same_modulus(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus() || a.modulus() == 0) {
    throw ModulusMismatch("field elements have moduli " +
                          std::to_string(a.modulus()) + " and " +
                          std::to_string(b.modulus()));
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set decides primality for every 64-bit integer.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t smallest_prime_at_least(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t p = n | 1;  // first odd candidate >= n
  while (!is_prime(p)) p += 2;
  return p;
}

FieldElement::FieldElement(std::uint64_t value, std::uint64_t q)
    : value_(value), q_(q) {
  if (q == 0) throw ModulusMismatch("field modulus must be positive");
  if (value >= q) {
    throw Error("field element " + std::to_string(value) +
                " out of range for modulus " + std::to_string(q));
  }
}

FieldElement FieldElement::operator-() const {
  if (q_ == 0) throw ModulusMismatch("negation of untagged element");
  return FieldElement(value_ == 0 ? 0 : q_ - value_, q_);
}

FieldElement FieldElement::inverse() const {
  if (q_ == 0) throw ModulusMismatch("inverse of untagged element");
  if (value_ == 0) throw DivisionByZero("inverse of zero");
  // Extended Euclid on (q, value); q prime so the gcd is 1.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(q_);
  std::int64_t new_r = static_cast<std::int64_t>(value_);
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(q_);
  return FieldElement(static_cast<std::uint64_t>(t), q_);
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  if (q_ == 0) throw ModulusMismatch("pow of untagged element");
  return FieldElement(powmod(value_, e, q_), q_);
}

FieldElement operator+(FieldElement a, FieldElement b) {
  require_same_modulus(a, b);
  std::uint64_t s = a.value_ + b.value_;
  if (s >= a.q_) s -= a.q_;
  return FieldElement(s, a.q_);
}

FieldElement operator-(FieldElement a, FieldElement b) {
  require_same_modulus(a, b);
  std::uint64_t s = a.value_ >= b.value_ ? a.value_ - b.value_
                                         : a.value_ + a.q_ - b.value_;
  return FieldElement(s, a.q_);
}

FieldElement operator*(FieldElement a, FieldElement b) {
  require_same_modulus(a, b);
  return FieldElement(mulmod(a.value_, b.value_, a.q_), a.q_);
}

FieldElement operator/(FieldElement a, FieldElement b) {
  require_same_modulus(a, b);
  if (b.value_ == 0) throw DivisionByZero("division by zero");
  return a * b.inverse();
}

Field::Field(std::uint64_t q) : q_(q) {
  if (!is_prime(q)) {
    throw Error("field modulus " + std::to_string(q) + " is not prime");
  }
}

FieldElement poly_eval(const Poly& coeffs, FieldElement x) {
  if (coeffs.empty()) throw Error("poly_eval: empty coefficient sequence");
  FieldElement acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    acc = acc * x + coeffs[i];
  }
  return acc;
}

Poly lagrange_interpolate(
    const std::vector<std::pair<FieldElement, FieldElement>>& points) {
  if (points.empty()) throw Error("lagrange_interpolate: no points");
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (points[i].first == points[j].first) {
        throw DuplicateAbscissa("repeated abscissa " +
                                std::to_string(points[i].first.value()));
      }
    }
  }
  const Field f(points[0].first.modulus());

  // master(x) = prod_j (x - x_j), degree n
  Poly master(n + 1, f.zero());
  master[0] = f.one();
  std::size_t deg = 0;
  for (const auto& [xj, yj] : points) {
    (void)yj;
    for (std::size_t c = deg + 2; c-- > 0;) {
      FieldElement lower = (c > 0) ? master[c - 1] : f.zero();
      master[c] = lower - master[c] * xj;
    }
    ++deg;
  }

  Poly result(n, f.zero());
  Poly quotient(n, f.zero());
  for (const auto& [xi, yi] : points) {
    // quotient = master / (x - xi), by synthetic division.
    FieldElement carry = f.zero();
    for (std::size_t c = n + 1; c-- > 1;) {
      quotient[c - 1] = master[c] + carry;
      carry = quotient[c - 1] * xi;
    }
    FieldElement denom = f.one();
    for (const auto& [xj, yj] : points) {
      (void)yj;
      if (xj == xi) continue;
      denom = denom * (xi - xj);
    }
    FieldElement scale = yi / denom;
    for (std::size_t c = 0; c < n; ++c) {
      result[c] = result[c] + quotient[c] * scale;
    }
  }
  return result;
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, const Field& f)
    : rows_(rows), cols_(cols), entries_(rows * cols, f.zero()) {}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols,
                         std::vector<FieldElement> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeMismatch("matrix entries do not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

namespace {

// Row-echelon elimination; returns rank. `rhs` may be null.
std::size_t eliminate(FieldMatrix& m, std::vector<FieldElement>* rhs) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
      if (rhs) std::swap((*rhs)[pivot], (*rhs)[rank]);
    }
    FieldElement inv = m.at(rank, col).inverse();
    for (std::size_t c = 0; c < cols; ++c) m.at(rank, c) = m.at(rank, c) * inv;
    if (rhs) (*rhs)[rank] = (*rhs)[rank] * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m.at(r, col).is_zero()) continue;
      FieldElement factor = m.at(r, col);
      for (std::size_t c = 0; c < cols; ++c) {
        m.at(r, c) = m.at(r, c) - factor * m.at(rank, c);
      }
      if (rhs) (*rhs)[r] = (*rhs)[r] - factor * (*rhs)[rank];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<FieldElement> solve_linear(const FieldMatrix& a,
                                       const std::vector<FieldElement>& b) {
  if (a.rows() != a.cols()) throw ShapeMismatch("solve_linear: matrix not square");
  if (b.size() != a.rows()) throw ShapeMismatch("solve_linear: rhs size mismatch");
  FieldMatrix m = a;
  std::vector<FieldElement> rhs = b;
  if (eliminate(m, &rhs) != a.rows()) {
    throw SingularMatrix("solve_linear: singular system");
  }
  return rhs;
}

bool is_nonsingular(const FieldMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("is_nonsingular: matrix not square");
  if (a.rows() == 0) return true;
  FieldMatrix m = a;
  return eliminate(m, nullptr) == a.rows();
}

}  // namespace apir
