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

// Exact arithmetic over a prime field GF(q), dense linear algebra and
// polynomial interpolation. Everything here is an immutable value; all
// functions are pure and safe to call concurrently.

#ifndef APIR_FIELD_HPP_
#define APIR_FIELD_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "apir/errors.hpp"

namespace apir {

// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);

// Smallest prime p >= n (n >= 2).
std::uint64_t smallest_prime_at_least(std::uint64_t n);

// A residue in [0, q) tagged with its modulus. Mixing moduli throws
// ModulusMismatch; division by zero throws DivisionByZero.
class FieldElement {
 public:
  FieldElement() : value_(0), q_(0) {}
  FieldElement(std::uint64_t value, std::uint64_t q);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return q_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator-() const;
  FieldElement inverse() const;  // extended Euclid
  FieldElement pow(std::uint64_t e) const;

  friend FieldElement operator+(FieldElement a, FieldElement b);
  friend FieldElement operator-(FieldElement a, FieldElement b);
  friend FieldElement operator*(FieldElement a, FieldElement b);
  friend FieldElement operator/(FieldElement a, FieldElement b);
  friend bool operator==(FieldElement a, FieldElement b) {
    return a.q_ == b.q_ && a.value_ == b.value_;
  }
  friend bool operator!=(FieldElement a, FieldElement b) { return !(a == b); }

 private:
  std::uint64_t value_;
  std::uint64_t q_;
};

// Prime-field context; hands out reduced elements of one modulus.
class Field {
 public:
  explicit Field(std::uint64_t q);

  std::uint64_t q() const { return q_; }
  FieldElement operator()(std::uint64_t v) const {
    return FieldElement(v % q_, q_);
  }
  FieldElement zero() const { return FieldElement(0, q_); }
  FieldElement one() const { return FieldElement(1 % q_, q_); }

 private:
  std::uint64_t q_;
};

// Polynomials are coefficient vectors, constant term first.
using Poly = std::vector<FieldElement>;

// Horner evaluation. Rejects an empty coefficient sequence.
FieldElement poly_eval(const Poly& coeffs, FieldElement x);

// Coefficients of the unique polynomial of degree < points.size() through
// all points. Throws DuplicateAbscissa on repeated x values.
Poly lagrange_interpolate(
    const std::vector<std::pair<FieldElement, FieldElement>>& points);

// Row-major dense matrix over GF(q).
class FieldMatrix {
 public:
  FieldMatrix() : rows_(0), cols_(0) {}
  FieldMatrix(std::size_t rows, std::size_t cols, const Field& f);
  FieldMatrix(std::size_t rows, std::size_t cols,
              std::vector<FieldElement> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FieldElement& at(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  const FieldElement& at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  const std::vector<FieldElement>& entries() const { return entries_; }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.entries_ == b.entries_;
  }
  friend bool operator!=(const FieldMatrix& a, const FieldMatrix& b) {
    return !(a == b);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> entries_;
};

// Solves A x = b by Gaussian elimination. The pivot for each column is the
// lowest-index row with a nonzero entry, so identical inputs always take the
// identical elimination path. Throws SingularMatrix when rank deficient.
std::vector<FieldElement> solve_linear(const FieldMatrix& a,
                                       const std::vector<FieldElement>& b);

// True iff the square matrix has full rank over GF(q).
bool is_nonsingular(const FieldMatrix& a);

}  // namespace apir

#endif  // APIR_FIELD_HPP_
