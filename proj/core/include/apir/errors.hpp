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

#ifndef APIR_ERRORS_HPP_
#define APIR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace apir {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define APIR_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}       \
  }

APIR_DEFINE_ERROR(DivisionByZero);
APIR_DEFINE_ERROR(ModulusMismatch);
APIR_DEFINE_ERROR(SingularMatrix);
APIR_DEFINE_ERROR(DuplicateAbscissa);
APIR_DEFINE_ERROR(ShapeMismatch);
APIR_DEFINE_ERROR(InsufficientServers);
APIR_DEFINE_ERROR(FieldTooSmall);
APIR_DEFINE_ERROR(PoleHit);
APIR_DEFINE_ERROR(InsufficientResponses);
APIR_DEFINE_ERROR(EnumerationTooLarge);
APIR_DEFINE_ERROR(ConditionsViolated);
APIR_DEFINE_ERROR(BadIndex);
APIR_DEFINE_ERROR(OrderViolation);
APIR_DEFINE_ERROR(InconsistentDecode);
APIR_DEFINE_ERROR(SOutOfRange);
APIR_DEFINE_ERROR(DecodeExhausted);
APIR_DEFINE_ERROR(ConfigError);

#undef APIR_DEFINE_ERROR

}  // namespace apir

#endif  // APIR_ERRORS_HPP_
