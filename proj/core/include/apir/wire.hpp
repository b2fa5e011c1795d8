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

// Canonical binary layout for protocol messages and file formats for
// datasets. Field elements are minimal-width big-endian integers (the
// width that fits q-1); integer headers are 32-bit big-endian; a section
// is a 32-bit big-endian count followed by that many field elements.

#ifndef APIR_WIRE_HPP_
#define APIR_WIRE_HPP_

#include <string>

#include "apir/protocol.hpp"

namespace apir {

// Bytes needed to hold any value in [0, q).
std::size_t element_width(std::uint64_t q);

// share   := u32 server | section of M*P values (m-major)
std::string encode_share(const StorageShare& share, std::uint64_t q);
StorageShare decode_share(const std::string& bytes, int m_files, int p_rows,
                          const Field& f);

// bundle  := u32 server | u32 ncolumns | column*
// column  := u32 h | u32 j | u32 r | r x u32 rows | section of values
std::string encode_query_bundle(const QueryBundle& bundle, std::uint64_t q);
QueryBundle decode_query_bundle(const std::string& bytes, const Field& f);

// response := u32 server | u32 h | u32 j | section of K values
std::string encode_response(const ResponseBundle& resp, std::uint64_t q);
ResponseBundle decode_response(const std::string& bytes, const Field& f);

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

// Dataset files. JSON: {"files": [[[v,..],..],..]}. CSV: M*P lines of K
// comma-separated values, files concatenated in index order.
std::string dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const std::string& text, const SystemParams& params,
                          const Field& f);
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text, const SystemParams& params,
                         const Field& f);

}  // namespace apir

#endif  // APIR_WIRE_HPP_
