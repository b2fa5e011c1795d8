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

#include "apir/wire.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace apir {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

std::uint32_t get_u32(const std::string& in, std::size_t& pos) {
  if (pos + 4 > in.size()) throw ConfigError("truncated message");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<unsigned char>(in[pos++]);
  }
  return v;
}

void put_element(std::string& out, FieldElement e, std::size_t width) {
  const std::uint64_t v = e.value();
  for (std::size_t i = width; i-- > 0;) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

FieldElement get_element(const std::string& in, std::size_t& pos,
                         std::size_t width, const Field& f) {
  if (pos + width > in.size()) throw ConfigError("truncated message");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    v = (v << 8) | static_cast<unsigned char>(in[pos++]);
  }
  if (v >= f.q()) throw ConfigError("field element out of range");
  return f(v);
}

void put_section(std::string& out, const std::vector<FieldElement>& values,
                 std::size_t width) {
  put_u32(out, static_cast<std::uint32_t>(values.size()));
  for (const auto& v : values) put_element(out, v, width);
}

std::vector<FieldElement> get_section(const std::string& in, std::size_t& pos,
                                      std::size_t width, const Field& f) {
  const std::uint32_t count = get_u32(in, pos);
  std::vector<FieldElement> values;
  values.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    values.push_back(get_element(in, pos, width, f));
  }
  return values;
}

}  // namespace

std::size_t element_width(std::uint64_t q) {
  std::size_t width = 1;
  for (std::uint64_t top = q - 1; top > 0xff; top >>= 8) ++width;
  return width;
}

std::string encode_share(const StorageShare& share, std::uint64_t q) {
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(share.server));
  put_section(out, share.values.entries(), element_width(q));
  return out;
}

StorageShare decode_share(const std::string& bytes, int m_files, int p_rows,
                          const Field& f) {
  std::size_t pos = 0;
  StorageShare share;
  share.server = static_cast<int>(get_u32(bytes, pos));
  auto values = get_section(bytes, pos, element_width(f.q()), f);
  share.values = FieldMatrix(m_files, p_rows, std::move(values));
  return share;
}

std::string encode_query_bundle(const QueryBundle& bundle, std::uint64_t q) {
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(bundle.server));
  put_u32(out, static_cast<std::uint32_t>(bundle.columns.size()));
  const std::size_t width = element_width(q);
  for (const auto& cq : bundle.columns) {
    put_u32(out, static_cast<std::uint32_t>(cq.h));
    put_u32(out, static_cast<std::uint32_t>(cq.j));
    put_u32(out, static_cast<std::uint32_t>(cq.rows.size()));
    for (int row : cq.rows) put_u32(out, static_cast<std::uint32_t>(row));
    put_section(out, cq.values, width);
  }
  return out;
}

QueryBundle decode_query_bundle(const std::string& bytes, const Field& f) {
  std::size_t pos = 0;
  QueryBundle bundle;
  bundle.server = static_cast<int>(get_u32(bytes, pos));
  const std::uint32_t ncols = get_u32(bytes, pos);
  const std::size_t width = element_width(f.q());
  for (std::uint32_t c = 0; c < ncols; ++c) {
    ColumnQuery cq;
    cq.h = static_cast<int>(get_u32(bytes, pos));
    cq.j = static_cast<int>(get_u32(bytes, pos));
    const std::uint32_t r = get_u32(bytes, pos);
    for (std::uint32_t i = 0; i < r; ++i) {
      cq.rows.push_back(static_cast<int>(get_u32(bytes, pos)));
    }
    cq.values = get_section(bytes, pos, width, f);
    bundle.columns.push_back(std::move(cq));
  }
  return bundle;
}

std::string encode_response(const ResponseBundle& resp, std::uint64_t q) {
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(resp.server));
  put_u32(out, static_cast<std::uint32_t>(resp.h));
  put_u32(out, static_cast<std::uint32_t>(resp.j));
  put_section(out, resp.sub, element_width(q));
  return out;
}

ResponseBundle decode_response(const std::string& bytes, const Field& f) {
  std::size_t pos = 0;
  ResponseBundle resp;
  resp.server = static_cast<int>(get_u32(bytes, pos));
  resp.h = static_cast<int>(get_u32(bytes, pos));
  resp.j = static_cast<int>(get_u32(bytes, pos));
  resp.sub = get_section(bytes, pos, element_width(f.q()), f);
  return resp;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string dataset_to_json(const Dataset& data) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& w : data.files) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < w.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < w.cols(); ++k) row.push_back(w.at(i, k).value());
      rows.push_back(row);
    }
    files.push_back(rows);
  }
  nlohmann::json j;
  j["files"] = files;
  return j.dump();
}

Dataset dataset_from_json(const std::string& text, const SystemParams& params,
                          const Field& f) {
  nlohmann::json j = nlohmann::json::parse(text);
  Dataset data;
  for (const auto& file : j.at("files")) {
    std::vector<FieldElement> entries;
    for (const auto& row : file) {
      for (const auto& v : row) entries.push_back(f(v.get<std::uint64_t>()));
    }
    data.files.emplace_back(params.P, params.K, std::move(entries));
  }
  if (static_cast<int>(data.files.size()) != params.M) {
    throw ShapeMismatch("dataset holds " + std::to_string(data.files.size()) +
                        " files, expected " + std::to_string(params.M));
  }
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  for (const auto& w : data.files) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t k = 0; k < w.cols(); ++k) {
        if (k) out << ',';
        out << w.at(i, k).value();
      }
      out << '\n';
    }
  }
  return out.str();
}

Dataset dataset_from_csv(const std::string& text, const SystemParams& params,
                         const Field& f) {
  std::vector<FieldElement> values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      values.push_back(f(std::stoull(cell)));
    }
  }
  const std::size_t per_file =
      static_cast<std::size_t>(params.P) * static_cast<std::size_t>(params.K);
  if (values.size() != per_file * params.M) {
    throw ShapeMismatch("CSV dataset holds " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(per_file * params.M));
  }
  Dataset data;
  for (int m = 0; m < params.M; ++m) {
    std::vector<FieldElement> entries(values.begin() + m * per_file,
                                      values.begin() + (m + 1) * per_file);
    data.files.emplace_back(params.P, params.K, std::move(entries));
  }
  return data;
}

}  // namespace apir
