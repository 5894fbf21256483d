// Copyright 2026 The ssagen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssa/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

ordered_json ConfigJson(const ModelConfig& c) {
  ordered_json j;
  j["d_model"] = c.d_model;
  j["n_layers_enc"] = c.n_layers_enc;
  j["n_layers_dec"] = c.n_layers_dec;
  j["n_heads"] = c.n_heads;
  j["d_ff"] = c.d_ff;
  j["vocab_size"] = c.vocab_size;
  j["max_len"] = c.max_len;
  j["dropout"] = c.dropout;
  j["seed"] = c.seed;
  return j;
}

ModelConfig ConfigFromJson(const json& j) {
  ModelConfig c;
  c.d_model = j.at("d_model").get<int>();
  c.n_layers_enc = j.at("n_layers_enc").get<int>();
  c.n_layers_dec = j.at("n_layers_dec").get<int>();
  c.n_heads = j.at("n_heads").get<int>();
  c.d_ff = j.at("d_ff").get<int>();
  c.vocab_size = j.at("vocab_size").get<int>();
  c.max_len = j.at("max_len").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  if (ckpt.params.config() != ckpt.config) {
    throw ValidationError("checkpoint config does not match its parameters");
  }
  if (ckpt.vocabulary.size() != ckpt.config.vocab_size) {
    throw ValidationError("checkpoint vocabulary size mismatch");
  }
  ordered_json header;
  header["config"] = ConfigJson(ckpt.config);
  header["vocabulary"] = ckpt.vocabulary.tokens();
  header["epoch"] = ckpt.epoch;
  header["seed"] = ckpt.seed;
  header["metadata"] = ordered_json::parse(ckpt.metadata_json);
  header["tensors"] = ordered_json::array();
  for (const auto& t : ckpt.params.set()) {
    header["tensors"].push_back(
        {{"name", t->name}, {"rows", t->value.rows()}, {"cols", t->value.cols()}});
  }
  const std::string header_text = header.dump();

  std::string out(kCheckpointMagic);
  const uint64_t len = header_text.size();
  out.append(reinterpret_cast<const char*>(&len), sizeof(len));
  out += header_text;
  for (const auto& t : ckpt.params.set()) {
    for (Eigen::Index r = 0; r < t->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t->value.cols(); ++c) {
        const double v = t->value(r, c);
        out.append(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  }
  return out;
}

Checkpoint DeserializeCheckpoint(std::string_view bytes) {
  if (!bytes.starts_with(kCheckpointMagic)) {
    throw ParseError("not an ssagen checkpoint (bad magic)", 0);
  }
  size_t pos = kCheckpointMagic.size();
  uint64_t len = 0;
  if (bytes.size() < pos + sizeof(len)) {
    throw ParseError("truncated checkpoint header", pos);
  }
  std::memcpy(&len, bytes.data() + pos, sizeof(len));
  pos += sizeof(len);
  if (bytes.size() - pos < len) {
    throw ParseError("truncated checkpoint header", pos);
  }
  json header;
  try {
    header = json::parse(bytes.substr(pos, len));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what(),
                     pos + e.byte);
  }
  pos += len;

  Checkpoint ckpt;
  try {
    ckpt.config = ConfigFromJson(header.at("config"));
    ckpt.config.Validate();
    for (const auto& tok : header.at("vocabulary")) {
      ckpt.vocabulary.Add(tok.get<std::string>());
    }
    ckpt.epoch = header.at("epoch").get<int>();
    ckpt.seed = header.at("seed").get<uint64_t>();
    ckpt.metadata_json = header.value("metadata", json::object()).dump();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint header: ") + e.what());
  }
  if (ckpt.vocabulary.size() != ckpt.config.vocab_size) {
    throw ValidationError("checkpoint vocabulary has " +
                          std::to_string(ckpt.vocabulary.size()) +
                          " entries, config expects " +
                          std::to_string(ckpt.config.vocab_size));
  }
  ckpt.params = Parameters(ckpt.config);
  const auto& tensors = header.at("tensors");
  if (static_cast<int>(tensors.size()) != ckpt.params.set().size()) {
    throw ValidationError("checkpoint tensor count does not match config");
  }
  for (auto& t : ckpt.params.set()) {
    const auto& desc = tensors[t->id];
    if (desc.at("name").get<std::string>() != t->name ||
        desc.at("rows").get<Eigen::Index>() != t->value.rows() ||
        desc.at("cols").get<Eigen::Index>() != t->value.cols()) {
      throw ValidationError("checkpoint tensor " + t->name +
                            " does not match config");
    }
    const size_t need = sizeof(double) * t->value.size();
    if (bytes.size() - pos < need) {
      throw ParseError("truncated tensor data for " + t->name, pos);
    }
    for (Eigen::Index r = 0; r < t->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t->value.cols(); ++c) {
        double v;
        std::memcpy(&v, bytes.data() + pos, sizeof(v));
        t->value(r, c) = v;
        pos += sizeof(v);
      }
    }
  }
  if (pos != bytes.size()) {
    throw ParseError("trailing bytes after tensor data", pos);
  }
  ckpt.params.ZeroGrad();
  return ckpt;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

}  // namespace ssa
