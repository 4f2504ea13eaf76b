// Copyright 2026 The podep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "podep/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "podep/errors.hpp"

namespace podep {
namespace {

const std::string kMagic = "PODEP-CHECKPOINT";

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw FormatError("checkpoint: truncated header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Model& model, const CheckpointInfo& info) {
  nlohmann::ordered_json meta;
  meta["format"] = "podep-checkpoint";
  meta["version"] = kCheckpointVersion;
  meta["seed"] = info.seed;
  meta["config"] = nlohmann::ordered_json::parse(to_json(model.config()));
  meta["lexicon"] = nlohmann::ordered_json::parse(model.lexicon().to_json());
  meta["training"] = nlohmann::ordered_json::parse(info.training_json);
  nlohmann::ordered_json shapes = nlohmann::ordered_json::array();
  const ParameterSet& params = model.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    shapes.push_back({{"name", params[i].name}, {"shape", params[i].value.shape()}});
  }
  meta["parameters"] = shapes;
  const std::string text = meta.dump();

  out << kMagic << ' ' << kCheckpointVersion << '\n';
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (Real v : params[i].value.data()) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      const char bytes[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                             static_cast<char>((bits >> 16) & 0xFF), static_cast<char>((bits >> 24) & 0xFF)};
      out.write(bytes, 4);
    }
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

void save_checkpoint(const std::filesystem::path& path, const Model& model, const CheckpointInfo& info) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  save_checkpoint(out, model, info);
}

Model load_checkpoint(std::istream& in, CheckpointInfo* info) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("checkpoint: empty file");
  if (header.rfind(kMagic + ' ', 0) != 0) throw FormatError("checkpoint: not a podep checkpoint");
  const std::string version = header.substr(kMagic.size() + 1);
  if (version != std::to_string(kCheckpointVersion)) {
    throw FormatError("checkpoint: version " + version + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint64_t length = read_u64(in);
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw FormatError("checkpoint: truncated metadata");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint: bad metadata: ") + e.what());
  }
  if (meta.value("version", -1) != kCheckpointVersion) throw FormatError("checkpoint: metadata version mismatch");

  Model model(model_config_from_json(meta.at("config").dump()), Lexicon::from_json(meta.at("lexicon").dump()));
  ParameterSet& params = model.params();
  const auto& declared = meta.at("parameters");
  if (declared.size() != params.size()) {
    throw FormatError("checkpoint: " + std::to_string(declared.size()) + " stored parameters, architecture has " +
                      std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    if (declared[i].at("name").get<std::string>() != p.name || declared[i].at("shape").get<Shape>() != p.value.shape()) {
      throw FormatError("checkpoint: parameter " + std::to_string(i) + " does not match '" + p.name + "' " +
                        shape_string(p.value.shape()));
    }
    for (Real& v : p.value.data()) {
      unsigned char b[4];
      if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("checkpoint: truncated weights");
      const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                                 (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
      v = std::bit_cast<float>(bits);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("checkpoint: trailing bytes after weights");
  if (info) {
    info->seed = meta.value("seed", std::uint64_t{0});
    info->training_json = meta.contains("training") ? meta.at("training").dump() : "{}";
  }
  return model;
}

Model load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return load_checkpoint(in, info);
}

}  // namespace podep
