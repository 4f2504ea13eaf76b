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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "podep/model.hpp"

namespace podep {

// Container layout:
//   "PODEP-CHECKPOINT <version>\n"
//   uint64 little-endian byte length of the metadata document
//   metadata: JSON with config, lexicon, seed and parameter names/shapes
//   every parameter as little-endian float32, in declaration order
inline constexpr int kCheckpointVersion = 1;

struct CheckpointInfo {
  std::uint64_t seed = 0;
  std::string training_json = "{}";  // free-form training summary
};

void save_checkpoint(std::ostream& out, const Model& model, const CheckpointInfo& info = {});
void save_checkpoint(const std::filesystem::path& path, const Model& model, const CheckpointInfo& info = {});

// Throws FormatError for a foreign or truncated file, a different version,
// or parameters that do not match the rebuilt architecture.
Model load_checkpoint(std::istream& in, CheckpointInfo* info = nullptr);
Model load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info = nullptr);

}  // namespace podep
