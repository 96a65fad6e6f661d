// Copyright 2026 The diascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIASCORE_MANIFEST_HPP
#define DIASCORE_MANIFEST_HPP

/**
 * \file manifest.hpp
 *
 * The batch-evaluation manifest: a versioned JSON document listing samples
 * to score. Schema (version 1):
 *
 * {
 *   "version": 1,
 *   "entries": [
 *     {
 *       "sample_id": "conv-001",
 *       "task": "vrsdr" | "sr" | "sv" | "sl" | "si",
 *       "reference_path": "refs/conv-001.txt",
 *       "hypothesis_path": "hyps/conv-001.txt",
 *       "registration_path": "regs/conv-001.txt",   // iff task == "vrsdr"
 *       "subset": "easy" | "hard"                   // optional
 *     }
 *   ]
 * }
 *
 * Relative paths resolve against the manifest file's directory.
 */

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "diascore/record_io.hpp"
#include "diascore/types.hpp"

namespace diascore {

enum class Task { vrsdr, sr, sv, sl, si };

inline std::string_view task_name(Task t) {
  switch (t) {
    case Task::vrsdr: return "vrsdr";
    case Task::sr: return "sr";
    case Task::sv: return "sv";
    case Task::sl: return "sl";
    case Task::si: return "si";
  }
  return "?";
}

inline std::optional<Task> task_from_name(std::string_view name) {
  if (name == "vrsdr") return Task::vrsdr;
  if (name == "sr") return Task::sr;
  if (name == "sv") return Task::sv;
  if (name == "sl") return Task::sl;
  if (name == "si") return Task::si;
  return std::nullopt;
}

struct ManifestEntry {
  std::string sample_id;
  Task task = Task::vrsdr;
  std::filesystem::path reference_path;
  std::filesystem::path hypothesis_path;
  std::optional<std::filesystem::path> registration_path;
  Subset subset = Subset::none;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

/// Parses and validates a manifest document. Paths are resolved against
/// base_dir. Throws ManifestError on any schema violation.
inline Manifest parse_manifest(const std::string& json_text,
                               const std::filesystem::path& base_dir = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }

  if (!doc.is_object()) throw ManifestError("manifest root must be an object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1)
    throw ManifestError("manifest must declare \"version\": 1");
  if (!doc.contains("entries") || !doc["entries"].is_array())
    throw ManifestError("manifest must contain an \"entries\" array");

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  Manifest manifest;
  std::set<std::string> seen_ids;
  std::size_t index = 0;
  for (const auto& item : doc["entries"]) {
    const std::string where = "entries[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw ManifestError(where + " must be an object");

    auto require_string = [&](const char* key) {
      if (!item.contains(key) || !item[key].is_string() ||
          item[key].get<std::string>().empty())
        throw ManifestError(where + " needs a non-empty string \"" + key + "\"");
      return item[key].get<std::string>();
    };

    ManifestEntry entry;
    entry.sample_id = require_string("sample_id");
    if (!seen_ids.insert(entry.sample_id).second)
      throw ManifestError("duplicate sample_id \"" + entry.sample_id + "\"");

    const auto task = task_from_name(require_string("task"));
    if (!task) throw ManifestError(where + " has unknown task \"" +
                                   item["task"].get<std::string>() + "\"");
    entry.task = *task;

    entry.reference_path = resolve(require_string("reference_path"));
    entry.hypothesis_path = resolve(require_string("hypothesis_path"));

    if (item.contains("registration_path")) {
      if (entry.task != Task::vrsdr)
        throw ManifestError(where + ": registration_path is only valid for vrsdr");
      entry.registration_path = resolve(require_string("registration_path"));
    } else if (entry.task == Task::vrsdr) {
      throw ManifestError(where + ": vrsdr requires registration_path");
    }

    if (item.contains("subset")) {
      const auto subset = item["subset"].get<std::string>();
      if (subset == "easy")
        entry.subset = Subset::easy;
      else if (subset == "hard")
        entry.subset = Subset::hard;
      else if (subset != "none")
        throw ManifestError(where + " has unknown subset \"" + subset + "\"");
    }

    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

}  // namespace diascore

#endif  // DIASCORE_MANIFEST_HPP
