// Copyright 2026 The EcoLink Authors.
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

#ifndef ECOLINK_CORE_INGEST_H_
#define ECOLINK_CORE_INGEST_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "core/model.h"

namespace ecolink {

// Delimiter selection for BOM files. A zero delimiter means auto-detect from
// the header row (semicolon if it has more semicolons than commas).
struct BomFormat {
  char delimiter = 0;
};

// Parses delimited BOM text. Recognized headers (case-insensitive):
// id, name | component | component name, material, supplier | manufacturer,
// quantity | qty. name, material and supplier are mandatory. Rows without an
// id column get "row-<n>" ids, n being the 1-based data row index.
std::vector<BomEntry> ParseBom(std::istream &in, const BomFormat &format = {});

// Parses an LCA database with one JSON record per line.
std::vector<LcaActivity> ParseLcaDb(std::istream &in);

// Reads every regular, non-hidden file in a directory as a datasheet,
// sorted by filename.
std::vector<Datasheet> LoadDatasheets(const std::filesystem::path &dir);

std::vector<GoldLabel> ParseGoldLabels(std::istream &in);

// Emitters producing text the parsers above read back unchanged.
void WriteBom(std::ostream &out, const std::vector<BomEntry> &entries,
              char delimiter = ';');
void WriteLcaDb(std::ostream &out, const std::vector<LcaActivity> &activities);
void WriteGoldLabels(std::ostream &out, const std::vector<GoldLabel> &labels);
void WriteDatasheets(const std::filesystem::path &dir,
                     const std::vector<Datasheet> &sheets);

// File helpers raising ErrorCode::kIo when the file cannot be opened.
std::vector<BomEntry> LoadBomFile(const std::filesystem::path &path);
std::vector<LcaActivity> LoadLcaDbFile(const std::filesystem::path &path);
std::vector<GoldLabel> LoadGoldLabelFile(const std::filesystem::path &path);
std::string ReadFile(const std::filesystem::path &path);

// Shortest round-trip decimal rendering of a double.
std::string FormatNumber(double value);

}  // namespace ecolink

#endif  // ECOLINK_CORE_INGEST_H_
