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

#include "core/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "core/errors.h"

namespace ecolink {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Trim(const std::string &s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string Lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Splits one delimited line. Double-quoted cells may contain the delimiter;
// a doubled quote inside a quoted cell is a literal quote.
std::vector<std::string> SplitRow(const std::string &line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"' && Trim(cell).empty()) {
      cell.clear();
      quoted = true;
    } else if (c == delim) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

bool GetLine(std::istream &in, std::string &line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void StripByteOrderMark(std::string &line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
}

bool IsBlank(const std::string &line) { return Trim(line).empty(); }

enum class Column { kId, kName, kMaterial, kSupplier, kQuantity };

std::optional<Column> ColumnFor(const std::string &header) {
  static const std::map<std::string, Column> kHeaders = {
      {"id", Column::kId},
      {"name", Column::kName},
      {"component", Column::kName},
      {"component name", Column::kName},
      {"material", Column::kMaterial},
      {"supplier", Column::kSupplier},
      {"manufacturer", Column::kSupplier},
      {"quantity", Column::kQuantity},
      {"qty", Column::kQuantity},
  };
  auto it = kHeaders.find(Lower(Trim(header)));
  if (it == kHeaders.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ParseDecimal(std::string text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  // Decimal comma, as written by German locale exports.
  if (text.find('.') == std::string::npos) {
    std::replace(text.begin(), text.end(), ',', '.');
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string LinePrefix(int line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

json ParseRecord(const std::string &line, int line_no) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kParse,
                LinePrefix(line_no) + "malformed record: " + e.what());
  }
  if (!record.is_object()) {
    throw Error(ErrorCode::kParse, LinePrefix(line_no) + "record is not an object");
  }
  return record;
}

std::string QuoteCell(const std::string &cell, char delim) {
  bool needs = cell.find(delim) != std::string::npos ||
               cell.find('"') != std::string::npos ||
               (!cell.empty() && (std::isspace(static_cast<unsigned char>(cell.front())) ||
                                  std::isspace(static_cast<unsigned char>(cell.back()))));
  if (!needs) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<BomEntry> ParseBom(std::istream &in, const BomFormat &format) {
  std::string line;
  int line_no = 0;
  // Header row is the first non-blank line.
  bool have_header = false;
  while (GetLine(in, line)) {
    ++line_no;
    if (line_no == 1) StripByteOrderMark(line);
    if (!IsBlank(line)) {
      have_header = true;
      break;
    }
  }
  if (!have_header) {
    throw Error(ErrorCode::kParse, "missing header row: name");
  }

  char delim = format.delimiter;
  if (delim == 0) {
    auto semis = std::count(line.begin(), line.end(), ';');
    auto commas = std::count(line.begin(), line.end(), ',');
    delim = semis > commas ? ';' : ',';
  }

  const std::vector<std::string> headers = SplitRow(line, delim);
  std::map<Column, size_t> columns;
  for (size_t i = 0; i < headers.size(); ++i) {
    auto col = ColumnFor(headers[i]);
    if (col && !columns.count(*col)) columns[*col] = i;
  }
  for (auto [col, label] : {std::pair{Column::kName, "name"},
                            std::pair{Column::kMaterial, "material"},
                            std::pair{Column::kSupplier, "supplier"}}) {
    if (!columns.count(col)) {
      throw Error(ErrorCode::kParse,
                  std::string("missing mandatory header: ") + label);
    }
  }

  std::vector<BomEntry> entries;
  int row_index = 0;
  while (GetLine(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    ++row_index;
    const std::vector<std::string> cells = SplitRow(line, delim);
    if (cells.size() != headers.size()) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(line_no) + "expected " +
                      std::to_string(headers.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    BomEntry entry;
    auto cell = [&](Column c) { return Trim(cells[columns.at(c)]); };
    entry.id = columns.count(Column::kId) ? cell(Column::kId)
                                          : "row-" + std::to_string(row_index);
    entry.name = cell(Column::kName);
    entry.material = cell(Column::kMaterial);
    entry.supplier = cell(Column::kSupplier);
    if (columns.count(Column::kQuantity)) {
      const std::string raw = cell(Column::kQuantity);
      if (!raw.empty()) {
        auto q = ParseDecimal(raw);
        if (!q || *q < 0.0) {
          throw Error(ErrorCode::kParse,
                      LinePrefix(line_no) + "invalid quantity '" + raw + "'");
        }
        entry.quantity = *q;
      }
    }
    if (entry.name.empty()) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) + "empty name");
    }
    entries.push_back(std::move(entry));
  }

  std::set<std::string> ids;
  for (const BomEntry &e : entries) {
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::kParse, "duplicate component id: " + e.id);
    }
  }
  return entries;
}

std::vector<LcaActivity> ParseLcaDb(std::istream &in) {
  std::vector<LcaActivity> activities;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (GetLine(in, line)) {
    ++line_no;
    if (line_no == 1) StripByteOrderMark(line);
    if (IsBlank(line)) continue;
    json record = ParseRecord(line, line_no);
    LcaActivity activity;
    try {
      activity = record.get<LcaActivity>();
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) + e.what());
    }
    if (activity.id.empty() || activity.name.empty()) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) + "empty id or name");
    }
    if (!(activity.emission_factor >= 0.0)) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) +
                                         "negative emission_factor for " +
                                         activity.id);
    }
    if (!ids.insert(activity.id).second) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(line_no) + "duplicate activity id: " + activity.id);
    }
    activities.push_back(std::move(activity));
  }
  return activities;
}

std::vector<Datasheet> LoadDatasheets(const fs::path &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto &item : fs::directory_iterator(dir)) {
    const std::string name = item.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (!item.is_regular_file()) continue;
    files.push_back(item.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path &a, const fs::path &b) {
    return a.filename().string() < b.filename().string();
  });
  std::vector<Datasheet> sheets;
  for (const fs::path &file : files) {
    Datasheet sheet;
    sheet.filename = file.filename().string();
    sheet.id = sheet.filename;
    sheet.body = ReadFile(file);
    sheets.push_back(std::move(sheet));
  }
  return sheets;
}

std::vector<GoldLabel> ParseGoldLabels(std::istream &in) {
  std::vector<GoldLabel> labels;
  std::string line;
  int line_no = 0;
  while (GetLine(in, line)) {
    ++line_no;
    if (line_no == 1) StripByteOrderMark(line);
    if (IsBlank(line)) continue;
    json record = ParseRecord(line, line_no);
    GoldLabel label;
    try {
      label = record.get<GoldLabel>();
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) + e.what());
    }
    if (label.component_id.empty() || label.activity_id.empty()) {
      throw Error(ErrorCode::kParse, LinePrefix(line_no) + "empty id");
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

void WriteBom(std::ostream &out, const std::vector<BomEntry> &entries,
              char delim) {
  out << "id" << delim << "name" << delim << "material" << delim << "supplier"
      << delim << "quantity\n";
  for (const BomEntry &e : entries) {
    out << QuoteCell(e.id, delim) << delim << QuoteCell(e.name, delim) << delim
        << QuoteCell(e.material, delim) << delim
        << QuoteCell(e.supplier, delim) << delim << FormatNumber(e.quantity)
        << '\n';
  }
}

void WriteLcaDb(std::ostream &out, const std::vector<LcaActivity> &activities) {
  for (const LcaActivity &a : activities) out << json(a).dump() << '\n';
}

void WriteGoldLabels(std::ostream &out, const std::vector<GoldLabel> &labels) {
  for (const GoldLabel &g : labels) out << json(g).dump() << '\n';
}

void WriteDatasheets(const fs::path &dir, const std::vector<Datasheet> &sheets) {
  fs::create_directories(dir);
  for (const Datasheet &sheet : sheets) {
    std::ofstream out(dir / sheet.filename, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / sheet.filename).string());
    out << sheet.body;
  }
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return buffer.str();
}

std::vector<BomEntry> LoadBomFile(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  return ParseBom(in);
}

std::vector<LcaActivity> LoadLcaDbFile(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  return ParseLcaDb(in);
}

std::vector<GoldLabel> LoadGoldLabelFile(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  return ParseGoldLabels(in);
}

}  // namespace ecolink
