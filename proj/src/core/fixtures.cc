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

#include "core/fixtures.h"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>

#include "core/docmatch.h"
#include "core/embedding.h"
#include "core/errors.h"
#include "core/ingest.h"
#include "core/llm.h"

namespace ecolink {

namespace {

struct ActivitySpec {
  const char *id;
  const char *name;
  const char *description;
  double base_factor;  // kg CO2e per unit, before seeded jitter
  const char *unit;
};

// a01 reproduces the typical shape of a database entry: a process name and a
// two-paragraph technical description.
const ActivitySpec kActivities[] = {
    {"a01", "Steel production, electric arc furnace, EU",
     "This process models the production of steel using an electric arc "
     "furnace (EAF) within the European Union. The process includes the "
     "melting of recycled steel scrap and the subsequent refinement to meet "
     "industry-grade specifications. Electricity consumption and emissions "
     "are based on averages from EU-wide data. Additional inputs include "
     "limestone for slag formation and oxygen for decarburization. Outputs "
     "include steel billets ready for further processing and slag as a "
     "by-product for use in construction applications.\n\n"
     "This dataset represents a cradle-to-gate assessment, capturing the "
     "production of steel billets up to the point of factory gate, excluding "
     "downstream processing (e.g., rolling or shaping). Energy mix and "
     "emission profiles align with EU 27 averages for 2023.",
     0.67, "kg CO2e/kg"},
    {"a02", "Steel production, converter, unalloyed",
     "Production of unalloyed carbon steel in a basic oxygen converter from "
     "hot metal and a share of scrap. Includes ladle metallurgy and continuous "
     "casting to slabs and billets.",
     2.10, "kg CO2e/kg"},
    {"a03", "Steel production, chromium steel 18/8, hot rolled",
     "Production of austenitic stainless steel (18% chromium, 8% nickel) in "
     "an electric arc furnace with AOD refining, followed by hot rolling.",
     4.80, "kg CO2e/kg"},
    {"a04", "Cast iron production, grey cast iron with lamellar graphite",
     "Melting of pig iron and steel scrap in a cupola or induction furnace "
     "and casting of grey iron with lamellar (flake) graphite, grade EN-GJL, "
     "into sand moulds. Covers rings, discs and small castings including "
     "fettling.",
     1.52, "kg CO2e/kg"},
    {"a05", "Cast iron production, ductile iron with spheroidal graphite",
     "Melting and magnesium treatment of iron to produce nodular cast iron "
     "(EN-GJS) castings with spheroidal graphite in sand moulds.",
     1.73, "kg CO2e/kg"},
    {"a06", "Sand casting, grey cast iron, pump housing",
     "Sand casting of large grey cast iron (EN-GJL-250) housings such as pump "
     "volutes and spiral casings, including core making, pouring, shake-out "
     "and rough machining of flanges.",
     1.95, "kg CO2e/kg"},
    {"a07", "Steel forging, shaft, normalized carbon steel",
     "Hot forging of unalloyed carbon steel bar (e.g. C45) into shafts, "
     "followed by normalizing heat treatment, turning and grinding of bearing "
     "seats.",
     2.35, "kg CO2e/kg"},
    {"a08", "Aluminium casting, high pressure die casting",
     "Die casting of aluminium alloy parts in permanent steel moulds, "
     "including melting of secondary aluminium ingots and trimming.",
     3.20, "kg CO2e/kg"},
    {"a09", "Cathodic electrophoretic coating, steel part",
     "Cathodic dip painting (cataphoresis, KTL) of formed steel parts: "
     "degreasing, zinc phosphating, electrophoretic deposition of an epoxy "
     "primer and curing in an oven.",
     0.38, "kg CO2e/kg"},
    {"a10", "Powder coating, steel",
     "Electrostatic application of polyester powder paint onto steel sheet "
     "parts and thermal curing.",
     0.41, "kg CO2e/kg"},
    {"a11", "Zinc coating, electrogalvanizing",
     "Electrolytic deposition of a thin zinc layer on steel parts in an acid "
     "zinc bath, with passivation.",
     0.29, "kg CO2e/kg"},
    {"a12", "Fastener production, carbon steel, property class 5.8, zinc plated",
     "Cold heading and thread rolling of carbon steel studs and bolts of "
     "property class 5.8, followed by electroplated zinc coating (A2A, 3 "
     "micrometre, transparent passivation).",
     2.60, "kg CO2e/kg"},
    {"a13", "Fastener production, alloy steel, property class 8.8",
     "Cold heading and thread rolling of studs and bolts from boron or "
     "chromium alloyed steel wire, quenched and tempered to property class "
     "8.8.",
     2.85, "kg CO2e/kg"},
    {"a14", "Fastener production, stainless steel A2",
     "Cold forming of bolts and screws from austenitic stainless steel wire "
     "of grade A2 (1.4301), without heat treatment.",
     5.10, "kg CO2e/kg"},
    {"a15", "Wire drawing, steel",
     "Drawing of hot rolled steel wire rod through dies to reduce its "
     "diameter, including pickling and lubrication.",
     0.52, "kg CO2e/kg"},
    {"a16", "Polypropylene production, film or sheet",
     "Production of polypropylene granulate and extrusion into film or sheet, "
     "including woven scrim for technical textiles.",
     2.05, "kg CO2e/kg"},
    {"a17", "Polyester film production, coating",
     "Production of polyethylene terephthalate (PET) film from ethylene glycol "
     "and terephthalic acid, followed by application of a coating.",
     3.05, "kg CO2e/kg"},
    {"a18", "Synthetic rubber production, O-ring moulding",
     "Compression moulding of sealing rings and O-rings from synthetic rubber "
     "(NBR, EPDM) compounds, including vulcanization.",
     3.40, "kg CO2e/kg"},
    {"a19", "Machining, turning, steel",
     "Turning of steel workpieces on CNC lathes, including coolant use and "
     "chip removal; per kg of material removed.",
     1.10, "kg CO2e/kg"},
    {"a20", "Heat treatment, quenching and tempering of steel",
     "Hardening of steel parts by austenitizing, oil quenching and tempering "
     "in a continuous furnace.",
     0.47, "kg CO2e/kg"},
    {"a21", "Copper wire production, drawing and annealing",
     "Drawing of copper rod into wire and annealing, for electrical "
     "conductors.",
     3.90, "kg CO2e/kg"},
    {"a22", "Glass fibre reinforced plastic production, polyester resin",
     "Hand lay-up of glass fibre mats impregnated with unsaturated polyester "
     "resin.",
     4.30, "kg CO2e/kg"},
    {"a23", "Electricity, medium voltage, EU",
     "Supply of medium voltage electricity from the average European "
     "production mix, including transmission losses.",
     0.30, "kg CO2e/kWh"},
    {"a24", "Aluminium production, primary, ingot",
     "Electrolytic reduction of alumina in Hall-Heroult cells and casting "
     "into ingots.",
     11.50, "kg CO2e/kg"},
    {"a25", "Sheet metal stamping, steel",
     "Blanking, punching and deep drawing of steel sheet into rings, brackets "
     "and covers on mechanical presses.",
     0.62, "kg CO2e/kg"},
};

struct ComponentSpec {
  const char *id;
  const char *name;
  const char *material;
  const char *supplier;
  const char *gold;
  // Canned answers for prompts without and with datasheet context.
  const char *response;
  const char *response_with_datasheet;
};

const ComponentSpec kComponents[] = {
    {"c1", "SPIRALGEHÄUSE", "EN-GJL-250/A48 CL 35B", "Mechatronik GmbH", "a06",
     "Activity name: Cast iron production, grey cast iron with lamellar "
     "graphite\n"
     "Activity information:\n"
     "Spiral housing of a pump, cast from grey cast iron EN-GJL-250 (ASTM A48 "
     "class 35B) in sand moulds. Covers melting, pouring of the spiral "
     "casing and machining of flanges.",
     nullptr},
    {"c2", "WELLE", "C45+N", "Technikbau AG", "a07",
     "Activity name: Steel production, converter, unalloyed\n"
     "Activity information:\n"
     "C45 is an unalloyed medium carbon steel; the component is assumed to be "
     "made of converter steel delivered as bar.",
     "Activity name: Steel forging, shaft, normalized carbon steel\n"
     "Activity information:\n"
     "Drive shaft forged from unalloyed carbon steel C45 and normalized (+N), "
     "then turned and ground at the bearing seats."},
    {"c3", "SPALTRING", "JL/GUSSEISEN LAMELLENGRAFIT", "GussForm Solutions",
     "a04",
     "Activity name: Cast iron production, grey cast iron with lamellar "
     "graphite\n"
     "Activity information:\n"
     "Wear ring (split ring) cast from grey iron with lamellar graphite (EN-GJL) "
     "in sand moulds after melting pig iron and scrap in a cupola furnace.",
     nullptr},
    {"c4", "SPANNRING", "STAHL+KATAPHORESE", "StahlPro Engineering", "a09",
     "Activity name: Synthetic rubber production, O-ring moulding\n"
     "Activity information:\n"
     "Clamping ring assumed to be an elastomer sealing ring produced by "
     "compression moulding and vulcanization.",
     "Activity name: Cathodic electrophoretic coating, steel part\n"
     "Activity information:\n"
     "Stamped steel clamping ring coated by cathodic dip painting "
     "(cataphoresis, KTL): degreasing, phosphating, electrophoretic deposition "
     "of an epoxy primer and oven curing."},
    {"c5", "SPALTRING", "JL/GUSSEISEN LAMELLENGRAFIT", "GussTech Industries",
     "a04",
     "Activity name: Cast iron production, grey cast iron with lamellar "
     "graphite\n"
     "Activity information:\n"
     "Split ring of grey cast iron with flake graphite (EN-GJL) cast in sand "
     "moulds.",
     nullptr},
    {"c6", "STIFTSCHRAUBE", "8.8", "FixFast Components", "a13",
     "Activity name: Fastener production, alloy steel, property class 8.8\n"
     "Activity information:\n"
     "Stud bolt of property class 8.8, cold headed and thread rolled from "
     "alloyed steel wire, then quenched and tempered.",
     "Activity name: Fastener production, alloy steel, property class 8.8\n"
     "Activity information:\n"
     "Stud bolt to DIN 938, property class 8.8: cold heading and thread "
     "rolling of boron alloyed steel wire, quenched and tempered."},
    {"c7", "STIFTSCHRAUBE", "8.8", "SchraubenWerk AG", "a13",
     "Activity name: Heat treatment, quenching and tempering of steel\n"
     "Activity information:\n"
     "Grade 8.8 stud bolts require hardening by quenching and tempering of "
     "the steel after thread rolling.",
     nullptr},
    {"c8", "STIFTSCHRAUBE", "5.8+A2A", "PrecisionParts GmbH", "a12",
     "Activity name: Fastener production, stainless steel A2\n"
     "Activity information:\n"
     "Stud bolt made from austenitic stainless steel of grade A2, cold formed "
     "without heat treatment.",
     "Activity name: Fastener production, carbon steel, property class 5.8, "
     "zinc plated\n"
     "Activity information:\n"
     "Stud bolt of property class 5.8 from carbon steel, cold headed and "
     "thread rolled, then electroplated with zinc (A2A) and passivated."},
};

struct DatasheetSpec {
  const char *filename;
  const char *body;
};

const DatasheetSpec kDatasheets[] = {
    {"fixfast_stiftschraube_8.8.txt",
     "STIFTSCHRAUBE 8.8\nFixFast Components\nStud bolt, class 8.8 steel.\n"},
    {"precisionparts_stiftschraube_5.8_a2a.txt",
     "STIFTSCHRAUBE 5.8+A2A\nPrecisionParts GmbH\nStud bolt, class 5.8, zinc "
     "A2A.\n"},
    {"stahlpro_spannring.txt",
     "SPANNRING STAHL+KATAPHORESE\nStahlPro Engineering\nClamping ring, steel, "
     "KTL coated.\n"},
    {"technikbau_welle_c45n.txt",
     "WELLE C45+N\nTechnikbau AG\nShaft, normalized C45+N steel.\n"},
};

// Uniform double in [0, 1) from the top 53 bits; std distributions are not
// portable across standard libraries.
double Uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double RoundTo(double value, double step) { return std::round(value / step) * step; }

}  // namespace

DemoCorpus GenerateDemoCorpus(uint64_t seed) {
  std::mt19937_64 rng(seed);
  DemoCorpus corpus;

  for (const ActivitySpec &spec : kActivities) {
    const double jitter = 0.9 + 0.2 * Uniform(rng);
    corpus.activities.push_back({spec.id, spec.name, spec.description,
                                 RoundTo(spec.base_factor * jitter, 0.001),
                                 spec.unit});
  }
  for (const ComponentSpec &spec : kComponents) {
    const double quantity = static_cast<double>(1 + rng() % 4);
    corpus.bom.push_back({spec.id, spec.name, spec.material, spec.supplier, quantity});
    corpus.gold.push_back({spec.id, spec.gold});
  }
  for (const DatasheetSpec &spec : kDatasheets) {
    corpus.datasheets.push_back({spec.filename, spec.filename, spec.body});
  }

  // Record a response for every prompt the two LLM modes will send.
  LocalHashEmbedder embedder;
  DatasheetMatcher matcher(corpus.datasheets, embedder);
  const double threshold = PipelineConfig{}.datasheet_threshold;
  for (size_t i = 0; i < corpus.bom.size(); ++i) {
    const ComponentSpec &spec = kComponents[i];
    const BomEntry &entry = corpus.bom[i];
    corpus.llm_fixtures[PromptHash(BuildPrompt(entry, std::nullopt))] = spec.response;
    if (auto match = matcher.Select(entry, threshold)) {
      if (spec.response_with_datasheet == nullptr) {
        throw Error(ErrorCode::kInvalidArgument,
                    "demo component " + entry.id + " unexpectedly matched " +
                        match->sheet.filename);
      }
      corpus.llm_fixtures[PromptHash(BuildPrompt(entry, match->sheet))] =
          spec.response_with_datasheet;
    } else if (spec.response_with_datasheet != nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "demo component " + entry.id + " matched no datasheet");
    }
  }
  return corpus;
}

void WriteDemoCorpus(const DemoCorpus &corpus, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char *name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("bom.csv");
    WriteBom(out, corpus.bom);
  }
  {
    auto out = open("lca_db.jsonl");
    WriteLcaDb(out, corpus.activities);
  }
  {
    auto out = open("gold.jsonl");
    WriteGoldLabels(out, corpus.gold);
  }
  {
    auto out = open("llm_fixtures.jsonl");
    WriteCannedFixtures(out, corpus.llm_fixtures);
  }
  WriteDatasheets(dir / "datasheets", corpus.datasheets);
}

}  // namespace ecolink
