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

// Deliberately naive reference implementations used as test oracles.

#ifndef ECOLINK_TESTS_SUPPORT_ORACLES_H_
#define ECOLINK_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "core/model.h"

namespace ecolink::testing {

struct Corpus {
  size_t dim = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<float>> vectors;  // unit length
};

inline std::vector<float> UnitVector(std::vector<double> raw) {
  double sq = 0.0;
  for (double v : raw) sq += v * v;
  const double norm = std::sqrt(sq);
  std::vector<float> out;
  for (double v : raw) out.push_back(static_cast<float>(v / norm));
  return out;
}

// Random unit vectors. Roughly a fifth of the entries duplicate an earlier
// vector so that exact score ties occur, and ids are shuffled so that id order
// differs from insertion order.
inline Corpus RandomCorpus(std::mt19937_64 &rng, size_t dim, size_t size) {
  Corpus corpus;
  corpus.dim = dim;
  std::normal_distribution<double> normal;
  std::vector<size_t> labels(size);
  for (size_t i = 0; i < size; ++i) labels[i] = i;
  std::shuffle(labels.begin(), labels.end(), rng);
  for (size_t i = 0; i < size; ++i) {
    corpus.ids.push_back("act-" + std::to_string(labels[i]));
    if (i > 0 && rng() % 5 == 0) {
      corpus.vectors.push_back(corpus.vectors[rng() % i]);
      continue;
    }
    std::vector<double> raw(dim);
    // Occasionally draw from a tiny lattice to produce further ties.
    const bool lattice = rng() % 4 == 0;
    for (double &v : raw) v = lattice ? static_cast<double>(rng() % 3) - 1.0 : normal(rng);
    if (std::all_of(raw.begin(), raw.end(), [](double v) { return v == 0.0; })) raw[0] = 1.0;
    corpus.vectors.push_back(UnitVector(raw));
  }
  return corpus;
}

// Scores every entry, fully sorts by (score desc, id asc) and keeps k.
inline std::vector<ScoredActivity> BruteForceTopK(const Corpus &corpus,
                                                  const std::vector<float> &query, int k) {
  double qq = 0.0;
  for (float v : query) qq += static_cast<double>(v) * static_cast<double>(v);
  const double qnorm = std::sqrt(qq);
  std::vector<ScoredActivity> all;
  for (size_t e = 0; e < corpus.ids.size(); ++e) {
    double dot = 0.0;
    for (size_t i = 0; i < corpus.dim; ++i) {
      dot += static_cast<double>(query[i]) * static_cast<double>(corpus.vectors[e][i]);
    }
    double score = dot / qnorm;
    if (score > 1.0) score = 1.0;
    if (score < -1.0) score = -1.0;
    all.push_back({corpus.ids[e], score});
  }
  std::sort(all.begin(), all.end(), [](const ScoredActivity &a, const ScoredActivity &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.activity_id < b.activity_id;
  });
  if (all.size() > static_cast<size_t>(k)) all.resize(k);
  return all;
}

// Number of gold components whose activity occurs among the first n
// candidates of their ranking, found by a linear scan.
inline size_t HitsOracle(const std::vector<CandidateRanking> &rankings,
                         const std::vector<GoldLabel> &gold, int n) {
  size_t hits = 0;
  for (const GoldLabel &label : gold) {
    for (const CandidateRanking &r : rankings) {
      if (r.component_id != label.component_id) continue;
      for (size_t i = 0; i < r.candidates.size() && i < static_cast<size_t>(n); ++i) {
        if (r.candidates[i].activity_id == label.activity_id) {
          ++hits;
          break;
        }
      }
      break;
    }
  }
  return hits;
}

struct RankingCase {
  std::vector<CandidateRanking> rankings;
  std::vector<GoldLabel> gold;
};

// 21 components with five candidates each: the gold activity is at rank 1 for
// five of them, at ranks 2..5 for five more and absent for the remaining 11.
inline RankingCase TwentyOneComponentCase() {
  RankingCase out;
  for (int c = 0; c < 21; ++c) {
    CandidateRanking r;
    r.component_id = "c" + std::to_string(c + 1);
    r.mode = Mode::kLlmDatasheet;
    const std::string gold = "gold-" + std::to_string(c);
    int gold_rank = 0;  // 0: not in the list
    if (c < 5) gold_rank = 1;
    else if (c < 10) gold_rank = 2 + (c - 5) % 4;
    for (int k = 1; k <= 5; ++k) {
      const std::string id = k == gold_rank ? gold : "other-" + std::to_string(c) + "-" + std::to_string(k);
      r.candidates.push_back({id, 1.0 - 0.1 * k});
    }
    out.rankings.push_back(r);
    out.gold.push_back({r.component_id, gold});
  }
  return out;
}

// A vector d of exactly representable integers with d[0] = 2^23 whose cosine
// against the first unit axis is within 1e-12 of target (0 < target < 1).
// Squares stay below 2^48, so every dot product involved is exact in double.
inline std::vector<float> VectorWithAxisCosine(double target) {
  const double p = 8388608.0;
  const double wanted = p * p * (1.0 / (target * target) - 1.0);
  const auto a = static_cast<long long>(std::sqrt(wanted / 3.0));
  for (auto b = a; b > a / 2; --b) {
    const double rest = wanted - static_cast<double>(a) * a - static_cast<double>(b) * b;
    if (rest < 0) continue;
    const auto e = std::llround(std::sqrt(rest));
    const double got = static_cast<double>(a) * a + static_cast<double>(b) * b +
                       static_cast<double>(e) * e;
    if (std::abs(got - wanted) <= 500.0 && e < (1LL << 24)) {
      return {static_cast<float>(p), static_cast<float>(a), static_cast<float>(b),
              static_cast<float>(e)};
    }
  }
  return {};
}

}  // namespace ecolink::testing

#endif  // ECOLINK_TESTS_SUPPORT_ORACLES_H_
