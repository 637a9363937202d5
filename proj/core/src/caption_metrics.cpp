#include "medcap/caption_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

#include "medcap/parallel.hpp"

namespace medcap::metrics {

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(const text::TokenSequence& tokens, std::size_t k) {
  NgramCounts counts;
  if (tokens.size() < k) return counts;
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < k; ++j) {
      key += ' ';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t clipped_overlap(const NgramCounts& candidate, const NgramCounts& reference) {
  std::size_t overlap = 0;
  for (const auto& [gram, count] : candidate) {
    if (auto it = reference.find(gram); it != reference.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

PRF harmonic(double precision, double recall) {
  const double denom = precision + recall;
  return {precision, recall, denom > 0.0 ? 2.0 * precision * recall / denom : 0.0};
}

std::size_t lcs_length(const text::TokenSequence& a, const text::TokenSequence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

std::vector<double> normalized(const std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("zero-norm embedding vector");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double bleu(const text::TokenSequence& candidate, const text::TokenSequence& reference, int n) {
  if (n < 1 || n > 4) throw ValidationError(fmt::format("BLEU order {} outside 1..4", n));
  if (candidate.empty()) return 0.0;
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());

  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto order = static_cast<std::size_t>(k);
    if (candidate.size() < order) return 0.0;
    const double total = static_cast<double>(candidate.size() - order + 1);
    const auto matches = static_cast<double>(
        clipped_overlap(count_ngrams(candidate, order), count_ngrams(reference, order)));
    const double p = matches > 0.0 ? matches / total : 1.0 / (2.0 * total);
    log_sum += std::log(p);
  }
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum / n);
}

PRF rouge(const text::TokenSequence& candidate, const text::TokenSequence& reference,
          RougeVariant variant) {
  const std::size_t overlap =
      variant == RougeVariant::Rouge1
          ? clipped_overlap(count_ngrams(candidate, 1), count_ngrams(reference, 1))
          : lcs_length(candidate, reference);
  const double o = static_cast<double>(overlap);
  const double precision = candidate.empty() ? 0.0 : o / static_cast<double>(candidate.size());
  const double recall = reference.empty() ? 0.0 : o / static_cast<double>(reference.size());
  return harmonic(precision, recall);
}

double meteor(const text::TokenSequence& candidate, const text::TokenSequence& reference) {
  const MeteorAlignment alignment = meteor_align(candidate, reference);
  if (alignment.matches == 0) return 0.0;
  const double m = static_cast<double>(alignment.matches);
  const double precision = m / static_cast<double>(candidate.size());
  const double recall = m / static_cast<double>(reference.size());
  const double f_mean = 10.0 * precision * recall / (recall + 9.0 * precision);
  const double fragmentation = static_cast<double>(alignment.chunks) / m;
  const double penalty = 0.5 * fragmentation * fragmentation * fragmentation;
  return f_mean * (1.0 - penalty);
}

PRF bertscore_aggregate(std::span<const std::vector<double>> candidate,
                        std::span<const std::vector<double>> reference) {
  if (candidate.empty() || reference.empty()) return {};
  const std::size_t dim = candidate.front().size();
  std::vector<std::vector<double>> cand;
  std::vector<std::vector<double>> ref;
  for (const auto& v : candidate) {
    if (v.size() != dim) throw ValidationError(fmt::format("dimension mismatch: {} vs {}", v.size(), dim));
    cand.push_back(normalized(v));
  }
  for (const auto& v : reference) {
    if (v.size() != dim) throw ValidationError(fmt::format("dimension mismatch: {} vs {}", v.size(), dim));
    ref.push_back(normalized(v));
  }

  std::vector<double> best_for_cand(cand.size(), -std::numeric_limits<double>::infinity());
  std::vector<double> best_for_ref(ref.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      const double sim = dot(cand[i], ref[j]);
      best_for_cand[i] = std::max(best_for_cand[i], sim);
      best_for_ref[j] = std::max(best_for_ref[j], sim);
    }
  }
  double p = 0.0;
  for (double s : best_for_cand) p += s;
  double r = 0.0;
  for (double s : best_for_ref) r += s;
  p /= static_cast<double>(cand.size());
  r /= static_cast<double>(ref.size());
  // Cosines of normalized vectors can stray past 1 by an ulp; negative
  // similarities (anti-aligned tokens) contribute nothing.
  p = std::clamp(p, 0.0, 1.0);
  r = std::clamp(r, 0.0, 1.0);
  return harmonic(p, r);
}

CaptionEvalResult evaluate_captions(const CaptionCorpus& gold, const CaptionCorpus& generated,
                                    const CaptionEmbeddings* embeddings,
                                    const CaptionEvalOptions& options) {
  if (gold.empty()) throw ValidationError("gold caption corpus is empty");
  if (options.max_block == 0) throw ValidationError("max_block must be positive");

  struct PairInputs {
    const std::string* caption;
    const ingest::TokenEmbeddings* cand_emb = nullptr;
    const ingest::TokenEmbeddings* ref_emb = nullptr;
  };
  std::vector<PairInputs> inputs(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::string& image_id = gold[i].first;
    inputs[i].caption = generated.find(image_id);
    if (inputs[i].caption == nullptr) {
      throw ValidationError(fmt::format("no generated caption for gold image \"{}\"", image_id));
    }
    if (embeddings != nullptr) {
      inputs[i].cand_emb = embeddings->candidates.find(image_id);
      inputs[i].ref_emb = embeddings->references.find(image_id);
      if (inputs[i].cand_emb == nullptr || inputs[i].ref_emb == nullptr) {
        throw ValidationError(fmt::format("missing {} embeddings for image \"{}\"",
                                          inputs[i].cand_emb == nullptr ? "candidate" : "reference",
                                          image_id));
      }
    }
  }

  CaptionEvalResult result;
  result.n_pairs = gold.size();
  result.per_pair.resize(gold.size());
  parallel_for(gold.size(), options.threads, [&](std::size_t i) {
    const std::string scored = options.postprocess
                                   ? text::collapse_repetitions(*inputs[i].caption, options.max_block)
                                   : *inputs[i].caption;
    const text::TokenSequence cand = text::tokenize(scored);
    const text::TokenSequence ref = text::tokenize(gold[i].second);
    CaptionPairScore& s = result.per_pair[i];
    s.bleu1 = bleu(cand, ref, 1);
    s.bleu2 = bleu(cand, ref, 2);
    s.bleu3 = bleu(cand, ref, 3);
    s.bleu4 = bleu(cand, ref, 4);
    s.rouge1_f = rouge(cand, ref, RougeVariant::Rouge1).f1;
    s.rougeL_f = rouge(cand, ref, RougeVariant::RougeL).f1;
    s.meteor = meteor(cand, ref);
    if (embeddings != nullptr) {
      try {
        s.bert = bertscore_aggregate(inputs[i].cand_emb->vectors, inputs[i].ref_emb->vectors);
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("image \"{}\": {}", gold[i].first, e.what()));
      }
    }
  });

  const double n = static_cast<double>(gold.size());
  CaptionPairScore& mean = result.corpus;
  PRF bert_sum;
  for (const auto& s : result.per_pair) {
    mean.bleu1 += s.bleu1;
    mean.bleu2 += s.bleu2;
    mean.bleu3 += s.bleu3;
    mean.bleu4 += s.bleu4;
    mean.rouge1_f += s.rouge1_f;
    mean.rougeL_f += s.rougeL_f;
    mean.meteor += s.meteor;
    if (s.bert) {
      bert_sum.precision += s.bert->precision;
      bert_sum.recall += s.bert->recall;
      bert_sum.f1 += s.bert->f1;
    }
  }
  for (double* v : {&mean.bleu1, &mean.bleu2, &mean.bleu3, &mean.bleu4, &mean.rouge1_f,
                    &mean.rougeL_f, &mean.meteor}) {
    *v /= n;
  }
  if (embeddings != nullptr) {
    mean.bert = PRF{bert_sum.precision / n, bert_sum.recall / n, bert_sum.f1 / n};
  }
  return result;
}

}  // namespace medcap::metrics
