#pragma once

// Caption-quality metrics computed per caption pair and averaged over the
// corpus: BLEU-1..4, ROUGE-1 / ROUGE-L, METEOR (exact and stem stages) and
// BERTScore aggregation over externally supplied token embeddings.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "medcap/caption_text.hpp"
#include "medcap/ingest.hpp"
#include "medcap/types.hpp"

namespace medcap::metrics {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const PRF&, const PRF&) = default;
};

enum class RougeVariant { Rouge1, RougeL };

/// Sentence BLEU with clipped n-gram precision, brevity penalty and
/// p_k = 1 / (2 t_k) smoothing for orders with no match. `n` is in 1..4.
double bleu(const text::TokenSequence& candidate, const text::TokenSequence& reference, int n);

PRF rouge(const text::TokenSequence& candidate, const text::TokenSequence& reference,
          RougeVariant variant);

/// Chunk-count-minimizing METEOR alignment.
struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  /// Pairs (candidate index, reference index), sorted by candidate index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  /// False when the greedy fallback was used instead of exhaustive search.
  bool exact = true;
};

/// Exact-match stage followed by Porter-stem stage, each of maximal
/// cardinality. Among such alignments the one with the fewest chunks is found
/// by memoized branch-and-bound search when the match count is at most
/// `kMeteorExactLimit`; larger alignments use a greedy contiguity-preferring
/// pass.
MeteorAlignment meteor_align(const text::TokenSequence& candidate,
                             const text::TokenSequence& reference);

inline constexpr std::size_t kMeteorExactLimit = 64;

/// F_mean = 10PR / (R + 9P), scaled by 1 - 0.5 (chunks / matches)^3.
double meteor(const text::TokenSequence& candidate, const text::TokenSequence& reference);

/// Greedy max-cosine matching of L2-normalized vectors without idf or
/// baseline rescaling. Empty input on either side yields (0, 0, 0). Throws
/// ValidationError on a zero vector or a dimension mismatch.
PRF bertscore_aggregate(std::span<const std::vector<double>> candidate,
                        std::span<const std::vector<double>> reference);

struct CaptionPairScore {
  double bleu1 = 0.0;
  double bleu2 = 0.0;
  double bleu3 = 0.0;
  double bleu4 = 0.0;
  double rouge1_f = 0.0;
  double rougeL_f = 0.0;
  double meteor = 0.0;
  std::optional<PRF> bert;
};

struct CaptionEvalResult {
  /// Gold image order.
  std::vector<CaptionPairScore> per_pair;
  /// Arithmetic means of the per-pair values.
  CaptionPairScore corpus;
  std::size_t n_pairs = 0;
};

/// Embeddings for the generated captions (as scored, i.e. after
/// post-processing when enabled) and for the gold captions.
struct CaptionEmbeddings {
  ingest::EmbeddingSet candidates;
  ingest::EmbeddingSet references;
};

struct CaptionEvalOptions {
  bool postprocess = false;
  std::size_t max_block = 4;
  std::size_t threads = 1;
};

/// Throws ValidationError naming the first gold image without a generated
/// caption, or without embeddings when embeddings are supplied.
CaptionEvalResult evaluate_captions(const CaptionCorpus& gold, const CaptionCorpus& generated,
                                    const CaptionEmbeddings* embeddings = nullptr,
                                    const CaptionEvalOptions& options = {});

}  // namespace medcap::metrics
