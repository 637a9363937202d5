#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "medcap/porter_stemmer.hpp"

namespace oracle {

namespace {

std::map<Words, int> grams(const Words& w, std::size_t k) {
  std::map<Words, int> out;
  for (std::size_t i = 0; i + k <= w.size(); ++i) {
    out[Words(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i + k))] += 1;
  }
  return out;
}

Prf from_pr(double p, double r) {
  return {p, r, p + r == 0.0 ? 0.0 : 2 * p * r / (p + r)};
}

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

std::size_t count_chunks(Pairs pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::size_t chunks = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const bool joins = k > 0 && pairs[k].first == pairs[k - 1].first + 1 &&
                       pairs[k].second == pairs[k - 1].second + 1;
    if (!joins) ++chunks;
  }
  return chunks;
}

// Kuhn's augmenting paths; only used to bound the enumeration below.
std::size_t max_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right) {
  std::vector<std::size_t> owner(n_right, std::numeric_limits<std::size_t>::max());
  std::size_t size = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    std::vector<bool> seen(n_right, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t x) {
      for (std::size_t v : adj[x]) {
        if (seen[v]) continue;
        seen[v] = true;
        if (owner[v] == std::numeric_limits<std::size_t>::max() || augment(owner[v])) {
          owner[v] = x;
          return true;
        }
      }
      return false;
    };
    if (augment(u)) ++size;
  }
  return size;
}

// Calls visit(pairs) for every maximum-cardinality matching of `adj`.
void each_maximum_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right,
                           const std::function<void(const Pairs&)>& visit) {
  const std::size_t target = max_matching(adj, n_right);
  std::vector<bool> taken(n_right, false);
  Pairs current;
  std::function<void(std::size_t)> rec = [&](std::size_t u) {
    // Prune when even matching every remaining vertex cannot reach target.
    if (current.size() + (adj.size() - u) < target) return;
    if (u == adj.size()) {
      if (current.size() == target) visit(current);
      return;
    }
    for (std::size_t v : adj[u]) {
      if (taken[v]) continue;
      taken[v] = true;
      current.emplace_back(u, v);
      rec(u + 1);
      current.pop_back();
      taken[v] = false;
    }
    rec(u + 1);
  };
  rec(0);
}

}  // namespace

double bleu(const Words& cand, const Words& ref, int n) {
  if (cand.empty()) return 0.0;
  double log_total = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto ck = grams(cand, static_cast<std::size_t>(k));
    const auto rk = grams(ref, static_cast<std::size_t>(k));
    int total = 0;
    int matched = 0;
    for (const auto& [g, c] : ck) {
      total += c;
      auto it = rk.find(g);
      matched += std::min(c, it == rk.end() ? 0 : it->second);
    }
    if (total == 0) return 0.0;
    const double p = matched == 0 ? 1.0 / (2.0 * total) : static_cast<double>(matched) / total;
    log_total += std::log(p);
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_total / n);
}

Prf rouge1(const Words& cand, const Words& ref) {
  std::map<std::string, int> cc;
  std::map<std::string, int> rc;
  for (const auto& w : cand) cc[w]++;
  for (const auto& w : ref) rc[w]++;
  int overlap = 0;
  for (const auto& [w, c] : cc) overlap += std::min(c, rc[w]);
  const double p = cand.empty() ? 0.0 : static_cast<double>(overlap) / static_cast<double>(cand.size());
  const double r = ref.empty() ? 0.0 : static_cast<double>(overlap) / static_cast<double>(ref.size());
  return from_pr(p, r);
}

Prf rouge_l(const Words& cand, const Words& ref) {
  // Top-down memoized recursion, unlike the library's rolling table.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> lcs = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == cand.size() || j == ref.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t v = cand[i] == ref[j] ? 1 + lcs(i + 1, j + 1) : std::max(lcs(i + 1, j), lcs(i, j + 1));
    memo[key] = v;
    return v;
  };
  const double l = static_cast<double>(lcs(0, 0));
  const double p = cand.empty() ? 0.0 : l / static_cast<double>(cand.size());
  const double r = ref.empty() ? 0.0 : l / static_cast<double>(ref.size());
  return from_pr(p, r);
}

MeteorBrute meteor_alignment(const Words& cand, const Words& ref) {
  std::vector<std::vector<std::size_t>> exact(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (cand[i] == ref[j]) exact[i].push_back(j);
    }
  }
  MeteorBrute best{0, std::numeric_limits<std::size_t>::max()};
  bool any = false;
  each_maximum_matching(exact, ref.size(), [&](const Pairs& stage1) {
    std::vector<bool> cand_used(cand.size(), false);
    std::vector<bool> ref_used(ref.size(), false);
    for (auto [i, j] : stage1) {
      cand_used[i] = true;
      ref_used[j] = true;
    }
    std::vector<std::size_t> left_cand;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (!cand_used[i]) left_cand.push_back(i);
    }
    std::vector<std::vector<std::size_t>> stem_adj(left_cand.size());
    for (std::size_t a = 0; a < left_cand.size(); ++a) {
      const std::string si = medcap::text::porter_stem(cand[left_cand[a]]);
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!ref_used[j] && medcap::text::porter_stem(ref[j]) == si) stem_adj[a].push_back(j);
      }
    }
    each_maximum_matching(stem_adj, ref.size(), [&](const Pairs& stage2) {
      Pairs all = stage1;
      for (auto [a, j] : stage2) all.emplace_back(left_cand[a], j);
      const std::size_t ch = count_chunks(all);
      if (!any || all.size() > best.matches || (all.size() == best.matches && ch < best.chunks)) {
        best = {all.size(), ch};
        any = true;
      }
    });
  });
  if (best.matches == 0) best.chunks = 0;
  return best;
}

double meteor(const Words& cand, const Words& ref) {
  const MeteorBrute a = meteor_alignment(cand, ref);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(cand.size());
  const double r = m / static_cast<double>(ref.size());
  const double fmean = 10 * p * r / (r + 9 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  return fmean * (1 - 0.5 * std::pow(frag, 3));
}

Prf bertscore(const std::vector<std::vector<double>>& cand,
              const std::vector<std::vector<double>>& ref) {
  if (cand.empty() || ref.empty()) return {};
  auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0;
    double aa = 0;
    double bb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      ab += a[k] * b[k];
      aa += a[k] * a[k];
      bb += b[k] * b[k];
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
  };
  double p = 0;
  for (const auto& c : cand) {
    double m = -2;
    for (const auto& r : ref) m = std::max(m, cosine(c, r));
    p += m;
  }
  double r = 0;
  for (const auto& rv : ref) {
    double m = -2;
    for (const auto& c : cand) m = std::max(m, cosine(c, rv));
    r += m;
  }
  p = std::clamp(p / static_cast<double>(cand.size()), 0.0, 1.0);
  r = std::clamp(r / static_cast<double>(ref.size()), 0.0, 1.0);
  return from_pr(p, r);
}

ConceptScores concept_scores(const std::vector<std::vector<std::string>>& gold,
                             const std::vector<std::vector<std::string>>& pred) {
  ConceptScores s;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const std::set<std::string> g(gold[k].begin(), gold[k].end());
    const std::set<std::string> p(pred[k].begin(), pred[k].end());
    std::size_t inter = 0;
    for (const auto& x : p) inter += g.count(x);
    double pk = 0;
    double rk = 0;
    double fk = 0;
    if (g.empty() && p.empty()) {
      pk = rk = fk = 1;
    } else {
      pk = p.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(p.size());
      rk = g.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(g.size());
      fk = pk + rk == 0 ? 0.0 : 2 * pk * rk / (pk + rk);
    }
    s.accuracy += g == p ? 1.0 : 0.0;
    s.precision += pk;
    s.recall += rk;
    s.f1 += fk;
  }
  const double n = static_cast<double>(gold.size());
  s.accuracy /= n;
  s.precision /= n;
  s.recall /= n;
  s.f1 /= n;
  return s;
}

}  // namespace oracle
