#include "finmem/embedding.hpp"

#include <cmath>

#include "finmem/errors.hpp"
#include "finmem/rng.hpp"

namespace finmem::embed {

double EmbeddingVector::norm() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return std::sqrt(acc);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim())
    raise(Errc::DimensionMismatch, "cosine of " + std::to_string(a.dim()) + "-dim and " +
                                       std::to_string(b.dim()) + "-dim vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    dot += av[i] * bv[i];
    na += av[i] * av[i];
    nb += bv[i] * bv[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingVector HashedTokenEmbedder::embed(std::string_view text) {
  std::vector<double> counts(dim_, 0.0);
  std::string token, previous;
  bool any = false;

  const auto flush = [&] {
    if (token.empty()) return;
    any = true;
    counts[fnv1a64(token, kHashSeed) % dim_] += 1.0;
    if (!previous.empty()) {
      const std::string bigram = previous + '\x1f' + token;
      counts[fnv1a64(bigram, kHashSeed) % dim_] += 1.0;
    }
    previous = token;
    token.clear();
  };

  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      token.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      token.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      flush();
    }
  }
  flush();

  if (!any) {
    counts.assign(dim_, 0.0);
    counts[0] = 1.0;  // reserved basis vector for token-free text
    return EmbeddingVector(std::move(counts));
  }

  double norm = 0.0;
  for (double v : counts) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : counts) v /= norm;
  return EmbeddingVector(std::move(counts));
}

EmbeddingVector MemoizingEmbedder::embed(std::string_view text) {
  if (const auto it = cache_.find(text); it != cache_.end()) return it->second;
  EmbeddingVector v = inner_->embed(text);
  cache_.emplace(std::string(text), v);
  return v;
}

}  // namespace finmem::embed
