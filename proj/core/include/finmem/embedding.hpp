#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finmem::embed {

/// Fixed-dimension unit-norm text embedding.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

/// Cosine similarity. Inputs must share a dimension; unit-norm inputs reduce
/// this to a dot product.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) = 0;
  virtual std::size_t dim() const = 0;
};

/// Deterministic local embedder: lowercase, split on non-alphanumerics, hash
/// each token and each adjacent-token bigram into one of `dim` buckets with a
/// fixed published seed, accumulate counts, L2-normalize. Pure — identical
/// text yields bit-identical vectors in any process. Text with no tokens maps
/// to the reserved basis vector e0.
class HashedTokenEmbedder final : public Embedder {
 public:
  static constexpr std::uint64_t kHashSeed = 0x46696e4d656d3031ull;
  static constexpr std::size_t kDefaultDim = 256;

  explicit HashedTokenEmbedder(std::size_t dim = kDefaultDim) : dim_(dim) {}

  EmbeddingVector embed(std::string_view text) override;
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

/// In-run memoization wrapper (permitted by contract; no cross-process cache).
class MemoizingEmbedder final : public Embedder {
 public:
  explicit MemoizingEmbedder(std::unique_ptr<Embedder> inner) : inner_(std::move(inner)) {}

  EmbeddingVector embed(std::string_view text) override;
  std::size_t dim() const override { return inner_->dim(); }

 private:
  std::unique_ptr<Embedder> inner_;
  std::map<std::string, EmbeddingVector, std::less<>> cache_;
};

struct RemoteEmbedderOptions {
  std::string endpoint;              // e.g. "https://host/v1/embeddings"
  std::string model;
  std::string api_key_env = "FINMEM_EMBED_API_KEY";
  int timeout_ms = 10000;
  int max_retries = 2;
  std::size_t dim = 1536;
};

/// HTTP JSON client: POST {"input": <text>, "model": <name>}. Retries up to
/// max_retries, then throws ProviderUnavailable. Never used by the mock path.
std::unique_ptr<Embedder> make_remote_embedder(RemoteEmbedderOptions options);

}  // namespace finmem::embed
