#include "finmem/remote.hpp"

#include <atomic>
#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "finmem/embedding.hpp"
#include "finmem/errors.hpp"

namespace finmem::net {

namespace {
std::atomic<std::uint64_t> g_clients{0};
std::atomic<std::uint64_t> g_requests{0};
}  // namespace

std::uint64_t remote_clients_constructed() { return g_clients.load(); }
std::uint64_t remote_requests_attempted() { return g_requests.load(); }
void reset_remote_counters() {
  g_clients = 0;
  g_requests = 0;
}

namespace {

struct ParsedUrl {
  std::string host_port;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string api_key_from_env(const std::string& env_name) {
  const char* key = std::getenv(env_name.c_str());
  return key ? key : "";
}

}  // namespace
}  // namespace finmem::net

namespace finmem::llm {

namespace {

class RemoteProvider final : public Provider {
 public:
  explicit RemoteProvider(RemoteProviderOptions options) : options_(std::move(options)) {
    net::g_clients.fetch_add(1);
    if (options_.endpoint.empty()) {
      if (const char* ep = std::getenv("FINMEM_LLM_ENDPOINT")) options_.endpoint = ep;
    }
    if (options_.endpoint.empty())
      raise(Errc::InvalidConfig, "remote provider requires an endpoint "
                                 "(config or FINMEM_LLM_ENDPOINT)");
  }

  std::string generate(const std::string& prompt, const PromptRequest& request) override {
    const auto [host, path] = net::split_url(options_.endpoint);
    nlohmann::json body;
    body["model"] = options_.model;
    body["temperature"] = request.temperature;
    body["messages"] = nlohmann::json::array({
        nlohmann::json{{"role", "user"}, {"content", prompt}},
    });
    const std::string api_key = net::api_key_from_env(options_.api_key_env);

    std::string last_error = "no attempt";
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
      net::g_requests.fetch_add(1);
      httplib::Client client(host);
      client.set_connection_timeout(0, options_.timeout_ms * 1000);
      client.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
      const auto res = client.Post(path, headers, body.dump(), "application/json");
      if (!res) {
        last_error = "transport error";
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) {
        last_error = "non-JSON reply body";
        continue;
      }
      try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception&) {
        last_error = "unexpected reply shape";
      }
    }
    raise(Errc::ProviderUnavailable, options_.endpoint + ": " + last_error);
  }

 private:
  RemoteProviderOptions options_;
};

}  // namespace

std::shared_ptr<Provider> make_remote_provider(RemoteProviderOptions options) {
  return std::make_shared<RemoteProvider>(std::move(options));
}

}  // namespace finmem::llm

namespace finmem::embed {

namespace {

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options) : options_(std::move(options)) {
    net::g_clients.fetch_add(1);
    if (options_.endpoint.empty())
      raise(Errc::InvalidConfig, "remote embedder requires an endpoint");
  }

  std::size_t dim() const override { return options_.dim; }

  EmbeddingVector embed(std::string_view text) override {
    const auto [host, path] = net::split_url(options_.endpoint);
    nlohmann::json body;
    body["input"] = std::string(text);
    body["model"] = options_.model;
    const std::string api_key = net::api_key_from_env(options_.api_key_env);

    std::string last_error = "no attempt";
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
      net::g_requests.fetch_add(1);
      httplib::Client client(host);
      client.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
      const auto res = client.Post(path, headers, body.dump(), "application/json");
      if (!res || res->status != 200) {
        last_error = res ? "HTTP " + std::to_string(res->status) : "transport error";
        continue;
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) {
        last_error = "non-JSON reply body";
        continue;
      }
      try {
        auto values = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
        return EmbeddingVector(std::move(values));
      } catch (const nlohmann::json::exception&) {
        last_error = "unexpected reply shape";
      }
    }
    raise(Errc::ProviderUnavailable, options_.endpoint + ": " + last_error);
  }

 private:
  RemoteEmbedderOptions options_;
};

}  // namespace

std::unique_ptr<Embedder> make_remote_embedder(RemoteEmbedderOptions options) {
  return std::make_unique<RemoteEmbedder>(std::move(options));
}

}  // namespace finmem::embed
