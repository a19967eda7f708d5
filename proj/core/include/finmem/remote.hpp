#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "finmem/llm.hpp"

namespace finmem::net {

/// Counters bumped by every remote client construction and request. Tests
/// use them as the forbidden-network guard: a mock-provider run must leave
/// both at zero.
std::uint64_t remote_clients_constructed();
std::uint64_t remote_requests_attempted();
void reset_remote_counters();

}  // namespace finmem::net

namespace finmem::llm {

struct RemoteProviderOptions {
  std::string endpoint;  // chat-completion URL; or FINMEM_LLM_ENDPOINT
  std::string model = "gpt-4-turbo";
  std::string api_key_env = "FINMEM_LLM_API_KEY";
  int timeout_ms = 30000;
  int max_retries = 2;
};

/// Thin HTTP chat-completion client (model, temperature, message list).
/// Throws ProviderUnavailable after bounded retries. Config-gated; the
/// hermetic paths never construct one.
std::shared_ptr<Provider> make_remote_provider(RemoteProviderOptions options);

}  // namespace finmem::llm
