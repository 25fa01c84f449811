// Copyright 2026 The DialogForge Authors.
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

#ifndef DIALOGFORGE_HTTP_BACKEND_H_
#define DIALOGFORGE_HTTP_BACKEND_H_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "dialogforge/backend.h"
#include "json.hpp"

namespace dialogforge {

struct Endpoint {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string base_path;  // no trailing slash, may be empty
};

/// Parses "http[s]://host[:port][/path]". Throws ValidationError.
Endpoint ParseEndpoint(std::string_view url);

struct HttpBackendOptions {
  std::string endpoint_url;
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::milliseconds timeout{60000};
  double requests_per_minute = 0;  // 0 = unlimited
};

/// OpenAI-compatible `POST <endpoint>/chat/completions` client.
///
/// Status mapping: 401/403 -> AuthError, 429 -> RateLimited, 5xx ->
/// ServerError, transport timeouts -> Timeout, any other transport failure
/// -> ServerError, unparseable body or other status -> MalformedResponse.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  std::string Complete(const ChatRequest& request) override;

  const Endpoint& endpoint() const { return endpoint_; }

  nlohmann::json RequestBody(const ChatRequest& request) const;
  static std::string ParseReply(const std::string& body);

 private:
  HttpBackendOptions options_;
  Endpoint endpoint_;
  std::unique_ptr<RateLimiter> limiter_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_HTTP_BACKEND_H_
