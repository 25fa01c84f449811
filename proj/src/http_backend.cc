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

#include "dialogforge/http_backend.h"

#include <cctype>

#include "dialogforge/error.h"
#include "dialogforge/text.h"
#include "httplib.h"

namespace dialogforge {

namespace {

[[noreturn]] void BadUrl(std::string_view url, const std::string& why) {
  throw ValidationError(ValidationError::Code::kInvalidValue,
                        "invalid endpoint URL '" + std::string(url) + "': " +
                            why);
}

}  // namespace

Endpoint ParseEndpoint(std::string_view url) {
  Endpoint ep;
  const std::size_t sep = url.find("://");
  if (sep == std::string_view::npos) BadUrl(url, "missing scheme");
  ep.scheme = text::AsciiLower(url.substr(0, sep));
  if (ep.scheme != "http" && ep.scheme != "https") {
    BadUrl(url, "scheme must be http or https");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.scheme == "https") BadUrl(url, "built without TLS support");
#endif
  std::string_view rest = url.substr(sep + 3);
  const std::size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) {
    std::string_view path = rest.substr(slash);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    ep.base_path = std::string(path);
  }
  if (authority.empty()) BadUrl(url, "missing host");
  const std::size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    if (port.empty() || port.size() > 5) BadUrl(url, "bad port");
    int value = 0;
    for (char c : port) {
      if (!std::isdigit(static_cast<unsigned char>(c))) BadUrl(url, "bad port");
      value = value * 10 + (c - '0');
    }
    if (value < 1 || value > 65535) BadUrl(url, "port out of range");
    ep.port = value;
    authority = authority.substr(0, colon);
  } else {
    ep.port = ep.scheme == "https" ? 443 : 80;
  }
  for (char c : authority) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '@' || c == '?' ||
        c == '#') {
      BadUrl(url, "bad host");
    }
  }
  if (authority.empty()) BadUrl(url, "missing host");
  ep.host = std::string(authority);
  return ep;
}

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)),
      endpoint_(ParseEndpoint(options_.endpoint_url)),
      limiter_(std::make_unique<RateLimiter>(options_.requests_per_minute)) {
  if (text::IsBlank(options_.model)) {
    throw ValidationError(ValidationError::Code::kInvalidValue,
                          "model name must not be empty");
  }
}

nlohmann::json HttpBackend::RequestBody(const ChatRequest& request) const {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", RoleName(m.role)}, {"content", m.content}});
  }
  return {{"model", options_.model},
          {"messages", std::move(messages)},
          {"max_tokens", request.max_reply_tokens},
          {"temperature", request.temperature}};
}

std::string HttpBackend::ParseReply(const std::string& body) {
  try {
    const auto doc = nlohmann::json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) {
      throw BackendError(BackendError::Kind::kMalformedResponse,
                         "message content is not a string");
    }
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(BackendError::Kind::kMalformedResponse,
                       std::string("unexpected response body: ") + e.what());
  }
}

std::string HttpBackend::Complete(const ChatRequest& request) {
  Validate(request);
  limiter_->Acquire();

  const std::string origin = endpoint_.scheme + "://" + endpoint_.host + ":" +
                             std::to_string(endpoint_.port);
  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  const std::string path = endpoint_.base_path + "/chat/completions";
  auto res = client.Post(path, headers, RequestBody(request).dump(),
                         "application/json");
  if (!res) {
    const auto err = res.error();
    const std::string what = httplib::to_string(err);
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw BackendError(BackendError::Kind::kTimeout, what);
    }
    throw BackendError(BackendError::Kind::kServer, "transport failure: " + what);
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw BackendError(BackendError::Kind::kAuth, "request rejected", status);
  }
  if (status == 429) {
    throw BackendError(BackendError::Kind::kRateLimited, "rate limited", status);
  }
  if (status >= 500) {
    throw BackendError(BackendError::Kind::kServer, "server error", status);
  }
  if (status != 200) {
    throw BackendError(BackendError::Kind::kMalformedResponse,
                       "unexpected status", status);
  }
  return ParseReply(res->body);
}

}  // namespace dialogforge
