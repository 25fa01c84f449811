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

#ifndef DIALOGFORGE_BACKEND_H_
#define DIALOGFORGE_BACKEND_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace dialogforge {

enum class Role { kSystem, kUser, kAssistant };
std::string_view RoleName(Role r);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  int max_reply_tokens = 256;
  double temperature = 0.7;
  // Pipeline stage that issued the request ("doctor", "patient", "polish",
  // ...). Used for logging and by the mock; never sent over the wire.
  std::string task;
};

/// Throws ValidationError when the request breaks its invariants.
void Validate(const ChatRequest& request);

/// A chat-completion service. Implementations must be safe to call from
/// several threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Returns the assistant reply or throws BackendError.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  // Defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
  std::uint64_t seed = 0x5eed;
};

/// Retries RateLimited, ServerError and Timeout with exponential backoff:
/// attempt k (0-based) waits a uniform draw from [0, base_delay * 2^k].
/// Other errors propagate immediately.
std::string CompleteWithRetry(ChatBackend& backend, const ChatRequest& request,
                              const RetryPolicy& policy);

/// Wraps another backend with CompleteWithRetry.
class RetryingBackend : public ChatBackend {
 public:
  RetryingBackend(std::shared_ptr<ChatBackend> inner, RetryPolicy policy);
  std::string Complete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatBackend> inner_;
  RetryPolicy policy_;
  std::mutex mu_;
  std::uint64_t calls_ = 0;
};

/// ceil(code points / chars_per_token). A model-agnostic heuristic.
std::size_t EstimateTokens(std::string_view text, double chars_per_token = 4.0);

/// Token bucket shared by concurrent callers. A rate of zero disables it.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void Acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_per_sec_;
  double capacity_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_BACKEND_H_
