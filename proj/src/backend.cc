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

#include "dialogforge/backend.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "dialogforge/error.h"
#include "dialogforge/text.h"

namespace dialogforge {

std::string_view RoleName(Role r) {
  switch (r) {
    case Role::kSystem:
      return "system";
    case Role::kUser:
      return "user";
    case Role::kAssistant:
      return "assistant";
  }
  return "user";
}

void Validate(const ChatRequest& request) {
  auto fail = [](const std::string& what) {
    throw ValidationError(ValidationError::Code::kInvalidValue,
                          "invalid chat request: " + what);
  };
  if (request.messages.empty()) fail("no messages");
  if (request.max_reply_tokens < 1) fail("max_reply_tokens must be >= 1");
  if (request.temperature < 0.0) fail("temperature must be non-negative");
  for (const auto& m : request.messages) {
    if (m.role != Role::kSystem && text::IsBlank(m.content)) {
      fail(std::string(RoleName(m.role)) + " message is empty");
    }
  }
}

std::string CompleteWithRetry(ChatBackend& backend, const ChatRequest& request,
                              const RetryPolicy& policy) {
  if (policy.max_retries < 0) {
    throw ValidationError(ValidationError::Code::kInvalidValue,
                          "max_retries must be non-negative");
  }
  std::mt19937_64 rng(policy.seed);
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.Complete(request);
    } catch (const BackendError& e) {
      if (!e.retryable() || attempt >= policy.max_retries) throw;
      const double cap = static_cast<double>(policy.base_delay.count()) *
                         std::ldexp(1.0, attempt);
      std::uniform_real_distribution<double> jitter(0.0, cap);
      const std::chrono::milliseconds wait(
          static_cast<std::int64_t>(std::llround(jitter(rng))));
      if (policy.sleep) {
        policy.sleep(wait);
      } else {
        std::this_thread::sleep_for(wait);
      }
    }
  }
}

RetryingBackend::RetryingBackend(std::shared_ptr<ChatBackend> inner,
                                 RetryPolicy policy)
    : inner_(std::move(inner)), policy_(std::move(policy)) {}

std::string RetryingBackend::Complete(const ChatRequest& request) {
  RetryPolicy policy = policy_;
  {
    // Decorrelate jitter across concurrent callers.
    std::lock_guard<std::mutex> lock(mu_);
    policy.seed += calls_++;
  }
  return CompleteWithRetry(*inner_, request, policy);
}

std::size_t EstimateTokens(std::string_view text, double chars_per_token) {
  const double chars = static_cast<double>(text::CodePointCount(text));
  return static_cast<std::size_t>(std::ceil(chars / chars_per_token));
}

RateLimiter::RateLimiter(double requests_per_minute)
    : rate_per_sec_(requests_per_minute / 60.0),
      capacity_(std::max(1.0, requests_per_minute / 60.0)),
      tokens_(capacity_),
      last_(Clock::now()) {}

void RateLimiter::Acquire() {
  if (rate_per_sec_ <= 0.0) return;
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    const auto now = Clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_sec_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait = (1.0 - tokens_) / rate_per_sec_;
    // Sleeping under the lock keeps callers in FIFO-ish order.
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
}

}  // namespace dialogforge
