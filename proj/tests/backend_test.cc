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

#include <gtest/gtest.h>

#include <atomic>
#include <optional>
#include <thread>

#include "dialogforge/error.h"
#include "dialogforge/mock_backend.h"
#include "test_util.h"

namespace dialogforge {
namespace {

using std::chrono::milliseconds;
using Kind = BackendError::Kind;

ChatRequest Ask(std::string content, std::string task = "") {
  ChatRequest r;
  r.messages = {{Role::kUser, std::move(content)}};
  r.task = std::move(task);
  return r;
}

// Fails with the queued kinds in order, then answers "ok".
class FlakyBackend : public ChatBackend {
 public:
  explicit FlakyBackend(std::vector<Kind> failures) : failures_(std::move(failures)) {}
  std::string Complete(const ChatRequest&) override {
    const std::size_t i = calls_++;
    if (i < failures_.size()) throw BackendError(failures_[i], "injected");
    return "ok";
  }
  std::size_t calls() const { return calls_; }

 private:
  std::vector<Kind> failures_;
  std::atomic<std::size_t> calls_{0};
};

struct SleepLog {
  std::vector<milliseconds> waits;
  RetryPolicy Policy(int max_retries, milliseconds base = milliseconds(100)) {
    RetryPolicy p;
    p.max_retries = max_retries;
    p.base_delay = base;
    p.sleep = [this](milliseconds d) { waits.push_back(d); };
    return p;
  }
};

TEST(RetryTest, RetriesTransientErrorsThenSucceeds) {
  FlakyBackend b({Kind::kRateLimited, Kind::kServer, Kind::kTimeout});
  SleepLog log;
  EXPECT_EQ(CompleteWithRetry(b, Ask("hi"), log.Policy(3)), "ok");
  EXPECT_EQ(b.calls(), 4u);
  ASSERT_EQ(log.waits.size(), 3u);
  for (std::size_t k = 0; k < log.waits.size(); ++k) {
    EXPECT_GE(log.waits[k].count(), 0);
    EXPECT_LE(log.waits[k].count(), 100 << k);
  }
}

TEST(RetryTest, GivesUpAfterMaxRetries) {
  FlakyBackend b({Kind::kRateLimited, Kind::kRateLimited, Kind::kRateLimited});
  SleepLog log;
  try {
    CompleteWithRetry(b, Ask("hi"), log.Policy(2));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), Kind::kRateLimited);
  }
  EXPECT_EQ(b.calls(), 3u);
  EXPECT_EQ(log.waits.size(), 2u);
}

TEST(RetryTest, PermanentErrorsAreNotRetried) {
  for (Kind k : {Kind::kAuth, Kind::kMalformedResponse, Kind::kScriptExhausted}) {
    FlakyBackend b({k});
    SleepLog log;
    EXPECT_THROW(CompleteWithRetry(b, Ask("hi"), log.Policy(5)), BackendError);
    EXPECT_EQ(b.calls(), 1u);
    EXPECT_TRUE(log.waits.empty());
  }
}

TEST(RetryTest, JitterIsSeededAndBoundedByExponentialCap) {
  std::vector<milliseconds> first, second;
  for (auto* out : {&first, &second}) {
    FlakyBackend b(std::vector<Kind>(6, Kind::kServer));
    SleepLog log;
    CompleteWithRetry(b, Ask("hi"), log.Policy(6, milliseconds(1000)));
    *out = log.waits;
  }
  EXPECT_EQ(first, second);
  bool any_below_cap = false;
  for (std::size_t k = 0; k < first.size(); ++k) {
    EXPECT_LE(first[k].count(), 1000LL << k);
    any_below_cap |= first[k].count() < (1000LL << k);
  }
  EXPECT_TRUE(any_below_cap);
}

TEST(RetryTest, NegativeMaxRetriesIsRejected) {
  FlakyBackend b({});
  SleepLog log;
  EXPECT_THROW(CompleteWithRetry(b, Ask("hi"), log.Policy(-1)), ValidationError);
}

TEST(RetryingBackendTest, WrapsInnerBackend) {
  auto inner = std::make_shared<FlakyBackend>(std::vector<Kind>{Kind::kServer});
  SleepLog log;
  RetryingBackend b(inner, log.Policy(1));
  EXPECT_EQ(b.Complete(Ask("hi")), "ok");
  EXPECT_EQ(inner->calls(), 2u);
}

TEST(ChatRequestTest, Validation) {
  EXPECT_NO_THROW(Validate(Ask("hello")));
  ChatRequest empty;
  EXPECT_THROW(Validate(empty), ValidationError);
  ChatRequest blank = Ask("   ");
  EXPECT_THROW(Validate(blank), ValidationError);
  ChatRequest budget = Ask("hi");
  budget.max_reply_tokens = 0;
  EXPECT_THROW(Validate(budget), ValidationError);
  ChatRequest temp = Ask("hi");
  temp.temperature = -0.1;
  EXPECT_THROW(Validate(temp), ValidationError);
}

TEST(EstimateTokensTest, CeilOfCodePointsOverRatio) {
  EXPECT_EQ(EstimateTokens(""), 0u);
  EXPECT_EQ(EstimateTokens("abcd"), 1u);
  EXPECT_EQ(EstimateTokens("abcde"), 2u);
  EXPECT_EQ(EstimateTokens("\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9"), 1u);
  EXPECT_EQ(EstimateTokens("abcdef", 2.0), 3u);
}

TEST(RateLimiterTest, ZeroRateNeverBlocks) {
  RateLimiter limiter(0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) limiter.Acquire();
  EXPECT_LT(std::chrono::steady_clock::now() - start, milliseconds(100));
}

TEST(RateLimiterTest, SpacesRequestsAfterTheBurst) {
  // 600 rpm = 10 per second, burst of 10.
  RateLimiter limiter(600);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 12; ++i) limiter.Acquire();
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GE(elapsed, milliseconds(150));
  EXPECT_LT(elapsed, milliseconds(2000));
}

TEST(MockBackendTest, ScriptedRepliesInOrderThenExhausted) {
  MockBackend mock({"first", "second"});
  EXPECT_EQ(mock.Complete(Ask("a")), "first");
  EXPECT_EQ(mock.Complete(Ask("b")), "second");
  try {
    mock.Complete(Ask("c"));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), Kind::kScriptExhausted);
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_EQ(mock.call_count(), 3u);
  EXPECT_EQ(mock.requests()[1].messages[0].content, "b");
}

TEST(MockBackendTest, LenientScriptFallsBackToRules) {
  MockBackend mock({"scripted"}, /*strict=*/false);
  EXPECT_EQ(mock.Complete(Ask("x")), "scripted");
  EXPECT_EQ(mock.Complete(Ask("Key Words: aspirin", "doctor")),
            "Can you tell me about aspirin?");
}

TEST(MockBackendTest, DoctorRuleNamesEveryKeyword) {
  MockBackend mock;
  EXPECT_EQ(mock.Complete(Ask("Clinical Note: x\n\nKey Words: aspirin, chest pain, asthma",
                              "doctor")),
            "Can you tell me about aspirin, chest pain and asthma?");
}

TEST(MockBackendTest, PatientRuleQuotesTheNote) {
  MockBackend mock;
  const std::string prompt =
      "Clinical Note: He has asthma. Aspirin 81 mg daily. Uses an inhaler.\n\n"
      "Key Words: aspirin, inhaler, gout";
  EXPECT_EQ(mock.Complete(Ask(prompt, "patient")),
            "Aspirin 81 mg daily. Uses an inhaler. Yes, there is the gout.");
}

TEST(MockBackendTest, PassthroughAndConcatenationRules) {
  MockBackend mock;
  EXPECT_EQ(mock.Complete(Ask("Please fix.\n\nThe conversation:\nDoctor: a\nPatient: b", "polish")),
            "Doctor: a\nPatient: b");
  EXPECT_EQ(mock.Complete(Ask("History Conversation:\nDoctor: a\n\n"
                              "Generated Conversation:\nDoctor: b",
                              "postediting")),
            "Doctor: a\nDoctor: b");
  EXPECT_EQ(mock.Complete(Ask("Conversation:\nDoctor: aspirin?\n\nKey Words: aspirin",
                              "factuality")),
            "yes");
  EXPECT_EQ(mock.Complete(Ask("Conversation:\nDoctor: hi\n\nKey Words: aspirin",
                              "factuality")),
            "no");
}

TEST(MockBackendTest, RuleReplyRespectsReplyBudget) {
  ChatRequest r = Ask("Key Words: alpha, beta, gamma, delta, epsilon", "doctor");
  r.max_reply_tokens = 3;
  EXPECT_LE(MockBackend::RuleReply(r).size(), 12u);
}

TEST(MockBackendTest, LoadScript) {
  testing::TempDir dir;
  testing::WriteAll(dir.file("ok.json"), R"(["a", "b"])");
  EXPECT_EQ(MockBackend::LoadScript(dir.file("ok.json")), (std::vector<std::string>{"a", "b"}));
  testing::WriteAll(dir.file("bad.json"), R"({"a": 1})");
  EXPECT_THROW(MockBackend::LoadScript(dir.file("bad.json")), DatasetError);
  EXPECT_THROW(MockBackend::LoadScript(dir.file("missing.json")), DatasetError);
}

TEST(FitToBudgetTest, PrefersLineThenSentenceBoundaries) {
  using mock_detail::FitToBudget;
  EXPECT_EQ(FitToBudget("short", 10), "short");
  EXPECT_EQ(FitToBudget("line one\nline two is long", 12), "line one");
  EXPECT_EQ(FitToBudget("One. Two three four.", 12), "One.");
  EXPECT_EQ(FitToBudget("abcdefghij", 4), "abcd");
}

TEST(MockBackendTest, ConcurrentCallersAreSerialised) {
  MockBackend mock;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) mock.Complete(Ask("Key Words: aspirin", "doctor"));
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(mock.call_count(), 400u);
}

}  // namespace
}  // namespace dialogforge
