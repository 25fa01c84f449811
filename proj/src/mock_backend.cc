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

#include "dialogforge/mock_backend.h"

#include <algorithm>
#include <array>
#include <fstream>

#include "dialogforge/error.h"
#include "dialogforge/text.h"
#include "json.hpp"

namespace dialogforge {

namespace mock_detail {

namespace {

constexpr std::array<std::string_view, 11> kLabels = {
    "Clinical Note:",      "Conversation history:",   "The conversation",
    "Conversation:",       "History Conversation:",   "Generated Conversation:",
    "Key Words:",          "Please ",                 "Check whether",
    "The above two",       "Does the conversation",
};

bool StartsWithLabel(std::string_view s) {
  return std::any_of(kLabels.begin(), kLabels.end(), [&](std::string_view l) {
    return s.substr(0, l.size()) == l;
  });
}

// Offset just past `label` where it begins a line, or npos.
std::size_t FindLabel(std::string_view prompt, std::string_view label) {
  std::size_t pos = 0;
  while ((pos = prompt.find(label, pos)) != std::string_view::npos) {
    if (pos == 0 || prompt[pos - 1] == '\n') return pos + label.size();
    pos += label.size();
  }
  return std::string_view::npos;
}

bool HasPhrase(const std::vector<std::string>& hay, std::string_view phrase) {
  const auto needle = text::Words(phrase);
  return !needle.empty() &&
         std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
             hay.end();
}

std::vector<std::string> Sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto t = text::Trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\n') {
      flush();
      continue;
    }
    cur.push_back(c);
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == s.size() || s[i + 1] == ' ' || s[i + 1] == '\n' ||
         s[i + 1] == '\t')) {
      flush();
    }
  }
  flush();
  return out;
}

// Byte offset of the code point with index `n` (or s.size()).
std::size_t ByteOffsetOf(std::string_view s, std::size_t n) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == n) return i;
      ++seen;
    }
  }
  return s.size();
}

}  // namespace

std::string Region(std::string_view prompt, std::string_view label) {
  const std::size_t start = FindLabel(prompt, label);
  if (start == std::string_view::npos) return "";
  std::size_t end = prompt.size();
  std::size_t pos = start;
  while ((pos = prompt.find("\n\n", pos)) != std::string_view::npos) {
    std::size_t next = pos;
    while (next < prompt.size() && prompt[next] == '\n') ++next;
    if (StartsWithLabel(prompt.substr(next))) {
      end = pos;
      break;
    }
    pos = next;
  }
  return std::string(text::Trim(prompt.substr(start, end - start)));
}

std::vector<std::string> KeywordsOf(std::string_view prompt) {
  const std::size_t start = FindLabel(prompt, "Key Words:");
  if (start == std::string_view::npos) return {};
  std::size_t end = prompt.find('\n', start);
  if (end == std::string_view::npos) end = prompt.size();
  std::vector<std::string> out;
  std::string_view rest = prompt.substr(start, end - start);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const auto item = text::Trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string FitToBudget(const std::string& reply, std::size_t max_chars) {
  if (text::CodePointCount(reply) <= max_chars) return reply;
  const std::string_view head(reply.data(), ByteOffsetOf(reply, max_chars));
  const std::size_t nl = head.rfind('\n');
  if (nl != std::string_view::npos && !text::IsBlank(head.substr(0, nl))) {
    return std::string(text::Trim(head.substr(0, nl)));
  }
  for (std::size_t i = head.size(); i-- > 1;) {
    const char c = head[i - 1];
    if ((c == '.' || c == '!' || c == '?') && head[i] == ' ') {
      return std::string(text::Trim(head.substr(0, i)));
    }
  }
  const auto trimmed = text::Trim(head);
  return trimmed.empty() ? std::string(head) : std::string(trimmed);
}

}  // namespace mock_detail

namespace {

using mock_detail::KeywordsOf;
using mock_detail::Region;

std::string DetectTask(const ChatRequest& request, std::string_view prompt) {
  if (!request.task.empty()) return request.task;
  auto has = [&](std::string_view phrase) {
    return prompt.find(phrase) != std::string_view::npos;
  };
  if (has("role-play as a doctor")) return "doctor";
  if (has("act as a patient")) return "patient";
  if (has("rewrite all the conversations")) return "polish";
  if (has("Check whether the information")) return "hallucination";
  if (has("concatenate the two dialogues")) return "postediting";
  if (has("Answer only yes or no")) return "factuality";
  return "";
}

std::string DoctorReply(const std::vector<std::string>& keywords) {
  if (keywords.empty()) {
    return "Is there anything else you would like to tell me today?";
  }
  std::string q = "Can you tell me about ";
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    if (i > 0) q += i + 1 == keywords.size() ? " and " : ", ";
    q += keywords[i];
  }
  return q + "?";
}

std::string PatientReply(const std::vector<std::string>& keywords,
                         std::string_view note) {
  if (keywords.empty()) return "I think that covers everything.";
  const auto sentences = mock_detail::Sentences(note);
  std::vector<std::string> picked;
  for (const auto& kw : keywords) {
    std::string chosen;
    for (const auto& s : sentences) {
      if (mock_detail::HasPhrase(text::Words(s), kw)) {
        chosen = s;
        break;
      }
    }
    if (chosen.empty()) chosen = "Yes, there is the " + kw + ".";
    if (std::find(picked.begin(), picked.end(), chosen) == picked.end()) {
      picked.push_back(chosen);
    }
  }
  return text::Join(picked, " ");
}

}  // namespace

MockBackend::MockBackend(std::vector<std::string> script, bool strict)
    : script_(std::move(script)), scripted_(true), strict_(strict) {}

std::string MockBackend::Complete(const ChatRequest& request) {
  Validate(request);
  std::lock_guard<std::mutex> lock(mu_);
  log_.push_back(request);
  if (scripted_) {
    if (next_ < script_.size()) return script_[next_++];
    if (strict_) {
      throw BackendError(BackendError::Kind::kScriptExhausted,
                         "mock script exhausted after " +
                             std::to_string(script_.size()) + " replies");
    }
  }
  return RuleReply(request);
}

std::size_t MockBackend::call_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_.size();
}

std::vector<ChatRequest> MockBackend::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

std::vector<std::string> MockBackend::LoadScript(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError(DatasetError::Code::kIo,
                       "cannot open mock script '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(DatasetError::Code::kMalformedRecord,
                       "mock script '" + path + "' is not valid JSON: " +
                           e.what());
  }
  if (!doc.is_array()) {
    throw DatasetError(DatasetError::Code::kMalformedRecord,
                       "mock script must be a JSON array of strings");
  }
  std::vector<std::string> replies;
  for (const auto& item : doc) {
    if (!item.is_string()) {
      throw DatasetError(DatasetError::Code::kMalformedRecord,
                         "mock script must be a JSON array of strings");
    }
    replies.push_back(item.get<std::string>());
  }
  return replies;
}

std::string MockBackend::RuleReply(const ChatRequest& request,
                                   double chars_per_token) {
  std::string_view prompt;
  for (auto it = request.messages.rbegin(); it != request.messages.rend();
       ++it) {
    if (it->role == Role::kUser) {
      prompt = it->content;
      break;
    }
  }
  const std::string task = DetectTask(request, prompt);
  std::string reply;
  if (task == "doctor") {
    reply = DoctorReply(KeywordsOf(prompt));
  } else if (task == "patient") {
    reply = PatientReply(KeywordsOf(prompt), Region(prompt, "Clinical Note:"));
  } else if (task == "polish") {
    reply = Region(prompt, "The conversation:");
  } else if (task == "hallucination") {
    reply = Region(prompt, "Conversation:");
  } else if (task == "postediting") {
    const std::string a = Region(prompt, "History Conversation:");
    const std::string b = Region(prompt, "Generated Conversation:");
    reply = a.empty() ? b : (b.empty() ? a : a + "\n" + b);
  } else if (task == "factuality") {
    const auto conversation = text::Words(Region(prompt, "Conversation:"));
    const auto keywords = KeywordsOf(prompt);
    const bool all = std::all_of(
        keywords.begin(), keywords.end(), [&](const std::string& k) {
          return mock_detail::HasPhrase(conversation, k);
        });
    reply = all ? "yes" : "no";
  } else {
    reply = "OK.";
  }
  if (reply.empty()) reply = "OK.";
  const auto max_chars = static_cast<std::size_t>(
      static_cast<double>(request.max_reply_tokens) * chars_per_token);
  return mock_detail::FitToBudget(reply, std::max<std::size_t>(1, max_chars));
}

}  // namespace dialogforge
