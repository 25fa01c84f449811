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

#ifndef DIALOGFORGE_ERROR_H_
#define DIALOGFORGE_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dialogforge {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  enum class Code { kEmptyNote, kEmptyId, kInvalidConfig, kInvalidValue };

  ValidationError(Code code, const std::string& message)
      : Error(message), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

class LexiconError : public Error {
 public:
  enum class Code { kMalformedRecord, kIo };

  LexiconError(Code code, const std::string& message, int line_no = 0)
      : Error(message), code_(code), line_no_(line_no) {}

  Code code() const { return code_; }
  // 1-based line of the offending record; 0 when not applicable.
  int line_no() const { return line_no_; }

 private:
  Code code_;
  int line_no_;
};

class PromptError : public Error {
 public:
  enum class Code { kUnboundSlot, kUnknownSlot, kIo };

  PromptError(Code code, std::string slot, const std::string& message)
      : Error(message), code_(code), slot_(std::move(slot)) {}

  Code code() const { return code_; }
  const std::string& slot() const { return slot_; }

 private:
  Code code_;
  std::string slot_;
};

class TranscriptError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a chat-completion service. The round index is attached
// by the dialogue loop when the failure happens mid-conversation.
class BackendError : public Error {
 public:
  enum class Kind {
    kAuth,
    kRateLimited,
    kServer,
    kTimeout,
    kMalformedResponse,
    kScriptExhausted,
  };

  BackendError(Kind kind, std::string detail, int http_status = 0);

  Kind kind() const { return kind_; }
  int http_status() const { return http_status_; }
  const std::string& detail() const { return detail_; }
  std::optional<int> round_index() const { return round_index_; }

  bool retryable() const;
  void set_round_index(int round);

  const char* what() const noexcept override { return message_.c_str(); }

 private:
  void RebuildMessage();

  Kind kind_;
  std::string detail_;
  int http_status_;
  std::optional<int> round_index_;
  std::string message_;
};

const char* KindName(BackendError::Kind kind);

class MetricError : public Error {
 public:
  enum class Code { kTooFewUnits, kEmptyCorpus, kInvalidArgument };

  MetricError(Code code, const std::string& message)
      : Error(message), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

class DatasetError : public Error {
 public:
  enum class Code { kIo, kMalformedRecord, kIdMismatch, kConfig };

  DatasetError(Code code, const std::string& message, int line_no = 0,
               std::vector<std::string> ids = {})
      : Error(message), code_(code), line_no_(line_no), ids_(std::move(ids)) {}

  Code code() const { return code_; }
  int line_no() const { return line_no_; }
  // Unmatched ids for kIdMismatch.
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  Code code_;
  int line_no_;
  std::vector<std::string> ids_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_ERROR_H_
