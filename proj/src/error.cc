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

#include "dialogforge/error.h"

namespace dialogforge {

BackendError::BackendError(Kind kind, std::string detail, int http_status)
    : Error(detail),
      kind_(kind),
      detail_(std::move(detail)),
      http_status_(http_status) {
  RebuildMessage();
}

bool BackendError::retryable() const {
  return kind_ == Kind::kRateLimited || kind_ == Kind::kServer ||
         kind_ == Kind::kTimeout;
}

void BackendError::set_round_index(int round) {
  round_index_ = round;
  RebuildMessage();
}

void BackendError::RebuildMessage() {
  message_ = std::string(KindName(kind_));
  if (http_status_ != 0) message_ += " (HTTP " + std::to_string(http_status_) + ")";
  if (round_index_) message_ += " in round " + std::to_string(*round_index_);
  if (!detail_.empty()) message_ += ": " + detail_;
}

const char* KindName(BackendError::Kind kind) {
  switch (kind) {
    case BackendError::Kind::kAuth:
      return "AuthError";
    case BackendError::Kind::kRateLimited:
      return "RateLimited";
    case BackendError::Kind::kServer:
      return "ServerError";
    case BackendError::Kind::kTimeout:
      return "Timeout";
    case BackendError::Kind::kMalformedResponse:
      return "MalformedResponse";
    case BackendError::Kind::kScriptExhausted:
      return "ScriptExhausted";
  }
  return "BackendError";
}

}  // namespace dialogforge
