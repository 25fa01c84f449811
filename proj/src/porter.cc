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

// Porter stemmer, following the published algorithm step by step.

#include <string>
#include <string_view>

#include "dialogforge/metrics.h"

namespace dialogforge {

namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view w) : b_(w) {}

  std::string Run() {
    if (b_.size() <= 2) return b_;
    Step1ab();
    Step1c();
    Step2();
    Step3();
    Step4();
    Step5();
    return b_;
  }

 private:
  bool Cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !Cons(i - 1);
      default:
        return true;
    }
  }

  // m() of the stem b_[0, k).
  int Measure(std::size_t k) const {
    int n = 0;
    std::size_t i = 0;
    while (i < k && Cons(i)) ++i;
    while (i < k) {
      while (i < k && !Cons(i)) ++i;
      if (i >= k) break;
      ++n;
      while (i < k && Cons(i)) ++i;
    }
    return n;
  }

  bool VowelIn(std::size_t k) const {
    for (std::size_t i = 0; i < k; ++i) {
      if (!Cons(i)) return true;
    }
    return false;
  }

  bool DoubleCons(std::size_t k) const {
    return k >= 2 && b_[k - 1] == b_[k - 2] && Cons(k - 1);
  }

  // cvc at the end of b_[0, k), the last c not w, x or y.
  bool Cvc(std::size_t k) const {
    if (k < 3 || !Cons(k - 1) || Cons(k - 2) || !Cons(k - 3)) return false;
    const char c = b_[k - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool Ends(std::string_view s) const {
    return b_.size() >= s.size() &&
           std::string_view(b_).substr(b_.size() - s.size()) == s;
  }

  std::size_t StemLen(std::string_view suffix) const {
    return b_.size() - suffix.size();
  }

  void Replace(std::string_view suffix, std::string_view with) {
    b_.replace(StemLen(suffix), suffix.size(), with);
  }

  // Replaces `suffix` when the remaining stem has m() > min_m.
  bool Try(std::string_view suffix, std::string_view with, int min_m) {
    if (!Ends(suffix)) return false;
    if (Measure(StemLen(suffix)) > min_m) Replace(suffix, with);
    return true;
  }

  void Step1ab() {
    if (Ends("sses")) {
      Replace("sses", "ss");
    } else if (Ends("ies")) {
      Replace("ies", "i");
    } else if (Ends("ss")) {
    } else if (Ends("s")) {
      Replace("s", "");
    }

    if (Ends("eed")) {
      if (Measure(StemLen("eed")) > 0) Replace("eed", "ee");
      return;
    }
    std::string_view hit;
    if (Ends("ed") && VowelIn(StemLen("ed"))) hit = "ed";
    else if (Ends("ing") && VowelIn(StemLen("ing"))) hit = "ing";
    if (hit.empty()) return;
    Replace(hit, "");
    if (Ends("at") || Ends("bl") || Ends("iz")) {
      b_ += 'e';
    } else if (DoubleCons(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (Measure(b_.size()) == 1 && Cvc(b_.size())) {
      b_ += 'e';
    }
  }

  void Step1c() {
    if (Ends("y") && VowelIn(StemLen("y"))) b_.back() = 'i';
  }

  void Step2() {
    static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    };
    for (const auto& [suffix, with] : kRules) {
      if (Try(suffix, with, 0)) return;
    }
  }

  void Step3() {
    static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& [suffix, with] : kRules) {
      if (Try(suffix, with, 0)) return;
    }
  }

  void Step4() {
    static constexpr std::string_view kSuffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
        "ize",
    };
    // Longest match first among suffixes sharing an ending.
    std::string_view best;
    for (std::string_view s : kSuffixes) {
      if (Ends(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const std::size_t k = StemLen(best);
    if (best == "ion" && !(k > 0 && (b_[k - 1] == 's' || b_[k - 1] == 't'))) {
      return;
    }
    if (Measure(k) > 1) b_.erase(k);
  }

  void Step5() {
    if (Ends("e")) {
      const std::size_t k = b_.size() - 1;
      const int m = Measure(k);
      if (m > 1 || (m == 1 && !Cvc(k))) b_.pop_back();
    }
    if (Ends("ll") && Measure(b_.size()) > 1) b_.pop_back();
  }

  std::string b_;
};

}  // namespace

std::string PorterStem(std::string_view word) {
  for (char c : word) {
    if (c < 'a' || c > 'z') return std::string(word);
  }
  return Stemmer(word).Run();
}

}  // namespace dialogforge
