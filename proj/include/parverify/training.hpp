// Copyright 2026 The parverify Authors.
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

#ifndef PARVERIFY_TRAINING_HPP_
#define PARVERIFY_TRAINING_HPP_

#include <string_view>

#include "parverify/ppm_model.hpp"
#include "parverify/preprocess.hpp"

namespace parverify {

// Primes `model` with one UTF-8 document. With per_line set every line is
// its own text (history resets at each newline, the newline itself is
// not trained); otherwise the whole document is one text.
inline void TrainDocument(PpmModel& model, std::string_view utf8, Transform transform,
                          bool per_line = false) {
  auto train_one = [&](std::string_view text) {
    const PreparedText prepared = Prepare(text, transform, model.alphabet_size());
    for (Symbol s : prepared.symbols) model.CheckSymbol(s);
    model.Train(prepared.symbols);
  };
  if (!per_line) {
    train_one(utf8);
    return;
  }
  std::size_t start = 0;
  while (start < utf8.size()) {
    std::size_t end = utf8.find('\n', start);
    if (end == std::string_view::npos) end = utf8.size();
    std::string_view line = utf8.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) train_one(line);
    start = end + 1;
  }
}

}  // namespace parverify

#endif  // PARVERIFY_TRAINING_HPP_
