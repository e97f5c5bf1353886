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

#ifndef PARVERIFY_PARVERIFY_HPP_
#define PARVERIFY_PARVERIFY_HPP_

#include "parverify/corpus.hpp"
#include "parverify/entropy_coder.hpp"
#include "parverify/error.hpp"
#include "parverify/metrics.hpp"
#include "parverify/model_io.hpp"
#include "parverify/parallel.hpp"
#include "parverify/ppm_model.hpp"
#include "parverify/preprocess.hpp"
#include "parverify/range_coder.hpp"
#include "parverify/rational.hpp"
#include "parverify/report.hpp"
#include "parverify/sentence_pair.hpp"
#include "parverify/snapshot.hpp"
#include "parverify/training.hpp"

#endif  // PARVERIFY_PARVERIFY_HPP_
