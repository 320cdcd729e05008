/*
 * Copyright 2026 The MAFUS Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAFUS_SYNTH_H_
#define MAFUS_SYNTH_H_

#include <cstdint>

#include "mafus/data.h"

namespace mafus::synth {

struct SynthSpec {
  std::size_t n = 1000;
  double prevalence = 0.2;
  // Class-1 mean shift, in standard deviations, on Age, Blood Glucose and
  // HOMA.
  double signal = 3.0;
  // Smaller shift on the other six continuous features of the reference
  // selection (HDL-C, BMI, Weight, LDL-C, TC, Triglycerides). Zero by default.
  double secondary_signal = 0.0;
  std::uint64_t seed = 1;
  // Exactly round(prevalence * n) class-1 rows instead of Bernoulli draws.
  bool exact_count = false;
  // Rows that get one missing feature cell (for exercising the cleaner).
  std::size_t missing_rows = 0;
};

// Gaussian cohort in the default 25-column layout. Continuous features are
// drawn independently around clinical-looking means; categoricals are small
// integer codes. Deterministic in spec.seed.
data::Cohort gen_synthetic(const SynthSpec& spec);

}  // namespace mafus::synth

#endif  // MAFUS_SYNTH_H_
