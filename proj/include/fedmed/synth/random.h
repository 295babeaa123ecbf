// Copyright 2026 The FedMed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDMED_SYNTH_RANDOM_H_
#define FEDMED_SYNTH_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace fedmed {

// Portable pseudo-random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every distribution below is
// implemented here rather than taken from <random>, whose distributions are
// implementation-defined. Hence identical seeds give identical draws on every
// platform.
//
//   Uniform():  53 high bits of one engine word, scaled to [0, 1).
//   Normal():   Box-Muller on two Uniform() draws; the cosine branch is used
//               and the sine branch cached for the next call.
//   Poisson():  Knuth's multiplication method (fine for small means).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double Uniform();
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }
  // exp(N(mu, sigma)) parameterized by the distribution's own mean and sd.
  double LogNormalByMoments(double mean, double sd);
  bool Bernoulli(double p) { return Uniform() < p; }
  int64_t UniformInt(int64_t lo, int64_t hi);  // inclusive
  int64_t Poisson(double mean);
  // Index drawn proportionally to non-negative weights.
  size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive independent per-site seeds.
uint64_t MixSeed(uint64_t x);

}  // namespace fedmed

#endif  // FEDMED_SYNTH_RANDOM_H_
