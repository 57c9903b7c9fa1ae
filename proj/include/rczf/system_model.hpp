// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rczf-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rczf/numerics.hpp"

namespace rczf {

struct UserDims {
  Index antennas = 0;  // q_k
  Index layers = 0;    // p_k
};

/// Downlink scenario: one base station with `bs_antennas` transmit antennas
/// serving `users`, under a total transmit power budget.
struct Scenario {
  Index bs_antennas = 64;
  std::vector<UserDims> users;
  double total_power = 1.0;
  std::uint64_t seed = 1;

  Index total_layers() const;
  Index total_antennas() const;
  std::vector<Index> layer_counts() const;

  /// Throws kInvalidInput unless p_k <= q_k <= t for every user and the
  /// total layer count fits on t antennas.
  void validate() const;

  /// `count` identical users.
  static Scenario uniform(Index bs_antennas, Index count, UserDims dims,
                          double total_power = 1.0, std::uint64_t seed = 1);
};

/// Per-user channels H_k, each q_k x t.
struct ChannelSet {
  Scenario scenario;
  std::vector<CMat> h;

  std::size_t user_count() const { return h.size(); }

  /// The same channels restricted to one user, for single-user service.
  ChannelSet single_user(std::size_t k) const;
};

/// External noise n_k = L_k n'_k with n'_k white. `sigma` records the
/// isotropic level when L_k = sigma I and is zero for the noiseless system.
struct NoiseModel {
  std::vector<CMat> l;
  double sigma = 0.0;

  static NoiseModel white(const Scenario& scenario, double sigma);
  static NoiseModel noiseless(const Scenario& scenario);

  bool is_noiseless() const;
};

/// Mixes a base seed with a stream index (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// I.i.d. CN(0, 1) channels; user k draws from its own substream so the
/// result does not depend on generation order.
ChannelSet generate_channels(const Scenario& scenario);

/// Mean per-layer received power when every user is served alone by its
/// eigen zero-forcing precoder at the full power budget.
double single_user_signal_power(const ChannelSet& channels);

/// White noise sigma I with sigma^2 = P_su / 10^(su_sinr_db / 10).
NoiseModel calibrate_noise(const ChannelSet& channels, double su_sinr_db);

// Text fixture format: header `t q1 p1 q2 p2 ...`, then for each user its
// q_k rows, each row t whitespace-separated `re im` pairs.
void write_channels(std::ostream& os, const ChannelSet& channels);
ChannelSet read_channels(std::istream& is);

// Precoder blocks use the same layout with header `t p1 p2 ...` and t rows
// of p_k pairs per user.
void write_blocks(std::ostream& os, Index bs_antennas, const std::vector<CMat>& w);
std::vector<CMat> read_blocks(std::istream& is);

}  // namespace rczf
