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


#include "rczf/system_model.hpp"

#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace rczf {

Index Scenario::total_layers() const {
  Index p = 0;
  for (const auto& u : users) p += u.layers;
  return p;
}

Index Scenario::total_antennas() const {
  Index q = 0;
  for (const auto& u : users) q += u.antennas;
  return q;
}

std::vector<Index> Scenario::layer_counts() const {
  std::vector<Index> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(u.layers);
  return out;
}

void Scenario::validate() const {
  if (bs_antennas < 1) {
    throw Error(ErrorCode::kInvalidInput, "scenario: t must be positive");
  }
  if (users.empty()) {
    throw Error(ErrorCode::kInvalidInput, "scenario: no users");
  }
  if (!(total_power > 0) || !std::isfinite(total_power)) {
    throw Error(ErrorCode::kInvalidInput, "scenario: power must be positive");
  }
  for (std::size_t k = 0; k < users.size(); ++k) {
    const auto& u = users[k];
    if (u.layers < 1 || u.layers > u.antennas || u.antennas > bs_antennas) {
      throw Error(ErrorCode::kInvalidInput,
                  "scenario: user " + std::to_string(k) +
                      " violates p_k <= q_k <= t (q=" + std::to_string(u.antennas) +
                      ", p=" + std::to_string(u.layers) + ")");
    }
  }
  if (total_layers() > bs_antennas) {
    throw Error(ErrorCode::kInvalidInput,
                "scenario: total layers " + std::to_string(total_layers()) +
                    " exceed t = " + std::to_string(bs_antennas));
  }
}

Scenario Scenario::uniform(Index bs_antennas, Index count, UserDims dims,
                           double total_power, std::uint64_t seed) {
  Scenario s;
  s.bs_antennas = bs_antennas;
  s.users.assign(static_cast<std::size_t>(count), dims);
  s.total_power = total_power;
  s.seed = seed;
  return s;
}

ChannelSet ChannelSet::single_user(std::size_t k) const {
  ChannelSet out;
  out.scenario = scenario;
  out.scenario.users = {scenario.users.at(k)};
  out.h = {h.at(k)};
  return out;
}

NoiseModel NoiseModel::white(const Scenario& scenario, double sigma) {
  NoiseModel n;
  n.sigma = sigma;
  for (const auto& u : scenario.users) {
    n.l.push_back(sigma * CMat::Identity(u.antennas, u.antennas));
  }
  return n;
}

NoiseModel NoiseModel::noiseless(const Scenario& scenario) { return white(scenario, 0.0); }

bool NoiseModel::is_noiseless() const {
  for (const auto& lk : l) {
    if (!lk.isZero(0.0)) return false;
  }
  return true;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr int kMaxGenerationRetries = 3;

CMat draw_gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  // Unit variance per complex entry.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(engine);
      const double im = normal(engine);
      m(i, j) = {re, im};
    }
  }
  return m;
}

}  // namespace

ChannelSet generate_channels(const Scenario& scenario) {
  scenario.validate();
  ChannelSet out;
  out.scenario = scenario;
  out.h.reserve(scenario.users.size());
  for (std::size_t k = 0; k < scenario.users.size(); ++k) {
    const auto& u = scenario.users[k];
    const std::uint64_t user_stream = derive_seed(scenario.seed, k);
    bool ok = false;
    for (int attempt = 0; attempt <= kMaxGenerationRetries && !ok; ++attempt) {
      CMat h = draw_gaussian(u.antennas, scenario.bs_antennas,
                             derive_seed(user_stream, static_cast<std::uint64_t>(attempt)));
      if (numerics::rank(h) == u.antennas) {
        out.h.push_back(std::move(h));
        ok = true;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::kGeneration,
                  "user " + std::to_string(k) + " channel stayed rank deficient");
    }
  }
  return out;
}

double single_user_signal_power(const ChannelSet& channels) {
  const double power = channels.scenario.total_power;
  double sum = 0.0;
  Index layers = 0;
  for (std::size_t k = 0; k < channels.h.size(); ++k) {
    const Index p = channels.scenario.users[k].layers;
    const RVec s = numerics::singular_values(channels.h[k]);
    // EZF alone: W_k = sqrt(P / p_k) V_k*, so layer i receives (P / p_k) s_i^2.
    for (Index i = 0; i < p; ++i) sum += power / static_cast<double>(p) * s(i) * s(i);
    layers += p;
  }
  return layers > 0 ? sum / static_cast<double>(layers) : 0.0;
}

NoiseModel calibrate_noise(const ChannelSet& channels, double su_sinr_db) {
  if (!std::isfinite(su_sinr_db)) {
    throw Error(ErrorCode::kInvalidInput, "calibrate_noise: SINR must be finite");
  }
  const double variance =
      single_user_signal_power(channels) / std::pow(10.0, su_sinr_db / 10.0);
  return NoiseModel::white(channels.scenario, std::sqrt(variance));
}

namespace {

void write_rows(std::ostream& os, const CMat& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      os << m(i, j).real() << ' ' << m(i, j).imag();
    }
    os << '\n';
  }
}

std::vector<long long> read_header(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream header(line);
  std::vector<long long> values;
  long long v = 0;
  while (header >> v) values.push_back(v);
  if (!header.eof() || values.empty()) {
    throw Error(ErrorCode::kParse, "matrix text: malformed header line '" + line + "'");
  }
  return values;
}

CMat read_rows(std::istream& is, Index rows, Index cols) {
  CMat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double re = 0.0;
      double im = 0.0;
      if (!(is >> re >> im)) {
        throw Error(ErrorCode::kParse, "matrix text: truncated data at row " +
                                           std::to_string(i) + ", column " +
                                           std::to_string(j));
      }
      m(i, j) = {re, im};
    }
  }
  return m;
}

class PrecisionGuard {
 public:
  explicit PrecisionGuard(std::ostream& os)
      : os_(os), precision_(os.precision()), flags_(os.flags()) {
    os_ << std::defaultfloat << std::setprecision(std::numeric_limits<double>::max_digits10);
  }
  ~PrecisionGuard() {
    os_.precision(precision_);
    os_.flags(flags_);
  }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  std::ostream& os_;
  std::streamsize precision_;
  std::ios_base::fmtflags flags_;
};

}  // namespace

void write_channels(std::ostream& os, const ChannelSet& channels) {
  PrecisionGuard guard(os);
  os << channels.scenario.bs_antennas;
  for (const auto& u : channels.scenario.users) os << ' ' << u.antennas << ' ' << u.layers;
  os << '\n';
  for (const auto& h : channels.h) write_rows(os, h);
}

ChannelSet read_channels(std::istream& is) {
  const auto header = read_header(is);
  if (header.size() < 3 || header.size() % 2 == 0) {
    throw Error(ErrorCode::kParse, "channel text: header must be `t q1 p1 ...`");
  }
  ChannelSet out;
  out.scenario.bs_antennas = header[0];
  for (std::size_t i = 1; i + 1 < header.size(); i += 2) {
    out.scenario.users.push_back({header[i], header[i + 1]});
  }
  out.scenario.validate();
  for (const auto& u : out.scenario.users) {
    out.h.push_back(read_rows(is, u.antennas, out.scenario.bs_antennas));
  }
  return out;
}

void write_blocks(std::ostream& os, Index bs_antennas, const std::vector<CMat>& w) {
  PrecisionGuard guard(os);
  os << bs_antennas;
  for (const auto& block : w) {
    if (block.rows() != bs_antennas) {
      throw Error(ErrorCode::kDimensionMismatch, "write_blocks: block row count != t");
    }
    os << ' ' << block.cols();
  }
  os << '\n';
  for (const auto& block : w) write_rows(os, block);
}

std::vector<CMat> read_blocks(std::istream& is) {
  const auto header = read_header(is);
  if (header.size() < 2 || header[0] < 1) {
    throw Error(ErrorCode::kParse, "block text: header must be `t p1 p2 ...`");
  }
  std::vector<CMat> out;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] < 1) throw Error(ErrorCode::kParse, "block text: non-positive width");
    out.push_back(read_rows(is, header[0], header[i]));
  }
  return out;
}

}  // namespace rczf
