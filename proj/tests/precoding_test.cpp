// Copyright 2026 The dynsub Authors
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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dynsub/channel.hpp"
#include "dynsub/codebook.hpp"
#include "dynsub/metrics.hpp"
#include "dynsub/partition.hpp"
#include "dynsub/precoding.hpp"
#include "dynsub/random.hpp"
#include "dynsub/selection.hpp"
#include "test_support.hpp"

namespace dynsub {
namespace {

using testing::identity_error;
using testing::naive_product;
using testing::random_matrix;

ComplexMatrix conj_row(std::span<const cplx> v) {
  ComplexMatrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = std::conj(v[i]);
  return m;
}

std::vector<ComplexMatrix> sample_channels(std::size_t users, std::size_t n_tx, std::uint64_t seed) {
  SystemConfig cfg;
  cfg.n_tx = n_tx;
  RandomStream rng(seed);
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < users; ++k) {
    out.push_back(assemble_channel(sample_paths(cfg, rng), n_tx, cfg.n_rx, 0.5));
  }
  return out;
}

std::vector<ComplexMatrix> full_combiners(const std::vector<ComplexMatrix>& hs) {
  std::vector<ComplexMatrix> w;
  for (const auto& h : hs) w.push_back(compute_combiner(h, 1));
  return w;
}

}  // namespace

TEST_SUITE("precoding") {
  TEST_CASE("analog beam on the full array is the best beam") {
    const Codebook cb = build_codebook(32, 64, 0.5);
    const ComplexMatrix h = random_matrix(1, 64, 1);
    const AnalogBeam a = analog_for_subarray(h, cb, full_array(64));
    const Beam b = best_beam(h, cb);
    CHECK(a.q == b.q);
    CHECK(a.gain == doctest::Approx(b.gain));
  }

  TEST_CASE("single-antenna subarray ties to codeword 0") {
    const Codebook cb = build_codebook(32, 8, 0.5);
    const std::vector<std::size_t> s{5};
    const ComplexMatrix h = random_matrix(1, 1, 2);
    CHECK(analog_for_subarray(h, cb, s).q == 0);
  }

  TEST_CASE("analog beam equals brute force over restricted codewords") {
    const Codebook cb = build_codebook(32, 16, 0.5);
    const std::vector<std::size_t> s{2, 3, 7, 11, 16};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ComplexMatrix h = random_matrix(1, s.size(), 50 + seed);
      std::size_t arg = 0;
      double best = -1.0;
      for (std::size_t q = 0; q < 32; ++q) {
        cplx acc{};
        for (std::size_t i = 0; i < s.size(); ++i) acc += h(0, i) * cb.codeword(q)[s[i] - 1];
        // Mirrored codewords tie up to rounding; the smaller index keeps them.
        if (std::norm(acc) > best * (1.0 + 1e-10)) {
          best = std::norm(acc);
          arg = q;
        }
      }
      const AnalogBeam a = analog_for_subarray(h, cb, s);
      CHECK(a.q == arg);
      CHECK(a.gain == doctest::Approx(best));
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(a.weights[i] == cb.codeword(arg)[s[i] - 1]);
    }
  }

  TEST_CASE("analog beam rejects an empty subset") {
    const Codebook cb = build_codebook(4, 4, 0.5);
    CHECK_THROWS_AS(analog_for_subarray(ComplexMatrix(1, 1), cb, {}), std::invalid_argument);
  }

  TEST_CASE("effective channel entries match per-term products") {
    const ComplexMatrix f = random_matrix(6, 2, 3);
    const std::vector<ComplexMatrix> h{random_matrix(1, 6, 4), random_matrix(1, 6, 5)};
    const ComplexMatrix g = effective_mu_channel(f, h);
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        cplx acc{};
        for (std::size_t a = 0; a < 6; ++a) acc += h[k](0, a) * f(a, i);
        CHECK(std::abs(g(k, i) - acc) < 1e-13);
      }
    }
  }

  TEST_CASE("single user effective channel is a scalar") {
    const ComplexMatrix f = random_matrix(4, 1, 6);
    const std::vector<ComplexMatrix> h{random_matrix(1, 4, 7)};
    const ComplexMatrix g = effective_mu_channel(f, h);
    CHECK(g.rows() == 1);
    CHECK(g.cols() == 1);
  }

  TEST_CASE("disjoint supports give a diagonal effective channel") {
    const Codebook cb = build_codebook(8, 4, 0.5);
    ComplexMatrix f(4, 2);
    ComplexMatrix h0(1, 4);
    ComplexMatrix h1(1, 4);
    for (std::size_t a = 0; a < 2; ++a) {
      f(a, 0) = cb.codeword(1)[a];
      h0(0, a) = std::conj(cb.codeword(1)[a]);
    }
    for (std::size_t a = 2; a < 4; ++a) {
      f(a, 1) = cb.codeword(3)[a];
      h1(0, a) = std::conj(cb.codeword(3)[a]);
    }
    const std::vector<ComplexMatrix> h{h0, h1};
    const ComplexMatrix g = effective_mu_channel(f, h);
    CHECK(std::abs(g(0, 1)) == 0.0);
    CHECK(std::abs(g(1, 0)) == 0.0);
    CHECK(g(0, 0).real() == doctest::Approx(2.0));
    CHECK(g(1, 1).real() == doctest::Approx(2.0));
  }

  TEST_CASE("zero forcing examples") {
    CHECK(identity_error(zf_digital(ComplexMatrix::identity(2))) < 1e-15);
    const std::vector<double> d{2.0, 5.0, 0.5};
    const ComplexMatrix inv = zf_digital(ComplexMatrix::diagonal(d));
    for (std::size_t i = 0; i < 3; ++i) CHECK(inv(i, i).real() == doctest::Approx(1.0 / d[i]));
    const ComplexMatrix g = random_matrix(4, 4, 8);
    CHECK(identity_error(naive_product(g, zf_digital(g))) < 1e-9);
    CHECK_THROWS_AS(zf_digital(ComplexMatrix(2, 2)), SingularMatrixError);
  }

  TEST_CASE("matched filter examples") {
    CHECK(identity_error(mf_digital(ComplexMatrix::identity(2))) < 1e-15);
    const ComplexMatrix half = mf_digital(cplx(2.0) * ComplexMatrix::identity(2));
    CHECK(half(0, 0).real() == doctest::Approx(0.5));
    CHECK(half(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(half(0, 1)) == 0.0);

    const ComplexMatrix g = random_matrix(3, 3, 9);
    const ComplexMatrix f = mf_digital(g);
    for (std::size_t k = 0; k < 3; ++k) {
      double row = 0.0;
      for (std::size_t i = 0; i < 3; ++i) row += std::norm(g(k, i));
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(f(i, k) - std::conj(g(k, i)) / row) < 1e-14);
    }
    ComplexMatrix zero_row = g;
    for (std::size_t i = 0; i < 3; ++i) zero_row(1, i) = 0.0;
    CHECK_THROWS_AS(mf_digital(zero_row), SingularMatrixError);
  }

  TEST_CASE("power normalization hits N_s per user and is idempotent") {
    HybridPrecoder p{std::nullopt, {0, 0, 0}, random_matrix(8, 3, 10), random_matrix(3, 3, 11)};
    const HybridPrecoder n = normalize_power(p, 1);
    for (double pw : per_user_power(n)) CHECK(std::abs(pw - 1.0) < 1e-12);
    const HybridPrecoder again = normalize_power(n, 1);
    CHECK(testing::max_abs_diff(again.digital, n.digital) < 1e-14);

    HybridPrecoder doubled = p;
    doubled.digital *= 2.0;
    CHECK(testing::max_abs_diff(normalize_power(doubled, 1).digital, n.digital) < 1e-14);

    p.digital = ComplexMatrix(3, 3);
    CHECK_THROWS_AS(normalize_power(p, 1), std::invalid_argument);
  }

  TEST_CASE("subarray precoder structure") {
    const std::size_t n_tx = 32;
    const Codebook cb = build_codebook(32, n_tx, 0.5);
    const std::vector<ComplexMatrix> hs = sample_channels(4, n_tx, 12);
    for (const Partition& part : {fixed_adjacent(n_tx, 4), fixed_interlaced(n_tx, 4)}) {
      for (DigitalMode mode : {DigitalMode::zf, DigitalMode::mf}) {
        const PrecodedLink link = subarray_precoder(part, hs, cb, 1, mode);
        const HybridPrecoder& pre = link.precoder;
        REQUIRE(pre.partition.has_value());
        for (std::size_t k = 0; k < 4; ++k) {
          std::vector<bool> on(n_tx, false);
          for (std::size_t a : part.subsets[k]) on[a - 1] = true;
          for (std::size_t a = 0; a < n_tx; ++a) {
            if (on[a]) {
              CHECK(std::abs(pre.analog(a, k)) == doctest::Approx(1.0).epsilon(1e-15));
            } else {
              CHECK(pre.analog(a, k) == cplx(0.0));
            }
          }
          // Combiner comes from the channel restricted to the subarray.
          const ComplexMatrix w = compute_combiner(restrict_channel(hs[k], part.subsets[k]), 1);
          CHECK(testing::max_abs_diff(link.combiners[k], w) < 1e-12);
          const AnalogBeam beam = analog_for_subarray(w * restrict_channel(hs[k], part.subsets[k]), cb, part.subsets[k]);
          CHECK(pre.codewords[k] == beam.q);
        }
        for (double pw : per_user_power(pre)) CHECK(std::abs(pw - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("zero forcing cancels cross terms for the fully connected array") {
    const std::size_t n_tx = 64;
    const Codebook cb = build_codebook(32, n_tx, 0.5);
    const std::vector<ComplexMatrix> hs = sample_channels(2, n_tx, 13);
    const std::vector<ComplexMatrix> ws = full_combiners(hs);
    const PrecodedLink link = fully_connected_precoder(hs, ws, cb, 1, DigitalMode::zf);
    CHECK_FALSE(link.precoder.partition.has_value());
    for (std::size_t a = 0; a < n_tx; ++a) {
      for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(link.precoder.analog(a, k)) == doctest::Approx(1.0));
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const ComplexMatrix rx = ws[k] * hs[k] * link.precoder.analog * link.precoder.digital;
      CHECK(std::abs(rx(0, 1 - k)) < 1e-9 * std::abs(rx(0, k)));
    }
    for (double pw : per_user_power(link.precoder)) CHECK(std::abs(pw - 1.0) < 1e-12);
  }

  TEST_CASE("single user fully connected rate is beamforming gain over noise") {
    const std::size_t n_tx = 16;
    const Codebook cb = build_codebook(32, n_tx, 0.5);
    const std::vector<ComplexMatrix> hs = sample_channels(1, n_tx, 14);
    const std::vector<ComplexMatrix> ws = full_combiners(hs);
    const double noise = 0.25;
    for (DigitalMode mode : {DigitalMode::zf, DigitalMode::mf}) {
      const PrecodedLink link = fully_connected_precoder(hs, ws, cb, 1, mode);
      const Beam b = best_beam(ws[0] * hs[0], cb);
      const double expected = std::log2(1.0 + b.gain / static_cast<double>(n_tx) / noise);
      CHECK(per_user_rate(0, link.precoder, hs, link.combiners, noise) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("orthogonal users make zero forcing and matched filter agree up to scaling") {
    // n_tx = 4, N_Q = 4: codewords 0 and 1 are orthogonal.
    const Codebook cb = build_codebook(4, 4, 0.5);
    ComplexMatrix h0(2, 4);
    ComplexMatrix h1(2, 4);
    for (std::size_t a = 0; a < 4; ++a) {
      h0(0, a) = std::conj(cb.codeword(0)[a]);
      h1(0, a) = 2.0 * std::conj(cb.codeword(1)[a]);
    }
    const std::vector<ComplexMatrix> hs{h0, h1};
    const std::vector<ComplexMatrix> ws = full_combiners(hs);
    const PrecodedLink zf = fully_connected_precoder(hs, ws, cb, 1, DigitalMode::zf);
    const PrecodedLink mf = fully_connected_precoder(hs, ws, cb, 1, DigitalMode::mf);
    CHECK(testing::max_abs_diff(zf.precoder.digital, mf.precoder.digital) < 1e-12);
  }

  TEST_CASE("precoder rejects mismatched inputs") {
    const Codebook cb = build_codebook(8, 8, 0.5);
    const std::vector<ComplexMatrix> hs = sample_channels(2, 8, 15);
    CHECK_THROWS_AS(subarray_precoder(fixed_adjacent(8, 4), hs, cb, 1, DigitalMode::zf), std::invalid_argument);
    const std::vector<ComplexMatrix> one_w = full_combiners({hs[0]});
    CHECK_THROWS_AS(fully_connected_precoder(hs, one_w, cb, 1, DigitalMode::zf), std::invalid_argument);
  }

  TEST_CASE("digital mode names round trip") {
    CHECK(parse_digital_mode(to_string(DigitalMode::zf)) == DigitalMode::zf);
    CHECK(parse_digital_mode(to_string(DigitalMode::mf)) == DigitalMode::mf);
    CHECK_THROWS_AS(parse_digital_mode("mmse"), std::invalid_argument);
  }
}

}  // namespace dynsub
