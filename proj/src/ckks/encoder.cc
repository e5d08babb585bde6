/*
 * Copyright 2026 The hecredit Authors.
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

#include "hecredit/ckks/encoder.h"

#include <bit>
#include <cmath>
#include <numbers>

#include "hecredit/common/error.h"

namespace hecredit::ckks {

namespace {

// Coefficients beyond this cannot be carried through int64 residues safely.
constexpr double kMaxCoefficient = 4.0e18;

}  // namespace

Encoder::Encoder(std::shared_ptr<const ring::RingContext> context)
    : context_(std::move(context)), n_(context_->degree()), slots_(n_ / 2) {
  const double pi = std::numbers::pi;
  twist_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) twist_[k] = std::polar(1.0, pi * static_cast<double>(k) / n_);
  fft_roots_.resize(n_ / 2);
  for (std::size_t k = 0; k < n_ / 2; ++k) {
    fft_roots_[k] = std::polar(1.0, 2.0 * pi * static_cast<double>(k) / n_);
  }
  const std::size_t two_n = 2 * n_;
  slot_index_.resize(slots_);
  conj_index_.resize(slots_);
  std::size_t g = 1;
  for (std::size_t j = 0; j < slots_; ++j) {
    slot_index_[j] = (g - 1) / 2;
    conj_index_[j] = (two_n - g - 1) / 2;
    g = (g * 5) % two_n;
  }
  const int log_n = std::countr_zero(n_);
  bit_reverse_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < log_n; ++b) r |= ((i >> b) & 1) << (log_n - 1 - b);
    bit_reverse_[i] = r;
  }
}

// A_t = sum_k a_k exp(+-2 pi i t k / N), unnormalized.
void Encoder::Fft(std::vector<std::complex<double>>& a, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bit_reverse_[i]) std::swap(a[i], a[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = fft_roots_[k * stride];
        if (inverse) w = std::conj(w);
        std::complex<double> u = a[start + k];
        std::complex<double> v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

Plaintext Encoder::Encode(std::span<const double> values, double scale, std::size_t level) const {
  if (values.size() > slots_) {
    throw Error(ErrorCode::kInvalidArgument, "vector of " + std::to_string(values.size()) +
                                                 " values exceeds " + std::to_string(slots_) + " slots");
  }
  if (!(scale > 0) || !std::isfinite(scale)) throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  std::vector<std::complex<double>> a(n_);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) throw Error(ErrorCode::kInvalidArgument, "non-finite input value");
    a[slot_index_[j]] = values[j];
    a[conj_index_[j]] = values[j];
  }
  Fft(a, /*inverse=*/true);
  std::vector<std::int64_t> coeffs(n_);
  const double norm = scale / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double c = std::round((a[k] * std::conj(twist_[k])).real() * norm);
    if (std::abs(c) > kMaxCoefficient) {
      throw Error(ErrorCode::kOutOfRange, "encoded coefficient overflows at this scale");
    }
    coeffs[k] = static_cast<std::int64_t>(c);
  }
  return Plaintext{ring::RnsPoly::FromSigned(context_, level, coeffs), scale};
}

Plaintext Encoder::EncodeConstant(double value, double scale, std::size_t level) const {
  std::vector<double> v(slots_, value);
  return Encode(v, scale, level);
}

std::vector<double> Encoder::Decode(const Plaintext& pt) const {
  const ring::RnsPoly& poly = pt.poly;
  std::vector<double> c = poly.is_ntt() ? ring::ToCenteredDoubles(ring::NttInverse(poly))
                                        : ring::ToCenteredDoubles(poly);
  std::vector<std::complex<double>> a(n_);
  for (std::size_t k = 0; k < n_; ++k) a[k] = c[k] * twist_[k];
  Fft(a, /*inverse=*/false);
  std::vector<double> out(slots_);
  for (std::size_t j = 0; j < slots_; ++j) out[j] = a[slot_index_[j]].real() / pt.scale;
  return out;
}

}  // namespace hecredit::ckks
