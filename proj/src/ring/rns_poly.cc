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

#include "hecredit/ring/rns_poly.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "hecredit/common/error.h"

namespace hecredit::ring {
namespace {

void RequireSameShape(const RnsPoly& a, const RnsPoly& b) {
  if (a.degree() != b.degree() || a.context().primes() != b.context().primes()) {
    throw Error(ErrorCode::kShapeMismatch, "polynomials belong to different rings");
  }
  if (a.level() != b.level()) {
    throw Error(ErrorCode::kLevelMismatch, "polynomial levels differ: " + std::to_string(a.level()) +
                                               " vs " + std::to_string(b.level()));
  }
  if (a.form() != b.form()) throw Error(ErrorCode::kShapeMismatch, "polynomial forms differ");
}

// Mixed-radix (Garner) digits of one coefficient. Value = sum_i v_i * prod_{j<i} q_j.
template <typename Acc>
Acc GarnerCompose(const std::vector<std::vector<std::uint64_t>>& inv, const std::vector<std::uint64_t>& q,
                  std::vector<std::uint64_t>& v, const RnsPoly& p, std::size_t k) {
  const std::size_t count = q.size();
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t s = p.residue(i)[k];
    for (std::size_t j = 0; j < i; ++j) {
      s = MulMod(SubMod(s, v[j] % q[i], q[i]), inv[j][i], q[i]);
    }
    v[i] = s;
  }
  Acc x = 0;
  Acc radix = 1;
  for (std::size_t i = 0; i < count; ++i) {
    x += Acc(v[i]) * radix;
    radix *= Acc(q[i]);
  }
  return x;
}

}  // namespace

RnsPoly::RnsPoly(std::shared_ptr<const RingContext> context, std::size_t level, PolyForm form)
    : context_(std::move(context)), level_(level), form_(form) {
  if (!context_) throw Error(ErrorCode::kInvalidArgument, "null ring context");
  if (level_ > context_->max_level()) {
    throw Error(ErrorCode::kOutOfRange, "level " + std::to_string(level_) + " exceeds modulus chain");
  }
  data_.assign((level_ + 1) * context_->degree(), 0);
}

RnsPoly RnsPoly::FromSigned(std::shared_ptr<const RingContext> context, std::size_t level,
                            std::span<const std::int64_t> coeffs) {
  RnsPoly p(std::move(context), level);
  if (coeffs.size() != p.degree()) {
    throw Error(ErrorCode::kShapeMismatch, "coefficient count does not match ring degree");
  }
  for (std::size_t i = 0; i <= level; ++i) {
    const std::uint64_t q = p.context().modulus(i);
    auto row = p.residue(i);
    for (std::size_t k = 0; k < coeffs.size(); ++k) row[k] = ReduceSigned(coeffs[k], q);
  }
  return p;
}

bool RnsPoly::IsZero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t v) { return v == 0; });
}

bool operator==(const RnsPoly& a, const RnsPoly& b) {
  return a.level_ == b.level_ && a.form_ == b.form_ && a.degree() == b.degree() &&
         a.context_->primes() == b.context_->primes() && a.data_ == b.data_;
}

RnsPoly NttForward(RnsPoly p) {
  if (p.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "NttForward on NTT-form polynomial");
  for (std::size_t i = 0; i < p.prime_count(); ++i) p.context().ntt(i).Forward(p.residue(i));
  p.set_form(PolyForm::kNtt);
  return p;
}

RnsPoly NttInverse(RnsPoly p) {
  if (!p.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "NttInverse on coefficient-form polynomial");
  for (std::size_t i = 0; i < p.prime_count(); ++i) p.context().ntt(i).Inverse(p.residue(i));
  p.set_form(PolyForm::kCoefficient);
  return p;
}

RnsPoly Add(const RnsPoly& a, const RnsPoly& b) {
  RequireSameShape(a, b);
  RnsPoly out = a;
  for (std::size_t i = 0; i < a.prime_count(); ++i) {
    const std::uint64_t q = a.context().modulus(i);
    auto o = out.residue(i);
    auto y = b.residue(i);
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = AddMod(o[k], y[k], q);
  }
  return out;
}

RnsPoly Sub(const RnsPoly& a, const RnsPoly& b) {
  RequireSameShape(a, b);
  RnsPoly out = a;
  for (std::size_t i = 0; i < a.prime_count(); ++i) {
    const std::uint64_t q = a.context().modulus(i);
    auto o = out.residue(i);
    auto y = b.residue(i);
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = SubMod(o[k], y[k], q);
  }
  return out;
}

RnsPoly Negate(const RnsPoly& a) {
  RnsPoly out = a;
  for (std::size_t i = 0; i < a.prime_count(); ++i) {
    const std::uint64_t q = a.context().modulus(i);
    for (auto& x : out.residue(i)) x = NegMod(x, q);
  }
  return out;
}

RnsPoly Multiply(const RnsPoly& a, const RnsPoly& b) {
  RequireSameShape(a, b);
  if (!a.is_ntt()) return NttInverse(Multiply(NttForward(a), NttForward(b)));
  RnsPoly out = a;
  for (std::size_t i = 0; i < a.prime_count(); ++i) {
    const std::uint64_t q = a.context().modulus(i);
    auto o = out.residue(i);
    auto y = b.residue(i);
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = MulMod(o[k], y[k], q);
  }
  return out;
}

RnsPoly MultiplyScalar(const RnsPoly& a, std::span<const std::uint64_t> scalars) {
  if (scalars.size() < a.prime_count()) {
    throw Error(ErrorCode::kShapeMismatch, "one scalar per prime required");
  }
  RnsPoly out = a;
  for (std::size_t i = 0; i < a.prime_count(); ++i) {
    const std::uint64_t q = a.context().modulus(i);
    const std::uint64_t s = scalars[i] % q;
    const std::uint64_t ss = ShoupPrecompute(s, q);
    for (auto& x : out.residue(i)) x = MulModShoup(x, s, ss, q);
  }
  return out;
}

RnsPoly DropLastPrime(const RnsPoly& p, bool rounding) {
  if (p.level() == 0) throw Error(ErrorCode::kOutOfRange, "cannot drop the last remaining prime");
  if (p.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "DropLastPrime requires coefficient form");
  const std::size_t last = p.level();
  const std::uint64_t q_last = p.context().modulus(last);
  const std::uint64_t half = rounding ? q_last >> 1 : 0;
  RnsPoly out(p.shared_context(), last - 1);
  auto top = p.residue(last);
  for (std::size_t i = 0; i < last; ++i) {
    const std::uint64_t q = p.context().modulus(i);
    const std::uint64_t inv = InvMod(q_last % q, q);
    const std::uint64_t inv_shoup = ShoupPrecompute(inv, q);
    const std::uint64_t half_i = half % q;
    auto src = p.residue(i);
    auto dst = out.residue(i);
    for (std::size_t k = 0; k < src.size(); ++k) {
      // (x + half) - ((x + half) mod q_last) is divisible by q_last.
      std::uint64_t r = AddMod(top[k], half, q_last) % q;
      std::uint64_t x = AddMod(src[k], half_i, q);
      dst[k] = MulModShoup(SubMod(x, r, q), inv, inv_shoup, q);
    }
  }
  return out;
}

RnsPoly TruncateToLevel(const RnsPoly& p, std::size_t level) {
  if (level > p.level()) throw Error(ErrorCode::kOutOfRange, "cannot raise a polynomial's level");
  RnsPoly out(p.shared_context(), level, p.form());
  for (std::size_t i = 0; i <= level; ++i) {
    auto src = p.residue(i);
    std::copy(src.begin(), src.end(), out.residue(i).begin());
  }
  return out;
}

RnsPoly ApplyAutomorphism(const RnsPoly& p, std::size_t galois_element) {
  if (p.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "automorphism requires coefficient form");
  const std::size_t n = p.degree();
  const std::size_t two_n = 2 * n;
  if (galois_element % 2 == 0 || galois_element >= two_n) {
    throw Error(ErrorCode::kInvalidArgument, "galois element must be odd and below 2N");
  }
  RnsPoly out(p.shared_context(), p.level());
  for (std::size_t i = 0; i < p.prime_count(); ++i) {
    const std::uint64_t q = p.context().modulus(i);
    auto src = p.residue(i);
    auto dst = out.residue(i);
    std::size_t index = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (index < n) {
        dst[index] = src[k];
      } else {
        dst[index - n] = NegMod(src[k], q);
      }
      index = (index + galois_element) % two_n;
    }
  }
  return out;
}

std::vector<double> ToCenteredDoubles(const RnsPoly& p) {
  if (p.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "ToCenteredDoubles requires coefficient form");
  const std::size_t n = p.degree();
  std::vector<double> out(n);
  if (p.level() == 0) {
    const std::uint64_t q = p.context().modulus(0);
    auto row = p.residue(0);
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<double>(Centered(row[k], q));
    return out;
  }
  const std::size_t count = p.prime_count();
  std::vector<std::uint64_t> q(count);
  int total_bits = 0;
  for (std::size_t i = 0; i < count; ++i) {
    q[i] = p.context().modulus(i);
    total_bits += p.context().primes()[i].bit_size;
  }
  std::vector<std::vector<std::uint64_t>> inv(count, std::vector<std::uint64_t>(count, 0));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = j + 1; i < count; ++i) inv[j][i] = InvMod(q[j] % q[i], q[i]);
  }
  std::vector<std::uint64_t> digits(count);
  if (total_bits <= 125) {
    unsigned __int128 big_q = 1;
    for (auto qi : q) big_q *= qi;
    for (std::size_t k = 0; k < n; ++k) {
      unsigned __int128 x = GarnerCompose<unsigned __int128>(inv, q, digits, p, k);
      out[k] = x > big_q / 2 ? -static_cast<double>(big_q - x) : static_cast<double>(x);
    }
    return out;
  }
  using boost::multiprecision::cpp_int;
  cpp_int big_q = 1;
  for (auto qi : q) big_q *= qi;
  const cpp_int half = big_q / 2;
  for (std::size_t k = 0; k < n; ++k) {
    cpp_int x = GarnerCompose<cpp_int>(inv, q, digits, p, k);
    if (x > half) x -= big_q;
    out[k] = x.convert_to<double>();
  }
  return out;
}

RnsPoly SampleUniform(std::shared_ptr<const RingContext> context, std::size_t level, RandomSource& rng,
                      PolyForm form) {
  RnsPoly p(std::move(context), level, form);
  for (std::size_t i = 0; i <= level; ++i) {
    const std::uint64_t q = p.context().modulus(i);
    for (auto& x : p.residue(i)) x = rng.UniformBelow(q);
  }
  return p;
}

std::vector<std::int64_t> SampleTernaryCoeffs(std::size_t n, RandomSource& rng) {
  std::vector<std::int64_t> c(n);
  for (auto& x : c) x = static_cast<std::int64_t>(rng.UniformBelow(3)) - 1;
  return c;
}

std::vector<std::int64_t> SampleGaussianCoeffs(std::size_t n, double sigma, RandomSource& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  const double bound = 6.0 * sigma;
  std::vector<std::int64_t> c(n);
  for (auto& x : c) {
    double v;
    do {
      v = std::round(normal(rng));
    } while (std::abs(v) > bound);
    x = static_cast<std::int64_t>(v);
  }
  return c;
}

RnsPoly SampleTernary(std::shared_ptr<const RingContext> context, std::size_t level, RandomSource& rng) {
  auto coeffs = SampleTernaryCoeffs(context->degree(), rng);
  return RnsPoly::FromSigned(std::move(context), level, coeffs);
}

RnsPoly SampleGaussian(std::shared_ptr<const RingContext> context, std::size_t level, double sigma,
                       RandomSource& rng) {
  auto coeffs = SampleGaussianCoeffs(context->degree(), sigma, rng);
  return RnsPoly::FromSigned(std::move(context), level, coeffs);
}

}  // namespace hecredit::ring
