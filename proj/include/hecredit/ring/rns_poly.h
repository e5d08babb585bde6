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

#ifndef HECREDIT_RING_RNS_POLY_H_
#define HECREDIT_RING_RNS_POLY_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hecredit/ring/random.h"
#include "hecredit/ring/ring_context.h"

namespace hecredit::ring {

enum class PolyForm : std::uint8_t { kCoefficient = 0, kNtt = 1 };

// A polynomial of Z_Q[X]/(X^N + 1) held as residues modulo primes 0..level
// of its context's chain. Residues of prime i occupy one contiguous row.
class RnsPoly {
 public:
  // Zero polynomial.
  RnsPoly(std::shared_ptr<const RingContext> context, std::size_t level,
          PolyForm form = PolyForm::kCoefficient);

  // Coefficient-form polynomial with the given signed integer coefficients.
  static RnsPoly FromSigned(std::shared_ptr<const RingContext> context, std::size_t level,
                            std::span<const std::int64_t> coeffs);

  const RingContext& context() const { return *context_; }
  const std::shared_ptr<const RingContext>& shared_context() const { return context_; }
  std::size_t degree() const { return context_->degree(); }
  std::size_t level() const { return level_; }
  std::size_t prime_count() const { return level_ + 1; }
  PolyForm form() const { return form_; }
  bool is_ntt() const { return form_ == PolyForm::kNtt; }

  std::span<std::uint64_t> residue(std::size_t i) {
    return {data_.data() + i * degree(), degree()};
  }
  std::span<const std::uint64_t> residue(std::size_t i) const {
    return {data_.data() + i * degree(), degree()};
  }

  // Relabels the form without transforming. For deserialization only.
  void set_form(PolyForm form) { form_ = form; }

  bool IsZero() const;

  friend bool operator==(const RnsPoly& a, const RnsPoly& b);

 private:
  std::shared_ptr<const RingContext> context_;
  std::size_t level_;
  PolyForm form_;
  std::vector<std::uint64_t> data_;
};

// Negacyclic NTT per prime. Throw kInvalidArgument on wrong-domain input.
RnsPoly NttForward(RnsPoly p);
RnsPoly NttInverse(RnsPoly p);

// Coefficient-wise arithmetic. Operands must agree on context, level and
// form (kShapeMismatch / kLevelMismatch otherwise).
RnsPoly Add(const RnsPoly& a, const RnsPoly& b);
RnsPoly Sub(const RnsPoly& a, const RnsPoly& b);
RnsPoly Negate(const RnsPoly& a);

// Negacyclic product. NTT-form operands multiply pointwise; coefficient-form
// operands are transformed internally and the result is in coefficient form.
RnsPoly Multiply(const RnsPoly& a, const RnsPoly& b);

// Multiplies every residue row i by scalars[i] (already reduced mod q_i).
RnsPoly MultiplyScalar(const RnsPoly& a, std::span<const std::uint64_t> scalars);

// Divides by the last prime of the chain and rounds to nearest (ties up),
// returning a polynomial one level lower. With rounding off the quotient is
// floored instead. Requires coefficient form and level >= 1.
RnsPoly DropLastPrime(const RnsPoly& p, bool rounding = true);

// Keeps residues 0..level, i.e. reduces modulo a smaller product of primes
// without division.
RnsPoly TruncateToLevel(const RnsPoly& p, std::size_t level);

// X -> X^galois_element on a coefficient-form polynomial. The element must be
// odd and below 2N.
RnsPoly ApplyAutomorphism(const RnsPoly& p, std::size_t galois_element);

// Centered representative of every coefficient modulo the product of the
// polynomial's primes, converted to double. Coefficient form only.
std::vector<double> ToCenteredDoubles(const RnsPoly& p);

// Samplers. Results are in coefficient form unless stated; a uniform sample is
// uniform in either domain so its form is caller-chosen.
RnsPoly SampleUniform(std::shared_ptr<const RingContext> context, std::size_t level,
                      RandomSource& rng, PolyForm form = PolyForm::kCoefficient);
RnsPoly SampleTernary(std::shared_ptr<const RingContext> context, std::size_t level,
                      RandomSource& rng);
RnsPoly SampleGaussian(std::shared_ptr<const RingContext> context, std::size_t level,
                       double sigma, RandomSource& rng);

// Signed coefficient draws backing the samplers above.
std::vector<std::int64_t> SampleTernaryCoeffs(std::size_t n, RandomSource& rng);
// Rounded normal(0, sigma), redrawn when |c| > 6 sigma.
std::vector<std::int64_t> SampleGaussianCoeffs(std::size_t n, double sigma, RandomSource& rng);

inline constexpr double kDefaultNoiseStddev = 3.2;

}  // namespace hecredit::ring

#endif  // HECREDIT_RING_RNS_POLY_H_
