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

// Acceptance run. Prints one PASS or FAIL line per criterion and exits
// nonzero if any fails. Set HECREDIT_CREDIT_CSV to the public credit risk
// CSV to include the real-data accuracy check.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hecredit/bench/report.h"
#include "hecredit/bench/scenario.h"
#include "hecredit/ckks/context.h"
#include "hecredit/ckks/evaluator.h"
#include "hecredit/common/log.h"
#include "hecredit/data/dataset.h"
#include "hecredit/lr/model.h"
#include "hecredit/mqtt/codec.h"
#include "hecredit/ring/modulus.h"
#include "hecredit/ring/random.h"
#include "hecredit/ring/ring_context.h"
#include "hecredit/ring/rns_poly.h"
#include "support/leak_scan.h"
#include "support/packet_gen.h"

namespace hecredit {
namespace {

using boost::multiprecision::cpp_int;
using ring::RandomSource;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double SecondsSince(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------
// 1. Ring arithmetic against schoolbook and big-integer CRT oracles.

std::shared_ptr<const ring::RingContext> SmallRing(std::size_t n, std::vector<std::uint64_t> qs) {
  std::vector<ring::NttPrime> primes;
  for (auto q : qs) primes.push_back({q, static_cast<int>(std::bit_width(q)), ring::FindPrimitiveRoot(q, n)});
  return ring::RingContext::Create(n, primes);
}

std::vector<std::uint64_t> SchoolbookNegacyclic(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                                std::uint64_t q) {
  const std::size_t n = a.size();
  std::vector<std::int64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto term = static_cast<std::int64_t>((a[i] * b[j]) % q);
      if (i + j < n) {
        acc[i + j] += term;
      } else {
        acc[i + j - n] -= term;
      }
    }
  }
  std::vector<std::uint64_t> out(n);
  const auto sq = static_cast<std::int64_t>(q);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<std::uint64_t>(((acc[k] % sq) + sq) % sq);
  return out;
}

cpp_int CrtValue(const ring::RnsPoly& p, std::size_t k) {
  cpp_int big_q = 1;
  for (std::size_t i = 0; i < p.prime_count(); ++i) big_q *= p.context().modulus(i);
  cpp_int x = 0;
  for (std::size_t i = 0; i < p.prime_count(); ++i) {
    const std::uint64_t qi = p.context().modulus(i);
    cpp_int m = big_q / qi;
    const std::uint64_t inv = ring::InvMod(static_cast<std::uint64_t>(m % qi), qi);
    x += m * cpp_int(ring::MulMod(p.residue(i)[k], inv, qi));
  }
  return x % big_q;
}

Verdict HeAlgebraOracles() {
  const auto t0 = Clock::now();
  auto rng = RandomSource::FromSeed(101);
  auto ring8 = SmallRing(8, {17, 97, 113});
  auto ring16 = SmallRing(16, {97, 193, 257});
  int cases = 0, mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto ctx = trial % 2 == 0 ? ring8 : ring16;
    const std::size_t n = ctx->degree();
    auto a = ring::SampleUniform(ctx, 2, rng);
    auto b = ring::SampleUniform(ctx, 2, rng);
    auto prod = ring::Multiply(a, b);
    auto sum = ring::Add(a, b);
    auto diff = ring::Sub(a, b);
    auto neg = ring::Negate(a);
    for (std::size_t i = 0; i < 3; ++i) {
      auto want = SchoolbookNegacyclic(a.residue(i), b.residue(i), ctx->modulus(i));
      auto got = prod.residue(i);
      if (!std::equal(got.begin(), got.end(), want.begin(), want.end())) ++mismatches;
    }
    const cpp_int big_q = cpp_int(ctx->modulus(0)) * ctx->modulus(1) * ctx->modulus(2);
    std::vector<cpp_int> xa(n), xb(n), big_prod(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      xa[k] = CrtValue(a, k);
      xb[k] = CrtValue(b, k);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i + j < n) {
          big_prod[i + j] += xa[i] * xb[j];
        } else {
          big_prod[i + j - n] -= xa[i] * xb[j];
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      mismatches += CrtValue(sum, k) != (xa[k] + xb[k]) % big_q;
      mismatches += CrtValue(diff, k) != ((xa[k] - xb[k]) % big_q + big_q) % big_q;
      mismatches += CrtValue(neg, k) != (big_q - xa[k]) % big_q;
      mismatches += CrtValue(prod, k) != ((big_prod[k] % big_q) + big_q) % big_q;
    }
    ++cases;
  }
  const double secs = SecondsSince(t0);
  return {mismatches == 0 && cases == 500 && secs < 5.0,
          Fmt("%d random cases at N=8 and N=16, %d mismatches, %.2f s (limit 5 s)", cases, mismatches, secs)};
}

// ---------------------------------------------------------------------------
// 2-4. CKKS at the deployed parameters.

struct CkksKeys {
  std::shared_ptr<const ckks::PrivateContext> priv;
  const ckks::PublicContext& pub() const { return *priv->public_context(); }
};

const CkksKeys& StandardKeys() {
  static const CkksKeys keys = [] {
    auto rng = RandomSource::FromSeed(202);
    return CkksKeys{ckks::KeyGen(ckks::SecurityParams::Standard(), rng)};
  }();
  return keys;
}

ckks::Ciphertext EncryptRow(const CkksKeys& k, const std::vector<double>& v, RandomSource& rng) {
  const auto& pub = k.pub();
  return ckks::EncryptSymmetric(pub.encoder().Encode(v, pub.default_scale(), pub.top_level()), *k.priv, rng);
}

std::vector<double> DecryptSlots(const CkksKeys& k, const ckks::Ciphertext& ct, bool flood, RandomSource& rng) {
  ckks::DecryptOptions opt;
  opt.flood = flood;
  opt.rng = &rng;
  return k.pub().encoder().Decode(ckks::Decrypt(ct, *k.priv, opt));
}

Verdict EncodeEncryptRoundTrip() {
  const auto t0 = Clock::now();
  const auto& keys = StandardKeys();
  auto rng = RandomSource::FromSeed(203);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(26);
    for (auto& x : v) x = value(rng);
    auto got = DecryptSlots(keys, EncryptRow(keys, v, rng), false, rng);
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(got[i] - v[i]));
  }
  const double secs = SecondsSince(t0);
  return {worst <= 1e-3 && secs < 60.0,
          Fmt("%s, 1000 vectors x 26 slots, max slot error %.3g (limit 1e-3), %.1f s (limit 60 s)",
              keys.pub().params().Describe().c_str(), worst, secs)};
}

lr::ModelBundle RandomModel(RandomSource& rng) {
  std::uniform_real_distribution<double> w(-2, 2), mu(-5, 5), sd(0.5, 3);
  lr::ModelBundle m;
  for (int i = 0; i < 26; ++i) {
    m.weights.push_back(w(rng));
    m.feature_means.push_back(mu(rng));
    m.feature_stds.push_back(sd(rng));
  }
  m.bias = w(rng);
  m.feature_schema_hash = "acceptance";
  return m;
}

Verdict EncryptedLinearForm() {
  const auto t0 = Clock::now();
  const auto& keys = StandardKeys();
  auto rng = RandomSource::FromSeed(204);
  std::normal_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int decided = 0, agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto m = RandomModel(rng);
    std::vector<double> x(26);
    for (int i = 0; i < 26; ++i) x[i] = m.feature_means[i] + m.feature_stds[i] * unit(rng);
    auto ct = lr::EvaluateEncrypted(EncryptRow(keys, lr::Normalize(x, m), rng), m, keys.pub());
    // Default decryption, flooding included, as the SDK does it.
    const double enc = DecryptSlots(keys, ct, true, rng)[0];
    const double plain = lr::LogitPlain(x, m);
    worst = std::max(worst, std::abs(enc - plain));
    const double p = lr::Sigmoid(plain);
    if (std::abs(p - 0.5) > 0.01) {
      ++decided;
      agree += lr::Decision(lr::Sigmoid(enc)) == lr::Decision(p);
    }
  }
  const double secs = SecondsSince(t0);
  return {worst <= 1e-2 && agree == decided && secs < 300.0,
          Fmt("1000 (model, row) pairs, max logit gap %.3g (limit 1e-2), decisions %d/%d agree where |p-0.5|>0.01, "
              "%.1f s (limit 300 s)",
              worst, agree, decided, secs)};
}

Verdict RotationSums() {
  const auto& keys = StandardKeys();
  auto rng = RandomSource::FromSeed(205);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  double worst = 0.0;
  int checks = 0;
  for (std::size_t width = 1; width <= 32; ++width) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> v(width);
      double sum = 0.0;
      for (auto& x : v) sum += (x = value(rng));
      auto got = DecryptSlots(keys, ckks::SumSlots(EncryptRow(keys, v, rng), width, keys.pub()), true, rng)[0];
      worst = std::max(worst, std::abs(got - sum));
      ++checks;
    }
  }
  return {worst <= 5e-2, Fmt("widths 1..32, %d sums, max error %.3g (limit 5e-2)", checks, worst)};
}

// ---------------------------------------------------------------------------
// 5. Model quality.

Verdict ModelQuality() {
  auto synth = data::Synthesize(20000, 305);
  auto split = data::SplitRows(data::ExpandFeatures(data::Clean(synth.records)), 0.3, 305);
  auto model = data::FitModel(split.train, {});
  const double trained = data::Accuracy(split.test, model);
  const double bayes = data::Accuracy(split.test, synth.truth);
  bool pass = trained >= 0.9 * bayes;
  std::string detail = Fmt("synthetic: trained %.4f vs generator %.4f (need >= %.4f)", trained, bayes, 0.9 * bayes);

  const char* csv = std::getenv("HECREDIT_CREDIT_CSV");
  if (csv == nullptr || *csv == '\0') {
    detail += "; real CSV not supplied (set HECREDIT_CREDIT_CSV), real-data check not run";
  } else {
    auto real = data::SplitRows(data::ExpandFeatures(data::Clean(data::LoadCsv(csv))), data::kDefaultTestRatio, 1);
    auto real_model = data::FitModel(real.train, {});
    const double acc = data::Accuracy(real.test, real_model);
    const bool ok = std::abs(acc - 0.807) <= 0.02;
    pass = pass && ok;
    detail += Fmt("; real CSV: %zu test rows, plaintext accuracy %.4f (need 0.807 +/- 0.02)", real.test.size(), acc);
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 6. MQTT codec conformance.

Verdict CodecConformance() {
  auto rng = RandomSource::FromSeed(406);
  std::vector<mqtt::Packet> packets;
  Bytes stream;
  int round_trip_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    packets.push_back(testing::RandomPacket(rng));
    auto frame = mqtt::Encode(packets.back());
    auto r = mqtt::Decode(frame);
    auto* d = std::get_if<mqtt::Decoded>(&r);
    if (d == nullptr || d->consumed != frame.size() || !(d->packet == packets.back())) ++round_trip_failures;
    stream.insert(stream.end(), frame.begin(), frame.end());
  }

  mqtt::StreamDecoder bytewise;
  std::vector<mqtt::Packet> got;
  bool stream_error = false;
  for (std::uint8_t b : stream) {
    bytewise.Feed({&b, 1});
    for (;;) {
      auto r = bytewise.Next();
      if (auto* d = std::get_if<mqtt::Decoded>(&r)) {
        got.push_back(std::move(d->packet));
        continue;
      }
      stream_error = stream_error || std::holds_alternative<mqtt::ProtocolError>(r);
      break;
    }
  }
  const bool bytewise_ok = !stream_error && got == packets && bytewise.buffered() == 0;

  std::size_t decoded = 0, need_more = 0, errors = 0, reencode_failures = 0;
  for (int i = 0; i < 100000; ++i) {
    Bytes input;
    if (i % 2 == 0) {
      input.resize(rng.UniformBelow(48));
      for (auto& b : input) b = static_cast<std::uint8_t>(rng());
    } else {
      input = mqtt::Encode(testing::RandomPacket(rng));
      const std::size_t flips = 1 + rng.UniformBelow(3);
      for (std::size_t f = 0; f < flips; ++f) {
        input[rng.UniformBelow(input.size())] ^= static_cast<std::uint8_t>(1 + rng.UniformBelow(255));
      }
      if (rng.UniformBelow(4) == 0) input.resize(rng.UniformBelow(input.size() + 1));
    }
    auto r = mqtt::Decode(input);
    if (auto* d = std::get_if<mqtt::Decoded>(&r)) {
      ++decoded;
      auto again = mqtt::Decode(mqtt::Encode(d->packet));
      auto* d2 = std::get_if<mqtt::Decoded>(&again);
      if (d2 == nullptr || !(d2->packet == d->packet)) ++reencode_failures;
    } else if (std::holds_alternative<mqtt::NeedMoreBytes>(r)) {
      ++need_more;
    } else {
      ++errors;
    }
  }

  const auto ping = mqtt::Encode(mqtt::PingReq{});
  const bool ping_ok = ping == Bytes{0xC0, 0x00};
  return {round_trip_failures == 0 && bytewise_ok && reencode_failures == 0 && ping_ok,
          Fmt("10^4 round trips, %d failures; byte-at-a-time feed of %zu bytes %s; 10^5 fuzz inputs "
              "(%zu decoded, %zu incomplete, %zu rejected, %zu re-encode failures, no crash); PingReq = %02X %02X",
              round_trip_failures, stream.size(), bytewise_ok ? "matches" : "DIFFERS", decoded, need_more, errors,
              reencode_failures, ping.size() > 0 ? ping[0] : 0, ping.size() > 1 ? ping[1] : 0)};
}

// ---------------------------------------------------------------------------
// 7-9. End to end over loopback.

const bench::Workload& SharedWorkload() {
  static const bench::Workload w = bench::PrepareWorkload("", 507, 5000);
  return w;
}

Verdict EndToEndScenarioThree() {
  const auto& w = SharedWorkload();
  bench::RunConfig cfg;
  cfg.seed = 507;
  const auto t0 = Clock::now();
  auto r = bench::RunScenario(bench::SpecFor(bench::ScenarioId::kThree), w.test, w.model, cfg);
  const double secs = SecondsSince(t0);
  std::set<std::string> ids;
  int non_monotonic = 0;
  for (const auto& rec : r.records) {
    ids.insert(rec.correlation_id);
    non_monotonic += !rec.Monotonic();
  }
  auto row = bench::Summarize(r);
  const double gap_pp = 100.0 * std::abs(r.encrypted_accuracy - r.plaintext_accuracy);
  const bool pass = r.ok() && r.records.size() == 100 && ids.size() == 100 && r.unmatched_ids == 0 &&
                    non_monotonic == 0 && secs < 120.0 && row.receive_end_ms < row.start_send_ms && gap_pp <= 2.0;
  std::string detail =
      Fmt("%zu/100 responses, %zu distinct correlation ids, %zu unmatched, %d non-monotonic records, "
          "wall %.1f s (limit 120 s), mean receive-end %.2f ms < start-send %.2f ms, round trip %.0f ms, "
          "encrypted accuracy %.1f%% vs plaintext %.1f%% on the same rows",
          r.records.size(), ids.size(), r.unmatched_ids, non_monotonic, secs, row.receive_end_ms, row.start_send_ms,
          row.round_trip_ms, 100.0 * r.encrypted_accuracy, 100.0 * r.plaintext_accuracy);
  for (const auto& f : r.failures) detail += "; " + f;
  return {pass, detail};
}

Verdict HighSecurityOrdering() {
  const auto& w = SharedWorkload();
  bench::RunConfig cfg;
  cfg.seed = 508;
  cfg.senders = 5;
  cfg.requests_per_sender = 4;
  cfg.timeout = std::chrono::minutes(5);
  auto base = bench::RunScenario(bench::SpecFor(bench::ScenarioId::kTwo), w.test, w.model, cfg);
  auto high = bench::RunScenario(bench::SpecFor(bench::ScenarioId::kHighSec), w.test, w.model, cfg);
  auto b = bench::Summarize(base), h = bench::Summarize(high);
  const bool pass = base.ok() && high.ok() && h.payload_mb > b.payload_mb && h.round_trip_ms > b.round_trip_ms;
  return {pass, Fmt("5 senders x 4 requests each: payload %.2f MB vs %.2f MB (x%.1f), mean round trip %.0f ms vs "
                    "%.0f ms (x%.1f), responses %zu/%zu and %zu/%zu",
                    h.payload_mb, b.payload_mb, h.payload_mb / b.payload_mb, h.round_trip_ms, b.round_trip_ms,
                    h.round_trip_ms / b.round_trip_ms, high.records.size(), high.expected, base.records.size(),
                    base.expected)};
}

Verdict PrivacyHygiene() {
  const auto& w = SharedWorkload();
  std::mutex mu;
  std::map<std::string, const sdk::Session*> sessions;
  std::vector<testing::Needle> needles;
  std::vector<Bytes> envelopes, observed;
  std::size_t observed_bytes = 0;

  bench::Hooks hooks;
  hooks.broker_observer = [&](std::string_view, std::string_view, std::span<const std::uint8_t> payload) {
    std::lock_guard lock(mu);
    observed.emplace_back(payload.begin(), payload.end());
    observed_bytes += payload.size();
  };
  hooks.on_session = [&](const sdk::Session& s) {
    auto sk = testing::SecretKeyNeedles(s.private_context());
    std::lock_guard lock(mu);
    sessions[s.sender_id()] = &s;
    needles.insert(needles.end(), sk.begin(), sk.end());
  };
  hooks.on_request = [&](const sdk::PreparedRequest& p, std::span<const double> raw) {
    std::lock_guard lock(mu);
    const sdk::Session& s = *sessions.at(p.request.sender_id);
    auto fn = testing::FeatureNeedles(raw, lr::Normalize(raw, w.model), s.public_context());
    needles.insert(needles.end(), fn.begin(), fn.end());
    envelopes.push_back(p.wire);
  };

  bench::RunConfig cfg;
  cfg.seed = 509;
  cfg.senders = 5;
  cfg.requests_per_sender = 4;
  auto r = bench::RunScenario(bench::SpecFor(bench::ScenarioId::kThree), w.test, w.model, cfg, hooks);

  testing::NeedleIndex index(needles);
  std::string hit;
  std::size_t scanned = 0;
  for (const auto* set : {&envelopes, &observed}) {
    for (const auto& payload : *set) {
      for (const auto& hay : testing::ExpandEnvelope(payload)) {
        scanned += hay.size();
        if (hit.empty()) hit = index.Find(hay);
      }
    }
  }

  // The scan must be able to see a leak: plant a secret-key window and a
  // feature encoding into copies of the decoded ciphertext.
  bool controls_ok = !envelopes.empty();
  if (controls_ok) {
    auto decoded = testing::ExpandEnvelope(envelopes.front());
    Bytes planted = decoded.back();
    const auto& sk_probe = needles.front().bytes;
    planted.insert(planted.begin() + static_cast<std::ptrdiff_t>(planted.size() / 2), sk_probe.begin(),
                   sk_probe.end());
    controls_ok = !index.Find(planted).empty();
    Bytes planted_feature = decoded.back();
    const auto& feature_probe = needles.back().bytes;
    planted_feature.insert(planted_feature.end(), feature_probe.begin(), feature_probe.end());
    controls_ok = controls_ok && !index.Find(planted_feature).empty();
  }

  const bool pass = r.ok() && hit.empty() && controls_ok && envelopes.size() == r.expected &&
                    observed.size() >= 2 * r.expected;
  return {pass, Fmt("%zu envelopes and %zu broker-observed payloads (%.1f MB), %.1f MB scanned with base64 fields "
                    "decoded, %zu needles (secret key windows, feature f64/f32/text, plaintext polynomial windows): "
                    "%s; planted-leak controls %s",
                    envelopes.size(), observed.size(), observed_bytes / 1e6, scanned / 1e6, index.size(),
                    hit.empty() ? "no hits" : ("HIT " + hit).c_str(), controls_ok ? "detected" : "MISSED")};
}

}  // namespace
}  // namespace hecredit

int main() {
  using namespace hecredit;
  if (std::getenv("HECREDIT_LOG") == nullptr) log::SetLevel(log::Level::kWarn);
  struct Criterion {
    int number;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ring arithmetic oracles", HeAlgebraOracles},
      {2, "encode/encrypt round trip", EncodeEncryptRoundTrip},
      {3, "encrypted linear form", EncryptedLinearForm},
      {4, "rotation sums", RotationSums},
      {5, "model quality", ModelQuality},
      {6, "codec conformance", CodecConformance},
      {7, "end-to-end scenario 3", EndToEndScenarioThree},
      {8, "high-security ordering", HighSecurityOrdering},
      {9, "privacy hygiene", PrivacyHygiene},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s [%d] %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", c.number, c.name, SecondsSince(t0),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
