// Copyright 2026 The outmat Authors.
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

#pragma once

#include "outmat/adversary.hpp"
#include "outmat/cost.hpp"
#include "outmat/scheme.hpp"
#include "outmat/verification.hpp"
#include "outmat/wire.hpp"

namespace outmat {

template <class T>
struct ProtocolRun {
  Matrix<T> xp;
  Matrix<T> yp;
  Matrix<T> zp;  // as returned by the server
  Matrix<T> z;
  ServeTrace serve;
  VerificationReport<T> report;
  RunTrace trace;
};

/// Client and server sides end to end: transform, ship X' and Y' as wire
/// frames, server product (and optional forgery), ship Z' back, compose,
/// verify. Every scalar operation and every byte on the wire is counted in
/// the returned trace. `rng` phases match attack_trial: split(2) server,
/// split(3) verification. With policy.rounds == 0 verification is skipped.
template <ScalarBackend F>
ProtocolRun<typename F::value_type> run_protocol(
    const F& f, const Matrix<typename F::value_type>& x,
    const Matrix<typename F::value_type>& y,
    const SecretKey<typename F::value_type>& key, const VerificationPolicy& policy,
    const FloatModel& model, const CounterRng& rng,
    const ServerBehavior& behavior = {}) {
  ProtocolRun<typename F::value_type> run;
  RunTrace& trace = run.trace;
  trace.dims = key.dims();
  trace.rounds = policy.rounds;
  trace.bytes_per_scalar = wire::kBytesPerScalar;

  auto disguised = transform(f, x, y, key, &trace.client);
  run.xp = std::move(disguised.x);
  run.yp = std::move(disguised.y);

  auto account = [&trace](const wire::Frame& frame) {
    OpCounter::bump(trace.payload_bytes, frame.payload_bytes());
    OpCounter::bump(trace.framing_bytes, frame.framing_bytes());
  };
  const wire::Frame x_frame = wire::encode(run.xp);
  const wire::Frame y_frame = wire::encode(run.yp);
  account(x_frame);
  account(y_frame);

  CounterRng server_rng = rng.split(2);
  auto served = serve(f, wire::decode_for(f, x_frame.bytes),
                      wire::decode_for(f, y_frame.bytes), behavior, model,
                      server_rng, &trace.server);
  run.serve = served.trace;
  const wire::Frame z_frame = wire::encode(served.zp);
  account(z_frame);

  run.zp = wire::decode_for(f, z_frame.bytes);
  run.z = compose(f, run.zp, key, &trace.client);
  run.report.mode = policy.mode;
  if (policy.rounds > 0) {
    run.report = verify(f, x, y, run.z, policy, model, rng.split(3), &trace.client);
  }
  return run;
}

}  // namespace outmat
