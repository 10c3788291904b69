// SPDX-License-Identifier: Apache-2.0
//
// stpnc - space-time physical-layer network coding simulator
// Copyright (C) 2026 The stpnc authors
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

#include "stpnc/rate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "stpnc/parallel.hpp"
#include "stpnc/scheduler.hpp"

namespace stpnc::rate {
namespace {

struct TrialGains {
  double uplink = 0.0;
  double downlink = 0.0;
  double direct = 0.0;
};

NetworkConfig twic_config() { return NetworkConfig{}; }

TrialGains trial_gains(Seed seed, std::size_t trial) {
  const ChannelSet ch = draw_channels(twic_config(), 3, derive_trial_seed(seed, trial));
  const PrecoderSet p = design_twic(ch);
  const CVector& h4 = ch.user_relay(0, 4, 2);
  const CVector& h3 = ch.user_relay(0, 3, 2);
  TrialGains g;
  // |u^* h3|^2 with u the unit vector orthogonal to h4.
  g.uplink = h3.squaredNorm() - std::norm(h4.dot(h3)) / h4.squaredNorm();
  g.downlink = downlink_gain(ch, p);
  g.direct = std::norm(ch.user_user(1, 3, 2));
  return g;
}

double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double log2p1(double x) { return std::log2(1.0 + x); }

double stpnc_sample(const TrialGains& g, double rho) {
  return 4.0 / 3.0 * std::min(log2p1(rho * g.uplink), log2p1(rho / 2.5 * g.downlink));
}

Estimate summarize(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  Estimate e;
  e.mean = pairwise_sum(x) / n;
  if (x.size() < 2) return e;
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - e.mean) * (x[i] - e.mean);
  e.stderr_ = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  return e;
}

std::vector<TrialGains> all_gains(int trials, Seed seed, unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("rate: trials must be >= 1");
  return parallel_map<TrialGains>(static_cast<std::size_t>(trials), jobs,
                                  [&](std::size_t i) { return trial_gains(seed, i); });
}

template <class F>
Estimate estimate(const std::vector<TrialGains>& gains, F&& sample) {
  std::vector<double> x(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) x[i] = sample(gains[i]);
  return summarize(x);
}

}  // namespace

void RateConfig::validate() const {
  if (snr_db_list.empty()) throw std::invalid_argument("rate: SNR grid is empty");
  if (trials < 1) throw std::invalid_argument("rate: trials must be >= 1");
}

double uplink_rate(const ChannelSet& ch, double power, double noise_var) {
  const CMatrix u = linalg::null_space(ch.user_relay(0, 4, 2).adjoint());
  const double gain = std::norm((u.col(0).adjoint() * ch.user_relay(0, 3, 2))(0));
  return log2p1(power / noise_var * gain);
}

double downlink_gain(const ChannelSet& ch, const PrecoderSet& p) {
  const CVector& v = p.per_symbol.at({3, SymbolId{1, 3}});
  const cplx relayed = (ch.relay_user(1, 0, 3) * v)(0) / v.norm();
  return std::norm(ch.user_user(1, 3, 2)) + std::norm(relayed);
}

double downlink_rate(const ChannelSet& ch, const PrecoderSet& p, double power, double noise_var) {
  return log2p1(power / (2.5 * noise_var) * downlink_gain(ch, p));
}

double df_pair_rate(const ChannelSet& ch, const PrecoderSet& p, double power, double noise_var) {
  return std::min(uplink_rate(ch, power, noise_var), downlink_rate(ch, p, power, noise_var));
}

Estimate stpnc_sum_rate(double snr_db, int trials, Seed seed, unsigned jobs) {
  const double rho = snr_linear(snr_db);
  return estimate(all_gains(trials, seed, jobs), [rho](const TrialGains& g) { return stpnc_sample(g, rho); });
}

Estimate tdma_sum_rate(double snr_db, int trials, Seed seed, unsigned jobs) {
  const double rho = snr_linear(snr_db);
  return estimate(all_gains(trials, seed, jobs),
                  [rho](const TrialGains& g) { return log2p1(rho * g.direct); });
}

RateResult snr_sweep(const RateConfig& cfg) {
  cfg.validate();
  const std::vector<TrialGains> gains = all_gains(cfg.trials, cfg.seed, cfg.jobs);
  RateResult r;
  for (double db : cfg.snr_db_list) {
    const double rho = snr_linear(db);
    RatePoint pt;
    pt.snr_db = db;
    pt.stpnc = estimate(gains, [rho](const TrialGains& g) { return stpnc_sample(g, rho); });
    pt.tdma = estimate(gains, [rho](const TrialGains& g) { return log2p1(rho * g.direct); });
    r.points.push_back(pt);
  }
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    const RatePoint& a = r.points[i - 1];
    const RatePoint& b = r.points[i];
    const double da = a.stpnc.mean - a.tdma.mean;
    const double db = b.stpnc.mean - b.tdma.mean;
    if (da <= 0.0 && db > 0.0) {
      r.crossover_db = a.snr_db + (b.snr_db - a.snr_db) * (-da) / (db - da);
      break;
    }
  }
  return r;
}

double slope_ratio(const RateResult& r, double lo, double hi) {
  std::vector<const RatePoint*> seg;
  for (const RatePoint& p : r.points) {
    if (p.snr_db >= lo && p.snr_db <= hi) seg.push_back(&p);
  }
  if (seg.size() < 2) throw std::invalid_argument("slope_ratio: need two points in range");
  const auto n = static_cast<double>(seg.size());
  double mx = 0.0;
  for (const RatePoint* p : seg) mx += p->snr_db;
  mx /= n;
  auto slope = [&](auto&& y) {
    double my = 0.0;
    for (const RatePoint* p : seg) my += y(*p);
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const RatePoint* p : seg) {
      sxy += (p->snr_db - mx) * (y(*p) - my);
      sxx += (p->snr_db - mx) * (p->snr_db - mx);
    }
    return sxy / sxx;
  };
  return slope([](const RatePoint& p) { return p.stpnc.mean; }) /
         slope([](const RatePoint& p) { return p.tdma.mean; });
}

void write_csv(std::ostream& os, const RateResult& r) {
  os << "snr_db,stpnc_rate,stpnc_stderr,tdma_rate,tdma_stderr\n";
  char buf[160];
  for (const RatePoint& p : r.points) {
    std::snprintf(buf, sizeof buf, "%g,%.6f,%.6f,%.6f,%.6f\n", p.snr_db, p.stpnc.mean,
                  p.stpnc.stderr_, p.tdma.mean, p.tdma.stderr_);
    os << buf;
  }
}

}  // namespace stpnc::rate
