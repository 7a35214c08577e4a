/*
 * Copyright (C) 2026 The v2i-advisory Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

// Acceptance suite: one PASS/FAIL line per criterion, thresholds fixed below.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "v2i/event_log.hpp"
#include "v2i/metrics.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/simulation.hpp"
#include "v2i/spat_codec.hpp"

using namespace v2i;

namespace {

// Pinned thresholds.
constexpr int kRoundTripCases = 1000;
constexpr double kRoundTripBudgetS = 5.0;
constexpr double kCorruptionBudgetS = 10.0;
constexpr int kGeometryPointsPerZone = 10000;
constexpr double kHaversineTolM = 1e-3;
constexpr double kMeridianStepM = 111.1949;
constexpr double kGeometryBudgetS = 5.0;
constexpr int kGatingRuns = 50;
constexpr double kGatingSpawnM = 800.0;
constexpr int kPhaseOrderCycles = 10;
constexpr int kSoundnessScenarios = 500;
constexpr double kSoundnessMinRate = 0.99;
constexpr double kSoundnessBudgetS = 60.0;
constexpr int kScanSamples = 1000;
constexpr double kLossDrop = 0.1;
constexpr std::int64_t kLossLatencyMax = 3;
constexpr double kLossMinRate = 0.95;
constexpr int kDeterminismTriples = 40;

struct Outcome
{
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const ZoneConfig& reference()
{
  static const ZoneConfig cfg = load_zone_config_file(testing::reference_config_path());
  return cfg;
}

SpatSnapshot s1()
{
  SpatSnapshot s = make_snapshot(42);
  s.controller_time_ds = 360000;
  for (auto& p : s.phases)
    p = PhaseState{p.phase_id, Color::Red, 150, 300, 40};
  return s;
}

Scenario make_scenario(const ZoneConfig& cfg, int phase, double distance_m, double speed, DriverKind driver,
                       std::int64_t max_ticks)
{
  Scenario s;
  s.spawn = point_on_approach(*cfg.zone_for_phase(phase), cfg.ref_point, distance_m);
  s.initial_speed_mps = speed;
  s.approach_phase_id = phase;
  s.driver = driver;
  s.max_ticks = max_ticks;
  return s;
}

// --- codec ---------------------------------------------------------------------

Outcome codec_round_trip()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(0xC0DEC);
  int ok = 0, total = 0;
  for (int i = 0; i < kRoundTripCases; ++i) {
    // Each format is exercised over the fields it carries.
    const SpatSnapshot m = testing::random_snapshot(rng, 0xFFFF, 0xFFFFFFFF, 0);
    const SpatSnapshot t = testing::random_snapshot(rng, 0xFFFFFFFF, 0, 0xFFFF);
    const SpatSnapshot r = testing::random_snapshot(rng, 0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF);
    ok += decode_m60(encode_m60(m)) == m;
    ok += decode_tw900(encode_tw900(t)) == t;
    ok += parse_rsu_string(encode_rsu_string(r)) == r;
    total += 3;
  }
  const double secs = seconds_since(t0);
  return {ok == total && secs < kRoundTripBudgetS, fmt("%d/%d exact, %.3f s", ok, total, secs)};
}

Outcome corruption_detection()
{
  const auto t0 = Clock::now();
  int rejected = 0, total = 0;
  for (const auto f : {FrameFormat::M60Like, FrameFormat::Tw900Like}) {
    const Bytes ref = encode_frame(f, s1());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (int v = 0; v < 256; ++v) {
        if (v == ref[i])
          continue;
        Bytes b = ref;
        b[i] = static_cast<std::uint8_t>(v);
        ++total;
        try {
          f == FrameFormat::M60Like ? decode_m60(b) : decode_tw900(b);
        } catch (const CodecError&) {
          ++rejected;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {rejected == total && secs < kCorruptionBudgetS,
          fmt("%d/%d single-octet corruptions rejected, %.3f s", rejected, total, secs)};
}

// --- geometry ----------------------------------------------------------------

Outcome geometry_oracle()
{
  const auto t0 = Clock::now();
  const ZoneConfig& cfg = reference();
  std::mt19937_64 rng(0x6E0);
  int agree = 0, total = 0, inside = 0;
  for (const auto& z : cfg.zones) {
    double lo_lat = 90, hi_lat = -90, lo_lon = 180, hi_lon = -180;
    for (const auto& v : z.vertices) {
      lo_lat = std::min(lo_lat, v.lat_deg);
      hi_lat = std::max(hi_lat, v.lat_deg);
      lo_lon = std::min(lo_lon, v.lon_deg);
      hi_lon = std::max(hi_lon, v.lon_deg);
    }
    const double pl = (hi_lat - lo_lat) * 0.1 + 1e-6, pn = (hi_lon - lo_lon) * 0.1 + 1e-6;
    std::uniform_real_distribution<double> lat(lo_lat - pl, hi_lat + pl), lon(lo_lon - pn, hi_lon + pn);
    for (int i = 0; i < kGeometryPointsPerZone; ++i) {
      const GeoPoint p{lat(rng), lon(rng)};
      const bool oracle = testing::barycentric_inside(p, z, cfg.ref_point);
      agree += point_in_triangle(p, z, cfg.ref_point) == oracle;
      inside += oracle;
      ++total;
    }
  }
  const double err = std::abs(haversine_m({0, 0}, {0.001, 0}) - kMeridianStepM);
  const double secs = seconds_since(t0);
  return {agree == total && err <= kHaversineTolM && secs < kGeometryBudgetS,
          fmt("%d/%d agree (%d inside), haversine error %.2e m, %.3f s", agree, total, inside, err, secs)};
}

// --- field behaviors -----------------------------------------------------------

bool is_advisory_event(const SimEvent& e)
{
  if (e.kind == EventKind::AdvisoryActivated || e.kind == EventKind::AdvisoryDeactivated ||
      e.kind == EventKind::PhaseChanged)
    return true;
  return e.kind == EventKind::AdvisoryState &&
         (e.payload["active"].get<bool>() || e.payload["recommendation"]["kind"] != "none");
}

Outcome zone_gating()
{
  const auto t0 = Clock::now();
  int good = 0;
  std::string first_bad;
  for (int run = 0; run < kGatingRuns; ++run) {
    const int phase = 1 + run % 8;
    const ZoneConfig& cfg = reference();
    const TriZone& zone = *cfg.zone_for_phase(phase);
    Scenario sc = make_scenario(cfg, phase, kGatingSpawnM, 10.0 + run % 6, DriverKind::Scripted, 1200);
    sc.script = {{0, 0.0}};
    sc.frame_format = run % 2 ? FrameFormat::Tw900Like : FrameFormat::M60Like;
    const LinkConfig link{kLossDrop, 0, kLossLatencyMax, 1000 + static_cast<std::uint64_t>(run)};
    const auto log = run_scenario(cfg, sc, link);

    std::map<std::int64_t, double> distance_at;
    for (const auto& e : log)
      if (e.kind == EventKind::VehicleState)
        distance_at[e.tick] = haversine_m({e.payload["lat"].get<double>(), e.payload["lon"].get<double>()}, zone.stopbar);

    int early = 0, activations = 0;
    for (const auto& e : log) {
      if (!is_advisory_event(e))
        continue;
      if (distance_at.at(e.tick) > 500.0)
        ++early;
      activations += e.kind == EventKind::AdvisoryActivated;
    }
    if (early == 0 && activations == 1)
      ++good;
    else if (first_bad.empty())
      first_bad = fmt(" (run %d: %d early events, %d activations)", run, early, activations);
  }
  return {good == kGatingRuns, fmt("%d/%d runs clean, %.3f s", good, kGatingRuns, seconds_since(t0)) + first_bad};
}

// Stationary vehicle inside the gate for each phase, lossless link.
std::vector<SimEvent> parked_run(int phase, std::int64_t ticks)
{
  const Scenario sc = make_scenario(reference(), phase, 250.0, 0.0, DriverKind::External, ticks);
  return run_scenario(reference(), sc, LinkConfig{});
}

Outcome phase_ordering()
{
  const auto t0 = Clock::now();
  const std::int64_t ticks = kPhaseOrderCycles * reference().plan.cycle_ds;
  int transitions = 0, bad_order = 0, countdown_steps = 0, bad_countdown = 0;
  for (int phase = 1; phase <= 8; ++phase) {
    const auto log = parked_run(phase, ticks);
    std::optional<Color> last_to;
    std::optional<std::uint32_t> last_countdown;
    std::map<std::int64_t, bool> changed_at;
    for (const auto& e : log) {
      if (e.kind == EventKind::PhaseChanged) {
        const auto from = e.payload["from"].get<std::string>(), to = e.payload["to"].get<std::string>();
        const bool cycle_ok = (from == "G" && to == "Y") || (from == "Y" && to == "R") || (from == "R" && to == "G");
        const bool chain_ok = !last_to || std::string(1, color_code(*last_to)) == from;
        bad_order += !(cycle_ok && chain_ok);
        last_to = to == "G" ? Color::Green : to == "Y" ? Color::Yellow : Color::Red;
        changed_at[e.tick] = true;
        ++transitions;
      }
      if (e.kind == EventKind::AdvisoryState && e.payload["active"].get<bool>()) {
        const auto c = e.payload["countdown_ds"].get<std::uint32_t>();
        if (last_countdown && !changed_at.count(e.tick)) {
          ++countdown_steps;
          bad_countdown += c + 1 != *last_countdown;
        }
        last_countdown = c;
      }
    }
  }
  const int expected = 8 * 3 * kPhaseOrderCycles;
  const bool pass = bad_order == 0 && bad_countdown == 0 && transitions >= expected - 8 && countdown_steps > 0;
  return {pass, fmt("%d transitions (expected ~%d), %d out of order; %d countdown steps, %d not -1 ds; %.3f s",
                    transitions, expected, bad_order, countdown_steps, bad_countdown, seconds_since(t0))};
}

Outcome beep_on_transition()
{
  const auto t0 = Clock::now();
  const std::int64_t ticks = 3 * reference().plan.cycle_ds;
  int expected = 0, matched = 0, spurious = 0;
  for (int phase = 1; phase <= 8; ++phase) {
    const auto log = parked_run(phase, ticks);
    std::map<std::int64_t, const SimEvent*> beeps;
    for (const auto& e : log)
      if (e.kind == EventKind::PhaseChanged)
        beeps[e.tick] = &e;
    // Ground truth: the controller's own color sequence.
    for (std::int64_t t = 1; t < ticks; ++t) {
      const PhaseState before = phase_state_at(reference().plan, phase, t - 1);
      const PhaseState now = phase_state_at(reference().plan, phase, t);
      if (before.color == now.color)
        continue;
      ++expected;
      const auto it = beeps.find(t);
      if (it == beeps.end())
        continue;
      const auto& p = it->second->payload;
      matched += p["beep"].get<bool>() && p["from"] == std::string(1, color_code(before.color)) &&
                 p["to"] == std::string(1, color_code(now.color));
      beeps.erase(it);
    }
    spurious += static_cast<int>(beeps.size());
  }
  return {expected > 0 && matched == expected && spurious == 0,
          fmt("%d/%d controller transitions beeped on the exact tick, %d spurious, %.3f s", matched, expected,
              spurious, seconds_since(t0))};
}

// --- advice soundness and loss -------------------------------------------------

struct SuiteStats
{
  int scenarios = 0;
  int proceed_runs = 0;
  int proceed_green = 0;
  int held_runs = 0;
  int held_green = 0;
  int held_red = 0;
  std::int64_t states_checked = 0;
  std::int64_t scan_mismatch = 0;
  std::int64_t unsound_proceed = 0;
};

ZoneConfig random_config(std::mt19937_64& rng)
{
  ZoneConfig cfg = reference();
  cfg.plan = testing::random_plan(rng);
  std::uniform_real_distribution<double> limit(11.0, 20.0);
  for (auto& z : cfg.zones)
    z.speed_limit_mps = limit(rng);
  return cfg;
}

SuiteStats run_suite(double drop, std::int64_t latency_max)
{
  SuiteStats st;
  std::mt19937_64 rng(0xAD71CE);
  const AdvisoryParams params{};
  for (int k = 0; k < kSoundnessScenarios; ++k) {
    const ZoneConfig cfg = random_config(rng);
    const int phase = std::uniform_int_distribution<int>(1, 8)(rng);
    const double dist = std::uniform_real_distribution<double>(100.0, 500.0)(rng);
    const TriZone& zone = *cfg.zone_for_phase(phase);
    const double speed = zone.speed_limit_mps * std::uniform_real_distribution<double>(0.6, 1.0)(rng);
    Scenario sc = make_scenario(cfg, phase, dist, speed, DriverKind::AdviceFollower, 4000);
    sc.frame_format = k % 2 ? FrameFormat::Tw900Like : FrameFormat::M60Like;
    const LinkConfig link{drop, 0, latency_max, rng()};
    const auto log = run_scenario(cfg, sc, link);
    ++st.scenarios;

    bool proceed = false, broken = false;
    for (const auto& e : log) {
      if (e.kind == EventKind::AdvisoryDeactivated)
        break;
      if (e.kind != EventKind::AdvisoryState || !e.payload["active"].get<bool>())
        continue;
      const auto& p = e.payload;
      const std::string kind = p["recommendation"]["kind"];
      const PhaseState ps{phase, p["color"] == "G" ? Color::Green : p["color"] == "Y" ? Color::Yellow : Color::Red,
                          p["countdown_ds"].get<std::uint32_t>(), p["next1_ds"].get<std::uint32_t>(),
                          p["next2_ds"].get<std::uint32_t>()};
      const double d = p["distance_m"].get<double>();
      const bool scan = testing::any_feasible_speed(d, ps, zone.speed_limit_mps, params, kScanSamples);
      ++st.states_checked;
      if (kind == "stop") {
        st.scan_mismatch += scan;
        if (proceed)
          broken = true;
      } else if (kind == "proceed") {
        const double target = p["recommendation"]["target_mps"].get<double>();
        const double lo = p["recommendation"]["window"][0].get<double>();
        const double hi = p["recommendation"]["window"][1].get<double>();
        const double step = (zone.speed_limit_mps - params.v_floor_mps) / (kScanSamples - 1);
        // A PROCEED the scan cannot see must be narrower than one scan step.
        st.scan_mismatch += !scan && hi - lo >= step;
        // Constant travel at the target must land inside the trimmed green.
        double g0 = 0, g1 = 0;
        const double r = ps.remaining_ds / 10.0, n1 = ps.next1_ds / 10.0, n2 = ps.next2_ds / 10.0;
        if (ps.color == Color::Green) { g0 = 0; g1 = r; }
        else if (ps.color == Color::Red) { g0 = r; g1 = r + n1; }
        else { g0 = r + n1; g1 = r + n1 + n2; }
        const double t = d / target;
        st.unsound_proceed += t < g0 * (1 - 1e-9) || t > (g1 - params.green_end_margin_s) * (1 + 1e-9);
        proceed = true;
      }
    }
    const MetricsReport m = compute_metrics(log);
    if (proceed) {
      ++st.proceed_runs;
      st.proceed_green += m.arrived_on_green;
      if (!broken) {
        ++st.held_runs;
        st.held_green += m.arrived_on_green;
        st.held_red += m.red_violation;
      }
    }
  }
  return st;
}

Outcome advice_soundness()
{
  const auto t0 = Clock::now();
  const SuiteStats st = run_suite(0.0, 0);
  const double secs = seconds_since(t0);
  const double rate = st.held_runs ? static_cast<double>(st.held_green) / st.held_runs : 0.0;
  const bool pass = st.held_runs > 0 && rate >= kSoundnessMinRate && st.scan_mismatch == 0 &&
                    st.unsound_proceed == 0 && secs < kSoundnessBudgetS;
  return {pass, fmt("held-feasible runs on green %d/%d = %.2f%% (need >= %.0f%%), %d red; "
                    "all PROCEED runs %d/%d; %lld states vs %d-point scan, %lld mismatches, %lld unsound PROCEED; "
                    "%.2f s",
                    st.held_green, st.held_runs, 100 * rate, 100 * kSoundnessMinRate, st.held_red,
                    st.proceed_green, st.proceed_runs, static_cast<long long>(st.states_checked), kScanSamples,
                    static_cast<long long>(st.scan_mismatch), static_cast<long long>(st.unsound_proceed), secs)};
}

Outcome robustness_under_loss()
{
  const auto t0 = Clock::now();
  const SuiteStats st = run_suite(kLossDrop, kLossLatencyMax);
  const double rate = st.proceed_runs ? static_cast<double>(st.proceed_green) / st.proceed_runs : 0.0;
  return {st.proceed_runs > 0 && rate >= kLossMinRate,
          fmt("PROCEED runs on green %d/%d = %.2f%% (need >= %.0f%%) at drop %.2f, latency 0-%lld; %.2f s",
              st.proceed_green, st.proceed_runs, 100 * rate, 100 * kLossMinRate, kLossDrop,
              static_cast<long long>(kLossLatencyMax), seconds_since(t0))};
}

// --- determinism ---------------------------------------------------------------

Outcome determinism()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(0xDE7);
  int identical = 0, replay_equal = 0;
  for (int k = 0; k < kDeterminismTriples; ++k) {
    const ZoneConfig cfg = k % 2 ? random_config(rng) : reference();
    const int phase = 1 + k % 8;
    Scenario sc = make_scenario(cfg, phase, 150.0 + 10.0 * k, 6.0 + k % 5,
                                k % 3 ? DriverKind::AdviceFollower : DriverKind::Scripted, 2500);
    if (sc.driver == DriverKind::Scripted)
      sc.script = {{0, 0.5}, {40, -1.0}, {90, 0.0}};
    sc.frame_format = k % 2 ? FrameFormat::M60Like : FrameFormat::Tw900Like;
    const LinkConfig link{0.02 * (k % 6), k % 2, 2 + k % 3, rng()};
    const auto a = run_scenario(cfg, sc, link);
    const auto b = run_scenario(cfg, sc, link);
    const std::string ja = to_jsonl(a);
    identical += ja == to_jsonl(b);
    std::istringstream in(ja);
    replay_equal += compute_metrics(read_jsonl(in)) == compute_metrics(a);
  }
  return {identical == kDeterminismTriples && replay_equal == kDeterminismTriples,
          fmt("%d/%d byte-identical logs, %d/%d replayed metrics equal, %.3f s", identical, kDeterminismTriples,
              replay_equal, kDeterminismTriples, seconds_since(t0))};
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"codec round-trip", codec_round_trip},
      {"corruption detection", corruption_detection},
      {"geometry oracle", geometry_oracle},
      {"zone gating", zone_gating},
      {"phase ordering", phase_ordering},
      {"phase-change beep", beep_on_transition},
      {"advice soundness", advice_soundness},
      {"robustness under loss", robustness_under_loss},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
