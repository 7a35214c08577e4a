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
#include "v2i/live_server.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace v2i {

namespace live {

using ojson = nlohmann::ordered_json;

ClientMessage parse_client_message(std::string_view text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return Invalid{"not JSON"};
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    return Invalid{"missing type"};
  const auto type = j["type"].get<std::string>();
  if (type == "reset")
    return Reset{};
  if (type == "control") {
    if (!j.contains("accel_mps2") || !j["accel_mps2"].is_number())
      return Invalid{"control needs numeric accel_mps2"};
    const double a = j["accel_mps2"].get<double>();
    if (!std::isfinite(a))
      return Invalid{"accel_mps2 must be finite"};
    return Control{a};
  }
  return Invalid{"unknown type '" + type + "'"};
}

std::string config_digest(const ZoneConfig& cfg)
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : dump_zone_config(cfg)) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hello_message(const std::string& digest, int tick_ms)
{
  ojson j;
  j["type"] = "hello";
  j["config_digest"] = digest;
  j["tick_ms"] = tick_ms;
  return j.dump();
}

std::string state_message(const Simulation& sim, std::int64_t tick, const std::vector<SimEvent>& events)
{
  const auto& v = sim.vehicle();
  const auto& a = sim.advisory();

  ojson j;
  j["type"] = "state";
  j["tick"] = tick;
  j["vehicle"] = {{"speed_mps", v.speed_mps}, {"distance_m", v.along_m}, {"lat", v.pos.lat_deg}, {"lon", v.pos.lon_deg}};

  ojson rec;
  rec["kind"] = recommendation_kind(a.recommendation);
  if (const auto* p = std::get_if<advice::Proceed>(&a.recommendation)) {
    rec["target_mps"] = p->target_mps;
    rec["window"] = ojson::array({p->lo_mps, p->hi_mps});
  }
  j["advisory"] = {{"active", a.active},
                   {"phase_id", a.phase_id},
                   {"color", std::string(1, color_code(a.current_color))},
                   {"countdown_ds", a.countdown_ds},
                   {"recommendation", rec}};

  j["events"] = ojson::array();
  for (const auto& e : events) {
    if (e.kind != EventKind::PhaseChanged && e.kind != EventKind::AdvisoryActivated &&
        e.kind != EventKind::AdvisoryDeactivated)
      continue;
    ojson ev;
    ev["kind"] = kind_name(e.kind);
    for (const auto& [k, val] : e.payload.items())
      ev[k] = val;
    j["events"].push_back(ev);
  }
  return j.dump();
}

}  // namespace live

namespace {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct Inbox
{
  std::mutex mu;
  std::optional<double> accel;  // last writer wins within a tick
  bool reset = false;
};

class Session;

struct Hub
{
  std::set<std::shared_ptr<Session>> sessions;  // io thread only
  std::atomic<int> connected{0};
  Inbox inbox;
  std::string hello;
};

class Session : public std::enable_shared_from_this<Session>
{
 public:
  Session(tcp::socket socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void run()
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void send(std::shared_ptr<const std::string> msg)
  {
    // Slow consumers only ever see the newest states.
    if (queue_.size() > 64)
      queue_.erase(queue_.begin() + 1, queue_.end());
    queue_.push_back(std::move(msg));
    if (queue_.size() == 1)
      write_next();
  }

  void close()
  {
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().close(ignored);
  }

 private:
  void on_accept(beast::error_code ec)
  {
    if (ec)
      return;
    hub_.sessions.insert(shared_from_this());
    ++hub_.connected;
    ws_.text(true);
    send(std::make_shared<const std::string>(hub_.hello));
    read_next();
  }

  void read_next()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec)
  {
    if (ec) {
      drop();
      return;
    }
    const auto text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    const auto msg = live::parse_client_message(text);
    {
      std::lock_guard lock(hub_.inbox.mu);
      if (const auto* c = std::get_if<live::Control>(&msg))
        hub_.inbox.accel = c->accel_mps2;
      else if (std::holds_alternative<live::Reset>(msg))
        hub_.inbox.reset = true;
    }
    read_next();
  }

  void write_next()
  {
    ws_.async_write(net::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_write(ec); });
  }

  void on_write(beast::error_code ec)
  {
    if (ec) {
      drop();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty())
      write_next();
  }

  void drop()
  {
    if (hub_.sessions.erase(shared_from_this()) > 0)
      --hub_.connected;
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub& hub_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
};

}  // namespace

struct LiveServer::Impl
{
  Impl(Simulation s, LiveServerOptions o) : sim(std::move(s)), opts(std::move(o)), acceptor(ioc) {}

  void accept_next()
  {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec)
        return;
      std::make_shared<Session>(std::move(socket), hub)->run();
      accept_next();
    });
  }

  void broadcast(std::string msg)
  {
    auto shared = std::make_shared<const std::string>(std::move(msg));
    net::post(ioc, [this, shared] {
      for (const auto& s : hub.sessions)
        s->send(shared);
    });
  }

  void sim_loop()
  {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::milliseconds(opts.tick_ms);
    auto next = clock::now();
    double held_accel = 0.0;

    while (!stopping.load()) {
      bool reset = false;
      {
        std::lock_guard lock(hub.inbox.mu);
        if (hub.inbox.accel)
          held_accel = *hub.inbox.accel;
        hub.inbox.accel.reset();
        reset = std::exchange(hub.inbox.reset, false);
      }
      if (hub.connected.load() == 0)
        held_accel = 0.0;
      if (reset || sim.finished()) {
        sim.reset();
        held_accel = 0.0;
      }

      const std::int64_t tick = sim.tick();
      const auto events = sim.step(held_accel);
      broadcast(live::state_message(sim, tick, events));
      ++ticks;

      next += period;
      std::unique_lock lock(wake_mu);
      wake.wait_until(lock, next, [this] { return stopping.load(); });
    }
  }

  Simulation sim;
  LiveServerOptions opts;
  net::io_context ioc;
  tcp::acceptor acceptor;
  Hub hub;

  std::thread io_thread;
  std::thread sim_thread;
  std::atomic<bool> stopping{false};
  std::atomic<std::int64_t> ticks{0};
  std::mutex wake_mu;
  std::condition_variable wake;
  bool started = false;
};

LiveServer::LiveServer(Simulation sim, LiveServerOptions opts)
{
  if (sim.scenario().driver != DriverKind::External)
    throw SimConfigError("serve needs a scenario whose driver type is \"external\"");
  if (opts.tick_ms <= 0)
    throw SimConfigError("tick_ms must be positive");
  impl_ = std::make_unique<Impl>(std::move(sim), std::move(opts));
  impl_->hub.hello = live::hello_message(live::config_digest(impl_->sim.config()), impl_->opts.tick_ms);
}

LiveServer::~LiveServer()
{
  stop();
}

unsigned short LiveServer::start()
{
  auto& d = *impl_;
  const tcp::endpoint ep(net::ip::make_address(d.opts.address), d.opts.port);
  d.acceptor.open(ep.protocol());
  d.acceptor.set_option(net::socket_base::reuse_address(true));
  d.acceptor.bind(ep);
  d.acceptor.listen();
  d.accept_next();
  d.started = true;
  d.io_thread = std::thread([&d] {
    auto guard = net::make_work_guard(d.ioc);
    d.ioc.run();
  });
  d.sim_thread = std::thread([&d] { d.sim_loop(); });
  return d.acceptor.local_endpoint().port();
}

void LiveServer::stop()
{
  if (!impl_ || !impl_->started)
    return;
  auto& d = *impl_;
  {
    std::lock_guard lock(d.wake_mu);
    d.stopping = true;
  }
  d.wake.notify_all();
  if (d.sim_thread.joinable())
    d.sim_thread.join();
  net::post(d.ioc, [&d] {
    beast::error_code ignored;
    d.acceptor.close(ignored);
    for (const auto& s : d.hub.sessions)
      s->close();
    d.hub.sessions.clear();
    d.ioc.stop();
  });
  if (d.io_thread.joinable())
    d.io_thread.join();
  d.started = false;
}

void LiveServer::wait()
{
  auto& d = *impl_;
  std::unique_lock lock(d.wake_mu);
  d.wake.wait(lock, [&d] { return d.stopping.load(); });
}

std::int64_t LiveServer::ticks_run() const
{
  return impl_->ticks.load();
}

}  // namespace v2i
