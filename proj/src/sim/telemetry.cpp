#include "fepsim/sim/telemetry.hpp"

#include "json.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

namespace fepsim::sim {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::ordered_json;

Decimator::Decimator(double rate_hz) : rate_hz_(rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw std::invalid_argument("telemetry rate must be positive");
  }
}

bool Decimator::due(double t) {
  if (t + 1e-9 < static_cast<double>(next_) / rate_hz_) return false;
  next_ = static_cast<std::int64_t>(std::floor(t * rate_hz_ + 1e-9)) + 1;
  return true;
}

namespace {

ordered_json stick_json(const Simulator& sim, acs::StickAxis axis, double softstop) {
  const auto& s = sim.device().axis(axis);
  ordered_json ffc = ordered_json::array();
  const acs::FfcCurve curve = sim.device().effective_curve(axis);
  for (const auto& p : curve.points()) {
    ffc.push_back({p.position, p.force});
  }
  return {{"theta_deg", s.theta},
          {"theta_dot_dps", s.theta_dot},
          {"force_lbf", sim.device().characteristic_force(axis)},
          {"grip_lbf", sim.device().grip_force(axis)},
          {"mode", acs::to_string(s.mode)},
          {"softstop_deg", softstop},
          {"ffc", ffc}};
}

}  // namespace

std::string state_frame(const Simulator& sim, const std::vector<LogEvent>& events) {
  const LogRecord& r = sim.last_record();
  ordered_json j;
  j["type"] = "state";
  j["t"] = r.t;
  j["attitude_deg"] = {{"phi", r.phi * kRadToDeg}, {"theta", r.theta * kRadToDeg},
                       {"psi", r.psi * kRadToDeg}};
  j["rates_dps"] = {{"p", r.p * kRadToDeg}, {"q", r.q * kRadToDeg}, {"r", r.r * kRadToDeg}};
  j["alpha_deg"] = r.alpha_deg;
  j["beta_deg"] = r.beta_deg;
  j["nz"] = r.nz;
  j["airspeed_fps"] = std::sqrt(r.u * r.u + r.v * r.v + r.w * r.w);
  j["altitude_ft"] = -r.down;
  j["mach"] = r.mach;
  j["limits"] = {{"alpha_max_deg", r.alpha_max_eff_deg},
                 {"alpha_min_deg", r.alpha_min_eff_deg},
                 {"nz_max", r.nz_max},
                 {"nz_min", r.nz_min},
                 {"phi_max_deg", r.phi_max_deg}};
  j["normalized"] = {{"alpha_bar", r.alpha_bar}, {"phi_bar", r.phi_bar}};
  j["protection"] = {{"on", r.protection_on != 0.0},
                     {"rate_active", r.rate_active != 0.0},
                     {"long_active", r.long_active != 0.0},
                     {"lat_active", r.lat_active != 0.0},
                     {"lambda_long", r.lambda_long},
                     {"lambda_lat", r.lambda_lat}};
  j["commands"] = {{"pilot_rps", {r.pilot_p, r.pilot_q, r.pilot_r}},
                   {"protected_rps", {r.cmd_p, r.cmd_q, r.cmd_r}},
                   {"surfaces_deg", {r.tail, r.aileron, r.rudder}}};
  j["stick"] = {{"pitch", stick_json(sim, acs::kPitch, r.softstop_pitch)},
                {"roll", stick_json(sim, acs::kRoll, r.softstop_roll)}};
  ordered_json ev = ordered_json::array();
  for (const auto& e : events) ev.push_back({{"step", e.step}, {"event", e.text}});
  j["events"] = ev;
  return j.dump();
}

std::string error_frame(const std::string& message) {
  return ordered_json{{"type", "error"}, {"message", message}}.dump();
}

std::string mime_type(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".map") return "application/json";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root,
                                                    const std::string& target) {
  if (root.empty() || target.empty() || target.front() != '/') return std::nullopt;
  std::string path = target.substr(0, target.find_first_of("?#"));
  if (path.find('\0') != std::string::npos) return std::nullopt;
  if (path.back() == '/') path += "index.html";
  std::error_code ec;
  const auto base = std::filesystem::weakly_canonical(root, ec);
  if (ec) return std::nullopt;
  const auto full = std::filesystem::weakly_canonical(base / path.substr(1), ec);
  if (ec) return std::nullopt;
  const auto rel = full.lexically_relative(base);
  if (rel.empty() || *rel.begin() == "..") return std::nullopt;
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

// ---------------------------------------------------------------------------

namespace {

class WsSession;

struct Hub {
  std::mutex mutex;
  std::set<std::shared_ptr<WsSession>> sessions;
  std::atomic<std::uint64_t> dropped{0};
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Hub& hub, const FrameHandler& handler, std::size_t limit)
      : ws_(std::move(socket)), hub_(hub), handler_(handler), limit_(limit) {}

  void start(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      {
        std::lock_guard lock(self->hub_.mutex);
        self->hub_.sessions.insert(self);
      }
      self->read();
    });
  }

  // network thread only
  void enqueue(std::shared_ptr<const std::string> frame) {
    if (closed_) return;
    if (queue_.size() >= limit_) {
      // the front frame may be in flight
      const auto oldest = writing_ ? std::next(queue_.begin()) : queue_.begin();
      if (oldest != queue_.end()) {
        queue_.erase(oldest);
        ++hub_.dropped;
      }
    }
    queue_.push_back(std::move(frame));
    if (!writing_) write();
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->drop();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      std::optional<std::string> reply;
      if (!self->ws_.got_text()) {
        reply = error_frame("binary frames are not accepted");
      } else if (self->handler_) {
        reply = self->handler_(text);
      }
      if (reply) self->enqueue(std::make_shared<const std::string>(std::move(*reply)));
      self->read();
    });
  }

  void write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(asio::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->drop();
                        return;
                      }
                      self->queue_.pop_front();
                      if (self->queue_.empty()) {
                        self->writing_ = false;
                      } else {
                        self->write();
                      }
                    });
  }

  void drop() {
    closed_ = true;
    queue_.clear();
    std::lock_guard lock(hub_.mutex);
    hub_.sessions.erase(shared_from_this());
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  Hub& hub_;
  const FrameHandler& handler_;
  std::size_t limit_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  bool writing_ = false;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Hub& hub, const FrameHandler& handler,
              const ServerOptions& options)
      : stream_(std::move(socket)), hub_(hub), handler_(handler), options_(options) {}

  void start() { read(); }

 private:
  void read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->handle();
                     });
  }

  void handle() {
    if (websocket::is_upgrade(request_)) {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), hub_, handler_,
                                  options_.client_queue)
          ->start(std::move(request_));
      return;
    }
    const bool keep_alive = request_.keep_alive();
    if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
      send_text(http::status::method_not_allowed, "method not allowed\n", keep_alive);
      return;
    }
    const auto file =
        resolve_static(options_.static_root, std::string(request_.target()));
    if (!file) {
      send_text(http::status::not_found, "not found\n", keep_alive);
      return;
    }
    beast::error_code ec;
    http::file_body::value_type body;
    body.open(file->c_str(), beast::file_mode::scan, ec);
    if (ec) {
      send_text(http::status::not_found, "not found\n", keep_alive);
      return;
    }
    auto res = std::make_shared<http::response<http::file_body>>(
        std::piecewise_construct, std::make_tuple(std::move(body)),
        std::make_tuple(http::status::ok, request_.version()));
    res->set(http::field::content_type, mime_type(*file));
    res->keep_alive(keep_alive);
    res->prepare_payload();
    if (request_.method() == http::verb::head) {
      http::response<http::empty_body> head{http::status::ok, request_.version()};
      head.set(http::field::content_type, mime_type(*file));
      head.content_length(res->body().size());
      head.keep_alive(keep_alive);
      auto h = std::make_shared<http::response<http::empty_body>>(std::move(head));
      http::async_write(stream_, *h,
                        [self = shared_from_this(), h, keep_alive](beast::error_code e,
                                                                   std::size_t) {
                          self->after_write(e, keep_alive);
                        });
      return;
    }
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res, keep_alive](beast::error_code e,
                                                                   std::size_t) {
                        self->after_write(e, keep_alive);
                      });
  }

  void send_text(http::status status, const std::string& text, bool keep_alive) {
    auto res = std::make_shared<http::response<http::string_body>>(status, request_.version());
    res->set(http::field::content_type, "text/plain; charset=utf-8");
    res->keep_alive(keep_alive);
    res->body() = text;
    res->prepare_payload();
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res, keep_alive](beast::error_code e,
                                                                   std::size_t) {
                        self->after_write(e, keep_alive);
                      });
  }

  void after_write(beast::error_code ec, bool keep_alive) {
    if (ec) return;
    if (keep_alive) {
      read();
    } else {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    }
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  Hub& hub_;
  const FrameHandler& handler_;
  const ServerOptions& options_;
};

}  // namespace

struct TelemetryServer::Impl {
  ServerOptions options;
  FrameHandler handler;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  Hub hub;
  std::thread thread;
  bool stopped = false;
  std::uint16_t port = 0;

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), hub, handler, options)->start();
      accept();
    });
  }
};

TelemetryServer::TelemetryServer(ServerOptions options, FrameHandler handler)
    : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->handler = std::move(handler);
  const tcp::endpoint ep(asio::ip::make_address(impl_->options.address), impl_->options.port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen();
  impl_->port = impl_->acceptor.local_endpoint().port();
  impl_->accept();
  impl_->thread = std::thread([impl = impl_.get()] { impl->io.run(); });
}

TelemetryServer::~TelemetryServer() { stop(); }

void TelemetryServer::stop() {
  if (!impl_ || impl_->stopped) return;
  impl_->stopped = true;
  impl_->io.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  beast::error_code ec;
  impl_->acceptor.close(ec);
  std::lock_guard lock(impl_->hub.mutex);
  for (const auto& session : impl_->hub.sessions) session->close();
  impl_->hub.sessions.clear();
}

void TelemetryServer::broadcast(std::string frame) {
  auto shared = std::make_shared<const std::string>(std::move(frame));
  asio::post(impl_->io, [impl = impl_.get(), shared] {
    std::vector<std::shared_ptr<WsSession>> targets;
    {
      std::lock_guard lock(impl->hub.mutex);
      targets.assign(impl->hub.sessions.begin(), impl->hub.sessions.end());
    }
    for (const auto& s : targets) s->enqueue(shared);
  });
}

std::uint16_t TelemetryServer::port() const { return impl_->port; }

std::size_t TelemetryServer::clients() const {
  std::lock_guard lock(impl_->hub.mutex);
  return impl_->hub.sessions.size();
}

std::uint64_t TelemetryServer::dropped_frames() const { return impl_->hub.dropped.load(); }

}  // namespace fepsim::sim
