#include "uvms/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include "uvms/errors.hpp"
#include "uvms/session.hpp"

namespace uvms {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

struct Inbound {
  std::uint64_t connection;
  std::string text;
};

/// Ordered, bounded hand-off from the network thread to the tick loop.
class InboundQueue {
 public:
  explicit InboundQueue(std::size_t capacity) : capacity_(capacity) {}

  bool push(Inbound m) {
    std::lock_guard lock(mutex_);
    if (items_.size() >= capacity_) {
      ++overflowed_;
      return false;
    }
    items_.push_back(std::move(m));
    return true;
  }

  std::deque<Inbound> drain() {
    std::lock_guard lock(mutex_);
    return std::exchange(items_, {});
  }

  std::uint64_t overflowed() const {
    std::lock_guard lock(mutex_);
    return overflowed_;
  }

 private:
  mutable std::mutex mutex_;
  std::deque<Inbound> items_;
  std::size_t capacity_;
  std::uint64_t overflowed_ = 0;
};

class Connection;
using ConnectionMap = std::map<std::uint64_t, std::shared_ptr<Connection>>;

// Lives entirely on the I/O thread.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, std::uint64_t id, InboundQueue& queue, ConnectionMap& peers)
      : ws_(std::move(socket)), id_(id), queue_(queue), peers_(peers) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->peers_[self->id_] = self;
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> text) {
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->peers_.erase(self->id_);
        return;
      }
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (!self->queue_.push({self->id_, std::move(text)})) {
        self->send(std::make_shared<const std::string>(
            wire::encode(wire::ErrorReply{"server busy, message dropped"})));
      }
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(*outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->peers_.erase(self->id_);
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) self->write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  std::uint64_t id_;
  InboundQueue& queue_;
  ConnectionMap& peers_;
};

}  // namespace

struct Server::Impl {
  Impl(SessionConfig c, ServerOptions o)
      : config(std::move(c)), options(std::move(o)), queue(options.queue_capacity), acceptor(ioc) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), next_id++, queue, peers)->start();
      accept();
    });
  }

  /// Queues a message for one connection (or all when `to` is empty).
  void post(std::optional<std::uint64_t> to, std::string text) {
    auto shared = std::make_shared<const std::string>(std::move(text));
    net::post(ioc, [this, to, shared] {
      if (to) {
        if (auto it = peers.find(*to); it != peers.end()) it->second->send(shared);
        return;
      }
      for (auto& [id, peer] : peers) peer->send(shared);
    });
  }

  SessionConfig config;
  ServerOptions options;
  InboundQueue queue;
  net::io_context ioc;
  tcp::acceptor acceptor;
  ConnectionMap peers;  // I/O thread only
  std::uint64_t next_id = 1;
  std::optional<std::uint16_t> bound_port;
  std::atomic<bool> stopping{false};
};

Server::Server(SessionConfig config, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(options))) {}

Server::~Server() { stop(); }

std::uint16_t Server::listen() {
  if (impl_->bound_port) return *impl_->bound_port;
  const tcp::endpoint endpoint(net::ip::make_address(impl_->options.address),
                               static_cast<std::uint16_t>(impl_->config.port));
  tcp::acceptor& a = impl_->acceptor;
  a.open(endpoint.protocol());
  a.set_option(net::socket_base::reuse_address(true));
  a.bind(endpoint);
  a.listen(net::socket_base::max_listen_connections);
  impl_->bound_port = a.local_endpoint().port();
  return *impl_->bound_port;
}

void Server::run() {
  listen();
  Impl& s = *impl_;
  s.accept();
  std::thread io([&s] {
    auto guard = net::make_work_guard(s.ioc);
    s.ioc.run();
  });

  Session session(s.config);
  session.record_to(s.options.recorder);
  std::optional<TelemetryWriter> telemetry;
  if (s.options.telemetry != nullptr) telemetry.emplace(*s.options.telemetry);

  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(s.config.dt()));
  auto next = std::chrono::steady_clock::now();
  while (!s.stopping.load()) {
    if (s.options.max_ticks && session.world().tick >= *s.options.max_ticks) break;
    for (Inbound& m : s.queue.drain()) {
      for (const wire::OutboundMessage& reply : session.ingest(m.text)) {
        s.post(m.connection, wire::encode(reply));
      }
    }
    const TickResult r = session.tick();
    if (telemetry) telemetry->write(r.record);
    for (const TeleopEvent& e : r.events) s.post(std::nullopt, wire::encode(e));
    if (r.snapshot) s.post(std::nullopt, wire::encode(*r.snapshot));
    next += period;
    std::this_thread::sleep_until(next);
  }

  if (s.options.recorder != nullptr) s.options.recorder->finish(session.world().tick);
  if (s.options.telemetry != nullptr) s.options.telemetry->flush();
  net::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
    s.peers.clear();
    s.ioc.stop();
  });
  io.join();
}

void Server::stop() { impl_->stopping.store(true); }

std::uint64_t Server::overflowed_messages() const { return impl_->queue.overflowed(); }

}  // namespace uvms
