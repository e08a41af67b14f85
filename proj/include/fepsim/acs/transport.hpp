#pragma once

// Datagram transports between the simulation and the stick emulator. One
// encoded message per datagram.

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/udp.hpp>
#include <boost/lockfree/spsc_queue.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fepsim::acs {

using Datagram = std::vector<std::uint8_t>;

class Transport {
 public:
  virtual ~Transport() = default;
  /// False when the datagram was dropped.
  virtual bool send(std::span<const std::uint8_t> datagram) = 0;
  virtual std::optional<Datagram> receive() = 0;
};

/// Bounded single-producer single-consumer datagram queue.
class DatagramQueue {
 public:
  explicit DatagramQueue(std::size_t capacity = 1024) : queue_(capacity) {}

  bool push(std::span<const std::uint8_t> d) {
    if (!queue_.push(Datagram(d.begin(), d.end()))) {
      ++dropped_;
      return false;
    }
    return true;
  }
  std::optional<Datagram> pop() {
    Datagram d;
    if (queue_.pop(d)) return d;
    return std::nullopt;
  }
  std::uint64_t dropped() const { return dropped_; }

 private:
  boost::lockfree::spsc_queue<Datagram> queue_;
  std::uint64_t dropped_ = 0;  // producer side only
};

/// In-process link: two queues, one per direction.
class LoopbackLink {
 public:
  explicit LoopbackLink(std::size_t capacity = 1024);
  ~LoopbackLink();

  /// Endpoint used by the simulation side and by the device side.
  Transport& host();
  Transport& device();

 private:
  class End;
  DatagramQueue to_device_;
  DatagramQueue to_host_;
  std::unique_ptr<End> host_;
  std::unique_ptr<End> device_;
};

/// Non-blocking UDP socket bound to `local`, sending to `remote`.
class UdpTransport : public Transport {
 public:
  UdpTransport(boost::asio::io_context& io, const boost::asio::ip::udp::endpoint& local,
               const boost::asio::ip::udp::endpoint& remote);

  bool send(std::span<const std::uint8_t> datagram) override;
  std::optional<Datagram> receive() override;

  /// Closes and rebinds to a new local address.
  void rebind(const boost::asio::ip::udp::endpoint& local);
  void set_remote(const boost::asio::ip::udp::endpoint& remote) { remote_ = remote; }

  boost::asio::ip::udp::endpoint local_endpoint() const { return socket_.local_endpoint(); }
  const std::optional<boost::asio::ip::udp::endpoint>& last_sender() const { return sender_; }

 private:
  boost::asio::ip::udp::socket socket_;
  boost::asio::ip::udp::endpoint remote_;
  std::optional<boost::asio::ip::udp::endpoint> sender_;
};

boost::asio::ip::udp::endpoint parse_endpoint(const std::string& text);

}  // namespace fepsim::acs
