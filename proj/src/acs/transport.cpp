#include "fepsim/acs/transport.hpp"

#include <boost/asio/buffer.hpp>

#include <array>
#include <stdexcept>

namespace fepsim::acs {

namespace asio = boost::asio;
using asio::ip::udp;

class LoopbackLink::End : public Transport {
 public:
  End(DatagramQueue& out, DatagramQueue& in) : out_(out), in_(in) {}
  bool send(std::span<const std::uint8_t> d) override { return out_.push(d); }
  std::optional<Datagram> receive() override { return in_.pop(); }

 private:
  DatagramQueue& out_;
  DatagramQueue& in_;
};

LoopbackLink::LoopbackLink(std::size_t capacity)
    : to_device_(capacity),
      to_host_(capacity),
      host_(std::make_unique<End>(to_device_, to_host_)),
      device_(std::make_unique<End>(to_host_, to_device_)) {}

LoopbackLink::~LoopbackLink() = default;

Transport& LoopbackLink::host() { return *host_; }
Transport& LoopbackLink::device() { return *device_; }

UdpTransport::UdpTransport(asio::io_context& io, const udp::endpoint& local,
                           const udp::endpoint& remote)
    : socket_(io), remote_(remote) {
  rebind(local);
}

void UdpTransport::rebind(const udp::endpoint& local) {
  boost::system::error_code ec;
  if (socket_.is_open()) {
    socket_.close(ec);
  }
  socket_.open(local.protocol());
  socket_.set_option(asio::socket_base::reuse_address(true));
  socket_.bind(local);
  socket_.non_blocking(true);
}

bool UdpTransport::send(std::span<const std::uint8_t> datagram) {
  boost::system::error_code ec;
  socket_.send_to(asio::buffer(datagram.data(), datagram.size()), remote_, 0, ec);
  return !ec;
}

std::optional<Datagram> UdpTransport::receive() {
  std::array<std::uint8_t, 2048> buf{};
  udp::endpoint from;
  boost::system::error_code ec;
  const std::size_t n = socket_.receive_from(asio::buffer(buf), from, 0, ec);
  if (ec) {
    return std::nullopt;
  }
  sender_ = from;
  return Datagram(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
}

udp::endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("endpoint must be host:port, got '" + text + "'");
  }
  boost::system::error_code ec;
  const auto address = asio::ip::make_address(text.substr(0, colon), ec);
  if (ec) {
    throw std::invalid_argument("bad address in '" + text + "'");
  }
  int port = -1;
  try {
    port = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
  }
  if (port < 0 || port > 65535) {
    throw std::invalid_argument("bad port in '" + text + "'");
  }
  return {address, static_cast<unsigned short>(port)};
}

}  // namespace fepsim::acs
