#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "skl/wire.hpp"

namespace skl {

// Two-party transport speaking the framed wire format. The in-process
// loopback is the default; a TCP loopback puts the same bytes on a real
// socket pair.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const std::vector<uint8_t>& frame) = 0;
  virtual std::vector<uint8_t> recv() = 0;
};

// paired queues; ends share the pipe object
struct LoopbackPipe {
  std::deque<std::vector<uint8_t>> a_to_b, b_to_a;
};

class LoopbackChannel : public Channel {
 public:
  LoopbackChannel(std::shared_ptr<LoopbackPipe> pipe, bool is_a)
      : pipe_(std::move(pipe)), is_a_(is_a) {}
  void send(const std::vector<uint8_t>& frame) override;
  std::vector<uint8_t> recv() override;

 private:
  std::shared_ptr<LoopbackPipe> pipe_;
  bool is_a_;
};

// TCP channel over 127.0.0.1; frames are u32-length-prefixed. Writes are
// drained by a background thread so that both ends can live in one thread
// without deadlocking on kernel buffers.
class TcpChannel : public Channel {
 public:
  explicit TcpChannel(int fd);
  ~TcpChannel() override;
  void send(const std::vector<uint8_t>& frame) override;
  std::vector<uint8_t> recv() override;

  // returns (listener fd, bound port)
  static std::pair<int, int> listen_local();
  static int accept_one(int listener);
  static int connect_local(int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SessionConfig {
  std::string scheme = "pke";  // pke | pke-ni | prf
  int n = 8;
  int w = 8;
  size_t prf_ell = 16;
  uint64_t seed = 1;
  std::string preset = "demo";
  bool tcp = false;
  int uses = 3;  // encrypt/decrypt or evaluate rounds before deletion
};

struct PhaseResult {
  std::string name;
  bool pass = false;
  double ms = 0;
};

struct SessionReport {
  std::vector<PhaseResult> phases;
  std::string transcript_digest;  // hash over every frame on the wire
  bool all_pass() const {
    for (const auto& p : phases)
      if (!p.pass) return false;
    return !phases.empty();
  }
  std::string to_text() const;  // line-oriented field=value
};

LatticeParams preset_by_name(const std::string& name);

SessionReport run_session(const SessionConfig& cfg);

}  // namespace skl
