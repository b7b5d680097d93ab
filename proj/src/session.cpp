#include "skl/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace skl {

void LoopbackChannel::send(const std::vector<uint8_t>& frame) {
  (is_a_ ? pipe_->a_to_b : pipe_->b_to_a).push_back(frame);
}

std::vector<uint8_t> LoopbackChannel::recv() {
  auto& q = is_a_ ? pipe_->b_to_a : pipe_->a_to_b;
  if (q.empty()) throw std::runtime_error("loopback: no frame pending");
  auto f = std::move(q.front());
  q.pop_front();
  return f;
}

static void write_all(int fd, const uint8_t* p, size_t n) {
  while (n) {
    ssize_t w = ::write(fd, p, n);
    if (w <= 0) throw std::runtime_error("tcp: write failed");
    p += w;
    n -= size_t(w);
  }
}

static void read_all(int fd, uint8_t* p, size_t n) {
  while (n) {
    ssize_t r = ::read(fd, p, n);
    if (r <= 0) throw std::runtime_error("tcp: read failed");
    p += r;
    n -= size_t(r);
  }
}

struct TcpChannel::Impl {
  int fd = -1;
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<uint8_t>> outbox;
  bool stop = false;
  std::thread writer;

  explicit Impl(int fd_) : fd(fd_) {
    writer = std::thread([this] { run(); });
  }
  ~Impl() {
    {
      std::lock_guard<std::mutex> lk(mu);
      stop = true;
    }
    cv.notify_all();
    writer.join();
    if (fd >= 0) ::close(fd);
  }
  void run() {
    for (;;) {
      std::vector<uint8_t> frame;
      {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [this] { return stop || !outbox.empty(); });
        if (outbox.empty()) return;
        frame = std::move(outbox.front());
        outbox.pop_front();
      }
      uint8_t hdr[4];
      for (int i = 0; i < 4; i++) hdr[i] = uint8_t(frame.size() >> (8 * i));
      write_all(fd, hdr, 4);
      if (!frame.empty()) write_all(fd, frame.data(), frame.size());
    }
  }
};

TcpChannel::TcpChannel(int fd) : impl_(std::make_unique<Impl>(fd)) {}
TcpChannel::~TcpChannel() = default;

void TcpChannel::send(const std::vector<uint8_t>& frame) {
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->outbox.push_back(frame);
  }
  impl_->cv.notify_all();
}

std::vector<uint8_t> TcpChannel::recv() {
  uint8_t hdr[4];
  read_all(impl_->fd, hdr, 4);
  uint32_t len = 0;
  for (int i = 0; i < 4; i++) len |= uint32_t(hdr[i]) << (8 * i);
  std::vector<uint8_t> frame(len);
  if (len) read_all(impl_->fd, frame.data(), len);
  return frame;
}

std::pair<int, int> TcpChannel::listen_local() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("tcp: socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw std::runtime_error("tcp: bind failed");
  }
  if (::listen(fd, 1) != 0) {
    ::close(fd);
    throw std::runtime_error("tcp: listen failed");
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return {fd, int(ntohs(addr.sin_port))};
}

int TcpChannel::accept_one(int listener) {
  int fd = ::accept(listener, nullptr, nullptr);
  if (fd < 0) throw std::runtime_error("tcp: accept failed");
  return fd;
}

int TcpChannel::connect_local(int port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("tcp: socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(uint16_t(port));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw std::runtime_error("tcp: connect failed");
  }
  return fd;
}

LatticeParams preset_by_name(const std::string& name) {
  if (name == "demo") return LatticeParams::demo_preset();
  if (name == "full") return LatticeParams::full_preset();
  throw std::invalid_argument("unknown preset: " + name);
}

std::string SessionReport::to_text() const {
  std::ostringstream os;
  os << "all_pass=" << (all_pass() ? 1 : 0) << "\n";
  os << "transcript_digest=" << transcript_digest << "\n";
  for (const auto& p : phases)
    os << "phase." << p.name << "=" << (p.pass ? "pass" : "fail")
       << " time_ms=" << p.ms << "\n";
  return os.str();
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Transcript {
  std::vector<uint8_t> all;
  void absorb(const std::vector<uint8_t>& frame) {
    all.insert(all.end(), frame.begin(), frame.end());
  }
};

// passes a frame through the channel pair and records it
std::vector<uint8_t> relay(Channel& from, Channel& to, Transcript& tr,
                           const std::vector<uint8_t>& frame) {
  from.send(frame);
  auto got = to.recv();
  tr.absorb(got);
  return got;
}

SessionReport run_pke_session(const SessionConfig& cfg, Channel& lessee_ch,
                              Channel& lessor_ch) {
  SessionReport rep;
  Transcript tr;
  SplitRng root(cfg.seed);
  LatticeParams lat = preset_by_name(cfg.preset);

  SplitRng setup_rng = root.split("setup");
  PkeSklSetupOut su =
      pke_skl_setup(cfg.n, cfg.w, lat, PkeScheme::toy_scheme(), setup_rng);

  // keygen over the wire
  Stopwatch kg;
  SplitRng r1 = root.split("lessee1");
  auto [bundle, lessee_state] =
      skl_lessee_round1(su.scheme.params, su.ek.pub, su.secrets, r1);
  auto f1 = relay(lessee_ch, lessor_ch, tr, encode_msg(msg1_to_wire(bundle)));
  SklMsg1Bundle got1 = msg1_from_wire(decode_msg(f1));
  SplitRng r2 = root.split("lessor2");
  SklMsg2Bundle msg2 = pke_skl_lessor_round2(su, got1, su.dvk, r2);
  auto f2 = relay(lessor_ch, lessee_ch, tr, encode_msg(msg2_to_wire(msg2)));
  SklMsg2Bundle got2 = msg2_from_wire(decode_msg(f2));
  QuantumKey key = skl_lessee_finish(su.scheme.params, su.ek.pub, lessee_state, got2);
  rep.phases.push_back({"keygen", key.states.size() == 2 * size_t(cfg.n), kg.ms()});

  // use: encrypt on the lessor side, decrypt with the leased key
  Stopwatch use;
  bool use_ok = true;
  SplitRng use_rng = root.split("use");
  for (int it = 0; it < cfg.uses; it++) {
    SplitRng mr = use_rng.split("m", uint64_t(it));
    BitVec m = BitVec::random(su.scheme.message_bits(), mr);
    SplitRng er = use_rng.split("enc", uint64_t(it));
    PkeSklCt ct = pke_skl_enc(su.scheme, su.ek, m, er);
    auto fct = relay(lessor_ch, lessee_ch, tr, encode_msg(ct_to_wire(ct)));
    PkeSklCt got_ct = ct_from_wire(decode_msg(fct));
    SplitRng qr = use_rng.split("qdec", uint64_t(it));
    QDecOut out = pke_skl_qdec(su.scheme, std::move(key), got_ct, qr);
    key = std::move(out.key);
    use_ok = use_ok && out.m == m &&
             pke_skl_dec(su.scheme, su.msk, ct) == m;
  }
  rep.phases.push_back({"use", use_ok, use.ms()});

  // deletion
  Stopwatch del;
  SplitRng dr = root.split("del");
  DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), dr);
  auto fc = relay(lessee_ch, lessor_ch, tr, encode_msg(cert_to_wire(cert)));
  DeletionCert got_cert = cert_from_wire(decode_msg(fc));
  rep.phases.push_back({"delete", got_cert.d.size() == 2 * size_t(cfg.n), del.ms()});

  Stopwatch vr;
  DelVrfyReport v = skl_del_vrfy(su.scheme.params, su.dvk, got_cert);
  rep.phases.push_back({"verify", v.ok, vr.ms()});

  rep.transcript_digest = hex_digest(tr.all);
  return rep;
}

SessionReport run_ni_session(const SessionConfig& cfg, Channel& lessee_ch,
                             Channel& lessor_ch) {
  SessionReport rep;
  Transcript tr;
  SplitRng root(cfg.seed);
  LatticeParams lat = preset_by_name(cfg.preset);
  PkeScheme base = PkeScheme::toy_scheme();

  SplitRng setup_rng = root.split("setup");
  NiSetupOut su = ni_setup(cfg.n, cfg.w, lat, setup_rng);

  Stopwatch kg;
  SplitRng kr = root.split("ni-kg");
  auto [ek, half] = ni_kg(su, kr);
  auto fek = relay(lessee_ch, lessor_ch, tr, encode_msg(msg1_to_wire(ek.bundle)));
  NiEk got_ek{msg1_from_wire(decode_msg(fek))};
  ni_record_transcript(su, got_ek);
  rep.phases.push_back({"keygen", true, kg.ms()});

  Stopwatch use;
  bool use_ok = true;
  SplitRng use_rng = root.split("use");
  const size_t mbits = 2 * size_t(cfg.n) * size_t(cfg.w);
  for (int it = 0; it < cfg.uses; it++) {
    SplitRng mr = use_rng.split("m", uint64_t(it));
    BitVec m = BitVec::random(mbits, mr);
    SplitRng er = use_rng.split("enc", uint64_t(it));
    NiCt ct = ni_enc(su, base, got_ek, m, er);
    auto fct = relay(lessor_ch, lessee_ch, tr, encode_msg(nict_to_wire(ct)));
    NiCt got_ct = nict_from_wire(decode_msg(fct), base);
    SplitRng qr = use_rng.split("qdec", uint64_t(it));
    NiQDecOut out = ni_qdec(su, base, std::move(half), got_ct, qr);
    half = std::move(out.key);
    use_ok = use_ok && out.m == m;
  }
  rep.phases.push_back({"use", use_ok, use.ms()});

  Stopwatch del;
  SplitRng dr = root.split("del");
  DeletionCert cert = ni_del(su, std::move(half), dr);
  auto fc = relay(lessee_ch, lessor_ch, tr, encode_msg(cert_to_wire(cert)));
  DeletionCert got_cert = cert_from_wire(decode_msg(fc));
  rep.phases.push_back({"delete", got_cert.d.size() == 2 * size_t(cfg.n), del.ms()});

  Stopwatch vr;
  DelVrfyReport v = skl_del_vrfy(su.params, su.dvk, got_cert);
  rep.phases.push_back({"verify", v.ok, vr.ms()});

  rep.transcript_digest = hex_digest(tr.all);
  return rep;
}

SessionReport run_prf_session(const SessionConfig& cfg, Channel& lessee_ch,
                              Channel& lessor_ch) {
  SessionReport rep;
  Transcript tr;
  SplitRng root(cfg.seed);
  LatticeParams lat = preset_by_name(cfg.preset);

  SplitRng setup_rng = root.split("setup");
  PrfSklSetupOut su = prf_skl_setup(cfg.n, cfg.w, cfg.prf_ell, lat, setup_rng);

  Stopwatch kg;
  SplitRng r1 = root.split("lessee1");
  auto [bundle, lessee_state] =
      skl_lessee_round1(su.scheme.params, su.pub, su.secrets, r1);
  auto f1 = relay(lessee_ch, lessor_ch, tr, encode_msg(msg1_to_wire(bundle)));
  SklMsg1Bundle got1 = msg1_from_wire(decode_msg(f1));
  SplitRng r2 = root.split("lessor2");
  SklMsg2Bundle msg2 = prf_skl_lessor_round2(su, got1, su.dvk, r2);
  auto f2 = relay(lessor_ch, lessee_ch, tr, encode_msg(msg2_to_wire(msg2)));
  QuantumKey key = skl_lessee_finish(su.scheme.params, su.pub, lessee_state,
                                     msg2_from_wire(decode_msg(f2)));
  rep.phases.push_back({"keygen", key.states.size() == 2 * size_t(cfg.n), kg.ms()});

  Stopwatch use;
  bool use_ok = true;
  SplitRng use_rng = root.split("use");
  for (int it = 0; it < cfg.uses; it++) {
    SplitRng sr = use_rng.split("s", uint64_t(it));
    BitVec s = BitVec::random(su.scheme.input_bits(), sr);
    SplitRng qr = use_rng.split("qleval", uint64_t(it));
    QLEvalOut out = prf_skl_qleval(su.scheme, std::move(key), s, qr);
    key = std::move(out.key);
    use_ok = use_ok && out.t == prf_skl_eval(su.scheme, su.msk, s) &&
             out.collapsed_indices.empty();
  }
  rep.phases.push_back({"use", use_ok, use.ms()});

  Stopwatch del;
  SplitRng dr = root.split("del");
  DeletionCert cert = skl_del(su.scheme.params, su.pub, std::move(key), dr);
  auto fc = relay(lessee_ch, lessor_ch, tr, encode_msg(cert_to_wire(cert)));
  DeletionCert got_cert = cert_from_wire(decode_msg(fc));
  rep.phases.push_back({"delete", got_cert.d.size() == 2 * size_t(cfg.n), del.ms()});

  Stopwatch vr;
  DelVrfyReport v = skl_del_vrfy(su.scheme.params, su.dvk, got_cert);
  rep.phases.push_back({"verify", v.ok, vr.ms()});

  rep.transcript_digest = hex_digest(tr.all);
  return rep;
}

SessionReport dispatch(const SessionConfig& cfg, Channel& lessee_ch,
                       Channel& lessor_ch) {
  if (cfg.scheme == "pke") return run_pke_session(cfg, lessee_ch, lessor_ch);
  if (cfg.scheme == "pke-ni") return run_ni_session(cfg, lessee_ch, lessor_ch);
  if (cfg.scheme == "prf") return run_prf_session(cfg, lessee_ch, lessor_ch);
  throw std::invalid_argument("unknown scheme: " + cfg.scheme);
}

}  // namespace

SessionReport run_session(const SessionConfig& cfg) {
  if (!cfg.tcp) {
    auto pipe = std::make_shared<LoopbackPipe>();
    LoopbackChannel lessee(pipe, true);
    LoopbackChannel lessor(pipe, false);
    return dispatch(cfg, lessee, lessor);
  }
  // TCP loopback: the lessor end accepts on a background thread; the
  // protocol logic itself still runs in one place, frames go over the pair
  auto [listener, port] = TcpChannel::listen_local();
  int accepted_fd = -1;
  std::thread acceptor([&] { accepted_fd = TcpChannel::accept_one(listener); });
  int client_fd = TcpChannel::connect_local(port);
  acceptor.join();
  ::close(listener);
  TcpChannel lessee(client_fd);
  TcpChannel lessor(accepted_fd);
  return dispatch(cfg, lessee, lessor);
}

}  // namespace skl
