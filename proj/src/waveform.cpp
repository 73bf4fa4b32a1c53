#include "jrc/waveform.hpp"

namespace jrc {

GolayPair golay_pair(int length) {
  if (length < 2 || (length & (length - 1)) != 0)
    throw ConfigError("golay_pair: length must be a power of two >= 2");
  GolayPair p{{1, 1}, {1, -1}};
  while (static_cast<int>(p.seq_a.size()) < length) {
    std::vector<int> a2 = p.seq_a;
    a2.insert(a2.end(), p.seq_b.begin(), p.seq_b.end());
    std::vector<int> b2 = p.seq_a;
    for (int v : p.seq_b) b2.push_back(-v);
    p.seq_a = std::move(a2);
    p.seq_b = std::move(b2);
  }
  return p;
}

std::vector<long long> autocorr(const std::vector<int>& s) {
  int m = static_cast<int>(s.size());
  std::vector<long long> r(2 * m - 1, 0);
  for (int lag = -(m - 1); lag <= m - 1; ++lag) {
    long long acc = 0;
    for (int i = 0; i < m; ++i) {
      int j = i + lag;
      if (j >= 0 && j < m) acc += static_cast<long long>(s[i]) * s[j];
    }
    r[lag + m - 1] = acc;
  }
  return r;
}

Packet build_packet(const GolayPair& pair, int q, const WaveformConfig& wf,
                    bool use_a) {
  if (q < 1 || q > wf.num_packets)
    throw ConfigError("build_packet: packet index out of range");
  const auto& seq = use_a ? pair.seq_a : pair.seq_b;
  Packet pkt;
  pkt.packet_index = q;
  pkt.amplitude = std::sqrt(wf.tx_energy);
  pkt.samples.reserve(seq.size());
  for (int v : seq) pkt.samples.emplace_back(pkt.amplitude * v, 0.0);
  return pkt;
}

std::vector<cd> beamform_weights(double theta, const ArrayConfig& arrays,
                                 const WaveformConfig& wf) {
  double d = spacing_or_default(arrays.element_spacing_bs, wf);
  auto u = steering_vector(theta, arrays.num_elements_bs, d, wf.propagation_const);
  for (auto& v : u) v = std::conj(v);
  return u;
}

}  // namespace jrc
