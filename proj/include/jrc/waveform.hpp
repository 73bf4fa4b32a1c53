#pragma once
#include "jrc/scene.hpp"

namespace jrc {

struct GolayPair {
  std::vector<int> seq_a;  // entries +-1
  std::vector<int> seq_b;
};

struct Packet {
  std::vector<cd> samples;
  int packet_index = 1;  // q in 1..Q
  double amplitude = 1.0;  // sqrt(E_s)
};

// Complementary pair by recursive doubling from a=[1,1], b=[1,-1].
GolayPair golay_pair(int length);

// Integer autocorrelation of a +-1 sequence at all lags -(M-1)..(M-1).
std::vector<long long> autocorr(const std::vector<int>& s);

Packet build_packet(const GolayPair& pair, int q, const WaveformConfig& wf,
                    bool use_a = true);

// Conjugate of the steering vector: element p = exp(-j*k_c*d*p*sin(theta)).
std::vector<cd> beamform_weights(double theta, const ArrayConfig& arrays,
                                 const WaveformConfig& wf);

}  // namespace jrc
