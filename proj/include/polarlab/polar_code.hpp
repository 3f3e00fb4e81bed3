#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace polarlab {

using BitWord = std::vector<std::uint8_t>;

// In-place source transform u -> u * F^{(x)n} over GF(2), F = [[1,0],[1,1]].
// The transform is its own inverse.
void polar_transform(BitWord& bits);
BitWord polar_transformed(BitWord bits);

// Hard-decision error probability of every synthetic bit channel under the
// Gaussian-approximation recursion on BPSK-AWGN mean LLRs.
struct ReliabilityProfile {
  double snr_db = 0.0;     // Eb/N0 the profile was evaluated at
  double rate = 0.0;       // payload rate used to convert Eb/N0 to sigma^2
  std::vector<double> pe;  // size N, pe[i] in [0, 1]
};

ReliabilityProfile build_reliability(int block_length, double snr_db, double rate);

struct CodeSpec {
  int block_length = 0;  // N, power of two >= 2
  int info_bits = 0;     // K = |A|, payload + crc
  int crc_bits = 0;      // r, 0 or 16
  double design_snr_db = 0.0;
  std::vector<int> frozen_set;    // ascending
  std::vector<int> info_set;      // ascending
  std::vector<int> reliable_set;  // ascending subset of info_set; may be empty

  int stages() const;  // log2(N)
  int payload_bits() const { return info_bits - crc_bits; }
  double payload_rate() const;
  void validate() const;  // throws std::invalid_argument on inconsistency
  std::string to_json() const;
  static CodeSpec from_json(const std::string& text);
};

// K most reliable indices (smallest pe); ties prefer the lower index.
std::vector<int> select_information_set(const ReliabilityProfile& profile, int k);

// Longest prefix of the information set, taken in ascending-pe order, whose
// pe sum stays within epsilon * p_b_lscd.
std::vector<int> select_reliable_set(const std::vector<int>& info_set,
                                     const ReliabilityProfile& profile,
                                     double epsilon, double p_b_lscd);

// Build a full code description at the given design point. epsilon < 0 leaves
// the reliable set empty.
CodeSpec make_code_spec(int block_length, int info_bits, int crc_bits,
                        double design_snr_db, double epsilon = -1.0,
                        double p_b_lscd = 0.0);

// CRC-16, polynomial 0x1021, init 0xffff, msb-first bits, no reflection,
// no final xor. Operates on bit vectors (one bit per element).
std::uint16_t crc16(const BitWord& bits);
BitWord crc16_append(const BitWord& payload);  // payload + 16 check bits
bool crc16_check(const BitWord& message);      // message = payload + check bits

// Message layout: message = payload followed by CRC bits, mapped onto
// info_set in ascending index order; frozen positions are zero.
BitWord embed_message(const CodeSpec& spec, const BitWord& message);
BitWord extract_message(const CodeSpec& spec, const BitWord& u);
bool message_crc_ok(const CodeSpec& spec, const BitWord& message);
BitWord encode_frame(const CodeSpec& spec, const BitWord& message);

}  // namespace polarlab
