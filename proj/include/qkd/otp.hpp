#pragma once

#include <cstddef>
#include <string>

#include "qkd/bits.hpp"

namespace qkd {

class Rng;

// Shared random bit sequence with a monotone consumed-bit cursor. Bits below
// the cursor are spent and can never be used for masking again; the two ends
// of a pairing track consumption independently, so desynchronization shows
// up as garbled output rather than an error.
class PadStore {
  public:
    PadStore(BitVec bits, std::string owner);

    static PadStore random(std::size_t nbits, std::string owner, Rng& rng);

    std::size_t size() const { return bits_.size(); }
    std::size_t consumed() const { return consumed_; }
    std::size_t remaining() const { return bits_.size() - consumed_; }
    const std::string& owner() const { return owner_; }

    // Ground truth for the simulator and for pad-file IO; not part of any
    // on-channel traffic.
    const BitVec& bits() const { return bits_; }

    // XOR the message with the next unconsumed bits and advance the cursor.
    // Throws PadExhausted when fewer than message.size() bits remain.
    BitVec mask(const BitVec& message);

    // Identical operation (XOR is an involution); named for call sites.
    BitVec unmask(const BitVec& ciphertext);

    // Mask at an explicit offset. Throws PadReuse when offset < consumed();
    // otherwise consumes through offset + message.size().
    BitVec mask_at(std::size_t offset, const BitVec& message);

  private:
    BitVec apply(std::size_t offset, const BitVec& input);

    BitVec bits_;
    std::size_t consumed_ = 0;
    std::string owner_;
};

// Pad files are the raw pad bytes, MSB-first within each byte, no header.
PadStore load_pad_file(const std::string& path, std::string owner);
void save_pad_file(const PadStore& pad, const std::string& path);

} // namespace qkd
