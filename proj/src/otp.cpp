#include "qkd/otp.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "qkd/errors.hpp"
#include "qkd/rng.hpp"

namespace qkd {

PadStore::PadStore(BitVec bits, std::string owner)
    : bits_(std::move(bits)), owner_(std::move(owner)) {}

PadStore PadStore::random(std::size_t nbits, std::string owner, Rng& rng) {
    return PadStore(BitVec::random(nbits, rng), std::move(owner));
}

BitVec PadStore::apply(std::size_t offset, const BitVec& input) {
    if (input.size() > bits_.size() ||
        offset > bits_.size() - input.size()) {
        throw PadExhausted(owner_ + ": pad has too few unconsumed bits");
    }
    const BitVec out = input ^ bits_.slice(offset, input.size());
    consumed_ = offset + input.size();
    return out;
}

BitVec PadStore::mask(const BitVec& message) {
    return apply(consumed_, message);
}

BitVec PadStore::unmask(const BitVec& ciphertext) {
    return apply(consumed_, ciphertext);
}

BitVec PadStore::mask_at(std::size_t offset, const BitVec& message) {
    if (offset < consumed_) {
        throw PadReuse(owner_ + ": offset addresses already-consumed pad bits");
    }
    return apply(offset, message);
}

PadStore load_pad_file(const std::string& path, std::string owner) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open pad file: " + path);
    }
    std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    return PadStore(
        BitVec::from_bytes(reinterpret_cast<const std::uint8_t*>(raw.data()),
                           raw.size() * 8),
        std::move(owner));
}

void save_pad_file(const PadStore& pad, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write pad file: " + path);
    }
    const auto& bytes = pad.bits().bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace qkd
