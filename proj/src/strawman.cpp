#include "qkd/strawman.hpp"

#include <cmath>

#include "qkd/errors.hpp"

namespace qkd {

ThreePassTranscript three_pass_exchange(const BitVec& message,
                                        const BitVec& alice_key,
                                        const BitVec& bob_key) {
    if (message.size() != alice_key.size() ||
        message.size() != bob_key.size()) {
        throw LengthMismatch("three_pass_exchange: message and keys must have equal length");
    }
    ThreePassTranscript t;
    t.pass1 = message ^ alice_key;
    t.pass2 = t.pass1 ^ bob_key;
    t.pass3 = t.pass2 ^ alice_key;
    if ((t.pass3 ^ bob_key) != message) {
        throw Error("three_pass_exchange: recovery self-check failed");
    }
    return t;
}

BitVec eve_break_three_pass(const ThreePassTranscript& t) {
    if (t.pass1.size() != t.pass2.size() || t.pass1.size() != t.pass3.size()) {
        throw LengthMismatch("eve_break_three_pass: transcript passes must have equal length");
    }
    return t.pass1 ^ t.pass2 ^ t.pass3;
}

double estimate_break_years(const WorkFactorModel& w) {
    if (w.security_bits <= 0 || w.ops_per_second <= 0.0 || w.machines <= 0 ||
        w.algorithmic_speedup <= 0.0) {
        throw Error("estimate_break_years: all model fields must be positive");
    }
    constexpr double kJulianYearSeconds = 31'557'600.0;
    const double operations = std::ldexp(1.0, w.security_bits);
    const double rate =
        w.ops_per_second * w.machines * w.algorithmic_speedup;
    return operations / rate / kJulianYearSeconds;
}

} // namespace qkd
