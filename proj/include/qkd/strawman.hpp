#pragma once

#include "qkd/bits.hpp"

namespace qkd {

// The lockbox exchange made concrete with XOR locks, plus the work-factor
// estimator used to reason about "practically sufficient" security margins.

// The three publicly visible transmissions of a commuting-lock exchange.
struct ThreePassTranscript {
    BitVec pass1; // m ^ a
    BitVec pass2; // m ^ a ^ b
    BitVec pass3; // m ^ b
};

// Runs the exchange with XOR locks and checks internally that Bob's final
// unlock recovers the message. Throws LengthMismatch on unequal lengths.
ThreePassTranscript three_pass_exchange(const BitVec& message,
                                        const BitVec& alice_key,
                                        const BitVec& bob_key);

// Eve's constructive break: pass1 ^ pass2 ^ pass3 == m for every key choice;
// only the public transcript is needed.
BitVec eve_break_three_pass(const ThreePassTranscript& t);

// Resources assumed available to an attacker of a computationally secured
// scheme. All fields must be strictly positive.
struct WorkFactorModel {
    int security_bits = 0;
    double ops_per_second = 0.0;
    int machines = 1;
    double algorithmic_speedup = 1.0;
};

// Expected break time in Julian years (31'557'600 s):
// 2^security_bits / (ops_per_second * machines * algorithmic_speedup).
double estimate_break_years(const WorkFactorModel& w);

} // namespace qkd
