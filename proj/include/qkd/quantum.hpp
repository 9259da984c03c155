#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qkd/errors.hpp"

namespace qkd {

class Rng;

// Measurement basis parameter in [0, pi); angles are identified modulo pi.
class MeasurementAngle {
  public:
    static MeasurementAngle from_radians(double radians); // throws InvalidAngle

    double radians() const { return radians_; }

    bool operator==(const MeasurementAngle&) const = default;

  private:
    explicit MeasurementAngle(double radians) : radians_(radians) {}

    double radians_;
};

// Probability that measurements in bases a and b agree: cos^2(a - b).
// Values within 1e-9 of 0 or 1 are snapped exact, so identical and
// orthogonal bases behave structurally rather than statistically
// (pi/2 has no exact binary representation).
double agreement_probability(MeasurementAngle a, MeasurementAngle b);

// Ordered set of k distinct basis angles plus the largest cross-angle
// agreement probability p_max. Validity requires every distinct pair to
// agree with probability <= p_max < 1, so no wrong-basis hypothesis can
// mimic perfect agreement forever.
class AngleSet {
  public:
    explicit AngleSet(std::vector<MeasurementAngle> angles,
                      std::optional<double> p_max = std::nullopt);

    // {0, pi/4, pi/2, 3pi/4}; p_max is the computed maximum (~0.5).
    static AngleSet default_set();

    std::size_t size() const { return angles_.size(); }
    MeasurementAngle at(std::size_t i) const { return angles_.at(i); }
    const std::vector<MeasurementAngle>& angles() const { return angles_; }
    double p_max() const { return p_max_; }

  private:
    std::vector<MeasurementAngle> angles_;
    double p_max_ = 0.0;
};

using MeasurementOutcome = int; // 0 or 1

struct EntangledPairRecord {
    // Set by the first measurement of either half; the surviving half then
    // behaves as a pure state in that basis.
    std::optional<std::pair<MeasurementAngle, int>> collapsed;
    int attached_halves = 2;
};

class PairRegistry;

// Move-only handle to one simulated qubit. Copying is deleted: a handle can
// be measured in place or given away, never duplicated. A moved-from or
// explicitly consumed handle is dead and can no longer be measured.
class Qubit {
  public:
    Qubit() = default;
    Qubit(Qubit&& other) noexcept;
    Qubit& operator=(Qubit&& other) noexcept;
    Qubit(const Qubit&) = delete;
    Qubit& operator=(const Qubit&) = delete;
    ~Qubit();

    bool alive() const { return registry_ != nullptr; }
    std::uint64_t id() const { return id_; }

    // Pair this handle is still entangled with, if any (test introspection).
    std::optional<std::uint64_t> pair_id() const;

  private:
    friend class PairRegistry;
    Qubit(PairRegistry* registry, std::uint64_t id)
        : registry_(registry), id_(id) {}

    void release();

    PairRegistry* registry_ = nullptr;
    std::uint64_t id_ = 0;
};

// Owns all qubit and pair state for one session. Single-threaded; sessions
// that run in parallel each use their own registry and generator. The
// registry must outlive every handle it issued.
class PairRegistry {
  public:
    PairRegistry() = default;
    PairRegistry(const PairRegistry&) = delete;
    PairRegistry& operator=(const PairRegistry&) = delete;

    // Two live handles over one fresh record with no definite bit yet.
    std::pair<Qubit, Qubit> new_entangled_pair();

    // A qubit prepared in a known basis with a known bit.
    Qubit prepare(MeasurementAngle basis, int bit);

    // Measure q in the given basis. An uncollapsed entangled half yields a
    // uniform bit and collapses the pair; otherwise the outcome agrees with
    // the stored bit with probability agreement_probability(stored basis,
    // angle). Afterwards q is a pure state in the measured basis and stays
    // alive for re-measurement.
    MeasurementOutcome measure(Qubit& q, MeasurementAngle angle, Rng& rng);

    std::size_t live_qubits() const { return qubits_.size(); }
    std::size_t live_pairs() const { return pairs_.size(); }
    const EntangledPairRecord* pair_record(std::uint64_t pair_id) const;

  private:
    friend class Qubit;

    struct QubitState {
        bool entangled = false;
        std::uint64_t pair_id = 0;
        // engaged when !entangled
        std::optional<MeasurementAngle> basis;
        int bit = 0;
    };

    void release(std::uint64_t id);
    void detach_half(QubitState& state);

    std::unordered_map<std::uint64_t, QubitState> qubits_;
    std::unordered_map<std::uint64_t, EntangledPairRecord> pairs_;
    std::uint64_t next_qubit_id_ = 1;
    std::uint64_t next_pair_id_ = 1;
};

// Always throws CloningForbidden (checked before liveness); q is untouched.
// The handle type already deletes copying; this documents the prohibition
// as an operation.
Qubit try_clone(const Qubit& q);

} // namespace qkd
