#include "qkd/quantum.hpp"

#include <cmath>
#include <numbers>

#include "qkd/rng.hpp"

namespace qkd {

MeasurementAngle MeasurementAngle::from_radians(double radians) {
    if (!std::isfinite(radians) || radians < 0.0 ||
        radians >= std::numbers::pi) {
        throw InvalidAngle("measurement angle must be finite and in [0, pi)");
    }
    return MeasurementAngle(radians);
}

double agreement_probability(MeasurementAngle a, MeasurementAngle b) {
    const double c = std::cos(a.radians() - b.radians());
    double p = c * c;
    if (p > 1.0 - 1e-9) {
        p = 1.0;
    } else if (p < 1e-9) {
        p = 0.0;
    }
    return p;
}

AngleSet::AngleSet(std::vector<MeasurementAngle> angles,
                   std::optional<double> p_max)
    : angles_(std::move(angles)) {
    if (angles_.size() < 2) {
        throw Error("AngleSet: need at least two angles");
    }
    double max_agreement = 0.0;
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        for (std::size_t j = i + 1; j < angles_.size(); ++j) {
            if (angles_[i] == angles_[j]) {
                throw Error("AngleSet: angles must be pairwise distinct");
            }
            const double p = agreement_probability(angles_[i], angles_[j]);
            if (p > max_agreement) {
                max_agreement = p;
            }
        }
    }
    if (max_agreement >= 1.0) {
        throw Error("AngleSet: two angles are indistinguishable (agreement 1)");
    }
    if (p_max) {
        if (*p_max <= 0.0 || *p_max >= 1.0) {
            throw Error("AngleSet: p_max must lie in (0, 1)");
        }
        if (max_agreement > *p_max) {
            throw Error("AngleSet: pairwise agreement exceeds declared p_max");
        }
        p_max_ = *p_max;
    } else {
        p_max_ = max_agreement;
    }
}

AngleSet AngleSet::default_set() {
    const double pi = std::numbers::pi;
    return AngleSet({
        MeasurementAngle::from_radians(0.0),
        MeasurementAngle::from_radians(pi / 4),
        MeasurementAngle::from_radians(pi / 2),
        MeasurementAngle::from_radians(3 * pi / 4),
    });
}

Qubit::Qubit(Qubit&& other) noexcept
    : registry_(other.registry_), id_(other.id_) {
    other.registry_ = nullptr;
    other.id_ = 0;
}

Qubit& Qubit::operator=(Qubit&& other) noexcept {
    if (this != &other) {
        release();
        registry_ = other.registry_;
        id_ = other.id_;
        other.registry_ = nullptr;
        other.id_ = 0;
    }
    return *this;
}

Qubit::~Qubit() {
    release();
}

void Qubit::release() {
    if (registry_ != nullptr) {
        registry_->release(id_);
        registry_ = nullptr;
        id_ = 0;
    }
}

std::optional<std::uint64_t> Qubit::pair_id() const {
    if (registry_ == nullptr) {
        return std::nullopt;
    }
    const auto it = registry_->qubits_.find(id_);
    if (it == registry_->qubits_.end() || !it->second.entangled) {
        return std::nullopt;
    }
    return it->second.pair_id;
}

std::pair<Qubit, Qubit> PairRegistry::new_entangled_pair() {
    const std::uint64_t pair_id = next_pair_id_++;
    pairs_.emplace(pair_id, EntangledPairRecord{});

    const std::uint64_t id_a = next_qubit_id_++;
    const std::uint64_t id_b = next_qubit_id_++;
    qubits_.emplace(id_a, QubitState{true, pair_id, std::nullopt, 0});
    qubits_.emplace(id_b, QubitState{true, pair_id, std::nullopt, 0});
    return {Qubit(this, id_a), Qubit(this, id_b)};
}

Qubit PairRegistry::prepare(MeasurementAngle basis, int bit) {
    if (bit != 0 && bit != 1) {
        throw Error("prepare: bit must be 0 or 1");
    }
    const std::uint64_t id = next_qubit_id_++;
    qubits_.emplace(id, QubitState{false, 0, basis, bit});
    return Qubit(this, id);
}

namespace {

int draw_against(MeasurementAngle stored_basis, int stored_bit,
                 MeasurementAngle angle, Rng& rng) {
    const double p = agreement_probability(stored_basis, angle);
    if (p >= 1.0) {
        return stored_bit;
    }
    if (p <= 0.0) {
        return 1 - stored_bit;
    }
    return rng.next_double() < p ? stored_bit : 1 - stored_bit;
}

} // namespace

MeasurementOutcome PairRegistry::measure(Qubit& q, MeasurementAngle angle,
                                         Rng& rng) {
    if (!q.alive() || q.registry_ != this) {
        throw MeasuringDeadQubit("measure: handle is dead or foreign");
    }
    QubitState& state = qubits_.at(q.id_);
    int outcome;
    if (state.entangled) {
        EntangledPairRecord& record = pairs_.at(state.pair_id);
        if (!record.collapsed) {
            outcome = rng.next_bit();
            record.collapsed = std::make_pair(angle, outcome);
        } else {
            outcome = draw_against(record.collapsed->first,
                                   record.collapsed->second, angle, rng);
        }
        detach_half(state);
    } else {
        outcome = draw_against(*state.basis, state.bit, angle, rng);
    }
    state.entangled = false;
    state.basis = angle;
    state.bit = outcome;
    return outcome;
}

const EntangledPairRecord* PairRegistry::pair_record(
    std::uint64_t pair_id) const {
    const auto it = pairs_.find(pair_id);
    return it == pairs_.end() ? nullptr : &it->second;
}

void PairRegistry::release(std::uint64_t id) {
    const auto it = qubits_.find(id);
    if (it == qubits_.end()) {
        return;
    }
    if (it->second.entangled) {
        detach_half(it->second);
    }
    qubits_.erase(it);
}

void PairRegistry::detach_half(QubitState& state) {
    const auto it = pairs_.find(state.pair_id);
    if (it != pairs_.end() && --it->second.attached_halves == 0) {
        pairs_.erase(it);
    }
}

Qubit try_clone(const Qubit&) {
    throw CloningForbidden("qubit states cannot be copied");
}

} // namespace qkd
