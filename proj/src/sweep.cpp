#include "qkd/sweep.hpp"

#include "qkd/errors.hpp"
#include "qkd/scenario.hpp"

namespace qkd {

using nlohmann::json;

namespace {

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(path.substr(start));
            break;
        }
        parts.push_back(path.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

json patch_config(const json& base, const std::string& param_path,
                  const std::string& value_token) {
    json value;
    try {
        value = json::parse(value_token);
    } catch (const json::exception&) {
        throw UnknownParameter("sweep: value \"" + value_token +
                               "\" is not valid JSON");
    }
    if (!value.is_number()) {
        throw UnknownParameter("sweep: parameter values must be numeric");
    }

    json patched = base;
    json* node = &patched;
    const std::vector<std::string> parts = split_path(param_path);
    if (parts.empty() || parts.front().empty()) {
        throw UnknownParameter("sweep: empty parameter path");
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object() || !node->contains(parts[i])) {
            throw UnknownParameter("sweep: no such config field: " + param_path);
        }
        node = &node->at(parts[i]);
    }
    const std::string& leaf = parts.back();
    const bool is_test_knob = parts.size() == 1 &&
                              (leaf == "rounds_per_test" || leaf == "confidence");
    if (!node->is_object() ||
        (!node->contains(leaf) && !is_test_knob)) {
        throw UnknownParameter("sweep: no such config field: " + param_path);
    }
    if (node->contains(leaf) && !node->at(leaf).is_number()) {
        throw UnknownParameter("sweep: field is not numeric: " + param_path);
    }
    (*node)[leaf] = value;
    // the m / epsilon pair is exactly-one-of; sweeping one evicts the other
    if (leaf == "rounds_per_test" && parts.size() == 1) {
        node->erase("confidence");
    } else if (leaf == "confidence" && parts.size() == 1) {
        node->erase("rounds_per_test");
    }
    return patched;
}

} // namespace

std::vector<SweepRow> sweep(const json& base_config,
                            const std::string& param_path,
                            const std::vector<std::string>& value_tokens,
                            std::uint64_t seed_begin, std::uint64_t seed_end) {
    if (seed_end < seed_begin) {
        throw ConfigInvalid("sweep: seed range end precedes begin");
    }
    std::vector<SweepRow> rows;
    for (const std::string& token : value_tokens) {
        const json patched = patch_config(base_config, param_path, token);
        for (std::uint64_t seed = seed_begin;; ++seed) {
            json with_seed = patched;
            with_seed["seed"] = seed;
            const ScenarioConfig cfg = ScenarioConfig::from_json(with_seed);
            ScenarioOutcome outcome = run_scenario(cfg);
            rows.push_back(SweepRow{token, seed, outcome.report});
            if (seed == seed_end) {
                break;
            }
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "value,seed,established,discovery_rounds_used,qber,"
           "eve_known_fraction,abort_reason\n";
    for (const SweepRow& row : rows) {
        out << row.value << ',' << row.seed << ','
            << (row.report.established ? "true" : "false") << ','
            << row.report.discovery_rounds_used << ','
            << json(row.report.qber).dump() << ','
            << json(row.report.eve_known_fraction).dump() << ','
            << (row.report.aborted_reason ? *row.report.aborted_reason : "")
            << '\n';
    }
}

} // namespace qkd
